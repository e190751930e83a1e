//! Randomized property suites with greedy witness minimization, and the
//! axiom soundness sampler.
//!
//! Iteration `i` of a suite draws its case from a generator seeded with
//! `seed + i`, so a failure is reproduced by rerunning one iteration with
//! the reported seed.

pub mod axioms;
pub mod oracle;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bisim::{
    check_graded_bisim, check_monotonic_bisim, check_tuple_bisim, default_tuple_grade, equiv_sample, graded_to_tuple,
    largest_graded_bisim, tuple_to_graded, BisimRelation, Equivalence, SampleOptions,
};
use crate::error::{Error, Result};
use crate::formula::{random_formula_with, Formula, Grade};
use crate::gen;
use crate::graded::{copy_name, ExtNat, GradedFrame};
use crate::io::{self, AnyModel};
use crate::kripke::KripkeModel;
use crate::neighbourhood::{
    bullet, check_stars, is_bounded_morphism, is_graded_frame, unbullet, CoreFrame, NbhdFrame, Neighbourhoods, WorldMap,
};
use crate::par;
use crate::semantics::{frame_validity, Frame, Limits, Model, Valuation};
use crate::sets::{Universe, WorldSet};

pub use axioms::{axiom_suite, AxiomFailure, AxiomOptions, AxiomReport, Semantics};

const ATOMS: [&str; 2] = ["p", "q"];

/// One generated instance: models, and whatever else the property needs.
#[derive(Clone, Debug)]
pub struct Case {
    pub models: Vec<AnyModel>,
    pub formula: Option<Formula>,
    pub relation: Option<BisimRelation>,
    pub map: Option<WorldMap>,
    pub cap: Option<u64>,
}

impl Case {
    fn new(models: Vec<AnyModel>) -> Self {
        Self { models, formula: None, relation: None, map: None, cap: None }
    }

    fn with_formula(mut self, f: Formula) -> Self {
        self.formula = Some(f);
        self
    }

    fn kripke(&self, i: usize) -> &KripkeModel {
        match &self.models[i] {
            AnyModel::Kripke(m) => m,
            other => panic!("suite expects a Kripke model, found {}", other.kind()),
        }
    }

    fn formula(&self) -> &Formula {
        self.formula.as_ref().expect("suite case carries a formula")
    }
}

/// `Ok(None)` when the property holds, `Ok(Some(reason))` when it fails.
type Check = fn(&Case, &Limits) -> Result<Option<String>>;

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    generate: fn(&mut ChaCha8Rng) -> Case,
    check: Check,
}

pub static SUITES: &[Suite] = &[
    Suite {
        name: "truth-preservation",
        about: "Kripke truth agrees with neighbourhood truth on the bullet",
        generate: gen_kripke_formula,
        check: check_truth_preservation,
    },
    Suite {
        name: "kripke-graded",
        about: "Kripke truth agrees with graded truth on the associated graded model",
        generate: gen_kripke_formula,
        check: check_kripke_graded,
    },
    Suite {
        name: "graded-clause",
        about: "graded truth by mass agrees with the subset-existential clause; ◇_{n+1} implies ◇_n",
        generate: gen_graded_formula,
        check: check_graded_clause,
    },
    Suite {
        name: "truncation",
        about: "graded truth at w agrees with Kripke truth at every copy w#i of the truncation",
        generate: gen_truncation,
        check: check_truncation,
    },
    Suite {
        name: "translation-identities",
        about: "unbullet∘bullet and bullet∘unbullet are identities",
        generate: gen_translation,
        check: check_translation,
    },
    Suite {
        name: "star-equiv",
        about: "all six ★ conditions hold iff the explicit frame is graded",
        generate: gen_explicit,
        check: check_star_equiv,
    },
    Suite {
        name: "morphism-transfer",
        about: "frame validity transfers along surjective bounded morphisms",
        generate: gen_morphism,
        check: check_morphism_transfer,
    },
    Suite {
        name: "bisim-conversions",
        about: "largest graded bisimulation survives graded → tuple → graded",
        generate: gen_pair_small,
        check: check_conversions,
    },
    Suite {
        name: "bisim-minimal-witness",
        about: "reduced Forth/Back agrees with literal up-set quantification",
        generate: gen_pair_relation,
        check: check_minimal_witness,
    },
    Suite {
        name: "bisim-largest",
        about: "largest graded bisimulation is one and contains every other",
        generate: gen_pair_tiny,
        check: check_largest,
    },
    Suite {
        name: "substitution-bridge",
        about: "graded bisimulation iff monotonic bisimulation between the bullets",
        generate: gen_pair_relation,
        check: check_bridge,
    },
    Suite {
        name: "bisim-equivalence",
        about: "no sampled formula distinguishes a pair in the largest bisimulation",
        generate: gen_pair_small,
        check: check_equivalence,
    },
];

pub fn suite(name: &str) -> Result<&'static Suite> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| {
        let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
        Error::InvalidArgument(format!("unknown suite `{name}` (known: {})", names.join(", ")))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzFailure {
    pub iteration: u64,
    pub seed: u64,
    pub reason: String,
    /// Model files of the minimized witness.
    pub witness: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub suite: &'static str,
    pub iters: u64,
    pub seed: u64,
    pub failures_total: u64,
    /// The first few failures, minimized.
    pub failures: Vec<FuzzFailure>,
}

impl FuzzReport {
    pub fn passes(&self) -> bool {
        self.failures_total == 0
    }
}

/// Failures beyond this many are counted but not minimized.
const REPORTED: usize = 5;

fn run_check(s: &Suite, case: &Case, limits: &Limits) -> Option<String> {
    match (s.check)(case, limits) {
        Ok(r) => r,
        Err(e) => Some(format!("error: {e}")),
    }
}

pub fn run_suite(name: &str, iters: u64, seed: u64, limits: &Limits) -> Result<FuzzReport> {
    let s = suite(name)?;
    let outcomes = par::map_range(0..iters, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
        let case = (s.generate)(&mut rng);
        run_check(s, &case, limits).map(|reason| (i, case, reason))
    });
    let bad: Vec<(u64, Case, String)> = outcomes.into_iter().flatten().collect();
    let failures = bad
        .iter()
        .take(REPORTED)
        .map(|(i, case, _)| {
            let small = minimize(s, case, limits);
            let reason = run_check(s, &small, limits).expect("minimized case still fails");
            describe(*i, seed.wrapping_add(*i), reason, &small)
        })
        .collect();
    Ok(FuzzReport { suite: s.name, iters, seed, failures_total: bad.len() as u64, failures })
}

fn describe(iteration: u64, seed: u64, reason: String, case: &Case) -> FuzzFailure {
    let json = |text: String| serde_json::from_str::<serde_json::Value>(&text).expect("own output parses");
    let (lu, ru) = match case.models.as_slice() {
        [a, b, ..] => (Some(a.universe()), Some(b.universe())),
        _ => (None, None),
    };
    FuzzFailure {
        iteration,
        seed,
        reason,
        witness: case.models.iter().map(|m| json(m.to_json())).collect(),
        formula: case.formula.as_ref().map(Formula::to_string),
        relation: case.relation.as_ref().zip(lu.zip(ru)).map(|(z, (l, r))| json(io::relation_to_json(z, l, r))),
        map: case.map.as_ref().zip(lu.zip(ru)).map(|(f, (l, r))| json(io::map_to_json(f, l, r))),
        cap: case.cap,
    }
}

/// Greedy shrinking: delete worlds while the case still fails, then lower
/// grades, and repeat until neither helps.
pub fn minimize(s: &Suite, case: &Case, limits: &Limits) -> Case {
    let fails = |c: &Case| run_check(s, c, limits).is_some();
    let mut cur = case.clone();
    loop {
        let mut changed = false;
        while let Some(next) = world_deletions(&cur).into_iter().find(|c| fails(c)) {
            cur = next;
            changed = true;
        }
        while let Some(next) = grade_reductions(&cur).into_iter().find(|c| fails(c)) {
            cur = next;
            changed = true;
        }
        if !changed {
            return cur;
        }
    }
}

fn shift(set: &WorldSet, i: usize) -> WorldSet {
    set.iter().filter(|&j| j != i).map(|j| if j > i { j - 1 } else { j }).collect()
}

fn shift_index(j: usize, i: usize) -> Option<usize> {
    match j.cmp(&i) {
        std::cmp::Ordering::Less => Some(j),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(j - 1),
    }
}

fn shift_val(val: &Valuation, i: usize) -> Valuation {
    val.iter().map(|(p, s)| (p.clone(), shift(s, i))).collect()
}

fn without(u: &Universe, i: usize) -> Universe {
    Universe::new(u.names().iter().enumerate().filter(|&(j, _)| j != i).map(|(_, n)| n.clone())).expect("distinct")
}

/// The model with world `i` removed, every set restricted to the rest.
pub fn remove_world(m: &AnyModel, i: usize) -> AnyModel {
    match m {
        AnyModel::Kripke(m) => AnyModel::Kripke(m.remove_world(i)),
        AnyModel::Graded(m) => {
            let u = without(m.universe(), i);
            let entries: Vec<(usize, usize, ExtNat)> =
                m.frame.entries().filter_map(|(w, v, k)| Some((shift_index(w, i)?, shift_index(v, i)?, k))).collect();
            let frame = GradedFrame::new(u, entries).expect("restriction");
            AnyModel::Graded(Model { frame, val: shift_val(&m.val, i) })
        }
        AnyModel::NbhdCore(m) => {
            let u = without(m.universe(), i);
            let cores = (0..m.universe().len()).filter(|&w| w != i).map(|w| shift(m.frame.core(w), i)).collect();
            let frame = CoreFrame::new(u, cores).expect("restriction");
            AnyModel::NbhdCore(Model { frame, val: shift_val(&m.val, i) })
        }
        AnyModel::Nbhd(m) => {
            let u = without(m.universe(), i);
            let lift = |w: usize| if w >= i { w + 1 } else { w };
            let mut frame =
                NbhdFrame::from_fn(u, m.frame.max_grade(), |w, n, x| m.frame.contains(lift(w), n, &x.map(lift)))
                    .expect("restriction");
            for w in (0..m.universe().len()).filter(|&w| w != i) {
                if let Some(sets) = m.frame.nu0_override(w) {
                    let kept = sets.iter().filter(|x| !x.contains(i)).map(|x| shift(x, i));
                    frame.set_nu0(shift_index(w, i).expect("kept"), kept.collect::<Vec<_>>()).expect("restriction");
                }
            }
            AnyModel::Nbhd(Model { frame, val: shift_val(&m.val, i) })
        }
    }
}

fn world_deletions(case: &Case) -> Vec<Case> {
    if case.map.is_some() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (k, m) in case.models.iter().enumerate() {
        if m.universe().len() <= 1 {
            continue;
        }
        for i in 0..m.universe().len() {
            let mut c = case.clone();
            c.models[k] = remove_world(m, i);
            if let Some(z) = &case.relation {
                let (l, r) = z.dims();
                let pairs = z.pairs().iter().filter_map(|&(a, b)| match k {
                    0 => Some((shift_index(a, i)?, b)),
                    _ => Some((a, shift_index(b, i)?)),
                });
                let (l, r) = if k == 0 { (l - 1, r) } else { (l, r - 1) };
                let z = BisimRelation::new(l, r, pairs).expect("restriction");
                if z.is_empty() {
                    continue;
                }
                c.relation = Some(z);
            }
            out.push(c);
        }
    }
    out
}

fn grade_reductions(case: &Case) -> Vec<Case> {
    let mut out = Vec::new();
    if let Some(f) = &case.formula {
        let lower = f.map_grades(&|n: Grade| n.saturating_sub(1));
        if &lower != f {
            let mut c = case.clone();
            c.formula = Some(lower);
            out.push(c);
        }
    }
    if let Some(cap) = case.cap.filter(|&c| c > 1) {
        let mut c = case.clone();
        c.cap = Some(cap - 1);
        out.push(c);
    }
    for (k, m) in case.models.iter().enumerate() {
        let AnyModel::Graded(g) = m else { continue };
        let entries: Vec<(usize, usize, ExtNat)> = g.frame.entries().collect();
        for (idx, &(w, v, s)) in entries.iter().enumerate() {
            let lower = match s {
                ExtNat::Omega => ExtNat::Fin(case.cap.unwrap_or(4)),
                ExtNat::Fin(n) if n > 0 => ExtNat::Fin(n - 1),
                ExtNat::Fin(_) => continue,
            };
            let mut e = entries.clone();
            e[idx] = (w, v, lower);
            let frame = GradedFrame::new(g.universe().clone(), e).expect("same worlds");
            let mut c = case.clone();
            c.models[k] = AnyModel::Graded(Model { frame, val: g.val.clone() });
            out.push(c);
        }
    }
    out
}

fn formula(rng: &mut ChaCha8Rng, depth: usize, max_grade: Grade) -> Formula {
    random_formula_with(rng, depth, max_grade, &ATOMS).expect("atoms given")
}

fn gen_kripke_formula(rng: &mut ChaCha8Rng) -> Case {
    let m = gen::kripke_model(rng, 6, 6, &ATOMS);
    let f = formula(rng, 4, 4);
    Case::new(vec![AnyModel::Kripke(m)]).with_formula(f)
}

fn gen_graded_formula(rng: &mut ChaCha8Rng) -> Case {
    let m = gen::graded_model(rng, 5, 4, &ATOMS);
    let f = formula(rng, 3, 5);
    Case::new(vec![AnyModel::Graded(m)]).with_formula(f)
}

fn gen_truncation(rng: &mut ChaCha8Rng) -> Case {
    let m = gen::graded_model(rng, 4, 4, &ATOMS);
    let cap = rng.random_range(1..=4);
    let f = formula(rng, 3, cap as Grade);
    let mut c = Case::new(vec![AnyModel::Graded(m)]).with_formula(f);
    c.cap = Some(cap);
    c
}

fn gen_translation(rng: &mut ChaCha8Rng) -> Case {
    let k = gen::kripke_model(rng, 5, 5, &ATOMS);
    let c = gen::core_model(rng, 5, &ATOMS);
    Case::new(vec![AnyModel::Kripke(k), AnyModel::NbhdCore(c)])
}

fn gen_explicit(rng: &mut ChaCha8Rng) -> Case {
    let f = gen::explicit_frame(rng, 4, 3);
    Case::new(vec![AnyModel::Nbhd(Model { frame: f, val: Valuation::new() })])
}

/// A random target, a random surjection onto it, and the source obtained by
/// pulling every neighbourhood back along the surjection.
fn gen_morphism(rng: &mut ChaCha8Rng) -> Case {
    let dst = gen::explicit_frame(rng, 2, 2);
    let m = dst.universe().len();
    let n = rng.random_range(m..=4);
    let image: Vec<usize> = (0..n).map(|w| if w < m { w } else { rng.random_range(0..m) }).collect();
    let f = WorldMap::new(image, m).expect("in range");
    let mut src = NbhdFrame::from_fn(Universe::numbered(n), dst.max_grade(), |w, k, x| {
        dst.contains(f.apply(w), k, &f.image_of(x))
    })
    .expect("small");
    for w in 0..n {
        if dst.nu0_override(f.apply(w)).is_some() {
            let pulled: Vec<WorldSet> = (0..1u64 << n)
                .map(WorldSet::from_mask)
                .filter(|x| dst.contains(f.apply(w), 0, &f.image_of(x)))
                .collect();
            src.set_nu0(w, pulled).expect("in range");
        }
    }
    let phi = random_formula_with(rng, 2, dst.max_grade(), &["p"]).expect("atoms given");
    let mut c = Case::new(vec![
        AnyModel::Nbhd(Model { frame: src, val: Valuation::new() }),
        AnyModel::Nbhd(Model { frame: dst, val: Valuation::new() }),
    ])
    .with_formula(phi);
    c.map = Some(f);
    c
}

fn kripke_pair(rng: &mut ChaCha8Rng, max_worlds: usize) -> Case {
    let a = gen::kripke_model(rng, max_worlds, 3, &["p"]);
    let b = gen::kripke_model(rng, max_worlds, 3, &["p"]);
    Case::new(vec![AnyModel::Kripke(a), AnyModel::Kripke(b)])
}

fn gen_pair_small(rng: &mut ChaCha8Rng) -> Case {
    kripke_pair(rng, 4)
}

fn gen_pair_tiny(rng: &mut ChaCha8Rng) -> Case {
    kripke_pair(rng, 3)
}

/// A pair on at most 3 worlds with a random non-empty relation, or with the
/// largest bisimulation when that is non-empty (a third of the time).
fn gen_pair_relation(rng: &mut ChaCha8Rng) -> Case {
    let mut c = kripke_pair(rng, 3);
    let (l, r) = (c.models[0].universe().len(), c.models[1].universe().len());
    let largest = largest_graded_bisim(c.kripke(0), c.kripke(1), &Limits::default()).expect("small");
    let z = if rng.random_bool(1.0 / 3.0) && !largest.is_empty() {
        largest
    } else {
        let mut pairs: Vec<(usize, usize)> =
            (0..l).flat_map(|a| (0..r).map(move |b| (a, b))).filter(|_| rng.random_bool(0.5)).collect();
        if pairs.is_empty() {
            pairs.push((rng.random_range(0..l), rng.random_range(0..r)));
        }
        BisimRelation::new(l, r, pairs).expect("in range")
    };
    c.relation = Some(z);
    c
}

fn check_truth_preservation(c: &Case, _: &Limits) -> Result<Option<String>> {
    let m = c.kripke(0);
    let (a, b) = (m.truth_set(c.formula())?, m.bullet().truth_set(c.formula())?);
    Ok((a != b).then(|| disagreement("Kripke", &a, "bullet", &b, m.universe())))
}

fn check_kripke_graded(c: &Case, _: &Limits) -> Result<Option<String>> {
    let m = c.kripke(0);
    let (a, b) = (m.truth_set(c.formula())?, m.to_graded().truth_set(c.formula())?);
    Ok((a != b).then(|| disagreement("Kripke", &a, "graded", &b, m.universe())))
}

fn disagreement(l: &str, a: &WorldSet, r: &str, b: &WorldSet, u: &Universe) -> String {
    format!("{l} truth set {:?} differs from {r} truth set {:?}", u.names_of(a), u.names_of(b))
}

fn subformulas(f: &Formula, out: &mut Vec<Formula>) {
    out.push(f.clone());
    match f {
        Formula::Not(g) | Formula::Dia(_, g) => subformulas(g, out),
        Formula::Or(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
        _ => {}
    }
}

fn check_graded_clause(c: &Case, _: &Limits) -> Result<Option<String>> {
    let AnyModel::Graded(m) = &c.models[0] else { unreachable!("graded suite") };
    let mut subs = Vec::new();
    subformulas(c.formula(), &mut subs);
    for g in &subs {
        let (a, b) = (m.truth_set(g)?, oracle::graded_truth_set(m, g));
        if a != b {
            return Ok(Some(format!("at {g}: {}", disagreement("mass", &a, "clause", &b, m.universe()))));
        }
        if let Formula::Dia(n, psi) = g {
            let up = m.truth_set(&Formula::dia(n + 1, (**psi).clone()))?;
            if !up.is_subset(&a) {
                return Ok(Some(format!("◇_{} does not imply ◇_{n} for {psi}", n + 1)));
            }
        }
    }
    Ok(None)
}

fn check_truncation(c: &Case, _: &Limits) -> Result<Option<String>> {
    let AnyModel::Graded(m) = &c.models[0] else { unreachable!("graded suite") };
    let cap = c.cap.expect("truncation case has a cap");
    if c.formula().max_grade() as u64 > cap {
        return Err(Error::InvalidArgument("formula grade above the cap".into()));
    }
    let k = m.to_kripke(cap)?;
    let t = m.truth_set(c.formula())?;
    let kt = k.truth_set(c.formula())?;
    for w in 0..m.universe().len() {
        let name = m.universe().name(w);
        for i in 0..=cap {
            let copy = k.universe().index_of(&copy_name(name, i))?;
            if t.contains(w) != kt.contains(copy) {
                return Ok(Some(format!(
                    "graded truth at {name} is {} but {} at {}",
                    t.contains(w),
                    !t.contains(w),
                    copy_name(name, i)
                )));
            }
        }
    }
    Ok(None)
}

fn check_translation(c: &Case, _: &Limits) -> Result<Option<String>> {
    let k = c.kripke(0);
    let AnyModel::NbhdCore(n) = &c.models[1] else { unreachable!("translation suite") };
    if unbullet(&bullet(&k.frame)) != k.frame {
        return Ok(Some("unbullet(bullet(F)) differs from F".into()));
    }
    if bullet(&unbullet(&n.frame)) != n.frame {
        return Ok(Some("bullet(unbullet(F)) differs from F".into()));
    }
    if k.bullet().unbullet() != *k || n.unbullet().bullet() != *n {
        return Ok(Some("valuation changed across the translation".into()));
    }
    Ok(None)
}

fn check_star_equiv(c: &Case, _: &Limits) -> Result<Option<String>> {
    let AnyModel::Nbhd(m) = &c.models[0] else { unreachable!("explicit suite") };
    let stars = check_stars(&m.frame)?.all_pass();
    let graded = is_graded_frame(&m.frame)?.is_graded();
    Ok((stars != graded).then(|| format!("★ conditions {} but gradedness {}", verdict(stars), verdict(graded))))
}

fn verdict(b: bool) -> &'static str {
    if b {
        "hold"
    } else {
        "fail"
    }
}

fn check_morphism_transfer(c: &Case, limits: &Limits) -> Result<Option<String>> {
    let (AnyModel::Nbhd(src), AnyModel::Nbhd(dst)) = (&c.models[0], &c.models[1]) else {
        unreachable!("morphism suite")
    };
    let f = c.map.as_ref().expect("morphism case has a map");
    let r = is_bounded_morphism(f, &src.frame, &dst.frame)?;
    if !r.is_bounded_morphism() || !r.surjective {
        return Ok(Some(format!("pullback is not a surjective bounded morphism: {:?}", r.violation)));
    }
    let phi = c.formula();
    let on_src = frame_validity(&src.frame, phi, limits)?.is_valid();
    let on_dst = frame_validity(&dst.frame, phi, limits)?.is_valid();
    Ok((on_src && !on_dst).then(|| format!("{phi} is valid on the source but not on the image")))
}

fn check_conversions(c: &Case, limits: &Limits) -> Result<Option<String>> {
    let (m, m2) = (c.kripke(0), c.kripke(1));
    let z = largest_graded_bisim(m, m2, limits)?;
    if z.is_empty() {
        return Ok(None);
    }
    if !check_graded_bisim(&z, m, m2, limits)?.passes() {
        return Ok(Some("largest relation is not a graded bisimulation".into()));
    }
    let t = graded_to_tuple(&z, m, m2, default_tuple_grade(m, m2), limits)?;
    let v = check_tuple_bisim(&t, m, m2)?;
    if !v.passes() {
        return Ok(Some(format!("converted family is not a tuple bisimulation: {v:?}")));
    }
    let back = tuple_to_graded(&t)?;
    if back != z {
        return Ok(Some("round trip changed the relation".into()));
    }
    Ok((!check_graded_bisim(&back, m, m2, limits)?.passes()).then(|| "projected relation fails".into()))
}

fn check_minimal_witness(c: &Case, limits: &Limits) -> Result<Option<String>> {
    let (m, m2) = (c.kripke(0), c.kripke(1));
    let z = c.relation.as_ref().expect("relation case");
    let fast = check_graded_bisim(z, m, m2, limits)?.passes();
    let literal = oracle::is_graded_bisim(z, m, m2);
    Ok((fast != literal).then(|| format!("reduced check says {fast}, literal up-sets say {literal}")))
}

fn check_largest(c: &Case, limits: &Limits) -> Result<Option<String>> {
    let (m, m2) = (c.kripke(0), c.kripke(1));
    let z = largest_graded_bisim(m, m2, limits)?;
    if !z.is_empty() && !check_graded_bisim(&z, m, m2, limits)?.passes() {
        return Ok(Some("largest relation is not a graded bisimulation".into()));
    }
    let (l, r) = (m.universe().len(), m2.universe().len());
    let all: Vec<(usize, usize)> = (0..l).flat_map(|a| (0..r).map(move |b| (a, b))).collect();
    for mask in 1u64..1 << all.len() {
        let pairs = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p);
        let y = BisimRelation::new(l, r, pairs)?;
        if check_graded_bisim(&y, m, m2, limits)?.passes() && !y.pairs().is_subset(z.pairs()) {
            return Ok(Some(format!("a bisimulation with {} pairs is not contained in the largest", y.len())));
        }
    }
    Ok(None)
}

fn check_bridge(c: &Case, limits: &Limits) -> Result<Option<String>> {
    let (m, m2) = (c.kripke(0), c.kripke(1));
    let z = c.relation.as_ref().expect("relation case");
    let graded = check_graded_bisim(z, m, m2, limits)?.passes();
    let monotonic = check_monotonic_bisim(z, &m.bullet(), &m2.bullet())?.passes();
    Ok((graded != monotonic)
        .then(|| format!("graded check says {graded}, monotonic check on bullets says {monotonic}")))
}

fn check_equivalence(c: &Case, limits: &Limits) -> Result<Option<String>> {
    let (m, m2) = (c.kripke(0), c.kripke(1));
    let z = largest_graded_bisim(m, m2, limits)?;
    let opts = SampleOptions { trials: 1000, depth: 3, max_grade: 3, seed: 0 };
    for &(w, w2) in z.pairs() {
        if let Equivalence::Distinguished { formula, .. } = equiv_sample(m, w, m2, w2, &opts)? {
            return Ok(Some(format!(
                "{formula} distinguishes bisimilar {} and {}",
                m.universe().name(w),
                m2.universe().name(w2)
            )));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_briefly() {
        for s in SUITES {
            let r = run_suite(s.name, 20, 7, &Limits::default()).unwrap();
            assert!(r.passes(), "{}: {:?}", s.name, r.failures.first());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 1, 0, &Limits::default()).is_err());
    }

    fn always_fails(c: &Case, _: &Limits) -> Result<Option<String>> {
        let m = c.kripke(0);
        Ok(m.frame.edges().next().map(|_| "has an edge".to_string()))
    }

    #[test]
    fn minimizer_shrinks_to_one_edge() {
        let s = Suite { name: "t", about: "", generate: gen_kripke_formula, check: always_fails };
        let m = crate::fixtures::figure1_kripke();
        let small = minimize(&s, &Case::new(vec![AnyModel::Kripke(m)]), &Limits::default());
        let k = small.kripke(0);
        assert_eq!(k.universe().len(), 2);
        assert_eq!(k.frame.edges().count(), 1);
    }

    #[test]
    fn minimizer_lowers_grades() {
        fn big_grade(c: &Case, _: &Limits) -> Result<Option<String>> {
            Ok((c.formula().max_grade() >= 2).then(|| "grade".to_string()))
        }
        let s = Suite { name: "t", about: "", generate: gen_kripke_formula, check: big_grade };
        let case = Case::new(vec![AnyModel::Kripke(crate::fixtures::figure1_kripke())])
            .with_formula("(dia 5 (dia 4 p))".parse().unwrap());
        let small = minimize(&s, &case, &Limits::default());
        assert_eq!(small.formula().max_grade(), 2);
        assert_eq!(small.models[0].universe().len(), 1);
    }

    #[test]
    fn remove_world_keeps_the_rest() {
        let g = crate::fixtures::figure1_graded();
        let AnyModel::Graded(r) = remove_world(&AnyModel::Graded(g), 0) else { panic!() };
        assert_eq!(r.universe().names(), ["v", "w"]);
        assert_eq!(r.frame.sigma(1, 0), ExtNat::Fin(3));
        assert_eq!(r.val["p"], WorldSet::singleton(0));
        let n = crate::fixtures::section6_target();
        let m = AnyModel::Nbhd(Model { frame: n, val: Valuation::new() });
        assert_eq!(remove_world(&m, 0).universe().len(), 0);
    }
}
