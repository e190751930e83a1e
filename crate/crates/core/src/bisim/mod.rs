//! Monotonic, graded and graded-tuple bisimulations.

mod tuple;

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{random_formula, Grade};
use crate::kripke::KripkeModel;
use crate::neighbourhood::Neighbourhoods;
use crate::par;
use crate::semantics::{Frame, Limits, Model};
use crate::sets::{Universe, WorldSet};

pub use tuple::{
    check_tuple_bisim, default_tuple_grade, graded_to_tuple, tuple_to_graded, NamedLevel, TupleBisim, TupleVerdict,
};

/// A relation between the worlds of a left and a right model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimRelation {
    left: usize,
    right: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl BisimRelation {
    pub fn new(left: usize, right: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if pairs.iter().any(|&(a, b)| a >= left || b >= right) {
            return Err(Error::invalid_model("relation endpoint outside its model"));
        }
        Ok(Self { left, right, pairs })
    }

    pub fn identity(n: usize) -> Self {
        Self { left: n, right: n, pairs: (0..n).map(|w| (w, w)).collect() }
    }

    pub fn from_names<S: AsRef<str>>(left: &Universe, right: &Universe, pairs: &[(S, S)]) -> Result<Self> {
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((left.index_of(a.as_ref())?, right.index_of(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(left.len(), right.len(), pairs)
    }

    pub fn to_names(&self, left: &Universe, right: &Universe) -> Vec<(String, String)> {
        self.pairs.iter().map(|&(a, b)| (left.name(a).to_string(), right.name(b).to_string())).collect()
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, w: usize, w2: usize) -> bool {
        self.pairs.contains(&(w, w2))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    /// `Z(w)` for every left world.
    pub fn forward(&self) -> Vec<WorldSet> {
        let mut rows = vec![WorldSet::new(); self.left];
        for &(a, b) in &self.pairs {
            rows[a].insert(b);
        }
        rows
    }

    /// `Z⁻¹(w′)` for every right world.
    pub fn backward(&self) -> Vec<WorldSet> {
        let mut rows = vec![WorldSet::new(); self.right];
        for &(a, b) in &self.pairs {
            rows[b].insert(a);
        }
        rows
    }

    /// `Z[X]`
    pub fn image(&self, x: &WorldSet) -> WorldSet {
        image(&self.forward(), x)
    }

    /// `Z⁻¹[X′]`
    pub fn preimage(&self, x: &WorldSet) -> WorldSet {
        image(&self.backward(), x)
    }
}

/// Union of `rows[x]` over `x ∈ X`.
fn image(rows: &[WorldSet], x: &WorldSet) -> WorldSet {
    x.iter().fold(WorldSet::new(), |acc, a| acc.union(&rows[a]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Prop,
    Forth,
    Back,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BisimVerdict {
    Pass,
    Violation {
        clause: Clause,
        left: String,
        right: String,
        /// Absent for `Prop`.
        grade: Option<Grade>,
        /// The distinguishing letter for `Prop`; the unmatched set for `Forth`
        /// (left worlds) and `Back` (right worlds).
        witness: Vec<String>,
    },
}

impl BisimVerdict {
    pub fn passes(&self) -> bool {
        matches!(self, BisimVerdict::Pass)
    }
}

struct LocalFailure {
    clause: Clause,
    grade: Option<Grade>,
    witness: Vec<String>,
}

fn letters<A, B>(m: &Model<A>, m2: &Model<B>) -> Vec<String> {
    m.val.keys().chain(m2.val.keys()).cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

fn prop_failure<A: Frame, B: Frame>(
    letters: &[String],
    m: &Model<A>,
    m2: &Model<B>,
    w: usize,
    w2: usize,
) -> Option<LocalFailure> {
    letters.iter().find(|p| m.letter(p).contains(w) != m2.letter(p).contains(w2)).map(|p| LocalFailure {
        clause: Clause::Prop,
        grade: None,
        witness: vec![p.clone()],
    })
}

fn report(f: Option<(usize, usize, LocalFailure)>, lu: &Universe, ru: &Universe) -> BisimVerdict {
    match f {
        None => BisimVerdict::Pass,
        Some((w, w2, l)) => BisimVerdict::Violation {
            clause: l.clause,
            left: lu.name(w).to_string(),
            right: ru.name(w2).to_string(),
            grade: l.grade,
            witness: l.witness,
        },
    }
}

/// Members from which the Forth obligations of `ν_n(w)` follow: all members
/// for explicit frames, the minimal ones for core frames. Enough because
/// `Z[X]` grows with `X`.
fn sources<F: Neighbourhoods + ?Sized>(f: &F, w: usize, n: Grade) -> Result<Vec<WorldSet>> {
    if f.is_implicit() {
        f.minimal_members(w, n)
    } else {
        f.members(w, n)
    }
}

/// Checks Prop, Forth and Back of a monotonic bisimulation for every pair of
/// `z` and every grade up to the larger of the two frames' bounds.
///
/// Forth: `X ∈ ν_n(w)` ⇒ some `X′ ∈ ν′_n(w′)` has `X′ ⊆ Z[X]`.
/// Back: `X′ ∈ ν′_n(w′)` ⇒ some `X ∈ ν_n(w)` has `X ⊆ Z⁻¹[X′]`.
pub fn check_monotonic_bisim<A, B>(z: &BisimRelation, m: &Model<A>, m2: &Model<B>) -> Result<BisimVerdict>
where
    A: Neighbourhoods,
    B: Neighbourhoods,
{
    check_dims(z, m.universe(), m2.universe())?;
    let (fw, bw) = (z.forward(), z.backward());
    let letters = letters(m, m2);
    let top = m.frame.grade_bound().max(m2.frame.grade_bound());
    for &(w, w2) in z.pairs() {
        if let Some(l) = prop_failure(&letters, m, m2, w, w2) {
            return Ok(report(Some((w, w2, l)), m.universe(), m2.universe()));
        }
        for n in 0..=top {
            for x in sources(&m.frame, w, n)? {
                if !m2.frame.has_member_within(w2, n, &image(&fw, &x)) {
                    let l = LocalFailure { clause: Clause::Forth, grade: Some(n), witness: m.universe().names_of(&x) };
                    return Ok(report(Some((w, w2, l)), m.universe(), m2.universe()));
                }
            }
            for x in sources(&m2.frame, w2, n)? {
                if !m.frame.has_member_within(w, n, &image(&bw, &x)) {
                    let l = LocalFailure { clause: Clause::Back, grade: Some(n), witness: m2.universe().names_of(&x) };
                    return Ok(report(Some((w, w2, l)), m.universe(), m2.universe()));
                }
            }
        }
    }
    Ok(BisimVerdict::Pass)
}

fn check_dims(z: &BisimRelation, lu: &Universe, ru: &Universe) -> Result<()> {
    if z.is_empty() {
        return Err(Error::EmptyRelation);
    }
    if z.dims() != (lu.len(), ru.len()) {
        return Err(Error::InvalidArgument("relation does not match the models".into()));
    }
    Ok(())
}

fn check_out_degree(m: &KripkeModel, limits: &Limits) -> Result<()> {
    let d = m.frame.max_out_degree();
    if d > limits.max_out_degree {
        return Err(Error::budget(format!("out-degree {d}"), limits.max_out_degree as u64));
    }
    Ok(())
}

/// Forth/Back for one pair of Kripke worlds against `Z` given by its rows.
///
/// For `X ∈ ↑P_{≥n}(R[w])` a witness `X′ ∈ ↑P_{≥n}(R′[w′])` with `X′ ⊆ Z[X]`
/// exists iff `|R′[w′] ∩ Z[X]| ≥ n`; and since `Z[X]` grows with `X` only the
/// `n`-element subsets of `R[w]` need checking.
fn graded_local(
    fw: &[WorldSet],
    bw: &[WorldSet],
    m: &KripkeModel,
    m2: &KripkeModel,
    w: usize,
    w2: usize,
) -> Option<LocalFailure> {
    let (r, r2) = (m.frame.successors(w), m2.frame.successors(w2));
    for n in 1..=r.len().max(r2.len()) {
        if let Some(x) = r.subsets_of_size(n).into_iter().find(|x| image(fw, x).intersection_len(r2) < n) {
            return Some(LocalFailure {
                clause: Clause::Forth,
                grade: Some(n as Grade),
                witness: m.universe().names_of(&x),
            });
        }
        if let Some(x) = r2.subsets_of_size(n).into_iter().find(|x| image(bw, x).intersection_len(r) < n) {
            return Some(LocalFailure {
                clause: Clause::Back,
                grade: Some(n as Grade),
                witness: m2.universe().names_of(&x),
            });
        }
    }
    None
}

/// Checks that `z` is a graded bisimulation between two Kripke models.
pub fn check_graded_bisim(
    z: &BisimRelation,
    m: &KripkeModel,
    m2: &KripkeModel,
    limits: &Limits,
) -> Result<BisimVerdict> {
    check_dims(z, m.universe(), m2.universe())?;
    check_out_degree(m, limits)?;
    check_out_degree(m2, limits)?;
    let (fw, bw) = (z.forward(), z.backward());
    let letters = letters(m, m2);
    let pairs: Vec<(usize, usize)> = z.pairs().iter().copied().collect();
    let hit = par::find_map_first(0..pairs.len() as u64, |i| {
        let (w, w2) = pairs[i as usize];
        prop_failure(&letters, m, m2, w, w2).or_else(|| graded_local(&fw, &bw, m, m2, w, w2)).map(|l| (w, w2, l))
    });
    Ok(report(hit, m.universe(), m2.universe()))
}

/// The union of all graded bisimulations between `m` and `m2`, by deleting
/// failing pairs from the letter-respecting pairs until nothing changes.
pub fn largest_graded_bisim(m: &KripkeModel, m2: &KripkeModel, limits: &Limits) -> Result<BisimRelation> {
    check_out_degree(m, limits)?;
    check_out_degree(m2, limits)?;
    let (n, n2) = (m.universe().len(), m2.universe().len());
    let budget = (n as u64).saturating_mul(n2 as u64);
    if budget > limits.budget {
        return Err(Error::budget(format!("{budget} world pairs"), limits.budget));
    }
    let letters = letters(m, m2);
    let mut z = BisimRelation::new(
        n,
        n2,
        (0..n)
            .flat_map(|w| (0..n2).map(move |w2| (w, w2)))
            .filter(|&(w, w2)| prop_failure(&letters, m, m2, w, w2).is_none()),
    )?;
    loop {
        let (fw, bw) = (z.forward(), z.backward());
        let pairs: Vec<(usize, usize)> = z.pairs.iter().copied().collect();
        let failing: HashSet<(usize, usize)> =
            par::map_slice(&pairs, |&(w, w2)| graded_local(&fw, &bw, m, m2, w, w2).map(|_| (w, w2)))
                .into_iter()
                .flatten()
                .collect();
        if failing.is_empty() {
            return Ok(z);
        }
        z.pairs.retain(|p| !failing.contains(p));
    }
}

#[derive(Clone, Debug)]
pub struct SampleOptions {
    pub trials: u64,
    pub depth: usize,
    pub max_grade: Grade,
    pub seed: u64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self { trials: 1000, depth: 3, max_grade: 3, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Equivalence {
    Agree { trials: u64 },
    Distinguished { formula: String, trial: u64, left: bool, right: bool },
}

impl Equivalence {
    pub fn agrees(&self) -> bool {
        matches!(self, Equivalence::Agree { .. })
    }
}

/// Evaluates `trials` random formulas (trial `i` uses seed `seed + i`) at two
/// pointed models and reports the first disagreement.
///
/// Letters are those of both valuations, or `p` if there are none.
pub fn equiv_sample<A: Frame, B: Frame>(
    m: &Model<A>,
    w: usize,
    m2: &Model<B>,
    w2: usize,
    opts: &SampleOptions,
) -> Result<Equivalence> {
    let mut atoms = letters(m, m2);
    if atoms.is_empty() {
        atoms.push("p".into());
    }
    let hit = par::find_map_first(0..opts.trials, |i| {
        let run = || -> Result<Option<Equivalence>> {
            let f = random_formula(opts.seed.wrapping_add(i), opts.depth, opts.max_grade, &atoms)?;
            let (a, b) = (m.eval_at(w, &f)?, m2.eval_at(w2, &f)?);
            Ok((a != b).then(|| Equivalence::Distinguished { formula: f.to_string(), trial: i, left: a, right: b }))
        };
        run().transpose()
    });
    match hit {
        None => Ok(Equivalence::Agree { trials: opts.trials }),
        Some(r) => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::KripkeFrame;

    fn model(worlds: &[&str], edges: &[(&str, &str)], p: &[&str]) -> KripkeModel {
        let frame = KripkeFrame::from_names(worlds, edges).unwrap();
        let val = [("p".to_string(), p.to_vec())].into_iter().collect();
        Model::with_named_valuation(frame, &val).unwrap()
    }

    /// `w` sees two p-worlds, `v` sees one.
    fn two_vs_one() -> (KripkeModel, KripkeModel) {
        (model(&["w", "a", "b"], &[("w", "a"), ("w", "b")], &["a", "b"]), model(&["v", "c"], &[("v", "c")], &["c"]))
    }

    #[test]
    fn identity_passes() {
        let (m, _) = two_vs_one();
        let id = BisimRelation::identity(3);
        assert!(check_graded_bisim(&id, &m, &m, &Limits::default()).unwrap().passes());
        assert!(check_monotonic_bisim(&id, &m.bullet(), &m.bullet()).unwrap().passes());
    }

    #[test]
    fn prop_violation() {
        let (m, m2) = two_vs_one();
        let z = BisimRelation::from_names(m.universe(), m2.universe(), &[("w", "c")]).unwrap();
        match check_graded_bisim(&z, &m, &m2, &Limits::default()).unwrap() {
            BisimVerdict::Violation { clause, witness, .. } => {
                assert_eq!(clause, Clause::Prop);
                assert_eq!(witness, ["p"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn counting_distinguishes() {
        let (m, m2) = two_vs_one();
        let z = BisimRelation::from_names(m.universe(), m2.universe(), &[("w", "v"), ("a", "c"), ("b", "c")]).unwrap();
        match check_graded_bisim(&z, &m, &m2, &Limits::default()).unwrap() {
            BisimVerdict::Violation { clause, grade, left, .. } => {
                assert_eq!((clause, grade, left.as_str()), (Clause::Forth, Some(2), "w"));
            }
            other => panic!("{other:?}"),
        }
        assert!(!check_monotonic_bisim(&z, &m.bullet(), &m2.bullet()).unwrap().passes());
        let big = largest_graded_bisim(&m, &m2, &Limits::default()).unwrap();
        assert!(!big.contains(m.universe().index_of("w").unwrap(), m2.universe().index_of("v").unwrap()));
        assert_eq!(big.len(), 2);
        let f = parse("(dia 2 p)").unwrap();
        assert_ne!(m.eval("w", &f).unwrap(), m2.eval("v", &f).unwrap());
    }

    #[test]
    fn sampling_finds_the_counting_formula() {
        let (m, m2) = two_vs_one();
        let (w, v) = (m.universe().index_of("w").unwrap(), m2.universe().index_of("v").unwrap());
        let opts = SampleOptions { trials: 200, depth: 1, max_grade: 2, seed: 0 };
        assert!(!equiv_sample(&m, w, &m2, v, &opts).unwrap().agrees());
        assert!(equiv_sample(&m, w, &m, w, &opts).unwrap().agrees());
    }

    #[test]
    fn largest_contains_identity() {
        let m = model(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "c"), ("a", "c")], &["c"]);
        let z = largest_graded_bisim(&m, &m, &Limits::default()).unwrap();
        assert!((0..3).all(|w| z.contains(w, w)));
        assert!(check_graded_bisim(&z, &m, &m, &Limits::default()).unwrap().passes());
    }

    #[test]
    fn empty_relation_is_an_error() {
        let (m, m2) = two_vs_one();
        let z = BisimRelation::new(3, 2, []).unwrap();
        assert!(matches!(check_graded_bisim(&z, &m, &m2, &Limits::default()), Err(Error::EmptyRelation)));
    }

    #[test]
    fn out_degree_cap() {
        let m = model(&["a", "b", "c"], &[("a", "b"), ("a", "c")], &[]);
        let limits = Limits { max_out_degree: 1, ..Limits::default() };
        assert!(matches!(largest_graded_bisim(&m, &m, &limits), Err(Error::BudgetExceeded { .. })));
    }
}
