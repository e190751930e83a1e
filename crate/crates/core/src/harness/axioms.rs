//! Frame validity of random axiom instances over random frames.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{random_formula_with, Axiom, Formula};
use crate::gen;
use crate::io::AnyModel;
use crate::neighbourhood::NbhdFrame;
use crate::par;
use crate::semantics::{frame_validity, Frame, Limits, Model, Validity};
use crate::sets::{Universe, WorldSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    Kripke,
    Graded,
    /// Graded neighbourhood frames given by cores.
    NbhdCore,
    /// Monotonic explicit neighbourhood frames, not necessarily graded.
    Nbhd,
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kripke" => Ok(Semantics::Kripke),
            "graded" => Ok(Semantics::Graded),
            "nbhd-core" => Ok(Semantics::NbhdCore),
            "nbhd" => Ok(Semantics::Nbhd),
            _ => Err(Error::InvalidArgument(format!(
                "unknown semantics `{s}` (expected kripke, graded, nbhd-core or nbhd)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AxiomOptions {
    /// Number of random frames.
    pub trials: u64,
    /// Random instances per axiom and frame.
    pub instances: usize,
    pub seed: u64,
    pub max_worlds: usize,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        Self { trials: 200, instances: 5, seed: 0, max_worlds: 4 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomFailure {
    pub trial: u64,
    /// Rerunning with this seed and one trial reproduces the failure.
    pub seed: u64,
    pub axiom: String,
    pub instance: String,
    pub frame: serde_json::Value,
    pub countermodel: Validity,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub semantics: Semantics,
    pub trials: u64,
    pub instances_checked: u64,
    pub failures: Vec<AxiomFailure>,
}

const ATOMS: [&str; 2] = ["p", "q"];
/// Grade of every `ν_n` stored by the explicit frames.
const EXPLICIT_GRADE: u32 = 6;

/// Random instances of Ax2 to Ax7 and the separation formula, each with its
/// own grade parameters and arguments of depth at most 2 and grade at most 2.
fn instances(rng: &mut ChaCha8Rng, count: usize) -> Vec<(Axiom, Formula)> {
    let mut out = Vec::new();
    let arg = |rng: &mut ChaCha8Rng| random_formula_with(rng, 2, 2, &ATOMS).expect("atoms given");
    for _ in 0..count {
        let axioms = [
            Axiom::Ax2,
            Axiom::Ax3 { n: rng.random_range(1..=3) },
            Axiom::Ax4 { n: rng.random_range(0..=2) },
            Axiom::Ax5 { n: rng.random_range(0..=2) },
            Axiom::Ax6 { m: rng.random_range(0..=2), n: rng.random_range(0..=2) },
            Axiom::Ax7,
            Axiom::Separation { n: rng.random_range(1..=2) },
        ];
        for ax in axioms {
            let (phi, psi) = (arg(rng), arg(rng));
            out.push((ax, ax.instance(phi, psi)));
        }
    }
    out
}

fn frame_file<F: Frame>(frame: F, wrap: impl Fn(Model<F>) -> AnyModel) -> serde_json::Value {
    let text = wrap(Model { frame, val: Default::default() }).to_json();
    serde_json::from_str(&text).expect("own output parses")
}

fn check_all<F: Frame>(
    frame: &F,
    cases: &[(Axiom, Formula)],
    limits: &Limits,
) -> Result<Vec<(Axiom, Formula, Validity)>> {
    let mut bad = Vec::new();
    for (ax, f) in cases {
        let v = frame_validity(frame, f, limits)?;
        if !v.is_valid() {
            bad.push((*ax, f.clone(), v));
        }
    }
    Ok(bad)
}

/// Monotone explicit frame: the up-closure of 0 to 2 random generators per
/// world and grade.
fn monotone_frame(rng: &mut ChaCha8Rng, max_worlds: usize) -> NbhdFrame {
    let n = rng.random_range(1..=max_worlds);
    let gens: Vec<Vec<Vec<WorldSet>>> = (0..n)
        .map(|_| {
            (0..EXPLICIT_GRADE).map(|_| (0..rng.random_range(0..=2)).map(|_| gen::subset(rng, n)).collect()).collect()
        })
        .collect();
    NbhdFrame::from_fn(Universe::numbered(n), EXPLICIT_GRADE, |w, k, x| {
        gens[w][k as usize - 1].iter().any(|g| g.is_subset(x))
    })
    .expect("small frame")
}

fn trial(sem: Semantics, opts: &AxiomOptions, i: u64, limits: &Limits) -> Result<(u64, Vec<AxiomFailure>)> {
    let seed = opts.seed.wrapping_add(i);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (bad, file) = match sem {
        Semantics::Kripke => {
            let f = gen::kripke_frame(&mut rng, opts.max_worlds, 3);
            let cases = instances(&mut rng, opts.instances);
            (check_all(&f, &cases, limits)?, frame_file(f, AnyModel::Kripke))
        }
        Semantics::Graded => {
            let f = gen::graded_frame(&mut rng, opts.max_worlds, 3, 0.1);
            let cases = instances(&mut rng, opts.instances);
            (check_all(&f, &cases, limits)?, frame_file(f, AnyModel::Graded))
        }
        Semantics::NbhdCore => {
            let f = gen::core_frame(&mut rng, opts.max_worlds);
            let cases = instances(&mut rng, opts.instances);
            (check_all(&f, &cases, limits)?, frame_file(f, AnyModel::NbhdCore))
        }
        Semantics::Nbhd => {
            let f = monotone_frame(&mut rng, opts.max_worlds);
            let cases = instances(&mut rng, opts.instances);
            (check_all(&f, &cases, limits)?, frame_file(f, AnyModel::Nbhd))
        }
    };
    let checked = (opts.instances * 7) as u64;
    let failures = bad
        .into_iter()
        .map(|(ax, f, v)| AxiomFailure {
            trial: i,
            seed,
            axiom: ax.to_string(),
            instance: f.to_string(),
            frame: file.clone(),
            countermodel: v,
        })
        .collect();
    Ok((checked, failures))
}

/// Samples `opts.trials` frames of the given semantics and checks frame
/// validity of random axiom instances on each. Trial `i` uses seed
/// `opts.seed + i`.
pub fn axiom_suite(sem: Semantics, opts: &AxiomOptions, limits: &Limits) -> Result<AxiomReport> {
    if opts.max_worlds == 0 || opts.max_worlds > 5 {
        return Err(Error::InvalidArgument("axiom frames need between 1 and 5 worlds".into()));
    }
    let results = par::map_range(0..opts.trials, |i| trial(sem, opts, i, limits));
    let mut report = AxiomReport { semantics: sem, trials: opts.trials, instances_checked: 0, failures: Vec::new() };
    for r in results {
        let (checked, failures) = r?;
        report.instances_checked += checked;
        report.failures.extend(failures);
    }
    Ok(report)
}
