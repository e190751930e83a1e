//! Random models and frames for the property harness.

use rand::seq::index::sample;
use rand::Rng;

use crate::formula::Grade;
use crate::graded::{ExtNat, GradedFrame, GradedModel};
use crate::kripke::{KripkeFrame, KripkeModel};
use crate::neighbourhood::{CoreFrame, NbhdFrame};
use crate::semantics::{Frame, Model, Valuation};
use crate::sets::{Universe, WorldSet};

/// Uniformly random subset of `0..n`.
pub fn subset<R: Rng + ?Sized>(rng: &mut R, n: usize) -> WorldSet {
    (0..n).filter(|_| rng.random_bool(0.5)).collect()
}

pub fn valuation<R: Rng + ?Sized, S: AsRef<str>>(rng: &mut R, n: usize, atoms: &[S]) -> Valuation {
    atoms.iter().map(|p| (p.as_ref().to_string(), subset(rng, n))).collect()
}

/// Between 1 and `max_worlds` worlds, each with at most `max_out_degree`
/// successors.
pub fn kripke_frame<R: Rng + ?Sized>(rng: &mut R, max_worlds: usize, max_out_degree: usize) -> KripkeFrame {
    let n = rng.random_range(1..=max_worlds.max(1));
    let succ = (0..n)
        .map(|_| {
            let k = rng.random_range(0..=max_out_degree.min(n));
            sample(rng, n, k).into_iter().collect()
        })
        .collect();
    KripkeFrame::from_successors(Universe::numbered(n), succ).expect("in range")
}

pub fn kripke_model<R: Rng + ?Sized, S: AsRef<str>>(
    rng: &mut R,
    max_worlds: usize,
    max_out_degree: usize,
    atoms: &[S],
) -> KripkeModel {
    let frame = kripke_frame(rng, max_worlds, max_out_degree);
    let val = valuation(rng, frame.universe().len(), atoms);
    Model::new(frame, val).expect("in range")
}

/// Multiplicities in `0..=max_sigma`, with `ω` at rate `omega`.
pub fn graded_frame<R: Rng + ?Sized>(rng: &mut R, max_worlds: usize, max_sigma: u64, omega: f64) -> GradedFrame {
    let n = rng.random_range(1..=max_worlds.max(1));
    let mut entries = Vec::new();
    for w in 0..n {
        for u in 0..n {
            if rng.random_bool(omega) {
                entries.push((w, u, ExtNat::Omega));
            } else {
                entries.push((w, u, ExtNat::Fin(rng.random_range(0..=max_sigma))));
            }
        }
    }
    GradedFrame::new(Universe::numbered(n), entries).expect("in range")
}

pub fn graded_model<R: Rng + ?Sized, S: AsRef<str>>(
    rng: &mut R,
    max_worlds: usize,
    max_sigma: u64,
    atoms: &[S],
) -> GradedModel {
    let frame = graded_frame(rng, max_worlds, max_sigma, 0.1);
    let val = valuation(rng, frame.universe().len(), atoms);
    Model::new(frame, val).expect("in range")
}

pub fn core_frame<R: Rng + ?Sized>(rng: &mut R, max_worlds: usize) -> CoreFrame {
    let n = rng.random_range(1..=max_worlds.max(1));
    let cores = (0..n).map(|_| subset(rng, n)).collect();
    CoreFrame::new(Universe::numbered(n), cores).expect("in range")
}

pub fn core_model<R: Rng + ?Sized, S: AsRef<str>>(rng: &mut R, max_worlds: usize, atoms: &[S]) -> Model<CoreFrame> {
    let frame = core_frame(rng, max_worlds);
    let val = valuation(rng, frame.universe().len(), atoms);
    Model::new(frame, val).expect("in range")
}

/// Explicit frame with `N` in `1..=max_grade`, drawn from a mix of shapes so
/// that both graded and non-graded frames come up often: materialized cores
/// (some larger than `N`), the same with one membership flipped or `ν_0`
/// thinned, monotone closures of random generators, and unstructured
/// families.
pub fn explicit_frame<R: Rng + ?Sized>(rng: &mut R, max_worlds: usize, max_grade: Grade) -> NbhdFrame {
    let n = rng.random_range(1..=max_worlds.max(1));
    let big_n = rng.random_range(1..=max_grade.max(1));
    let u = Universe::numbered(n);
    let mut frame = match rng.random_range(0..4) {
        0 | 1 => {
            let cores: Vec<WorldSet> = (0..n).map(|_| subset(rng, n)).collect();
            NbhdFrame::from_fn(u, big_n, |w, k, x| x.intersection_len(&cores[w]) >= k as usize).expect("small")
        }
        2 => {
            let gens: Vec<Vec<Vec<WorldSet>>> = (0..n)
                .map(|_| (0..big_n).map(|_| (0..rng.random_range(0..=2)).map(|_| subset(rng, n)).collect()).collect())
                .collect();
            NbhdFrame::from_fn(u, big_n, |w, k, x| gens[w][k as usize - 1].iter().any(|g| g.is_subset(x)))
                .expect("small")
        }
        _ => {
            let mut f = NbhdFrame::new(u, big_n).expect("small");
            for w in 0..n {
                for k in 1..=big_n {
                    let sets: Vec<WorldSet> =
                        (0..1u64 << n).filter(|_| rng.random_bool(0.3)).map(WorldSet::from_mask).collect();
                    f.set_nu(w, k, sets).expect("in range");
                }
            }
            f
        }
    };
    if rng.random_bool(0.3) {
        let w = rng.random_range(0..n);
        let k = rng.random_range(1..=big_n);
        let x = subset(rng, n);
        let mut sets = frame.nu(w, k).clone();
        if !sets.remove(&x) {
            sets.insert(x);
        }
        frame.set_nu(w, k, sets).expect("in range");
    }
    if rng.random_bool(0.1) {
        let w = rng.random_range(0..n);
        let sets: Vec<WorldSet> = (0..1u64 << n).filter(|_| rng.random_bool(0.7)).map(WorldSet::from_mask).collect();
        frame.set_nu0(w, sets).expect("in range");
    }
    frame
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bounds_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = kripke_model(&mut rng, 5, 2, &["p"]);
            assert!(m.universe().len() <= 5 && m.frame.max_out_degree() <= 2);
            let f = explicit_frame(&mut rng, 3, 2);
            assert!(f.max_grade() <= 2);
        }
    }
}
