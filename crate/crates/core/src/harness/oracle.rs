//! Brute-force readings of the definitions, used as fuzz oracles.

use crate::bisim::BisimRelation;
use crate::formula::{Formula, Grade};
use crate::graded::{ExtNat, GradedModel};
use crate::kripke::KripkeModel;
use crate::sets::WorldSet;

fn all_subsets(n: usize) -> impl Iterator<Item = WorldSet> {
    (0..1u64 << n).map(WorldSet::from_mask)
}

/// `⟦f⟧` with `◇_n ψ` read as: some `X ⊆ ⟦ψ⟧` has `σ(w, X) ≥ n`, searching
/// every subset of `W`.
pub fn graded_truth_set(m: &GradedModel, f: &Formula) -> WorldSet {
    let n = m.universe().len();
    match f {
        Formula::Top => WorldSet::full(n),
        Formula::Bot => WorldSet::new(),
        Formula::Atom(p) => m.letter(p),
        Formula::Not(g) => WorldSet::full(n).difference(&graded_truth_set(m, g)),
        Formula::Or(a, b) => graded_truth_set(m, a).union(&graded_truth_set(m, b)),
        Formula::Dia(k, g) => {
            let t = graded_truth_set(m, g);
            (0..n)
                .filter(|&w| {
                    all_subsets(n).filter(|x| x.is_subset(&t)).any(|x| {
                        let mass = x.iter().fold(ExtNat::Fin(0), |acc, u| acc + m.frame.sigma(w, u));
                        mass.at_least(*k)
                    })
                })
                .collect()
        }
    }
}

/// `↑P_{≥n}(A)` inside a universe of `size` worlds: every `X` containing some
/// `n`-element subset of `A`.
pub fn upset(a: &WorldSet, n: Grade, size: usize) -> Vec<WorldSet> {
    let bases = a.subsets_of_size(n as usize);
    all_subsets(size).filter(|x| bases.iter().any(|y| y.is_subset(x))).collect()
}

/// Prop, Forth and Back of a graded bisimulation, quantifying over the
/// materialized up-sets on both sides.
pub fn is_graded_bisim(z: &BisimRelation, m: &KripkeModel, m2: &KripkeModel) -> bool {
    if z.is_empty() {
        return false;
    }
    let (n, n2) = (m.universe().len(), m2.universe().len());
    // every member of `to` has a partner in `from`
    let covered = |to: &WorldSet, from: &WorldSet, forward: bool| {
        to.iter().all(|b| from.iter().any(|a| if forward { z.contains(a, b) } else { z.contains(b, a) }))
    };
    let letters: Vec<&String> = m.val.keys().chain(m2.val.keys()).collect();
    z.pairs().iter().all(|&(w, w2)| {
        let prop = letters.iter().all(|p| m.letter(p).contains(w) == m2.letter(p).contains(w2));
        let top = n.max(n2) as Grade;
        prop && (0..=top).all(|k| {
            let ups = upset(m.frame.successors(w), k, n);
            let ups2 = upset(m2.frame.successors(w2), k, n2);
            let forth = ups.iter().all(|x| ups2.iter().any(|x2| covered(x2, x, true)));
            let back = ups2.iter().all(|x2| ups.iter().any(|x| covered(x, x2, false)));
            forth && back
        })
    })
}
