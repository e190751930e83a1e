//! Graded tuple bisimulations: families `Z_1, …, Z_K` of relations between
//! equal-size finite sets of worlds.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::BisimRelation;
use crate::error::{Error, Result};
use crate::kripke::KripkeModel;
use crate::semantics::Limits;
use crate::sets::{Universe, WorldSet};

/// One level `(i, Z_i)` of a tuple bisimulation, by world names.
pub type NamedLevel<S> = (usize, Vec<(Vec<S>, Vec<S>)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleBisim {
    left: usize,
    right: usize,
    /// `family[i - 1] = Z_i`
    family: Vec<BTreeSet<(WorldSet, WorldSet)>>,
}

impl TupleBisim {
    /// Empty family with `Z_1 … Z_K` all empty.
    pub fn new(left: usize, right: usize, k: usize) -> Self {
        Self { left, right, family: vec![BTreeSet::new(); k] }
    }

    /// `K`, the largest grade represented.
    pub fn grade(&self) -> usize {
        self.family.len()
    }

    /// `Z_i` for `1 ≤ i ≤ K`.
    pub fn level(&self, i: usize) -> &BTreeSet<(WorldSet, WorldSet)> {
        &self.family[i - 1]
    }

    /// Adds `(X, X′)` to `Z_i`, growing `K` if needed.
    pub fn insert(&mut self, i: usize, x: WorldSet, x2: WorldSet) -> Result<()> {
        if i == 0 {
            return Err(Error::InvalidArgument("tuple bisimulation grades start at 1".into()));
        }
        if !x.is_subset(&WorldSet::full(self.left)) || !x2.is_subset(&WorldSet::full(self.right)) {
            return Err(Error::invalid_model("tuple set outside its model"));
        }
        if self.family.len() < i {
            self.family.resize(i, BTreeSet::new());
        }
        self.family[i - 1].insert((x, x2));
        Ok(())
    }

    pub fn from_names<S: AsRef<str>>(left: &Universe, right: &Universe, levels: &[NamedLevel<S>]) -> Result<Self> {
        let mut t = Self::new(left.len(), right.len(), 0);
        for (i, pairs) in levels {
            if *i == 0 {
                return Err(Error::InvalidArgument("tuple bisimulation grades start at 1".into()));
            }
            if t.family.len() < *i {
                t.family.resize(*i, BTreeSet::new());
            }
            for (x, x2) in pairs {
                let x = left.set_of(x.iter().map(AsRef::as_ref))?;
                let x2 = right.set_of(x2.iter().map(AsRef::as_ref))?;
                t.insert(*i, x, x2)?;
            }
        }
        Ok(t)
    }

    /// `(grade, pairs)` for every grade `1..=K`, with sets by world name.
    pub fn to_names(&self, left: &Universe, right: &Universe) -> Vec<NamedLevel<String>> {
        self.family
            .iter()
            .enumerate()
            .map(|(i, z)| (i + 1, z.iter().map(|(x, x2)| (left.names_of(x), right.names_of(x2))).collect()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TupleVerdict {
    Pass,
    Violation { item: u8, grade: Option<usize>, reason: String, witnesses: Vec<Vec<String>> },
}

impl TupleVerdict {
    pub fn passes(&self) -> bool {
        matches!(self, TupleVerdict::Pass)
    }
}

/// Checks items (1) to (7) in order and reports the first that fails.
///
/// Items (5) and (6) are checked for `1 ≤ i ≤ K`.
pub fn check_tuple_bisim(t: &TupleBisim, m: &KripkeModel, m2: &KripkeModel) -> Result<TupleVerdict> {
    let (lu, ru) = (m.universe(), m2.universe());
    if (t.left, t.right) != (lu.len(), ru.len()) {
        return Err(Error::InvalidArgument("family does not match the models".into()));
    }
    let fail = |item: u8, grade: Option<usize>, reason: &str, sets: Vec<Vec<String>>| TupleVerdict::Violation {
        item,
        grade,
        reason: reason.to_string(),
        witnesses: sets,
    };
    let names = |x: &WorldSet, x2: &WorldSet| vec![lu.names_of(x), ru.names_of(x2)];

    // (1)
    if t.grade() == 0 || t.level(1).is_empty() {
        return Ok(fail(1, Some(1), "Z_1 is empty", vec![]));
    }
    // (2)
    let (full, full2) = (lu.full(), ru.full());
    for i in 1..=t.grade() {
        if let Some((x, x2)) = t.level(i).iter().find(|(x, x2)| !x.is_subset(&full) || !x2.is_subset(&full2)) {
            return Ok(fail(2, Some(i), "set outside its model", names(x, x2)));
        }
    }
    // (3)
    for i in 1..=t.grade() {
        if let Some((x, x2)) = t.level(i).iter().find(|(x, x2)| x.len() != i || x2.len() != i) {
            return Ok(fail(3, Some(i), "related sets must both have exactly i elements", names(x, x2)));
        }
    }
    let z1: Vec<(usize, usize)> = t
        .level(1)
        .iter()
        .map(|(x, x2)| (x.iter().next().expect("size 1"), x2.iter().next().expect("size 1")))
        .collect();
    // (4)
    let letters: BTreeSet<&String> = m.val.keys().chain(m2.val.keys()).collect();
    for &(w, w2) in &z1 {
        if let Some(p) = letters.iter().find(|p| m.letter(p).contains(w) != m2.letter(p).contains(w2)) {
            let sets = vec![vec![lu.name(w).to_string()], vec![ru.name(w2).to_string()], vec![p.to_string()]];
            return Ok(fail(4, Some(1), "related worlds disagree on a letter", sets));
        }
    }
    // (5) and (6)
    let by_left: Vec<BTreeMap<&WorldSet, Vec<&WorldSet>>> = (1..=t.grade())
        .map(|i| {
            let mut idx: BTreeMap<&WorldSet, Vec<&WorldSet>> = BTreeMap::new();
            for (x, x2) in t.level(i) {
                idx.entry(x).or_default().push(x2);
            }
            idx
        })
        .collect();
    let by_right: Vec<BTreeMap<&WorldSet, Vec<&WorldSet>>> = (1..=t.grade())
        .map(|i| {
            let mut idx: BTreeMap<&WorldSet, Vec<&WorldSet>> = BTreeMap::new();
            for (x, x2) in t.level(i) {
                idx.entry(x2).or_default().push(x);
            }
            idx
        })
        .collect();
    for &(w, w2) in &z1 {
        let (r, r2) = (m.frame.successors(w), m2.frame.successors(w2));
        for i in 1..=t.grade() {
            for x in r.subsets_of_size(i) {
                let matched = by_left[i - 1].get(&x).is_some_and(|xs| xs.iter().any(|x2| x2.is_subset(r2)));
                if !matched {
                    let sets = vec![vec![lu.name(w).to_string()], vec![ru.name(w2).to_string()], lu.names_of(&x)];
                    return Ok(fail(5, Some(i), "successor set has no Z_i partner among the successors", sets));
                }
            }
        }
        for i in 1..=t.grade() {
            for x2 in r2.subsets_of_size(i) {
                let matched = by_right[i - 1].get(&x2).is_some_and(|xs| xs.iter().any(|x| x.is_subset(r)));
                if !matched {
                    let sets = vec![vec![lu.name(w).to_string()], vec![ru.name(w2).to_string()], ru.names_of(&x2)];
                    return Ok(fail(6, Some(i), "successor set has no Z_i partner among the successors", sets));
                }
            }
        }
    }
    // (7)
    let z1: BTreeSet<(usize, usize)> = z1.into_iter().collect();
    for i in 1..=t.grade() {
        for (x, x2) in t.level(i) {
            let forth = x.iter().all(|a| x2.iter().any(|b| z1.contains(&(a, b))));
            let back = x2.iter().all(|b| x.iter().any(|a| z1.contains(&(a, b))));
            if !(forth && back) {
                return Ok(fail(7, Some(i), "related sets are not covered by Z_1", names(x, x2)));
            }
        }
    }
    Ok(TupleVerdict::Pass)
}

/// `w Z w′ ⟺ {w} Z_1 {w′}`
pub fn tuple_to_graded(t: &TupleBisim) -> Result<BisimRelation> {
    let pairs = if t.grade() == 0 {
        Vec::new()
    } else {
        t.level(1)
            .iter()
            .filter(|(x, x2)| x.len() == 1 && x2.len() == 1)
            .map(|(x, x2)| (x.iter().next().expect("size 1"), x2.iter().next().expect("size 1")))
            .collect()
    };
    BisimRelation::new(t.left, t.right, pairs)
}

/// The larger of the two models' maximal out-degrees; above it every `Z_n`
/// is irrelevant to items (5) and (6).
pub fn default_tuple_grade(m: &KripkeModel, m2: &KripkeModel) -> usize {
    m.frame.max_out_degree().max(m2.frame.max_out_degree()).max(1)
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

/// `Z_1 = {({w},{w′}) : w Z w′}` and, for `2 ≤ n ≤ K`, `Z_n` the equal-size
/// Z-pairs: `X ⊆ Z⁻¹[X′]` and `X′ ⊆ Z[X]`.
pub fn graded_to_tuple(
    z: &BisimRelation,
    m: &KripkeModel,
    m2: &KripkeModel,
    k: usize,
    limits: &Limits,
) -> Result<TupleBisim> {
    let (lu, ru) = (m.universe(), m2.universe());
    if z.dims() != (lu.len(), ru.len()) {
        return Err(Error::InvalidArgument("relation does not match the models".into()));
    }
    if k > limits.max_out_degree {
        return Err(Error::budget(format!("tuple grade {k}"), limits.max_out_degree as u64));
    }
    let needed =
        (2..=k).fold(0u64, |acc, n| acc.saturating_add(binomial(lu.len(), n).saturating_mul(binomial(ru.len(), n))));
    if needed > limits.budget {
        return Err(Error::budget(format!("{needed} candidate set pairs"), limits.budget));
    }
    let mut t = TupleBisim::new(lu.len(), ru.len(), k.max(1));
    for &(w, w2) in z.pairs() {
        t.insert(1, WorldSet::singleton(w), WorldSet::singleton(w2))?;
    }
    let (fw, bw) = (z.forward(), z.backward());
    for n in 2..=k {
        let rights = ru.full().subsets_of_size(n);
        for x in lu.full().subsets_of_size(n) {
            let zx = super::image(&fw, &x);
            for x2 in rights.iter().filter(|x2| x2.is_subset(&zx)) {
                if x.is_subset(&super::image(&bw, x2)) {
                    t.insert(n, x.clone(), x2.clone())?;
                }
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::{check_graded_bisim, largest_graded_bisim};
    use crate::kripke::KripkeFrame;
    use crate::semantics::Model;

    fn two_worlds() -> KripkeModel {
        let frame = KripkeFrame::from_names(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        Model::new(frame, Default::default()).unwrap()
    }

    #[test]
    fn identity_family() {
        let m = two_worlds();
        let t = graded_to_tuple(&BisimRelation::identity(2), &m, &m, 2, &Limits::default()).unwrap();
        assert!(t.level(2).contains(&(m.universe().full(), m.universe().full())));
        assert!(check_tuple_bisim(&t, &m, &m).unwrap().passes());
        assert_eq!(tuple_to_graded(&t).unwrap(), BisimRelation::identity(2));
    }

    #[test]
    fn projection() {
        let u = Universe::new(["a"]).unwrap();
        let v = Universe::new(["c"]).unwrap();
        let t = TupleBisim::from_names(&u, &v, &[(1, vec![(vec!["a"], vec!["c"])])]).unwrap();
        assert_eq!(tuple_to_graded(&t).unwrap().to_names(&u, &v), [("a".to_string(), "c".to_string())]);
    }

    #[test]
    fn item_violations() {
        let m = two_worlds();
        let u = m.universe();
        let empty = TupleBisim::new(2, 2, 1);
        assert!(matches!(check_tuple_bisim(&empty, &m, &m).unwrap(), TupleVerdict::Violation { item: 1, .. }));
        let bad = TupleBisim::from_names(u, u, &[(1, vec![(vec!["a"], vec!["a"])]), (2, vec![(vec!["a"], vec!["b"])])])
            .unwrap();
        assert!(matches!(check_tuple_bisim(&bad, &m, &m).unwrap(), TupleVerdict::Violation { item: 3, .. }));
        let lonely = TupleBisim::from_names(u, u, &[(1, vec![(vec!["a"], vec!["a"])])]).unwrap();
        assert!(matches!(check_tuple_bisim(&lonely, &m, &m).unwrap(), TupleVerdict::Violation { item: 5, .. }));
    }

    #[test]
    fn round_trip_on_largest() {
        let m = two_worlds();
        let z = largest_graded_bisim(&m, &m, &Limits::default()).unwrap();
        assert_eq!(z.len(), 4);
        let t = graded_to_tuple(&z, &m, &m, default_tuple_grade(&m, &m), &Limits::default()).unwrap();
        assert!(check_tuple_bisim(&t, &m, &m).unwrap().passes());
        let back = tuple_to_graded(&t).unwrap();
        assert_eq!(back, z);
        assert!(check_graded_bisim(&back, &m, &m, &Limits::default()).unwrap().passes());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(2, 3), 0);
    }
}
