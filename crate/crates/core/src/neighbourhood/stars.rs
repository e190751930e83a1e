//! Gradedness of neighbourhood frames: direct check against the extracted
//! core, and the six `★` conditions.
//!
//! Grades above the frame's bound are read with the convention `ν_n = ∅`.
//! `★2`–`★5` are checked for `1 ≤ n ≤ N`; `★6` also at `N + 1`, which is where
//! a core larger than `N` shows up.

use std::collections::BTreeMap;

use serde::Serialize;

use super::Neighbourhoods;
use crate::error::Result;
use crate::formula::Grade;
use crate::sets::WorldSet;

/// `{a : {a} ∈ ν_1(w)}`
pub fn extract_core<F: Neighbourhoods + ?Sized>(frame: &F, w: usize) -> WorldSet {
    (0..frame.universe().len()).filter(|&a| frame.contains(w, 1, &WorldSet::singleton(a))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Gradedness {
    Yes { cores: BTreeMap<String, Vec<String>> },
    No { world: String, grade: Grade, witness: Vec<String>, reason: String },
}

impl Gradedness {
    pub fn is_graded(&self) -> bool {
        matches!(self, Gradedness::Yes { .. })
    }
}

/// Whether every `ν_n(w)` equals `↑P_{≥n}(A_w)` for the extracted core `A_w`.
///
/// Checks `ν_0(w) = P(W)`, `ν_n(w) = {X : |X ∩ A_w| ≥ n}` for `1 ≤ n ≤ N`, and
/// `|A_w| ≤ N` (otherwise `ν_{N+1}(w) = ∅` would disagree). The witness is the
/// first set, in mask order, on which membership differs.
pub fn is_graded_frame<F: Neighbourhoods + ?Sized>(frame: &F) -> Result<Gradedness> {
    let u = frame.universe();
    let bound = frame.grade_bound();
    let mut cores = BTreeMap::new();
    for w in 0..u.len() {
        let a = extract_core(frame, w);
        let no = |grade: Grade, x: &WorldSet, reason: String| Gradedness::No {
            world: u.name(w).to_string(),
            grade,
            witness: u.names_of(x),
            reason,
        };
        if !frame.is_implicit() {
            for n in 0..=bound {
                for x in super::all_masks(u.len())?.map(WorldSet::from_mask) {
                    let expected = x.intersection_len(&a) >= n as usize;
                    if frame.contains(w, n, &x) != expected {
                        let reason = if expected {
                            format!("the set is in the up-set of {n}-subsets of the core but not in nu_{n}")
                        } else {
                            format!("the set is in nu_{n} but meets the core in fewer than {n} worlds")
                        };
                        return Ok(no(n, &x, reason));
                    }
                }
            }
            if a.len() > bound as usize {
                let reason = format!("the core has {} worlds but nu_{} is empty", a.len(), bound + 1);
                return Ok(no(bound + 1, &a, reason));
            }
        }
        cores.insert(u.name(w).to_string(), u.names_of(&a));
    }
    Ok(Gradedness::Yes { cores })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StarOutcome {
    Pass,
    Violation { world: String, grade: Grade, witnesses: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarCheck {
    pub star: u8,
    #[serde(flatten)]
    pub outcome: StarOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    /// Grades above this are read as `ν_n = ∅`.
    pub max_grade: Grade,
    pub checks: Vec<StarCheck>,
}

impl StarOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, StarOutcome::Pass)
    }
}

impl StarReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.outcome == StarOutcome::Pass)
    }

    /// The outcome for condition `star` (1 to 6).
    pub fn get(&self, star: u8) -> &StarOutcome {
        &self.checks[star as usize - 1].outcome
    }
}

struct Witness {
    world: usize,
    grade: Grade,
    sets: Vec<WorldSet>,
}

type Condition<F> = fn(&F, usize, Grade) -> Result<Option<Witness>>;

/// Checks `★1`–`★6` independently; each reports its first violation.
pub fn check_stars<F: Neighbourhoods + ?Sized>(frame: &F) -> Result<StarReport> {
    let u = frame.universe();
    let bound = frame.grade_bound();
    let conditions: [Condition<F>; 6] = [star1, star2, star3, star4, star5, star6];
    let mut checks = Vec::new();
    for (i, cond) in conditions.iter().enumerate() {
        let star = i as u8 + 1;
        let outcome = match cond(frame, u.len(), bound)? {
            None => StarOutcome::Pass,
            Some(wit) => StarOutcome::Violation {
                world: u.name(wit.world).to_string(),
                grade: wit.grade,
                witnesses: wit.sets.iter().map(|s| u.names_of(s)).collect(),
            },
        };
        checks.push(StarCheck { star, outcome });
    }
    Ok(StarReport { max_grade: bound, checks })
}

fn first<T>(
    worlds: usize,
    grades: impl Iterator<Item = Grade> + Clone,
    mut f: impl FnMut(usize, Grade) -> Result<Option<T>>,
) -> Result<Option<T>> {
    for w in 0..worlds {
        for n in grades.clone() {
            if let Some(t) = f(w, n)? {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

/// `ν_0(w) = P(W)`
fn star1<F: Neighbourhoods + ?Sized>(frame: &F, worlds: usize, _: Grade) -> Result<Option<Witness>> {
    first(worlds, 0..=0, |w, _| {
        Ok(super::all_masks(worlds)?.map(WorldSet::from_mask).find(|x| !frame.contains(w, 0, x)).map(|x| Witness {
            world: w,
            grade: 0,
            sets: vec![x],
        }))
    })
}

/// `ν_n(w)` is closed under supersets.
fn star2<F: Neighbourhoods + ?Sized>(frame: &F, worlds: usize, bound: Grade) -> Result<Option<Witness>> {
    let full = WorldSet::full(worlds);
    first(worlds, 1..=bound, |w, n| {
        for x in frame.members(w, n)? {
            for a in full.difference(&x).iter() {
                let mut y = x.clone();
                y.insert(a);
                if !frame.contains(w, n, &y) {
                    return Ok(Some(Witness { world: w, grade: n, sets: vec![x, y] }));
                }
            }
        }
        Ok(None)
    })
}

/// `∅ ∉ ν_n(w)` for `n ≥ 1`.
fn star3<F: Neighbourhoods + ?Sized>(frame: &F, worlds: usize, bound: Grade) -> Result<Option<Witness>> {
    first(worlds, 1..=bound, |w, n| {
        Ok(frame.contains(w, n, &WorldSet::new()).then(|| Witness { world: w, grade: n, sets: vec![WorldSet::new()] }))
    })
}

/// Every member has a minimal member below it.
fn star4<F: Neighbourhoods + ?Sized>(frame: &F, worlds: usize, bound: Grade) -> Result<Option<Witness>> {
    first(worlds, 1..=bound, |w, n| {
        let minimal = frame.minimal_members(w, n)?;
        Ok(frame.members(w, n)?.into_iter().find(|x| !minimal.iter().any(|y| y.is_subset(x))).map(|x| Witness {
            world: w,
            grade: n,
            sets: vec![x],
        }))
    })
}

/// Minimal members of `ν_n(w)` have `n` elements and are atomic in `ν_1(w)`.
fn star5<F: Neighbourhoods + ?Sized>(frame: &F, worlds: usize, bound: Grade) -> Result<Option<Witness>> {
    first(worlds, 1..=bound, |w, n| {
        Ok(frame
            .minimal_members(w, n)?
            .into_iter()
            .find(|y| y.len() != n as usize || !y.iter().all(|a| frame.contains(w, 1, &WorldSet::singleton(a))))
            .map(|y| Witness { world: w, grade: n, sets: vec![y] }))
    })
}

/// `n` pairwise distinct `ν_1(w)`-singletons union to a minimal member of `ν_n(w)`.
fn star6<F: Neighbourhoods + ?Sized>(frame: &F, worlds: usize, bound: Grade) -> Result<Option<Witness>> {
    first(worlds, 1..=bound + 1, |w, n| {
        let atoms = extract_core(frame, w);
        for s in atoms.subsets_of_size(n as usize) {
            let minimal = frame.contains(w, n, &s) && !super::has_proper_subset_in(&s, |y| frame.contains(w, n, y));
            if !minimal {
                return Ok(Some(Witness { world: w, grade: n, sets: vec![s] }));
            }
        }
        Ok(None)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::KripkeFrame;
    use crate::neighbourhood::{bullet, CoreFrame, NbhdFrame};
    use crate::sets::Universe;

    fn section6_prime() -> NbhdFrame {
        let mut f = NbhdFrame::new(Universe::new(["c"]).unwrap(), 2).unwrap();
        f.set_nu0(0, [WorldSet::new(), WorldSet::singleton(0)]).unwrap();
        f.set_nu(0, 1, [WorldSet::singleton(0)]).unwrap();
        f.set_nu(0, 2, [WorldSet::singleton(0)]).unwrap();
        f
    }

    #[test]
    fn section6_prime_is_not_graded() {
        let f = section6_prime();
        assert_eq!(extract_core(&f, 0), WorldSet::singleton(0));
        match is_graded_frame(&f).unwrap() {
            Gradedness::No { world, grade, witness, .. } => {
                assert_eq!((world.as_str(), grade), ("c", 2));
                assert_eq!(witness, ["c"]);
            }
            other => panic!("{other:?}"),
        }
        let r = check_stars(&f).unwrap();
        assert!(!r.all_pass());
        assert_eq!(
            *r.get(5),
            StarOutcome::Violation { world: "c".into(), grade: 2, witnesses: vec![vec!["c".into()]] }
        );
        assert_eq!(*r.get(1), StarOutcome::Pass);
    }

    #[test]
    fn core_frames_are_graded() {
        let ab = Universe::new(["a", "b"]).unwrap();
        let f = CoreFrame::new(ab.clone(), vec![ab.full(), ab.full()]).unwrap();
        assert_eq!(extract_core(&f, 0), ab.full());
        assert!(is_graded_frame(&f).unwrap().is_graded());
        let m = f.materialize().unwrap();
        match is_graded_frame(&m).unwrap() {
            Gradedness::Yes { cores } => assert_eq!(cores["a"], ["a", "b"]),
            other => panic!("{other:?}"),
        }
        assert!(check_stars(&m).unwrap().all_pass());
        assert!(check_stars(&f).unwrap().all_pass());
    }

    #[test]
    fn materialized_bullets_pass_every_star() {
        let k = KripkeFrame::from_names(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "b"), ("c", "a"), ("c", "d")],
        )
        .unwrap();
        let m = bullet(&k).materialize().unwrap();
        assert!(check_stars(&m).unwrap().all_pass());
        assert!(is_graded_frame(&m).unwrap().is_graded());
    }

    #[test]
    fn nu0_override_breaks_star1() {
        let ab = Universe::new(["a", "b"]).unwrap();
        let mut f =
            CoreFrame::new(ab.clone(), vec![WorldSet::new(), WorldSet::new()]).unwrap().materialize_with(1).unwrap();
        f.set_nu0(0, [WorldSet::new(), WorldSet::singleton(1), ab.full()]).unwrap();
        let r = check_stars(&f).unwrap();
        assert_eq!(
            *r.get(1),
            StarOutcome::Violation { world: "a".into(), grade: 0, witnesses: vec![vec!["a".into()]] }
        );
        assert!(!is_graded_frame(&f).unwrap().is_graded());
    }

    #[test]
    fn core_too_large_for_n() {
        let ab = Universe::new(["a", "b"]).unwrap();
        let f = NbhdFrame::from_fn(ab, 1, |_, n, x| x.len() >= n as usize).unwrap();
        match is_graded_frame(&f).unwrap() {
            Gradedness::No { grade, .. } => assert_eq!(grade, 2),
            other => panic!("{other:?}"),
        }
        let r = check_stars(&f).unwrap();
        assert!(matches!(r.get(6), StarOutcome::Violation { grade: 2, .. }));
        assert!((1..=5).all(|s| *r.get(s) == StarOutcome::Pass));
    }

    #[test]
    fn empty_member_breaks_star3() {
        let f = NbhdFrame::from_fn(Universe::new(["a"]).unwrap(), 1, |_, _, _| true).unwrap();
        assert!(matches!(check_stars(&f).unwrap().get(3), StarOutcome::Violation { grade: 1, .. }));
        assert!(!is_graded_frame(&f).unwrap().is_graded());
    }
}
