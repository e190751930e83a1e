//! First-order properties corresponding to the additivity axioms, checked by
//! enumerating every `w`, `X`, `Y` and grade.

use serde::Serialize;

use super::Neighbourhoods;
use crate::error::{Error, Result};
use crate::formula::Grade;
use crate::par;
use crate::semantics::Limits;
use crate::sets::WorldSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PropertyVerdict {
    Pass,
    Violation { world: String, grades: Vec<Grade>, x: Vec<String>, y: Vec<String> },
}

impl PropertyVerdict {
    pub fn passes(&self) -> bool {
        matches!(self, PropertyVerdict::Pass)
    }
}

/// `member[n][mask]` for one world, grades `0..=top`.
struct Table {
    member: Vec<Vec<bool>>,
}

impl Table {
    fn new<F: Neighbourhoods + ?Sized>(frame: &F, w: usize, top: Grade) -> Self {
        let size = 1usize << frame.universe().len();
        let member = (0..=top)
            .map(|n| (0..size as u64).map(|m| frame.contains(w, n, &WorldSet::from_mask(m))).collect())
            .collect();
        Self { member }
    }

    fn has(&self, n: Grade, mask: u64) -> bool {
        self.member.get(n as usize).is_some_and(|row| row[mask as usize])
    }
}

struct Hit {
    world: usize,
    grades: Vec<Grade>,
    x: u64,
    y: u64,
}

/// Searches worlds and `X` masks in order; the first violation wins.
fn search<F, C>(frame: &F, limits: &Limits, top: Grade, check: C) -> Result<PropertyVerdict>
where
    F: Neighbourhoods + ?Sized,
    C: Fn(&Table, u64, u64) -> Option<Vec<Grade>> + Sync,
{
    let u = frame.universe();
    let n = u.len();
    if n > limits.max_correspondence_worlds {
        return Err(Error::budget(
            format!("correspondence check over {n} worlds"),
            limits.max_correspondence_worlds as u64,
        ));
    }
    let size = 1u64 << n;
    let tables: Vec<Table> = (0..n).map(|w| Table::new(frame, w, top)).collect();
    let hit = par::find_map_first(0..n as u64 * size, |i| {
        let (w, x) = ((i / size) as usize, i % size);
        (0..size).find_map(|y| check(&tables[w], x, y).map(|grades| Hit { world: w, grades, x, y }))
    });
    Ok(match hit {
        None => PropertyVerdict::Pass,
        Some(h) => PropertyVerdict::Violation {
            world: u.name(h.world).to_string(),
            grades: h.grades,
            x: u.names_of(&WorldSet::from_mask(h.x)),
            y: u.names_of(&WorldSet::from_mask(h.y)),
        },
    })
}

/// `∀w X Y: X ∩ (W∖Y) ∉ ν_1(w) & X ∈ ν_n(w) ⇒ Y ∈ ν_n(w)`, for `n ≤ N`.
pub fn check_ax5_property<F: Neighbourhoods + ?Sized>(frame: &F, limits: &Limits) -> Result<PropertyVerdict> {
    let bound = frame.grade_bound();
    search(frame, limits, bound, |t, x, y| {
        if t.has(1, x & !y) {
            return None;
        }
        (0..=bound).find(|&n| t.has(n, x) && !t.has(n, y)).map(|n| vec![n])
    })
}

/// `∀w X Y: X ∩ Y ∉ ν_1(w) & X ∈ ν_m(w) & X ∉ ν_{m+1}(w) & Y ∈ ν_n(w) & Y ∉ ν_{n+1}(w)
/// ⇒ X ∪ Y ∈ ν_{m+n}(w) & X ∪ Y ∉ ν_{m+n+1}(w)`, for `m, n ≤ N`.
pub fn check_ax6_property<F: Neighbourhoods + ?Sized>(frame: &F, limits: &Limits) -> Result<PropertyVerdict> {
    let bound = frame.grade_bound();
    search(frame, limits, 2 * bound + 1, |t, x, y| {
        if t.has(1, x & y) {
            return None;
        }
        let exact = |s: u64| (0..=bound).find(|&k| t.has(k, s) && !t.has(k + 1, s));
        let (m, n) = (exact(x)?, exact(y)?);
        let ok = t.has(m + n, x | y) && !t.has(m + n + 1, x | y);
        (!ok).then(|| vec![m, n])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbourhood::{CoreFrame, NbhdFrame};
    use crate::sets::Universe;

    #[test]
    fn graded_frames_pass() {
        let u = Universe::numbered(3);
        let f = CoreFrame::new(u.clone(), vec![u.full(), WorldSet::singleton(1), WorldSet::new()]).unwrap();
        let limits = Limits::default();
        assert!(check_ax5_property(&f, &limits).unwrap().passes());
        assert!(check_ax6_property(&f, &limits).unwrap().passes());
        let m = f.materialize().unwrap();
        assert!(check_ax5_property(&m, &limits).unwrap().passes());
        assert!(check_ax6_property(&m, &limits).unwrap().passes());
    }

    #[test]
    fn single_world() {
        let f = CoreFrame::new(Universe::new(["c"]).unwrap(), vec![WorldSet::singleton(0)]).unwrap();
        assert!(check_ax5_property(&f, &Limits::default()).unwrap().passes());
        assert!(check_ax6_property(&f, &Limits::default()).unwrap().passes());
    }

    #[test]
    fn non_additive_frame_fails_ax6() {
        // ν_1 requires both worlds: neither {a} nor {b} alone is a neighbourhood.
        let u = Universe::new(["a", "b"]).unwrap();
        let f = NbhdFrame::from_fn(u, 2, |_, n, x| n == 1 && x.len() == 2).unwrap();
        match check_ax6_property(&f, &Limits::default()).unwrap() {
            PropertyVerdict::Violation { grades, .. } => assert_eq!(grades, vec![0, 0]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_monotone_frame_fails_ax5() {
        let u = Universe::new(["a", "b"]).unwrap();
        let f = NbhdFrame::from_fn(u, 1, |_, _, x| x.len() == 1).unwrap();
        assert!(!check_ax5_property(&f, &Limits::default()).unwrap().passes());
    }

    #[test]
    fn world_limit() {
        let f = CoreFrame::new(Universe::numbered(11), vec![WorldSet::new(); 11]).unwrap();
        assert!(matches!(check_ax5_property(&f, &Limits::default()), Err(Error::BudgetExceeded { .. })));
    }
}
