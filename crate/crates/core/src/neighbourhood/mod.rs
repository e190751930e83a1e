//! Neighbourhood frames: `◇_n φ` holds at `w` iff `⟦φ⟧ ∈ ν_n(w)`.
//!
//! Two representations are provided. [`NbhdFrame`] stores every `ν_n(w)` as
//! an explicit collection for `n ≤ N` (with `ν_n(w) = ∅` above `N`);
//! [`CoreFrame`] stores one core set `A_w` per world and stands for the graded
//! neighbourhood frame `ν_n(w) = ↑P_{≥n}(A_w)`.

mod correspondence;
mod morphism;
mod search;
mod stars;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::Grade;
use crate::kripke::{KripkeFrame, KripkeModel};
use crate::semantics::{Frame, Model};
use crate::sets::{Universe, WorldSet};

pub use correspondence::{check_ax5_property, check_ax6_property, PropertyVerdict};
pub use morphism::{is_bounded_morphism, BmCondition, MorphismReport, MorphismViolation, WorldMap};
pub use search::{counterexample_search, SearchClass, SearchOptions, SearchOutcome};
pub use stars::{check_stars, extract_core, is_graded_frame, Gradedness, StarCheck, StarOutcome, StarReport};

/// Largest universe an explicit frame may have.
pub const MAX_EXPLICIT_WORLDS: usize = 16;

/// Membership queries shared by both representations.
pub trait Neighbourhoods: Frame {
    /// `X ∈ ν_n(w)`
    fn contains(&self, w: usize, n: Grade, x: &WorldSet) -> bool;

    /// Every `ν_n(w)` with `n` above this bound is empty.
    fn grade_bound(&self) -> Grade;

    /// All members of `ν_n(w)`, in increasing mask order.
    fn members(&self, w: usize, n: Grade) -> Result<Vec<WorldSet>>;

    /// Members `X` of `ν_n(w)` such that every member has one of them below it.
    fn minimal_members(&self, w: usize, n: Grade) -> Result<Vec<WorldSet>>;

    /// Whether some member of `ν_n(w)` is a subset of `bound`.
    fn has_member_within(&self, w: usize, n: Grade, bound: &WorldSet) -> bool;

    /// True when the frame is monotonic by construction.
    fn is_implicit(&self) -> bool;
}

/// Every subset of an `n`-world universe as a mask, if `n` is small enough.
fn all_masks(n: usize) -> Result<std::ops::Range<u64>> {
    if n > 20 {
        return Err(Error::budget(format!("2^{n} subsets"), 1 << 20));
    }
    Ok(0..1u64 << n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NbhdFrame {
    universe: Universe,
    max_grade: Grade,
    /// `nu[w][n - 1] = ν_n(w)` for `1 ≤ n ≤ N`.
    nu: Vec<Vec<BTreeSet<WorldSet>>>,
    nu0: Vec<Option<BTreeSet<WorldSet>>>,
}

impl NbhdFrame {
    /// All `ν_n` empty for `1 ≤ n ≤ N`, `ν_0` the full powerset.
    pub fn new(universe: Universe, max_grade: Grade) -> Result<Self> {
        if universe.len() > MAX_EXPLICIT_WORLDS {
            return Err(Error::budget(
                format!("explicit frame with {} worlds", universe.len()),
                MAX_EXPLICIT_WORLDS as u64,
            ));
        }
        if max_grade > 64 {
            return Err(Error::InvalidArgument(format!("explicit max_grade {max_grade} is above 64")));
        }
        let n = universe.len();
        Ok(Self { universe, max_grade, nu: vec![vec![BTreeSet::new(); max_grade as usize]; n], nu0: vec![None; n] })
    }

    /// Frame with `ν_n(w) = {X : member(w, n, X)}` for `1 ≤ n ≤ N`.
    pub fn from_fn(
        universe: Universe,
        max_grade: Grade,
        member: impl Fn(usize, Grade, &WorldSet) -> bool,
    ) -> Result<Self> {
        let mut f = Self::new(universe, max_grade)?;
        let subsets: Vec<WorldSet> = all_masks(f.universe.len())?.map(WorldSet::from_mask).collect();
        for w in 0..f.universe.len() {
            for n in 1..=max_grade {
                f.nu[w][n as usize - 1] = subsets.iter().filter(|x| member(w, n, x)).cloned().collect();
            }
        }
        Ok(f)
    }

    pub fn max_grade(&self) -> Grade {
        self.max_grade
    }

    /// Replaces `ν_n(w)` for `1 ≤ n ≤ N`.
    pub fn set_nu(&mut self, w: usize, n: Grade, sets: impl IntoIterator<Item = WorldSet>) -> Result<()> {
        if n == 0 || n > self.max_grade {
            return Err(Error::InvalidArgument(format!("grade {n} outside 1..={}", self.max_grade)));
        }
        self.nu[w][n as usize - 1] = self.checked(sets)?;
        Ok(())
    }

    /// Overrides `ν_0(w)`.
    pub fn set_nu0(&mut self, w: usize, sets: impl IntoIterator<Item = WorldSet>) -> Result<()> {
        self.nu0[w] = Some(self.checked(sets)?);
        Ok(())
    }

    fn checked(&self, sets: impl IntoIterator<Item = WorldSet>) -> Result<BTreeSet<WorldSet>> {
        let full = self.universe.full();
        let sets: BTreeSet<WorldSet> = sets.into_iter().collect();
        if sets.iter().any(|s| !s.is_subset(&full)) {
            return Err(Error::invalid_model("neighbourhood set outside the frame"));
        }
        Ok(sets)
    }

    /// The stored `ν_n(w)` for `1 ≤ n ≤ N`.
    pub fn nu(&self, w: usize, n: Grade) -> &BTreeSet<WorldSet> {
        &self.nu[w][n as usize - 1]
    }

    pub fn nu0_override(&self, w: usize) -> Option<&BTreeSet<WorldSet>> {
        self.nu0[w].as_ref()
    }

    /// Whether `ν_0(w)` is the full powerset.
    pub fn nu0_is_full(&self, w: usize) -> bool {
        match &self.nu0[w] {
            None => true,
            Some(s) => s.len() as u64 == 1u64 << self.universe.len(),
        }
    }
}

impl Frame for NbhdFrame {
    fn universe(&self) -> &Universe {
        &self.universe
    }

    fn diamond(&self, n: Grade, truth: &WorldSet) -> Result<WorldSet> {
        if n > self.max_grade {
            return Err(Error::GradeAboveFrame { grade: n, max: self.max_grade });
        }
        Ok((0..self.universe.len()).filter(|&w| self.contains(w, n, truth)).collect())
    }
}

impl Neighbourhoods for NbhdFrame {
    fn contains(&self, w: usize, n: Grade, x: &WorldSet) -> bool {
        match n {
            0 => self.nu0[w].as_ref().is_none_or(|s| s.contains(x)),
            n if n > self.max_grade => false,
            n => self.nu[w][n as usize - 1].contains(x),
        }
    }

    fn grade_bound(&self) -> Grade {
        self.max_grade
    }

    fn members(&self, w: usize, n: Grade) -> Result<Vec<WorldSet>> {
        Ok(match n {
            0 => match &self.nu0[w] {
                Some(s) => s.iter().cloned().collect(),
                None => all_masks(self.universe.len())?.map(WorldSet::from_mask).collect(),
            },
            n if n > self.max_grade => Vec::new(),
            n => self.nu[w][n as usize - 1].iter().cloned().collect(),
        })
    }

    fn minimal_members(&self, w: usize, n: Grade) -> Result<Vec<WorldSet>> {
        if n == 0 && self.nu0[w].is_none() {
            return Ok(vec![WorldSet::new()]);
        }
        let members = self.members(w, n)?;
        Ok(members.iter().filter(|x| !has_proper_subset_in(x, |y| self.contains(w, n, y))).cloned().collect())
    }

    fn has_member_within(&self, w: usize, n: Grade, bound: &WorldSet) -> bool {
        match n {
            0 => self.nu0[w].as_ref().is_none_or(|s| s.iter().any(|x| x.is_subset(bound))),
            n if n > self.max_grade => false,
            n => self.nu[w][n as usize - 1].iter().any(|x| x.is_subset(bound)),
        }
    }

    fn is_implicit(&self) -> bool {
        false
    }
}

/// Whether some proper subset `Y ⊊ X` satisfies `member`.
fn has_proper_subset_in(x: &WorldSet, member: impl Fn(&WorldSet) -> bool) -> bool {
    let mask = x.to_mask().expect("explicit frames fit a mask");
    let mut sub = mask;
    while sub != 0 {
        sub = (sub - 1) & mask;
        if member(&WorldSet::from_mask(sub)) {
            return true;
        }
    }
    false
}

/// Graded neighbourhood frame given by its cores: `X ∈ ν_n(w) ⟺ |X ∩ A_w| ≥ n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreFrame {
    universe: Universe,
    core: Vec<WorldSet>,
}

impl CoreFrame {
    pub fn new(universe: Universe, core: Vec<WorldSet>) -> Result<Self> {
        let full = universe.full();
        if core.len() != universe.len() || core.iter().any(|a| !a.is_subset(&full)) {
            return Err(Error::invalid_model("core sets do not match the frame"));
        }
        Ok(Self { universe, core })
    }

    /// `A_w`
    pub fn core(&self, w: usize) -> &WorldSet {
        &self.core[w]
    }

    /// Explicit copy with `N` = the largest core size.
    pub fn materialize(&self) -> Result<NbhdFrame> {
        self.materialize_with(self.grade_bound())
    }

    /// Explicit copy storing grades up to `max_grade`, which must cover every core.
    pub fn materialize_with(&self, max_grade: Grade) -> Result<NbhdFrame> {
        if max_grade < self.grade_bound() {
            return Err(Error::InvalidArgument(format!(
                "max_grade {max_grade} is below the largest core size {}",
                self.grade_bound()
            )));
        }
        NbhdFrame::from_fn(self.universe.clone(), max_grade, |w, n, x| self.contains(w, n, x))
    }
}

impl Frame for CoreFrame {
    fn universe(&self) -> &Universe {
        &self.universe
    }

    fn diamond(&self, n: Grade, truth: &WorldSet) -> Result<WorldSet> {
        Ok((0..self.core.len()).filter(|&w| self.contains(w, n, truth)).collect())
    }
}

impl Neighbourhoods for CoreFrame {
    fn contains(&self, w: usize, n: Grade, x: &WorldSet) -> bool {
        self.core[w].intersection_len(x) >= n as usize
    }

    fn grade_bound(&self) -> Grade {
        self.core.iter().map(WorldSet::len).max().unwrap_or(0) as Grade
    }

    fn members(&self, w: usize, n: Grade) -> Result<Vec<WorldSet>> {
        Ok(all_masks(self.universe.len())?.map(WorldSet::from_mask).filter(|x| self.contains(w, n, x)).collect())
    }

    fn minimal_members(&self, w: usize, n: Grade) -> Result<Vec<WorldSet>> {
        Ok(self.core[w].subsets_of_size(n as usize))
    }

    fn has_member_within(&self, w: usize, n: Grade, bound: &WorldSet) -> bool {
        self.contains(w, n, bound)
    }

    fn is_implicit(&self) -> bool {
        true
    }
}

/// Either representation, as read from a model file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyNbhdFrame {
    Explicit(NbhdFrame),
    Core(CoreFrame),
}

impl Frame for AnyNbhdFrame {
    fn universe(&self) -> &Universe {
        match self {
            AnyNbhdFrame::Explicit(f) => f.universe(),
            AnyNbhdFrame::Core(f) => f.universe(),
        }
    }

    fn diamond(&self, n: Grade, truth: &WorldSet) -> Result<WorldSet> {
        match self {
            AnyNbhdFrame::Explicit(f) => f.diamond(n, truth),
            AnyNbhdFrame::Core(f) => f.diamond(n, truth),
        }
    }
}

macro_rules! delegate {
    ($self:ident, $f:ident => $e:expr) => {
        match $self {
            AnyNbhdFrame::Explicit($f) => $e,
            AnyNbhdFrame::Core($f) => $e,
        }
    };
}

impl Neighbourhoods for AnyNbhdFrame {
    fn contains(&self, w: usize, n: Grade, x: &WorldSet) -> bool {
        delegate!(self, f => f.contains(w, n, x))
    }

    fn grade_bound(&self) -> Grade {
        delegate!(self, f => f.grade_bound())
    }

    fn members(&self, w: usize, n: Grade) -> Result<Vec<WorldSet>> {
        delegate!(self, f => f.members(w, n))
    }

    fn minimal_members(&self, w: usize, n: Grade) -> Result<Vec<WorldSet>> {
        delegate!(self, f => f.minimal_members(w, n))
    }

    fn has_member_within(&self, w: usize, n: Grade, bound: &WorldSet) -> bool {
        delegate!(self, f => f.has_member_within(w, n, bound))
    }

    fn is_implicit(&self) -> bool {
        delegate!(self, f => f.is_implicit())
    }
}

/// `F^•`: the core of `w` is `R[w]`.
pub fn bullet(frame: &KripkeFrame) -> CoreFrame {
    let core = (0..frame.universe().len()).map(|w| frame.successors(w).clone()).collect();
    CoreFrame { universe: frame.universe().clone(), core }
}

/// `F_•`: `R[w]` is the core of `w`.
pub fn unbullet(frame: &CoreFrame) -> KripkeFrame {
    KripkeFrame::from_successors(frame.universe.clone(), frame.core.clone()).expect("cores are inside the frame")
}

impl KripkeModel {
    pub fn bullet(&self) -> Model<CoreFrame> {
        Model { frame: bullet(&self.frame), val: self.val.clone() }
    }
}

impl Model<CoreFrame> {
    pub fn unbullet(&self) -> KripkeModel {
        Model { frame: unbullet(&self.frame), val: self.val.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Monotonicity {
    Pass { by_construction: bool },
    Violation { world: String, grade: Grade, member: Vec<String>, missing_superset: Vec<String> },
}

/// Checks that every `ν_n(w)` is closed under supersets.
///
/// It suffices to check one-element extensions: if every member's one-step
/// supersets are members, induction on `|Y ∖ X|` covers all supersets.
pub fn is_monotonic<F: Neighbourhoods + ?Sized>(frame: &F) -> Result<Monotonicity> {
    if frame.is_implicit() {
        return Ok(Monotonicity::Pass { by_construction: true });
    }
    let u = frame.universe();
    for w in 0..u.len() {
        for n in 0..=frame.grade_bound() {
            for x in frame.members(w, n)? {
                for a in u.full().difference(&x).iter() {
                    let mut y = x.clone();
                    y.insert(a);
                    if !frame.contains(w, n, &y) {
                        return Ok(Monotonicity::Violation {
                            world: u.name(w).to_string(),
                            grade: n,
                            member: u.names_of(&x),
                            missing_superset: u.names_of(&y),
                        });
                    }
                }
            }
        }
    }
    Ok(Monotonicity::Pass { by_construction: false })
}

/// Cores by world name.
pub fn named_cores(frame: &CoreFrame) -> BTreeMap<String, Vec<String>> {
    let u = frame.universe();
    (0..u.len()).map(|w| (u.name(w).to_string(), u.names_of(frame.core(w)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn ab() -> Universe {
        Universe::new(["a", "b"]).unwrap()
    }

    #[test]
    fn core_membership() {
        let f = CoreFrame::new(ab(), vec![ab().full(), WorldSet::new()]).unwrap();
        assert!(f.contains(0, 2, &ab().full()));
        assert!(!f.contains(0, 2, &WorldSet::singleton(0)));
        assert!(f.contains(0, 1, &WorldSet::singleton(1)));
        assert!(f.contains(1, 0, &WorldSet::new()));
        assert!(!f.contains(1, 1, &ab().full()));
        assert_eq!(f.minimal_members(0, 1).unwrap().len(), 2);
        assert_eq!(f.grade_bound(), 2);
    }

    #[test]
    fn explicit_grade_errors() {
        let mut f = NbhdFrame::new(Universe::new(["c"]).unwrap(), 2).unwrap();
        f.set_nu(0, 1, [WorldSet::singleton(0)]).unwrap();
        f.set_nu(0, 2, [WorldSet::singleton(0)]).unwrap();
        let m = Model::new(f, [("p".to_string(), WorldSet::singleton(0))].into_iter().collect()).unwrap();
        assert!(m.eval("c", &parse("(dia 2 p)").unwrap()).unwrap());
        assert!(m.eval("c", &parse("(dia 0 p)").unwrap()).unwrap());
        assert!(matches!(m.eval("c", &parse("(dia 3 p)").unwrap()), Err(Error::GradeAboveFrame { grade: 3, max: 2 })));
        assert!(!m.frame.contains(0, 3, &WorldSet::singleton(0)));
    }

    #[test]
    fn explicit_frames_are_capped() {
        assert!(NbhdFrame::new(Universe::numbered(16), 1).is_ok());
        assert!(matches!(NbhdFrame::new(Universe::numbered(17), 1), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn monotonicity() {
        let mut f = NbhdFrame::new(ab(), 1).unwrap();
        f.set_nu(0, 1, [WorldSet::singleton(0)]).unwrap();
        match is_monotonic(&f).unwrap() {
            Monotonicity::Violation { world, grade, missing_superset, .. } => {
                assert_eq!((world.as_str(), grade), ("a", 1));
                assert_eq!(missing_superset, ["a", "b"]);
            }
            other => panic!("{other:?}"),
        }
        f.set_nu(0, 1, [WorldSet::singleton(0), ab().full()]).unwrap();
        assert_eq!(is_monotonic(&f).unwrap(), Monotonicity::Pass { by_construction: false });
        let k = KripkeFrame::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(is_monotonic(&bullet(&k)).unwrap(), Monotonicity::Pass { by_construction: true });
        assert_eq!(
            is_monotonic(&bullet(&k).materialize().unwrap()).unwrap(),
            Monotonicity::Pass { by_construction: false }
        );
    }

    #[test]
    fn nu0_override() {
        let mut f = NbhdFrame::new(ab(), 1).unwrap();
        assert!(f.nu0_is_full(0));
        f.set_nu0(0, [WorldSet::new(), ab().full()]).unwrap();
        assert!(!f.nu0_is_full(0));
        assert!(!f.contains(0, 0, &WorldSet::singleton(1)));
        assert_eq!(f.minimal_members(0, 0).unwrap(), vec![WorldSet::new()]);
        assert_eq!(f.minimal_members(1, 0).unwrap(), vec![WorldSet::new()]);
    }

    #[test]
    fn bullet_round_trip() {
        let k = KripkeFrame::from_names(&["a", "b", "c"], &[("a", "b"), ("a", "c"), ("c", "c")]).unwrap();
        let b = bullet(&k);
        assert_eq!(unbullet(&b), k);
        assert_eq!(bullet(&unbullet(&b)), b);
        let edgeless = KripkeFrame::new(Universe::numbered(2), []).unwrap();
        assert!(bullet(&edgeless).core(0).is_empty());
    }

    #[test]
    fn materialized_agrees() {
        let k = KripkeFrame::from_names(&["a", "b", "c"], &[("a", "b"), ("a", "c"), ("b", "b")]).unwrap();
        let core = bullet(&k);
        let exp = core.materialize().unwrap();
        assert_eq!(exp.max_grade(), 2);
        for w in 0..3 {
            for n in 0..=3 {
                for mask in 0..8 {
                    let x = WorldSet::from_mask(mask);
                    assert_eq!(core.contains(w, n, &x), exp.contains(w, n, &x));
                }
            }
        }
        assert!(core.materialize_with(1).is_err());
    }
}
