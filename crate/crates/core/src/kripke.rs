//! Kripke frames with the counting truth clause `|R[w] ∩ ⟦ψ⟧| ≥ n`.

use crate::error::{Error, Result};
use crate::formula::Grade;
use crate::graded::{ExtNat, GradedFrame};
use crate::semantics::{Frame, Model};
use crate::sets::{Universe, WorldSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeFrame {
    universe: Universe,
    succ: Vec<WorldSet>,
}

pub type KripkeModel = Model<KripkeFrame>;

impl KripkeFrame {
    pub fn new(universe: Universe, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = universe.len();
        let mut succ = vec![WorldSet::new(); n];
        for (w, u) in edges {
            if w >= n || u >= n {
                return Err(Error::invalid_model("edge endpoint outside the frame"));
            }
            succ[w].insert(u);
        }
        Ok(Self { universe, succ })
    }

    pub fn from_names<S: AsRef<str>>(worlds: &[S], edges: &[(S, S)]) -> Result<Self> {
        let universe = Universe::new(worlds.iter().map(AsRef::as_ref))?;
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((universe.index_of(a.as_ref())?, universe.index_of(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, edges)
    }

    pub fn from_successors(universe: Universe, succ: Vec<WorldSet>) -> Result<Self> {
        let full = universe.full();
        if succ.len() != universe.len() || succ.iter().any(|s| !s.is_subset(&full)) {
            return Err(Error::invalid_model("successor sets do not match the frame"));
        }
        Ok(Self { universe, succ })
    }

    /// `R[w]`
    pub fn successors(&self, w: usize) -> &WorldSet {
        &self.succ[w]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(w, s)| s.iter().map(move |u| (w, u)))
    }

    pub fn max_out_degree(&self) -> usize {
        self.succ.iter().map(WorldSet::len).max().unwrap_or(0)
    }

    /// `F^∘`: `σ(w,u) = 1` on edges, 0 elsewhere.
    pub fn to_graded(&self) -> GradedFrame {
        GradedFrame::new(self.universe.clone(), self.edges().map(|(w, u)| (w, u, ExtNat::Fin(1))))
            .expect("edges are inside the frame")
    }

    /// The frame with world `i` and its incident edges removed.
    pub fn remove_world(&self, i: usize) -> Self {
        let keep: Vec<usize> = (0..self.universe.len()).filter(|&w| w != i).collect();
        let universe = Universe::new(keep.iter().map(|&w| self.universe.name(w))).expect("distinct names");
        let reindex = |w: usize| if w > i { w - 1 } else { w };
        let succ = keep.iter().map(|&w| self.succ[w].iter().filter(|&u| u != i).map(reindex).collect()).collect();
        Self { universe, succ }
    }
}

impl Frame for KripkeFrame {
    fn universe(&self) -> &Universe {
        &self.universe
    }

    fn diamond(&self, n: Grade, truth: &WorldSet) -> Result<WorldSet> {
        Ok((0..self.succ.len()).filter(|&w| self.succ[w].intersection_len(truth) >= n as usize).collect())
    }
}

impl KripkeModel {
    pub fn to_graded(&self) -> Model<GradedFrame> {
        Model { frame: self.frame.to_graded(), val: self.val.clone() }
    }

    pub fn remove_world(&self, i: usize) -> Self {
        let frame = self.frame.remove_world(i);
        let val = self
            .val
            .iter()
            .map(|(p, s)| (p.clone(), s.iter().filter(|&w| w != i).map(|w| if w > i { w - 1 } else { w }).collect()))
            .collect();
        Model { frame, val }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::{frame_validity, Limits};

    fn figure1() -> KripkeModel {
        let frame = KripkeFrame::from_names(
            &["w", "u1", "u2", "u3", "u4"],
            &[("w", "u1"), ("w", "u2"), ("w", "u3"), ("w", "u4")],
        )
        .unwrap();
        let val = [("p".to_string(), vec!["u2", "u3", "u4"])].into_iter().collect();
        Model::with_named_valuation(frame, &val).unwrap()
    }

    #[test]
    fn figure1_counts() {
        let m = figure1();
        assert!(m.eval("w", &parse("(dia 3 p)").unwrap()).unwrap());
        assert!(!m.eval("w", &parse("(dia 4 p)").unwrap()).unwrap());
        assert!(m.eval("u1", &parse("(dia 0 bot)").unwrap()).unwrap());
        assert_eq!(m.universe().names_of(&m.truth_set(&parse("p").unwrap()).unwrap()), ["u2", "u3", "u4"]);
        assert!(matches!(m.eval("nowhere", &parse("p").unwrap()), Err(Error::UnknownWorld(_))));
        assert!(!m.eval("w", &parse("zzz").unwrap()).unwrap());
    }

    #[test]
    fn truth_set_constants() {
        let m = figure1();
        assert_eq!(m.truth_set(&parse("top").unwrap()).unwrap().len(), 5);
        assert!(m.truth_set(&parse("bot").unwrap()).unwrap().is_empty());
    }

    #[test]
    fn validity() {
        let f = KripkeFrame::from_names(&["a", "b", "c"], &[("a", "b"), ("b", "b"), ("b", "c")]).unwrap();
        let limits = Limits::default();
        assert!(frame_validity(&f, &parse("(imp (dia 2 p) (dia 1 p))").unwrap(), &limits).unwrap().is_valid());
        let v = frame_validity(&f, &parse("(dia 1 top)").unwrap(), &limits).unwrap();
        assert_eq!(v, crate::semantics::Validity::Countermodel { world: "c".into(), valuation: Default::default() });
    }

    #[test]
    fn budget_is_enforced() {
        let f = KripkeFrame::new(Universe::numbered(12), []).unwrap();
        let res = frame_validity(&f, &parse("(or p (or q r))").unwrap(), &Limits::with_budget(1 << 20));
        assert!(matches!(res, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn to_graded_edges() {
        let g = figure1().frame.to_graded();
        let w = g.universe().index_of("w").unwrap();
        for u in ["u1", "u2", "u3", "u4"] {
            assert_eq!(g.sigma(w, g.universe().index_of(u).unwrap()), ExtNat::Fin(1));
        }
        assert_eq!(g.sigma(0, 0), ExtNat::Fin(0));
    }

    #[test]
    fn removing_a_world() {
        let m = figure1();
        let i = m.universe().index_of("u3").unwrap();
        let r = m.remove_world(i);
        assert_eq!(r.universe().len(), 4);
        assert!(r.eval("w", &parse("(dia! 2 p)").unwrap()).unwrap());
    }
}
