//! Built-in example models.

use crate::graded::{ExtNat, GradedFrame, GradedModel};
use crate::kripke::{KripkeFrame, KripkeModel};
use crate::neighbourhood::{CoreFrame, NbhdFrame, WorldMap};
use crate::semantics::{Frame, Model};
use crate::sets::{Universe, WorldSet};

pub const NAMES: [&str; 4] = ["figure1-kripke", "figure1-graded", "figure1-nbhd", "section6"];

fn letter(u: &Universe, p: &str, worlds: &[&str]) -> crate::Valuation {
    [(p.to_string(), u.set_of(worlds.iter().copied()).expect("declared"))].into()
}

/// `w` with four successors, three of them satisfying `p`.
pub fn figure1_kripke() -> KripkeModel {
    let worlds = ["w", "u1", "u2", "u3", "u4"];
    let edges = [("w", "u1"), ("w", "u2"), ("w", "u3"), ("w", "u4")];
    let frame = KripkeFrame::from_names(&worlds, &edges).expect("fixture");
    let val = letter(frame.universe(), "p", &["u2", "u3", "u4"]);
    Model::new(frame, val).expect("fixture")
}

/// `σ(w, u) = 1`, `σ(w, v) = 3`, `p` true at `v`.
pub fn figure1_graded() -> GradedModel {
    let u = Universe::new(["w", "u", "v"]).expect("fixture");
    let (w, uu, v) = (u.index_of("w").unwrap(), u.index_of("u").unwrap(), u.index_of("v").unwrap());
    let frame = GradedFrame::new(u.clone(), [(w, uu, ExtNat::Fin(1)), (w, v, ExtNat::Fin(3))]).expect("fixture");
    Model::new(frame, letter(&u, "p", &["v"])).expect("fixture")
}

/// The bullet of [`figure1_kripke`].
pub fn figure1_nbhd() -> Model<CoreFrame> {
    figure1_kripke().bullet()
}

/// `F`: worlds `a, b`, both with core `{a, b}`.
pub fn section6_source() -> CoreFrame {
    let u = Universe::new(["a", "b"]).expect("fixture");
    let full = u.full();
    CoreFrame::new(u, vec![full.clone(), full]).expect("fixture")
}

/// `F′`: one world `c` with `ν_0 = {∅, {c}}`, `ν_1 = ν_2 = {{c}}` and
/// `ν_k = ∅` above 2.
pub fn section6_target() -> NbhdFrame {
    let u = Universe::new(["c"]).expect("fixture");
    let mut f = NbhdFrame::new(u, 2).expect("fixture");
    let c = WorldSet::singleton(0);
    f.set_nu0(0, [WorldSet::new(), c.clone()]).expect("fixture");
    f.set_nu(0, 1, [c.clone()]).expect("fixture");
    f.set_nu(0, 2, [c]).expect("fixture");
    f
}

/// `f(a) = f(b) = c`.
pub fn section6_map() -> WorldMap {
    WorldMap::new(vec![0, 0], 1).expect("fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::neighbourhood::{check_stars, is_bounded_morphism, is_graded_frame};

    #[test]
    fn figure1_triple() {
        let (d3, d4) = (parse("(dia 3 p)").unwrap(), parse("(dia 4 p)").unwrap());
        assert!(figure1_kripke().eval("w", &d3).unwrap());
        assert!(!figure1_kripke().eval("w", &d4).unwrap());
        assert!(figure1_graded().eval("w", &d3).unwrap());
        assert!(!figure1_graded().eval("w", &d4).unwrap());
        assert!(figure1_nbhd().eval("w", &d3).unwrap());
        assert!(!figure1_nbhd().eval("w", &d4).unwrap());
    }

    #[test]
    fn section6() {
        assert!(is_graded_frame(&section6_source()).unwrap().is_graded());
        assert!(!is_graded_frame(&section6_target()).unwrap().is_graded());
        assert!(!check_stars(&section6_target()).unwrap().get(5).is_pass());
        let r = is_bounded_morphism(&section6_map(), &section6_source(), &section6_target()).unwrap();
        assert!(r.is_bounded_morphism() && r.surjective);
    }
}
