//! Graded modal logic under Kripke, graded and neighbourhood semantics.
//!
//! Formulas are evaluated through the [`Frame`] trait, which every frame
//! representation implements by interpreting `◇_n` on truth sets. On top of
//! that sit the translations between the semantics, the `★` characterization
//! of graded neighbourhood frames, bounded morphisms and three notions of
//! bisimulation.

pub mod bisim;
pub mod error;
pub mod fixtures;
pub mod formula;
pub mod gen;
pub mod graded;
pub mod harness;
pub mod io;
pub mod kripke;
pub mod neighbourhood;
pub mod par;
pub mod semantics;
pub mod sets;

pub use error::{Error, Result};
pub use formula::{parse, Formula, Grade};
pub use graded::{ExtNat, GradedFrame, GradedModel};
pub use io::AnyModel;
pub use kripke::{KripkeFrame, KripkeModel};
pub use semantics::{frame_validity, Frame, Limits, Model, Validity, Valuation};
pub use sets::{Universe, WorldSet};
