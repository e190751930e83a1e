//! Formulas of graded modal logic.
//!
//! The AST keeps only the primitive connectives `¬`, `∨`, `◇_n` plus the
//! constants `⊤`/`⊥`. Everything else (`∧`, `→`, `↔`, `□_n`, `◇_{!n}`) is
//! desugared by the smart constructors, so every semantics only ever has to
//! interpret six node kinds.

mod parse;
mod random;
mod schema;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{is_atom_name, parse, parse_with, ParseOptions};
pub use random::{random_formula, random_formula_with};
pub use schema::{Axiom, Schema};

/// Grades are machine naturals; `ω` never occurs in formulas.
pub type Grade = u32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Atom(String),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `◇_n φ`: at least `n` successors satisfy `φ`.
    Dia(Grade, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn dia(n: Grade, f: Formula) -> Self {
        Formula::Dia(n, Box::new(f))
    }

    /// `a ∧ b := ¬(¬a ∨ ¬b)`
    pub fn and(a: Formula, b: Formula) -> Self {
        Self::not(Self::or(Self::not(a), Self::not(b)))
    }

    /// `a → b := ¬a ∨ b`
    pub fn imp(a: Formula, b: Formula) -> Self {
        Self::or(Self::not(a), b)
    }

    /// `a ↔ b := (a → b) ∧ (b → a)`
    pub fn iff(a: Formula, b: Formula) -> Self {
        Self::and(Self::imp(a.clone(), b.clone()), Self::imp(b, a))
    }

    /// `□_n φ := ¬◇_n ¬φ`
    pub fn boxed(n: Grade, f: Formula) -> Self {
        Self::not(Self::dia(n, Self::not(f)))
    }

    /// `◇_{!n} φ := ◇_n φ ∧ ¬◇_{n+1} φ`
    ///
    /// Panics if `n + 1` overflows; the parser reports that case as an error.
    pub fn dia_exact(n: Grade, f: Formula) -> Self {
        let next = n.checked_add(1).expect("grade overflow in dia!");
        Self::and(Self::dia(n, f.clone()), Self::not(Self::dia(next, f)))
    }

    /// Number of connectives (`¬`, `∨`, `◇_n` nodes).
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Dia(_, f) => 1 + f.complexity(),
            Formula::Or(a, b) => 1 + a.complexity() + b.complexity(),
        }
    }

    /// Largest grade of any `◇_n` subterm, 0 if there is none.
    pub fn max_grade(&self) -> Grade {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(f) => f.max_grade(),
            Formula::Dia(n, f) => (*n).max(f.max_grade()),
            Formula::Or(a, b) => a.max_grade().max(b.max_grade()),
        }
    }

    /// Height of the AST; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Dia(_, f) => 1 + f.depth(),
            Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Proposition letters occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(p) => {
                out.insert(p.as_str());
            }
            Formula::Not(f) | Formula::Dia(_, f) => f.collect_atoms(out),
            Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Replaces every `◇_n` by `◇_{g(n)}`.
    pub fn map_grades(&self, g: &impl Fn(Grade) -> Grade) -> Formula {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Self::not(f.map_grades(g)),
            Formula::Dia(n, f) => Self::dia(g(*n), f.map_grades(g)),
            Formula::Or(a, b) => Self::or(a.map_grades(g), b.map_grades(g)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("top"),
            Formula::Bot => f.write_str("bot"),
            Formula::Atom(p) => f.write_str(p),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Dia(n, a) => write!(f, "(dia {n} {a})"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        parse(s)
    }
}
