use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{parse_with, Formula, Grade, ParseOptions};
use crate::error::{Error, Result};

/// A formula over metavariables (atoms spelled `?name`) together with a
/// substitution for them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    body: Formula,
    bindings: BTreeMap<String, Formula>,
}

impl Schema {
    pub fn new(body: Formula) -> Self {
        Self { body, bindings: BTreeMap::new() }
    }

    /// Parses a schema body; `?name` atoms are metavariables.
    pub fn parse(text: &str) -> Result<Self> {
        let opts = ParseOptions { metavariables: true, ..Default::default() };
        Ok(Self::new(parse_with(text, &opts)?))
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    /// Metavariable names, without the leading `?`.
    pub fn metavariables(&self) -> BTreeSet<&str> {
        self.body.atoms().into_iter().filter_map(|a| a.strip_prefix('?')).collect()
    }

    /// Binds metavariable `name` (with or without the `?`).
    pub fn bind(mut self, name: &str, f: Formula) -> Self {
        self.bindings.insert(name.trim_start_matches('?').to_string(), f);
        self
    }

    /// Uniform substitution of every metavariable occurrence.
    pub fn instantiate(&self) -> Result<Formula> {
        substitute(&self.body, &self.bindings)
    }
}

fn substitute(f: &Formula, bindings: &BTreeMap<String, Formula>) -> Result<Formula> {
    Ok(match f {
        Formula::Atom(a) => match a.strip_prefix('?') {
            Some(var) => bindings.get(var).cloned().ok_or_else(|| Error::UnboundMetavariable(var.to_string()))?,
            None => f.clone(),
        },
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Not(g) => Formula::not(substitute(g, bindings)?),
        Formula::Dia(n, g) => Formula::dia(*n, substitute(g, bindings)?),
        Formula::Or(a, b) => Formula::or(substitute(a, bindings)?, substitute(b, bindings)?),
    })
}

/// The axiom schemas of minimal graded modal logic, the additivity axiom of
/// its monotonic presentation, and the single-grade separation formula.
/// Metavariables are `?phi` and `?psi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `◇_0 φ ↔ ⊤`
    Ax2,
    /// `◇_n ⊥ ↔ ⊥`, `n > 0`
    Ax3 { n: Grade },
    /// `◇_{n+1} φ → ◇_n φ`
    Ax4 { n: Grade },
    /// `□(φ → ψ) → (◇_n φ → ◇_n ψ)`
    Ax5 { n: Grade },
    /// `¬◇(φ ∧ ψ) ∧ ◇_{!m} φ ∧ ◇_{!n} ψ → ◇_{!(m+n)}(φ ∨ ψ)`
    Ax6 { m: Grade, n: Grade },
    /// `◇(φ ∨ ψ) ↔ ◇φ ∨ ◇ψ`
    Ax7,
    /// `(◇_n φ ∧ ◇_n ¬φ) → (◇_n ψ ∨ ◇_n ¬ψ)`
    Separation { n: Grade },
}

impl Axiom {
    pub fn name(&self) -> &'static str {
        match self {
            Axiom::Ax2 => "Ax2",
            Axiom::Ax3 { .. } => "Ax3",
            Axiom::Ax4 { .. } => "Ax4",
            Axiom::Ax5 { .. } => "Ax5",
            Axiom::Ax6 { .. } => "Ax6",
            Axiom::Ax7 => "Ax7",
            Axiom::Separation { .. } => "Separation",
        }
    }

    pub fn schema(&self) -> Schema {
        let text = match *self {
            Axiom::Ax2 => "(iff (dia 0 ?phi) top)".to_string(),
            Axiom::Ax3 { n } => format!("(iff (dia {n} bot) bot)"),
            Axiom::Ax4 { n } => format!("(imp (dia {} ?phi) (dia {n} ?phi))", n + 1),
            Axiom::Ax5 { n } => {
                format!("(imp (box 1 (imp ?phi ?psi)) (imp (dia {n} ?phi) (dia {n} ?psi)))")
            }
            Axiom::Ax6 { m, n } => format!(
                "(imp (and (not (dia 1 (and ?phi ?psi))) (and (dia! {m} ?phi) (dia! {n} ?psi))) \
                 (dia! {} (or ?phi ?psi)))",
                m + n
            ),
            Axiom::Ax7 => "(iff (dia 1 (or ?phi ?psi)) (or (dia 1 ?phi) (dia 1 ?psi)))".to_string(),
            Axiom::Separation { n } => {
                format!("(imp (and (dia {n} ?phi) (dia {n} (not ?phi))) (or (dia {n} ?psi) (dia {n} (not ?psi))))")
            }
        };
        Schema::parse(&text).expect("axiom schemas are well formed")
    }

    /// Instantiates `?phi` and `?psi` (unused bindings are ignored).
    pub fn instance(&self, phi: Formula, psi: Formula) -> Formula {
        self.schema().bind("phi", phi).bind("psi", psi).instantiate().expect("axiom schemas only use ?phi and ?psi")
    }

    /// Largest grade occurring in an instance (with grade-free arguments).
    pub fn max_grade(&self) -> Grade {
        self.schema().body().max_grade()
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Ax2 | Axiom::Ax7 => f.write_str(self.name()),
            Axiom::Ax3 { n } | Axiom::Ax4 { n } | Axiom::Ax5 { n } | Axiom::Separation { n } => {
                write!(f, "{}[n={n}]", self.name())
            }
            Axiom::Ax6 { m, n } => write!(f, "Ax6[m={m},n={n}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn ax4_instance() {
        let f = Axiom::Ax4 { n: 1 }.instance(Formula::atom("p"), Formula::Top);
        assert_eq!(f, parse("(imp (dia 2 p) (dia 1 p))").unwrap());
    }

    #[test]
    fn ax7_instance() {
        let f = Axiom::Ax7.instance(Formula::atom("p"), Formula::atom("q"));
        assert_eq!(f, parse("(iff (dia 1 (or p q)) (or (dia 1 p) (dia 1 q)))").unwrap());
    }

    #[test]
    fn identity_on_closed_formula() {
        let f = parse("(or p (dia 2 (not q)))").unwrap();
        assert_eq!(Schema::new(f.clone()).instantiate().unwrap(), f);
    }

    #[test]
    fn unbound_metavariable() {
        let s = Schema::parse("(or ?phi ?psi)").unwrap().bind("?phi", Formula::Top);
        assert!(matches!(s.instantiate(), Err(Error::UnboundMetavariable(v)) if v == "psi"));
        assert_eq!(s.metavariables().into_iter().collect::<Vec<_>>(), vec!["phi", "psi"]);
    }

    #[test]
    fn substitution_is_uniform() {
        let s = Schema::parse("(and ?phi (dia 2 ?phi))").unwrap().bind("phi", parse("(or p q)").unwrap());
        assert_eq!(s.instantiate().unwrap(), parse("(and (or p q) (dia 2 (or p q)))").unwrap());
    }

    #[test]
    fn ax6_grades() {
        let ax = Axiom::Ax6 { m: 1, n: 2 };
        assert_eq!(ax.max_grade(), 4);
        assert_eq!(ax.to_string(), "Ax6[m=1,n=2]");
    }
}
