//! Semantics-independent evaluation: truth sets, pointed evaluation and frame
//! validity by exhaustive valuation enumeration.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Grade};
use crate::par;
use crate::sets::{Universe, WorldSet};

/// Proposition letter ↦ truth set. Letters without an entry are false everywhere.
pub type Valuation = BTreeMap<String, WorldSet>;

/// A finite frame together with its interpretation of `◇_n`.
pub trait Frame: Sync {
    fn universe(&self) -> &Universe;

    /// `{w : M,w ⊩ ◇_n φ}` given `truth = ⟦φ⟧`.
    fn diamond(&self, n: Grade, truth: &WorldSet) -> Result<WorldSet>;
}

/// Enumeration ceilings shared by the exhaustive checks.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Maximum number of candidates any single enumeration may visit.
    pub budget: u64,
    /// Out-degree ceiling for graded bisimulation witness search.
    pub max_out_degree: usize,
    /// World ceiling for the correspondence-property checkers.
    pub max_correspondence_worlds: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { budget: 1 << 24, max_out_degree: 10, max_correspondence_worlds: 10 }
    }
}

impl Limits {
    pub fn with_budget(budget: u64) -> Self {
        Self { budget, ..Self::default() }
    }
}

/// `⟦f⟧` in the model `(frame, val)`.
pub fn truth_set<F: Frame + ?Sized>(frame: &F, val: &Valuation, f: &Formula) -> Result<WorldSet> {
    Ok(match f {
        Formula::Top => frame.universe().full(),
        Formula::Bot => WorldSet::new(),
        Formula::Atom(p) => val.get(p).cloned().unwrap_or_default(),
        Formula::Not(g) => frame.universe().full().difference(&truth_set(frame, val, g)?),
        Formula::Or(a, b) => truth_set(frame, val, a)?.union(&truth_set(frame, val, b)?),
        Formula::Dia(n, g) => frame.diamond(*n, &truth_set(frame, val, g)?)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model<F> {
    pub frame: F,
    pub val: Valuation,
}

impl<F: Frame> Model<F> {
    /// Fails if a valuation set mentions a world outside the frame.
    pub fn new(frame: F, val: Valuation) -> Result<Self> {
        let full = frame.universe().full();
        if let Some((p, _)) = val.iter().find(|(_, s)| !s.is_subset(&full)) {
            return Err(Error::invalid_model(format!("valuation of `{p}` leaves the frame")));
        }
        Ok(Self { frame, val })
    }

    /// Valuation given by world names.
    pub fn with_named_valuation<S: AsRef<str>>(frame: F, val: &BTreeMap<String, Vec<S>>) -> Result<Self> {
        let u = frame.universe();
        let val = val
            .iter()
            .map(|(p, ws)| Ok((p.clone(), u.set_of(ws.iter().map(AsRef::as_ref))?)))
            .collect::<Result<Valuation>>()?;
        Self::new(frame, val)
    }

    pub fn universe(&self) -> &Universe {
        self.frame.universe()
    }

    pub fn truth_set(&self, f: &Formula) -> Result<WorldSet> {
        truth_set(&self.frame, &self.val, f)
    }

    pub fn eval(&self, world: &str, f: &Formula) -> Result<bool> {
        let w = self.universe().index_of(world)?;
        self.eval_at(w, f)
    }

    pub fn eval_at(&self, w: usize, f: &Formula) -> Result<bool> {
        Ok(self.truth_set(f)?.contains(w))
    }

    /// Truth set of a letter.
    pub fn letter(&self, p: &str) -> WorldSet {
        self.val.get(p).cloned().unwrap_or_default()
    }

    /// Valuation by world names, sorted.
    pub fn named_valuation(&self) -> BTreeMap<String, Vec<String>> {
        self.val.iter().map(|(p, s)| (p.clone(), self.universe().names_of(s))).collect()
    }

    /// Same valuation (re-indexed by world name) over another frame.
    pub fn map_frame<G: Frame>(&self, frame: G) -> Result<Model<G>> {
        Model::with_named_valuation(frame, &self.named_valuation())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Validity {
    Valid,
    Countermodel { world: String, valuation: BTreeMap<String, Vec<String>> },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Checks `F ⊩ f` by enumerating every valuation of the letters of `f`.
///
/// Valuations are indexed so that letter `j` (in sorted order) holds at world
/// `i` iff bit `j·|W| + i` of the index is set; the countermodel reported is
/// the one with the lowest index, at the lowest falsifying world.
pub fn frame_validity<F: Frame + ?Sized>(frame: &F, f: &Formula, limits: &Limits) -> Result<Validity> {
    let u = frame.universe();
    let n = u.len();
    let atoms: Vec<&str> = f.atoms().into_iter().collect();
    let bits = atoms.len() * n;
    if bits >= 63 || (1u64 << bits) > limits.budget {
        return Err(Error::budget(format!("2^{bits} valuations"), limits.budget));
    }
    let full = u.full();
    let world_mask = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let valuation = |index: u64| -> Valuation {
        atoms
            .iter()
            .enumerate()
            .map(|(j, p)| (p.to_string(), WorldSet::from_mask((index >> (j * n)) & world_mask)))
            .collect()
    };
    let hit = par::find_map_first(0..1u64 << bits, |index| {
        let val = valuation(index);
        match truth_set(frame, &val, f) {
            Ok(t) if t == full => None,
            Ok(t) => Some(Ok((val, full.difference(&t).iter().next().expect("nonempty")))),
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        None => Ok(Validity::Valid),
        Some(Err(e)) => Err(e),
        Some(Ok((val, w))) => Ok(Validity::Countermodel {
            world: u.name(w).to_string(),
            valuation: val.iter().map(|(p, s)| (p.clone(), u.names_of(s))).collect(),
        }),
    }
}
