//! Graded frames `σ: W×W → ℕ∪{ω}` and the truncated translation back to
//! Kripke frames.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::Grade;
use crate::kripke::{KripkeFrame, KripkeModel};
use crate::semantics::{Frame, Model};
use crate::sets::{Universe, WorldSet};

/// `ℕ ∪ {ω}` with saturating addition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u64),
    Omega,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    /// `min(self, cap)` as a machine number.
    pub fn truncate(self, cap: u64) -> u64 {
        match self {
            ExtNat::Fin(k) => k.min(cap),
            ExtNat::Omega => cap,
        }
    }

    pub fn at_least(self, n: Grade) -> bool {
        self >= ExtNat::Fin(u64::from(n))
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.checked_add(b).map_or(ExtNat::Omega, ExtNat::Fin),
            _ => ExtNat::Omega,
        }
    }
}

impl PartialEq<u64> for ExtNat {
    fn eq(&self, other: &u64) -> bool {
        *self == ExtNat::Fin(*other)
    }
}

impl PartialOrd<u64> for ExtNat {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(self.cmp(&ExtNat::Fin(*other)))
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(k) => write!(f, "{k}"),
            ExtNat::Omega => f.write_str("omega"),
        }
    }
}

impl fmt::Debug for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(k) => s.serialize_u64(*k),
            ExtNat::Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(k) => Ok(ExtNat::Fin(u64::from(k))),
            Raw::Word(w) if w == "omega" => Ok(ExtNat::Omega),
            Raw::Word(w) => {
                Err(serde::de::Error::custom(format!("expected a natural below 2^32 or \"omega\", got `{w}`")))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFrame {
    universe: Universe,
    sigma: Vec<BTreeMap<usize, ExtNat>>,
}

pub type GradedModel = Model<GradedFrame>;

impl GradedFrame {
    /// Zero entries are dropped; a repeated pair is an error.
    pub fn new(universe: Universe, entries: impl IntoIterator<Item = (usize, usize, ExtNat)>) -> Result<Self> {
        let n = universe.len();
        let mut sigma = vec![BTreeMap::new(); n];
        let mut seen = std::collections::BTreeSet::new();
        for (w, u, k) in entries {
            if w >= n || u >= n {
                return Err(Error::invalid_model("sigma entry outside the frame"));
            }
            if !seen.insert((w, u)) {
                return Err(Error::invalid_model(format!(
                    "sigma({}, {}) given twice",
                    universe.name(w),
                    universe.name(u)
                )));
            }
            if !k.is_zero() {
                sigma[w].insert(u, k);
            }
        }
        Ok(Self { universe, sigma })
    }

    pub fn sigma(&self, w: usize, u: usize) -> ExtNat {
        self.sigma[w].get(&u).copied().unwrap_or(ExtNat::ZERO)
    }

    /// `σ(w,X) = Σ_{u∈X} σ(w,u)`
    pub fn sigma_mass(&self, w: usize, x: &WorldSet) -> ExtNat {
        self.sigma[w].iter().filter(|(u, _)| x.contains(**u)).fold(ExtNat::ZERO, |acc, (_, &k)| acc + k)
    }

    /// Nonzero entries `(w, u, σ(w,u))` in index order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, ExtNat)> + '_ {
        self.sigma.iter().enumerate().flat_map(|(w, row)| row.iter().map(move |(&u, &k)| (w, u, k)))
    }

    /// `{u : σ(w,u) > 0}`
    pub fn support(&self, w: usize) -> WorldSet {
        self.sigma[w].keys().copied().collect()
    }

    /// Truncated `F_∘`: copies `(w,i)` for `i ∈ 0..=cap`, named [`copy_name`],
    /// with `(w,i) → (u,j)` iff `min(σ(w,u), cap) ≥ j ≥ 1`.
    pub fn to_kripke(&self, cap: u64) -> Result<KripkeFrame> {
        let (universe, index) = self.copies(cap)?;
        let mut edges = Vec::new();
        for (w, u, k) in self.entries() {
            let reach = k.truncate(cap);
            for i in 0..=cap {
                for j in 1..=reach {
                    edges.push((index(w, i), index(u, j)));
                }
            }
        }
        KripkeFrame::new(universe, edges)
    }

    /// Universe of copies and the index of `(w, i)` in it.
    fn copies(&self, cap: u64) -> Result<(Universe, impl Fn(usize, u64) -> usize + '_)> {
        if cap == 0 {
            return Err(Error::InvalidArgument("truncation cap must be at least 1".into()));
        }
        let count = (self.universe.len() as u64).saturating_mul(cap + 1);
        if count > 1 << 20 {
            return Err(Error::budget(format!("{count} world copies"), 1 << 20));
        }
        let universe =
            Universe::new(self.universe.names().iter().flat_map(|w| (0..=cap).map(move |i| copy_name(w, i))))?;
        let lookup = universe.clone();
        let index = move |w: usize, i: u64| lookup.get(&copy_name(self.universe.name(w), i)).expect("copy exists");
        Ok((universe, index))
    }
}

/// Name of the copy `(w, i)` in a truncated Kripke translation.
pub fn copy_name(world: &str, i: u64) -> String {
    format!("{world}#{i}")
}

impl Frame for GradedFrame {
    fn universe(&self) -> &Universe {
        &self.universe
    }

    fn diamond(&self, n: Grade, truth: &WorldSet) -> Result<WorldSet> {
        Ok((0..self.sigma.len()).filter(|&w| self.sigma_mass(w, truth).at_least(n)).collect())
    }
}

impl GradedModel {
    /// Truncated `F_∘` with the lifted valuation: `(w,i) ⊩ p` iff `w ⊩ p`.
    pub fn to_kripke(&self, cap: u64) -> Result<KripkeModel> {
        let frame = self.frame.to_kripke(cap)?;
        let u = &self.frame.universe;
        let copies = frame.universe();
        let val = self
            .val
            .iter()
            .map(|(p, s)| {
                let lifted = s
                    .iter()
                    .flat_map(|w| (0..=cap).map(move |i| copies.get(&copy_name(u.name(w), i)).expect("copy")))
                    .collect();
                (p.clone(), lifted)
            })
            .collect();
        Ok(Model { frame, val })
    }
}
