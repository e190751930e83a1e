//! Bounded morphisms between neighbourhood frames.

use std::collections::BTreeMap;

use serde::Serialize;

use super::Neighbourhoods;
use crate::error::{Error, Result};
use crate::formula::Grade;
use crate::sets::{Universe, WorldSet};

/// A total function between the worlds of two frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldMap {
    image: Vec<usize>,
    target_len: usize,
}

impl WorldMap {
    pub fn new(image: Vec<usize>, target_len: usize) -> Result<Self> {
        if image.iter().any(|&v| v >= target_len) {
            return Err(Error::invalid_model("map target outside the frame"));
        }
        Ok(Self { image, target_len })
    }

    /// From world names; every source world must be mapped.
    pub fn from_names(src: &Universe, dst: &Universe, map: &BTreeMap<String, String>) -> Result<Self> {
        for k in map.keys() {
            src.index_of(k)?;
        }
        let image = src
            .names()
            .iter()
            .map(|w| {
                let v = map.get(w).ok_or_else(|| Error::invalid_model(format!("map is undefined at `{w}`")))?;
                dst.index_of(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(image, dst.len())
    }

    pub fn to_names(&self, src: &Universe, dst: &Universe) -> BTreeMap<String, String> {
        self.image.iter().enumerate().map(|(w, &v)| (src.name(w).to_string(), dst.name(v).to_string())).collect()
    }

    pub fn apply(&self, w: usize) -> usize {
        self.image[w]
    }

    /// `f[X]`
    pub fn image_of(&self, x: &WorldSet) -> WorldSet {
        x.iter().map(|w| self.image[w]).collect()
    }

    /// `f⁻¹[X′]`
    pub fn preimage_of(&self, x: &WorldSet) -> WorldSet {
        (0..self.image.len()).filter(|&w| x.contains(self.image[w])).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let hit: WorldSet = self.image.iter().copied().collect();
        hit.len() == self.target_len
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BmCondition {
    #[serde(rename = "BM1")]
    Bm1,
    #[serde(rename = "BM2")]
    Bm2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismViolation {
    pub condition: BmCondition,
    pub world: String,
    pub grade: Grade,
    /// `X ∈ ν_n(w)` for BM1, `X′ ∈ ν′_n(f(w))` for BM2.
    pub set: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub surjective: bool,
    pub violation: Option<MorphismViolation>,
}

impl MorphismReport {
    pub fn is_bounded_morphism(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks BM1_n and BM2_n for every world and every grade up to the larger of
/// the two frames' bounds (both sides read `ν_n = ∅` above their own bound).
///
/// BM1_n: `X ∈ ν_n(w) ⇒ f[X] ∈ ν′_n(f(w))`.
/// BM2_n: `X′ ∈ ν′_n(f(w)) ⇒ ∃X ∈ ν_n(w). f[X] ⊆ X′`, i.e. some member of
/// `ν_n(w)` lies inside `f⁻¹[X′]`.
pub fn is_bounded_morphism<S, D>(f: &WorldMap, src: &S, dst: &D) -> Result<MorphismReport>
where
    S: Neighbourhoods + ?Sized,
    D: Neighbourhoods + ?Sized,
{
    let (su, du) = (src.universe(), dst.universe());
    if f.image.len() != su.len() || f.target_len != du.len() {
        return Err(Error::InvalidArgument("map does not match the frames".into()));
    }
    let top = src.grade_bound().max(dst.grade_bound());
    let violation = |condition, w: usize, grade, set: &WorldSet, u: &Universe| MorphismViolation {
        condition,
        world: su.name(w).to_string(),
        grade,
        set: u.names_of(set),
    };
    let mut found = None;
    'outer: for w in 0..su.len() {
        let fw = f.apply(w);
        for n in 0..=top {
            for x in src.members(w, n)? {
                if !dst.contains(fw, n, &f.image_of(&x)) {
                    found = Some(violation(BmCondition::Bm1, w, n, &x, su));
                    break 'outer;
                }
            }
            for x in dst.members(fw, n)? {
                if !src.has_member_within(w, n, &f.preimage_of(&x)) {
                    found = Some(violation(BmCondition::Bm2, w, n, &x, du));
                    break 'outer;
                }
            }
        }
    }
    Ok(MorphismReport { surjective: f.is_surjective(), violation: found })
}
