//! JSON files for models, world maps, relations and tuple families.
//!
//! Output is canonical: worlds, edges and sets appear in sorted order and
//! every file ends in a newline, so equal values print to equal bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bisim::{BisimRelation, NamedLevel, TupleBisim};
use crate::error::{Error, Result};
use crate::formula::{Formula, Grade};
use crate::graded::{ExtNat, GradedFrame, GradedModel};
use crate::kripke::{KripkeFrame, KripkeModel};
use crate::neighbourhood::{AnyNbhdFrame, CoreFrame, NbhdFrame, WorldMap};
use crate::semantics::Model;
use crate::sets::{Universe, WorldSet};

type NamedVal = BTreeMap<String, Vec<String>>;

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum ModelFile {
    Kripke {
        worlds: Vec<String>,
        rel: Vec<(String, String)>,
        #[serde(default)]
        val: NamedVal,
    },
    Graded {
        worlds: Vec<String>,
        sigma: Vec<(String, String, ExtNat)>,
        #[serde(default)]
        val: NamedVal,
    },
    Nbhd {
        worlds: Vec<String>,
        max_grade: Grade,
        #[serde(default)]
        nu: Vec<NuEntry>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        nu0: Vec<Nu0Entry>,
        #[serde(default)]
        val: NamedVal,
    },
    NbhdCore {
        worlds: Vec<String>,
        core: BTreeMap<String, Vec<String>>,
        #[serde(default)]
        val: NamedVal,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NuEntry {
    world: String,
    grade: Grade,
    sets: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Nu0Entry {
    world: String,
    sets: Vec<Vec<String>>,
}

/// A model of any of the four file types.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyModel {
    Kripke(KripkeModel),
    Graded(GradedModel),
    Nbhd(Model<NbhdFrame>),
    NbhdCore(Model<CoreFrame>),
}

impl AnyModel {
    /// The file's `type` field.
    pub fn kind(&self) -> &'static str {
        match self {
            AnyModel::Kripke(_) => "kripke",
            AnyModel::Graded(_) => "graded",
            AnyModel::Nbhd(_) => "nbhd",
            AnyModel::NbhdCore(_) => "nbhd-core",
        }
    }

    pub fn universe(&self) -> &Universe {
        match self {
            AnyModel::Kripke(m) => m.universe(),
            AnyModel::Graded(m) => m.universe(),
            AnyModel::Nbhd(m) => m.universe(),
            AnyModel::NbhdCore(m) => m.universe(),
        }
    }

    /// Truth at a world under the semantics matching the model type.
    pub fn eval(&self, world: &str, f: &Formula) -> Result<bool> {
        match self {
            AnyModel::Kripke(m) => m.eval(world, f),
            AnyModel::Graded(m) => m.eval(world, f),
            AnyModel::Nbhd(m) => m.eval(world, f),
            AnyModel::NbhdCore(m) => m.eval(world, f),
        }
    }

    /// The neighbourhood model, for either neighbourhood file type.
    pub fn into_nbhd(self) -> Option<Model<AnyNbhdFrame>> {
        match self {
            AnyModel::Nbhd(m) => Some(Model { frame: AnyNbhdFrame::Explicit(m.frame), val: m.val }),
            AnyModel::NbhdCore(m) => Some(Model { frame: AnyNbhdFrame::Core(m.frame), val: m.val }),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.into_model()
    }

    pub fn to_json(&self) -> String {
        let file = match self {
            AnyModel::Kripke(m) => kripke_file(m),
            AnyModel::Graded(m) => graded_file(m),
            AnyModel::Nbhd(m) => nbhd_file(m),
            AnyModel::NbhdCore(m) => core_file(m),
        };
        pretty(&file)
    }
}

impl From<Model<AnyNbhdFrame>> for AnyModel {
    fn from(m: Model<AnyNbhdFrame>) -> Self {
        match m.frame {
            AnyNbhdFrame::Explicit(f) => AnyModel::Nbhd(Model { frame: f, val: m.val }),
            AnyNbhdFrame::Core(f) => AnyModel::NbhdCore(Model { frame: f, val: m.val }),
        }
    }
}

/// Pretty JSON followed by a newline.
pub fn pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn universe_of(worlds: &[String]) -> Result<Universe> {
    Universe::new(worlds.iter().cloned())
}

impl ModelFile {
    fn into_model(self) -> Result<AnyModel> {
        Ok(match self {
            ModelFile::Kripke { worlds, rel, val } => {
                let u = universe_of(&worlds)?;
                let edges =
                    rel.iter().map(|(a, b)| Ok((u.index_of(a)?, u.index_of(b)?))).collect::<Result<Vec<_>>>()?;
                AnyModel::Kripke(Model::with_named_valuation(KripkeFrame::new(u, edges)?, &val)?)
            }
            ModelFile::Graded { worlds, sigma, val } => {
                let u = universe_of(&worlds)?;
                let entries = sigma
                    .iter()
                    .map(|(a, b, k)| Ok((u.index_of(a)?, u.index_of(b)?, *k)))
                    .collect::<Result<Vec<_>>>()?;
                AnyModel::Graded(Model::with_named_valuation(GradedFrame::new(u, entries)?, &val)?)
            }
            ModelFile::Nbhd { worlds, max_grade, nu, nu0, val } => {
                let u = universe_of(&worlds)?;
                let mut frame = NbhdFrame::new(u.clone(), max_grade)?;
                let sets = |sets: &[Vec<String>]| sets.iter().map(|s| u.set_of(s)).collect::<Result<Vec<WorldSet>>>();
                let mut seen = BTreeSet::new();
                for e in &nu {
                    let w = u.index_of(&e.world)?;
                    if !seen.insert((w, e.grade)) {
                        return Err(Error::invalid_model(format!("ν_{}({}) given twice", e.grade, e.world)));
                    }
                    frame.set_nu(w, e.grade, sets(&e.sets)?)?;
                }
                let mut seen = BTreeSet::new();
                for e in &nu0 {
                    let w = u.index_of(&e.world)?;
                    if !seen.insert(w) {
                        return Err(Error::invalid_model(format!("ν_0({}) given twice", e.world)));
                    }
                    frame.set_nu0(w, sets(&e.sets)?)?;
                }
                AnyModel::Nbhd(Model::with_named_valuation(frame, &val)?)
            }
            ModelFile::NbhdCore { worlds, core, val } => {
                let u = universe_of(&worlds)?;
                let mut cores = vec![WorldSet::new(); u.len()];
                for (w, a) in &core {
                    cores[u.index_of(w)?] = u.set_of(a)?;
                }
                AnyModel::NbhdCore(Model::with_named_valuation(CoreFrame::new(u, cores)?, &val)?)
            }
        })
    }
}

fn kripke_file(m: &KripkeModel) -> ModelFile {
    let u = m.universe();
    ModelFile::Kripke {
        worlds: u.names().to_vec(),
        rel: m.frame.edges().map(|(a, b)| (u.name(a).to_string(), u.name(b).to_string())).collect(),
        val: m.named_valuation(),
    }
}

fn graded_file(m: &GradedModel) -> ModelFile {
    let u = m.universe();
    ModelFile::Graded {
        worlds: u.names().to_vec(),
        sigma: m.frame.entries().map(|(a, b, k)| (u.name(a).to_string(), u.name(b).to_string(), k)).collect(),
        val: m.named_valuation(),
    }
}

fn nbhd_file(m: &Model<NbhdFrame>) -> ModelFile {
    let u = m.universe();
    let names = |sets: &BTreeSet<WorldSet>| sets.iter().map(|s| u.names_of(s)).collect::<Vec<_>>();
    let mut nu = Vec::new();
    let mut nu0 = Vec::new();
    for w in 0..u.len() {
        for n in 1..=m.frame.max_grade() {
            let sets = m.frame.nu(w, n);
            if !sets.is_empty() {
                nu.push(NuEntry { world: u.name(w).to_string(), grade: n, sets: names(sets) });
            }
        }
        if let Some(sets) = m.frame.nu0_override(w) {
            nu0.push(Nu0Entry { world: u.name(w).to_string(), sets: names(sets) });
        }
    }
    ModelFile::Nbhd { worlds: u.names().to_vec(), max_grade: m.frame.max_grade(), nu, nu0, val: m.named_valuation() }
}

fn core_file(m: &Model<CoreFrame>) -> ModelFile {
    ModelFile::NbhdCore {
        worlds: m.universe().names().to_vec(),
        core: crate::neighbourhood::named_cores(&m.frame),
        val: m.named_valuation(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    map: BTreeMap<String, String>,
}

pub fn map_from_json(text: &str, src: &Universe, dst: &Universe) -> Result<WorldMap> {
    let file: MapFile = serde_json::from_str(text)?;
    WorldMap::from_names(src, dst, &file.map)
}

pub fn map_to_json(f: &WorldMap, src: &Universe, dst: &Universe) -> String {
    pretty(&MapFile { map: f.to_names(src, dst) })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationFile {
    pairs: Vec<(String, String)>,
}

pub fn relation_from_json(text: &str, left: &Universe, right: &Universe) -> Result<BisimRelation> {
    let file: RelationFile = serde_json::from_str(text)?;
    BisimRelation::from_names(left, right, &file.pairs)
}

pub fn relation_to_json(z: &BisimRelation, left: &Universe, right: &Universe) -> String {
    pretty(&RelationFile { pairs: z.to_names(left, right) })
}

/// Relation as a JSON value, for embedding in reports.
pub fn relation_value(z: &BisimRelation, left: &Universe, right: &Universe) -> serde_json::Value {
    serde_json::to_value(RelationFile { pairs: z.to_names(left, right) }).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleFile {
    family: Vec<TupleLevel>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleLevel {
    grade: usize,
    pairs: Vec<(Vec<String>, Vec<String>)>,
}

pub fn tuple_from_json(text: &str, left: &Universe, right: &Universe) -> Result<TupleBisim> {
    let file: TupleFile = serde_json::from_str(text)?;
    let levels: Vec<NamedLevel<String>> = file.family.into_iter().map(|l| (l.grade, l.pairs)).collect();
    TupleBisim::from_names(left, right, &levels)
}

pub fn tuple_to_json(t: &TupleBisim, left: &Universe, right: &Universe) -> String {
    let family = t.to_names(left, right).into_iter().map(|(grade, pairs)| TupleLevel { grade, pairs }).collect();
    pretty(&TupleFile { family })
}
