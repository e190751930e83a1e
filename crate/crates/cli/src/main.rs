//! `gmlkit`: evaluate, translate and check graded modal models from JSON files.
//!
//! Every run prints one JSON document on standard output. Exit status 0 means
//! an affirmative answer, 1 a negative one or a witness, 2 an input or budget
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gmlkit::bisim::{
    check_graded_bisim, check_monotonic_bisim, check_tuple_bisim, equiv_sample, largest_graded_bisim, SampleOptions,
};
use gmlkit::harness::{self, axiom_suite, AxiomOptions, Semantics};
use gmlkit::io::{self, AnyModel};
use gmlkit::neighbourhood::{
    check_ax5_property, check_ax6_property, check_stars, counterexample_search, is_bounded_morphism, is_graded_frame,
    is_monotonic, AnyNbhdFrame, CoreFrame, Gradedness, Monotonicity, SearchClass, SearchOptions, SearchOutcome,
};
use gmlkit::{fixtures, frame_validity, par, Error, Formula, Limits, Model};
use serde_json::{json, Map, Value};

/// Binds the model inside an [`AnyModel`] and evaluates `body` on it.
macro_rules! any_model {
    ($m:expr, |$x:ident| $body:expr) => {
        match $m {
            AnyModel::Kripke($x) => $body,
            AnyModel::Graded($x) => $body,
            AnyModel::Nbhd($x) => $body,
            AnyModel::NbhdCore($x) => $body,
        }
    };
}

macro_rules! any_pair {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        any_model!($a, |$x| any_model!($b, |$y| $body))
    };
}

const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Parser)]
#[command(name = "gmlkit", version, about = "Graded modal logic over Kripke, graded and neighbourhood models")]
struct Cli {
    /// Enumeration ceiling for exhaustive checks.
    #[arg(long, global = true, env = "GMLKIT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads (1 runs everything sequentially).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Truth of a formula at a world.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        #[arg(long)]
        formula: String,
    },
    /// Convert a model between semantics; prints the new model file.
    Translate {
        #[arg(long, value_enum)]
        from: Kind,
        #[arg(long, value_enum)]
        to: Kind,
        #[arg(long)]
        model: PathBuf,
        /// Copies per world when unravelling a graded model.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Structural checks on frames, maps and relations.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Frame validity: every valuation of the formula's letters, every world.
    Valid {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Axiom instances on random frames of one semantics.
    Axioms {
        #[arg(long, default_value = "graded")]
        semantics: String,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Built-in example models.
    Fixture {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(fixtures::NAMES))]
        name: String,
        /// Write the files here instead of printing them.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized property suite.
    Fuzz {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for minimized witness files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for a neighbourhood model falsifying a formula.
    Search {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Class::Monotonic)]
        class: Class,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        /// Candidates to try.
        #[arg(long, default_value_t = 100_000)]
        candidates: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The largest graded bisimulation between two Kripke models.
    LargestBisim {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Compare two pointed models on random formulas.
    Equiv {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// World of the left model.
        #[arg(long)]
        world: String,
        /// World of the right model.
        #[arg(long)]
        right_world: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        max_grade: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Conditions ★1 to ★6.
    Stars(ModelArg),
    /// Whether every ν_n(w) is ↑P_{≥n}(A) for one core A.
    GradedFrame(ModelArg),
    /// Closure of every ν_n(w) under supersets.
    Monotonic(ModelArg),
    /// The first-order property corresponding to Ax5.
    Ax5Property(ModelArg),
    /// The first-order property corresponding to Ax6.
    Ax6Property(ModelArg),
    /// BM1 and BM2 for a world map.
    Morphism {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Graded bisimulation (Kripke files) or monotonic bisimulation
    /// (neighbourhood files).
    Bisim {
        #[command(flatten)]
        pair: PairArgs,
        /// Check Kripke files as monotonic bisimulations between their bullets.
        #[arg(long, value_enum)]
        semantics: Option<BisimSemantics>,
    },
    /// Graded tuple bisimulation.
    TupleBisim {
        #[command(flatten)]
        pair: PairArgs,
    },
}

#[derive(Args)]
struct ModelArg {
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    #[arg(long)]
    relation: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Kripke,
    Graded,
    /// Either neighbourhood file type.
    Nbhd,
    NbhdCore,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Monotonic,
    Graded,
}

#[derive(Clone, Copy, ValueEnum)]
enum BisimSemantics {
    Graded,
    Monotonic,
}

/// A command's answer: the JSON document and the exit status.
struct Outcome {
    doc: Value,
    code: u8,
}

impl Outcome {
    fn new(affirmative: bool, doc: Value) -> Self {
        Self { doc, code: if affirmative { 0 } else { 1 } }
    }
}

/// Input or budget failure, optionally with a structured payload.
struct Failure {
    message: String,
    detail: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { message: e.to_string(), detail: None }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { message: e.to_string(), detail: None }
    }
}

fn fail<T>(message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure { message: message.into(), detail: None })
}

type Out = Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            let first = e.to_string().lines().next().unwrap_or_default().to_string();
            print!("{}", io::pretty(&json!({"status": "error", "message": first})));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", io::pretty(&out.doc));
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("gmlkit: {}", f.message);
            let mut doc = json!({"status": "error", "message": f.message});
            if let Some(d) = f.detail {
                doc["detail"] = d;
            }
            print!("{}", io::pretty(&doc));
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Out {
    match cli.jobs {
        Some(0) => return fail("--jobs must be at least 1"),
        Some(1) => par::set_parallel(false),
        Some(n) => {
            par::init_threads(n);
        }
        None => {}
    }
    let limits = Limits::with_budget(cli.budget);
    match cli.cmd {
        Cmd::Eval { model, world, formula } => {
            let m = load_model(&model)?;
            let truth = m.eval(&world, &parse(&formula)?)?;
            Ok(Outcome::new(truth, json!({"status": truth.to_string(), "truth": truth})))
        }
        Cmd::Translate { from, to, model, cap } => translate(from, to, &model, cap),
        Cmd::Check(c) => check(c, &limits),
        Cmd::Valid { model, formula } => {
            let f = parse(&formula)?;
            let v = any_model!(&load_model(&model)?, |m| frame_validity(&m.frame, &f, &limits))?;
            Ok(Outcome::new(v.is_valid(), to_value(&v)))
        }
        Cmd::Axioms { semantics, trials, seed } => {
            let sem: Semantics = semantics.parse()?;
            let r = axiom_suite(sem, &AxiomOptions { trials, seed, ..Default::default() }, &limits)?;
            let ok = r.failures.is_empty();
            Ok(Outcome::new(ok, with_status(if ok { "pass" } else { "violation" }, to_value(&r))))
        }
        Cmd::Fixture { name, out } => fixture(&name, out.as_deref()),
        Cmd::Fuzz { suite, iters, seed, out } => fuzz(&suite, iters, seed, out.as_deref(), &limits),
        Cmd::Search { formula, class, max_worlds, candidates, seed } => {
            let class = match class {
                Class::Monotonic => SearchClass::Monotonic,
                Class::Graded => SearchClass::Graded,
            };
            let opts = SearchOptions { max_worlds, budget: candidates, seed };
            match counterexample_search(&parse(&formula)?, class, &opts)? {
                SearchOutcome::Found { model, world, candidate } => {
                    let model = AnyModel::from(model);
                    let doc = json!({
                        "status": "countermodel",
                        "world": world,
                        "candidate": candidate,
                        "model": model_value(&model),
                    });
                    Ok(Outcome::new(false, doc))
                }
                SearchOutcome::NotFound { candidates } => {
                    Ok(Outcome::new(true, json!({"status": "not_found", "candidates": candidates})))
                }
            }
        }
        Cmd::LargestBisim { left, right } => {
            let (m, m2) = (kripke(load_model(&left)?, "left")?, kripke(load_model(&right)?, "right")?);
            let z = largest_graded_bisim(&m, &m2, &limits)?;
            Ok(Outcome::new(true, with_status("pass", io::relation_value(&z, m.universe(), m2.universe()))))
        }
        Cmd::Equiv { left, right, world, right_world, trials, depth, max_grade, seed } => {
            let (a, b) = (load_model(&left)?, load_model(&right)?);
            let w = a.universe().index_of(&world)?;
            let w2 = b.universe().index_of(&right_world)?;
            let opts = SampleOptions { trials, depth, max_grade, seed };
            let e = any_pair!(&a, &b, |m, m2| equiv_sample(m, w, m2, w2, &opts))?;
            Ok(Outcome::new(e.agrees(), to_value(&e)))
        }
    }
}

fn parse(text: &str) -> Result<Formula, Failure> {
    Ok(gmlkit::parse(text)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { message: format!("{}: {e}", path.display()), detail: None })
}

fn load_model(path: &Path) -> Result<AnyModel, Failure> {
    AnyModel::from_json(&read(path)?).map_err(|e| Failure { message: format!("{}: {e}", path.display()), detail: None })
}

fn kripke(m: AnyModel, side: &str) -> Result<gmlkit::KripkeModel, Failure> {
    match m {
        AnyModel::Kripke(m) => Ok(m),
        other => fail(format!("{side} model must be of type kripke, not {}", other.kind())),
    }
}

fn nbhd(m: AnyModel, side: &str) -> Result<Model<AnyNbhdFrame>, Failure> {
    let kind = m.kind();
    m.into_nbhd().ok_or_else(|| Failure {
        message: format!("{side} model must be a neighbourhood model, not {kind}"),
        detail: None,
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn model_value(m: &AnyModel) -> Value {
    serde_json::from_str(&m.to_json()).expect("own output parses")
}

/// `{"status": status, ...fields of v}`, replacing any status `v` carries.
fn with_status(status: &str, v: Value) -> Value {
    let mut out = Map::new();
    out.insert("status".into(), json!(status));
    if let Value::Object(fields) = v {
        out.extend(fields.into_iter().filter(|(k, _)| k != "status"));
    }
    Value::Object(out)
}

fn kind_matches(k: Kind, m: &AnyModel) -> bool {
    matches!(
        (k, m),
        (Kind::Kripke, AnyModel::Kripke(_))
            | (Kind::Graded, AnyModel::Graded(_))
            | (Kind::Nbhd, AnyModel::Nbhd(_) | AnyModel::NbhdCore(_))
            | (Kind::NbhdCore, AnyModel::NbhdCore(_))
    )
}

fn translate(from: Kind, to: Kind, path: &Path, cap: Option<u64>) -> Out {
    let m = load_model(path)?;
    if !kind_matches(from, &m) {
        return fail(format!("--from does not match the model file, which has type {}", m.kind()));
    }
    let out = match (m, to) {
        (AnyModel::Kripke(m), Kind::Graded) => AnyModel::Graded(m.to_graded()),
        (AnyModel::Kripke(m), Kind::Nbhd | Kind::NbhdCore) => AnyModel::NbhdCore(m.bullet()),
        (AnyModel::Graded(m), Kind::Kripke) => {
            let Some(cap) = cap else { return fail("graded to kripke needs --cap") };
            AnyModel::Kripke(m.to_kripke(cap)?)
        }
        (AnyModel::NbhdCore(m), Kind::Kripke) => AnyModel::Kripke(m.unbullet()),
        (AnyModel::Nbhd(m), Kind::Kripke | Kind::NbhdCore) => {
            let cores = match is_graded_frame(&m.frame)? {
                Gradedness::Yes { cores } => cores,
                no => {
                    return Err(Failure {
                        message: "the explicit frame is not a graded neighbourhood frame".into(),
                        detail: Some(to_value(&no)),
                    })
                }
            };
            let u = m.universe().clone();
            let cores = cores.values().map(|a| u.set_of(a)).collect::<Result<Vec<_>, _>>()?;
            let core = m.map_frame(CoreFrame::new(u, cores)?)?;
            if to == Kind::Kripke {
                AnyModel::Kripke(core.unbullet())
            } else {
                AnyModel::NbhdCore(core)
            }
        }
        (AnyModel::NbhdCore(m), Kind::Nbhd) => AnyModel::Nbhd(m.map_frame(m.frame.materialize()?)?),
        (m, to) => {
            let to = to.to_possible_value().expect("named").get_name().to_string();
            return fail(format!("no translation from {} to {to}", m.kind()));
        }
    };
    Ok(Outcome { doc: model_value(&out), code: 0 })
}

fn check(c: CheckCmd, limits: &Limits) -> Out {
    match c {
        CheckCmd::Stars(a) => {
            let m = nbhd(load_model(&a.model)?, "the")?;
            let r = check_stars(&m.frame)?;
            let status = if r.all_pass() { "pass" } else { "violation" };
            let failed: Vec<u8> = r.checks.iter().filter(|c| !c.outcome.is_pass()).map(|c| c.star).collect();
            let mut doc = with_status(status, to_value(&r));
            doc["failed"] = json!(failed);
            Ok(Outcome::new(r.all_pass(), doc))
        }
        CheckCmd::GradedFrame(a) => {
            let m = nbhd(load_model(&a.model)?, "the")?;
            let g = is_graded_frame(&m.frame)?;
            let ok = g.is_graded();
            Ok(Outcome::new(ok, with_status(if ok { "pass" } else { "violation" }, to_value(&g))))
        }
        CheckCmd::Monotonic(a) => {
            let m = nbhd(load_model(&a.model)?, "the")?;
            let v = is_monotonic(&m.frame)?;
            Ok(Outcome::new(matches!(v, Monotonicity::Pass { .. }), to_value(&v)))
        }
        CheckCmd::Ax5Property(a) => {
            let m = nbhd(load_model(&a.model)?, "the")?;
            let v = check_ax5_property(&m.frame, limits)?;
            Ok(Outcome::new(v.passes(), to_value(&v)))
        }
        CheckCmd::Ax6Property(a) => {
            let m = nbhd(load_model(&a.model)?, "the")?;
            let v = check_ax6_property(&m.frame, limits)?;
            Ok(Outcome::new(v.passes(), to_value(&v)))
        }
        CheckCmd::Morphism { left, right, map } => {
            let (src, dst) = (nbhd(load_model(&left)?, "left")?, nbhd(load_model(&right)?, "right")?);
            let f = io::map_from_json(&read(&map)?, src.universe(), dst.universe())?;
            let r = is_bounded_morphism(&f, &src.frame, &dst.frame)?;
            let ok = r.is_bounded_morphism();
            let mut doc = json!({"status": if ok { "pass" } else { "violation" }, "surjective": r.surjective});
            if let Some(v) = &r.violation {
                doc["violation"] = to_value(v);
            }
            Ok(Outcome::new(ok, doc))
        }
        CheckCmd::Bisim { pair, semantics } => {
            let (a, b) = (load_model(&pair.left)?, load_model(&pair.right)?);
            let z = io::relation_from_json(&read(&pair.relation)?, a.universe(), b.universe())?;
            let v = match (a, b, semantics) {
                (AnyModel::Kripke(m), AnyModel::Kripke(m2), Some(BisimSemantics::Monotonic)) => {
                    check_monotonic_bisim(&z, &m.bullet(), &m2.bullet())?
                }
                (AnyModel::Kripke(m), AnyModel::Kripke(m2), _) => check_graded_bisim(&z, &m, &m2, limits)?,
                (a, b, Some(BisimSemantics::Graded)) => {
                    return fail(format!("graded bisimulation needs kripke models, not {} and {}", a.kind(), b.kind()))
                }
                (a, b, _) => check_monotonic_bisim(&z, &nbhd(a, "left")?, &nbhd(b, "right")?)?,
            };
            Ok(Outcome::new(v.passes(), to_value(&v)))
        }
        CheckCmd::TupleBisim { pair } => {
            let (m, m2) = (kripke(load_model(&pair.left)?, "left")?, kripke(load_model(&pair.right)?, "right")?);
            let t = io::tuple_from_json(&read(&pair.relation)?, m.universe(), m2.universe())?;
            let v = check_tuple_bisim(&t, &m, &m2)?;
            Ok(Outcome::new(v.passes(), to_value(&v)))
        }
    }
}

fn fixture(name: &str, out: Option<&Path>) -> Out {
    let files: Vec<(String, String)> = match name {
        "figure1-kripke" => vec![(format!("{name}.json"), AnyModel::Kripke(fixtures::figure1_kripke()).to_json())],
        "figure1-graded" => vec![(format!("{name}.json"), AnyModel::Graded(fixtures::figure1_graded()).to_json())],
        "figure1-nbhd" => vec![(format!("{name}.json"), AnyModel::NbhdCore(fixtures::figure1_nbhd()).to_json())],
        "section6" => {
            let src = Model { frame: fixtures::section6_source(), val: Default::default() };
            let dst = Model { frame: fixtures::section6_target(), val: Default::default() };
            let map = io::map_to_json(&fixtures::section6_map(), src.universe(), dst.universe());
            vec![
                ("section6-F.json".into(), AnyModel::NbhdCore(src).to_json()),
                ("section6-F-prime.json".into(), AnyModel::Nbhd(dst).to_json()),
                ("section6-f.json".into(), map),
            ]
        }
        _ => return fail(format!("unknown fixture `{name}`")),
    };
    match out {
        None if files.len() == 1 => {
            let doc = serde_json::from_str(&files[0].1).expect("own output parses");
            Ok(Outcome { doc, code: 0 })
        }
        None => {
            let mut doc = Map::new();
            for (file, text) in &files {
                doc.insert(file.clone(), serde_json::from_str(text).expect("own output parses"));
            }
            Ok(Outcome { doc: Value::Object(doc), code: 0 })
        }
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let mut written = Vec::new();
            for (file, text) in &files {
                let path = dir.join(file);
                fs::write(&path, text)?;
                written.push(path.display().to_string());
            }
            Ok(Outcome::new(true, json!({"status": "pass", "files": written})))
        }
    }
}

fn fuzz(suite: &str, iters: u64, seed: u64, out: Option<&Path>, limits: &Limits) -> Out {
    let report = harness::run_suite(suite, iters, seed, limits)?;
    let ok = report.passes();
    let mut doc = with_status(if ok { "pass" } else { "violation" }, to_value(&report));
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for f in &report.failures {
            for (k, w) in f.witness.iter().enumerate() {
                let path = dir.join(format!("{suite}-{}-model{k}.json", f.iteration));
                fs::write(&path, io::pretty(w))?;
                written.push(path.display().to_string());
            }
        }
        doc["files"] = json!(written);
    }
    Ok(Outcome::new(ok, doc))
}
