use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

const SEPARATION: &str = "(imp (and (dia 2 p) (dia 2 (not p))) (or (dia 2 q) (dia 2 (not q))))";

fn gmlkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmlkit")).args(args).env_remove("GMLKIT_BUDGET").output().unwrap()
}

/// Parsed stdout and exit code.
fn run(args: &[&str]) -> (Value, i32) {
    let out = gmlkit(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: not one JSON document ({e}): {text}"));
    (doc, out.status.code().unwrap())
}

fn fixtures() -> TempDir {
    let dir = TempDir::new().unwrap();
    for name in ["figure1-kripke", "figure1-graded", "figure1-nbhd", "section6"] {
        let (_, code) = run(&["fixture", name, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    dir
}

fn p(dir: &TempDir, file: &str) -> String {
    dir.path().join(file).display().to_string()
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

#[test]
fn figure1_triple_under_each_semantics() {
    let d = fixtures();
    for file in ["figure1-kripke.json", "figure1-graded.json", "figure1-nbhd.json"] {
        let m = p(&d, file);
        let (doc, code) = run(&["eval", "--model", &m, "--world", "w", "--formula", "(dia 3 p)"]);
        assert_eq!((doc, code), (json!({"status": "true", "truth": true}), 0), "{file}");
        let (doc, code) = run(&["eval", "--model", &m, "--world", "w", "--formula", "(dia 4 p)"]);
        assert_eq!((doc, code), (json!({"status": "false", "truth": false}), 1), "{file}");
    }
}

#[test]
fn bullet_of_figure1_has_the_successor_core() {
    let d = fixtures();
    let (doc, code) = run(&["translate", "--from", "kripke", "--to", "nbhd", "--model", &p(&d, "figure1-kripke.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["type"], "nbhd-core");
    assert_eq!(doc["core"]["w"], json!(["u1", "u2", "u3", "u4"]));
}

#[test]
fn unbullet_then_bullet_is_byte_identical() {
    let d = fixtures();
    let k = gmlkit(&["translate", "--from", "nbhd-core", "--to", "kripke", "--model", &p(&d, "figure1-nbhd.json")]);
    assert!(k.status.success());
    std::fs::write(d.path().join("k.json"), &k.stdout).unwrap();
    let n = gmlkit(&["translate", "--from", "kripke", "--to", "nbhd", "--model", &p(&d, "k.json")]);
    assert!(n.status.success());
    assert_eq!(n.stdout, std::fs::read(d.path().join("figure1-nbhd.json")).unwrap());
}

#[test]
fn truncation_gives_root_copy_four_successors() {
    let d = fixtures();
    let (doc, code) = run(&[
        "translate",
        "--from",
        "graded",
        "--to",
        "kripke",
        "--cap",
        "3",
        "--model",
        &p(&d, "figure1-graded.json"),
    ]);
    assert_eq!(code, 0);
    let out = doc["rel"].as_array().unwrap().iter().filter(|e| e[0] == "w#0").count();
    assert_eq!(out, 4);
    let (_, code) = run(&["translate", "--from", "graded", "--to", "kripke", "--model", &p(&d, "figure1-graded.json")]);
    assert_eq!(code, 2);
}

#[test]
fn section6_verdicts() {
    let d = fixtures();
    let (doc, code) = run(&["check", "graded-frame", "--model", &p(&d, "section6-F.json")]);
    assert_eq!((doc["status"].clone(), code), (json!("pass"), 0));

    let (doc, code) = run(&["check", "stars", "--model", &p(&d, "section6-F-prime.json")]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "violation");
    assert_eq!(doc["failed"], json!([5]));
    let star5 = doc["checks"].as_array().unwrap().iter().find(|c| c["star"] == 5).unwrap();
    assert_eq!(star5["grade"], 2);

    let (doc, code) = run(&[
        "check",
        "morphism",
        "--left",
        &p(&d, "section6-F.json"),
        "--right",
        &p(&d, "section6-F-prime.json"),
        "--map",
        &p(&d, "section6-f.json"),
    ]);
    assert_eq!((doc, code), (json!({"status": "pass", "surjective": true}), 0));
}

#[test]
fn unbullet_of_non_graded_frame_carries_the_witness() {
    let d = fixtures();
    let (doc, code) =
        run(&["translate", "--from", "nbhd", "--to", "kripke", "--model", &p(&d, "section6-F-prime.json")]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "error");
    assert_eq!(doc["detail"]["world"], "c");
}

#[test]
fn grade_above_the_stored_bound_is_an_error() {
    let d = fixtures();
    let (doc, code) =
        run(&["eval", "--model", &p(&d, "section6-F-prime.json"), "--world", "c", "--formula", "(dia 3 p)"]);
    assert_eq!((doc["status"].clone(), code), (json!("error"), 2));
}

#[test]
fn bisim_checks() {
    let d = fixtures();
    let m = p(&d, "figure1-kripke.json");
    let pairs: Vec<Value> = ["w", "u1", "u2", "u3", "u4"].iter().map(|x| json!([x, x])).collect();
    let id = write(d.path(), "id.json", &json!({ "pairs": pairs }));
    let id = id.to_str().unwrap();
    for extra in [&[][..], &["--semantics", "monotonic"][..]] {
        let mut args = vec!["check", "bisim", "--left", &m, "--right", &m, "--relation", id];
        args.extend_from_slice(extra);
        assert_eq!(run(&args), (json!({"status": "pass"}), 0));
    }
    let bad = write(d.path(), "bad.json", &json!({"pairs": [["w", "w"], ["u1", "u2"]]}));
    let (doc, code) = run(&["check", "bisim", "--left", &m, "--right", &m, "--relation", bad.to_str().unwrap()]);
    assert_eq!((doc["status"].clone(), code), (json!("violation"), 1));

    let (doc, code) = run(&["largest-bisim", "--left", &m, "--right", &m]);
    assert_eq!(code, 0);
    // u2, u3, u4 are interchangeable, u1 only matches itself
    assert_eq!(doc["pairs"].as_array().unwrap().len(), 1 + 1 + 9);
}

#[test]
fn tuple_bisim_identity_passes() {
    let d = TempDir::new().unwrap();
    let m = write(
        d.path(),
        "m.json",
        &json!({"type": "kripke", "worlds": ["a", "b"], "rel": [["a", "b"]], "val": {"p": ["b"]}}),
    );
    let m = m.to_str().unwrap();
    let t = write(d.path(), "t.json", &json!({"family": [{"grade": 1, "pairs": [[["a"], ["a"]], [["b"], ["b"]]]}]}));
    let (doc, code) = run(&["check", "tuple-bisim", "--left", m, "--right", m, "--relation", t.to_str().unwrap()]);
    assert_eq!((doc, code), (json!({"status": "pass"}), 0));
}

#[test]
fn validity_verdicts() {
    let d = fixtures();
    let m = p(&d, "figure1-kripke.json");
    assert_eq!(
        run(&["valid", "--model", &m, "--formula", "(imp (dia 2 p) (dia 1 p))"]),
        (json!({"status": "valid"}), 0)
    );
    let (doc, code) = run(&["valid", "--model", &m, "--formula", "(imp (dia 1 p) (dia 2 p))"]);
    assert_eq!((doc["status"].clone(), code), (json!("countermodel"), 1));
}

#[test]
fn axioms_sound_on_graded_and_core_frames() {
    for sem in ["graded", "nbhd-core"] {
        let (doc, code) = run(&["axioms", "--semantics", sem, "--trials", "200", "--seed", "1"]);
        assert_eq!(code, 0, "{sem}");
        assert_eq!(doc["failures"], json!([]));
        assert_eq!(doc["instances_checked"], 200 * 35);
    }
}

#[test]
fn fuzz_suites_at_full_size() {
    for (suite, iters) in [("truth-preservation", "500"), ("star-equiv", "1000"), ("bisim-conversions", "300")] {
        let (doc, code) = run(&["fuzz", "--suite", suite, "--iters", iters, "--seed", "0"]);
        assert_eq!((doc["status"].clone(), code), (json!("pass"), 0), "{suite}");
    }
}

#[test]
fn separation_countermodel_is_found() {
    let (doc, code) = run(&["search", "--formula", SEPARATION]);
    assert_eq!((doc["status"].clone(), code), (json!("countermodel"), 1));
    assert!(doc["model"]["worlds"].as_array().unwrap().len() <= 4);

    let d = TempDir::new().unwrap();
    let m = write(d.path(), "cm.json", &doc["model"]);
    let w = doc["world"].as_str().unwrap();
    let (doc, code) = run(&["eval", "--model", m.to_str().unwrap(), "--world", w, "--formula", SEPARATION]);
    assert_eq!((doc["truth"].clone(), code), (json!(false), 1));
}

#[test]
fn equivalence_sampling() {
    let d = fixtures();
    let (k, n) = (p(&d, "figure1-kripke.json"), p(&d, "figure1-nbhd.json"));
    let (doc, code) = run(&["equiv", "--left", &k, "--right", &n, "--world", "w", "--right-world", "w"]);
    assert_eq!((doc["status"].clone(), code), (json!("agree"), 0));
    let (doc, code) = run(&["equiv", "--left", &k, "--right", &k, "--world", "w", "--right-world", "u1"]);
    assert_eq!((doc["status"].clone(), code), (json!("distinguished"), 1));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    for args in [
        &["fixture", "section6"][..],
        &["fuzz", "--suite", "graded-clause", "--iters", "50", "--seed", "9"][..],
        &["axioms", "--semantics", "nbhd", "--trials", "20", "--seed", "3"][..],
    ] {
        let a = gmlkit(args);
        assert_eq!(a.stdout, gmlkit(args).stdout, "{args:?}");
        let mut seq = vec!["--jobs", "1"];
        seq.extend_from_slice(args);
        assert_eq!(a.stdout, gmlkit(&seq).stdout, "{args:?} sequential");
    }
}

#[test]
fn budget_flag_and_env() {
    let d = fixtures();
    let m = p(&d, "figure1-kripke.json");
    let (doc, code) = run(&["--budget", "2", "valid", "--model", &m, "--formula", "(dia 1 p)"]);
    assert_eq!((doc["status"].clone(), code), (json!("error"), 2));
    let out = Command::new(env!("CARGO_BIN_EXE_gmlkit"))
        .args(["largest-bisim", "--left", &m, "--right", &m])
        .env("GMLKIT_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_input_exits_2_with_json() {
    let d = TempDir::new().unwrap();
    let junk = write(d.path(), "junk.json", &json!({"type": "kripke", "worlds": ["a"], "rel": [["a", "zz"]]}));
    for args in [
        vec!["eval", "--model", junk.to_str().unwrap(), "--world", "a", "--formula", "p"],
        vec!["eval", "--model", "/nonexistent.json", "--world", "a", "--formula", "p"],
        vec!["no-such-command"],
        vec!["fuzz", "--suite", "no-such-suite"],
        vec!["eval", "--model", junk.to_str().unwrap(), "--world", "a", "--formula", "(dia p"],
    ] {
        let (doc, code) = run(&args);
        assert_eq!((doc["status"].clone(), code), (json!("error"), 2), "{args:?}");
    }
}

#[test]
fn fuzz_failure_would_write_witness_files() {
    let d = TempDir::new().unwrap();
    let (doc, code) = run(&["fuzz", "--suite", "truncation", "--iters", "20", "--out", d.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["files"], json!([]));
}
