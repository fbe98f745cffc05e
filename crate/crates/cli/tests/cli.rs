//! The binary end to end: exit codes, report files, replay.

use std::path::{Path, PathBuf};
use std::process::Command;

use finitopos_cli::report::{Report, SCHEMA};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_finitopos"));
    c.env_remove("FINITOPOS_BUDGET");
    c
}

fn specs(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn status(args: &[&str]) -> i32 {
    let out = bin().args(args).output().unwrap();
    out.status.code().expect("exited normally")
}

fn schema_valid(path: &Path) -> Report {
    let text = std::fs::read_to_string(path).unwrap();
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let instance: Value = serde_json::from_str(&text).unwrap();
    if let Err(errors) = compiled.validate(&instance) {
        let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!("{} is not schema-valid: {msgs:?}", path.display());
    }
    Report::from_json(&text).unwrap()
}

#[test]
fn expectation_drives_the_exit_code() {
    // the 3-chain reflection is semi-left-exact, so expecting failure fails
    assert_eq!(status(&["check", "sle", "--fixture", "lattice-3-2", "--expect", "fail"]), 1);
    assert_eq!(status(&["check", "sle", "--fixture", "lattice-3-2"]), 0);
    assert_eq!(status(&["check", "lcc", "--fixture", "m3"]), 1);
    assert_eq!(status(&["check", "lcc", "--fixture", "m3", "--expect", "fail"]), 0);
}

#[test]
fn missing_pullbacks_are_inconclusive() {
    assert_eq!(status(&["check", "stable-units", "--fixture", "delta1"]), 3);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(status(&["check", "nonsense"]), 2);
    assert_eq!(status(&["check", "sle"]), 2);
    assert_eq!(status(&["check", "sle", "--fixture", "no-such"]), 2);
    let bad = scratch("bad.cat");
    std::fs::write(&bad, "functor L : C2 -> C1 { }").unwrap();
    let out = bin().args(["validate", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1:13: unresolved identifier: unknown category `C2`"), "{err}");
}

#[test]
fn budget_exhaustion_exits_3() {
    assert_eq!(status(&["search", "sle-failure", "--budget", "10"]), 3);
    let out = bin()
        .args(["search", "sle-failure"])
        .env("FINITOPOS_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn search_then_replay() {
    let w = scratch("w.json");
    let ws = w.to_str().unwrap();
    assert_eq!(status(&["search", "sle-failure", "--max-vertices", "4", "--out", ws]), 0);
    let report = schema_valid(&w);
    assert_eq!(report.witness.as_ref().map(|w| w.kind()), Some("graph-square"));
    let again = scratch("w-replayed.json");
    assert_eq!(status(&["replay", ws, "--out", again.to_str().unwrap()]), 0);
    let replayed = schema_valid(&again);
    assert_eq!(replayed.verdict.outcome, report.verdict.outcome);
    assert_eq!(replayed.digest, report.digest);
}

#[test]
fn tampered_reports_do_not_replay() {
    let w = scratch("pi.json");
    assert_eq!(status(&["search", "pi-witness", "--max-preorder", "3", "--out", w.to_str().unwrap()]), 0);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    // a map into the discrete preorder cannot send the two points apart
    v["witness"]["g"] = serde_json::json!([0, 1]);
    let bad = scratch("pi-bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(status(&["replay", bad.to_str().unwrap()]), 1);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    v["verdict"]["property"] = Value::String("something-else".into());
    std::fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(status(&["replay", bad.to_str().unwrap()]), 1);
}

#[test]
fn kan_reports_carriers() {
    let k = scratch("lan.json");
    let args = [
        "kan",
        "lan",
        "--functor",
        &specs("components.fun"),
        "--presheaf",
        &specs("path-and-point.psh"),
        "--out",
        k.to_str().unwrap(),
    ];
    assert_eq!(status(&args), 0);
    let r = schema_valid(&k);
    let result = r.result.expect("a computed presheaf");
    // two connected components
    assert_eq!(result.carriers["p"].len(), 2);
    assert!(finitopos_cli::dsl::load(&result.text).is_ok());
    assert_eq!(status(&["replay", k.to_str().unwrap()]), 0);
}

#[test]
fn spec_files_validate() {
    let files = ["graph.cat", "lattice.cat", "components.fun", "path-and-point.psh", "slices.psh"].map(specs);
    let mut args = vec!["validate".to_string()];
    args.extend(files);
    let out = bin().args(&args).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn broken_reflections_fail_validation() {
    let text = std::fs::read_to_string(specs("lattice.cat")).unwrap();
    // sending n1 down while the unit still points up breaks the universal property
    let broken = text.replace("n1 -> hi", "n1 -> lo").replace("right: Include;", "right: Include;\n  unit: n1 -> b;");
    let f = scratch("broken.cat");
    std::fs::write(&f, broken).unwrap();
    let out = scratch("broken.json");
    assert_eq!(status(&["validate", f.to_str().unwrap(), "--out", out.to_str().unwrap()]), 1);
    let r = schema_valid(&out);
    assert_eq!(r.witness.as_ref().map(|w| w.kind()), Some("adjunction"));
    assert_eq!(status(&["replay", out.to_str().unwrap()]), 0);
}

#[test]
fn dependent_products_and_exponentials_run() {
    let slices = specs("slices.psh");
    let out = bin()
        .args(["pi", "--along", &format!("{slices}@f"), "--map", &format!("{slices}@g")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // one section of g over the single edge
    let text = String::from_utf8_lossy(&out.stdout);
    let start = text.find("presheaf").unwrap();
    let doc = finitopos_cli::dsl::load(&text[text[..start].find("category").unwrap()..]).unwrap();
    let x = doc.presheaf("Result").unwrap();
    assert_eq!(x.sizes(), vec![1, 1]);
    assert_eq!(
        status(&["exp", "--presheaf", &format!("{slices}@X"), "--exponent", &format!("{slices}@Y")]),
        0
    );
    assert_eq!(status(&["pi", "--along", &slices, "--map", &format!("{slices}@g")]), 2);
}
