use std::path::{Path, PathBuf};
use std::process::Command;

use panache_cli::{execute_command, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use serde_json::{json, Value};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Copies a fixture into a fresh directory so recorded reports do not touch the original.
fn scratch(name: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(name);
    std::fs::copy(fixtures().join(name), &path).unwrap();
    (dir, path)
}

fn run(args: &[&str]) -> (i32, String) {
    execute_command(std::iter::once("panache").chain(args.iter().copied()))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("output is not JSON ({e}): {out}"));
    (code, v)
}

fn in_ws(ws: &Path, args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--workspace", ws.to_str().unwrap()];
    all.extend_from_slice(args);
    run_json(&all)
}

#[test]
fn u_of_kummer_fixture() {
    let (_d, ws) = scratch("kummer.json");
    let (code, v) = in_ws(&ws, &["u", "kummer"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v, json!({ "dim_u": 1, "large": true }));
}

#[test]
fn axioms_on_three_weights() {
    let (_d, ws) = scratch("three_weights.json");
    let (code, v) = in_ws(&ws, &["axioms", "m", "--p", "-1", "--q", "-2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["ia2"], json!(true));
    assert_eq!(v["J1"], json!([-1, -3]));
    assert_eq!(v["J2"], json!([-2]));
}

#[test]
fn axioms_above_p_use_primed_keys() {
    let (_d, ws) = scratch("three_weights.json");
    let (_, v) = in_ws(&ws, &["axioms", "m", "--p", "-1", "--q", "0"]);
    assert_eq!(v["primed"], json!(true));
    for k in ["J1'", "J2'", "J3'", "ia1'", "ia2'"] {
        assert!(v.get(k).is_some(), "missing {k} in {v}");
    }
}

#[test]
fn classify_rejects_n_equal_2k() {
    let (code, v) = run_json(&["classify-mt", "--n", "4", "--k", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v, json!({ "case": "Rejected", "reason": "n = 2k" }));
}

#[test]
fn classify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (code, v) = run_json(&["classify-mt", "--n", "8", "--k", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["case"], json!("II"));
    assert_eq!(v["attached"], json!("unique"));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let (code, text) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(text.contains("Usage"), "{text}");
}

#[test]
fn missing_object_is_usage_error() {
    let (_d, ws) = scratch("kummer.json");
    let (code, v) = in_ws(&ws, &["u", "nope"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(v["error"].as_str().unwrap().contains("nope"));
}

#[test]
fn validate_reports_invalid_workspace_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let ws = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixtures().join("kummer.json")).unwrap().replacen("\"1/1\"", "\"1/0\"", 1);
    std::fs::write(&ws, text).unwrap();
    let (code, v) = in_ws(&ws, &["validate"]);
    assert_eq!(code, EXIT_VIOLATION);
    assert_eq!(v["valid"], json!(false));
    assert!(v["error"].as_str().unwrap().contains("ext_classes.kummer_class.cocycle.x0[0]"), "{v}");
}

#[test]
fn validate_accepts_every_fixture() {
    let mut files = vec![fixtures().join("kummer.json"), fixtures().join("three_weights.json"), fixtures().join("rank_two_pairs.json")];
    for e in std::fs::read_dir(fixtures().join("corpus")).unwrap() {
        files.push(e.unwrap().path());
    }
    for f in files {
        let (code, v) = run_json(&["--no-record", "--workspace", f.to_str().unwrap(), "validate"]);
        assert_eq!(code, EXIT_OK, "{}: {v}", f.display());
    }
}

#[test]
fn reports_are_recorded_and_deterministic() {
    let (_d, ws) = scratch("three_weights.json");
    for _ in 0..2 {
        let (code, _) = in_ws(&ws, &["--seed", "3", "theorem1", "m"]);
        assert_eq!(code, EXIT_OK);
    }
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&ws).unwrap()).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    let strip = |r: &Value| {
        let mut r = r.clone();
        r.as_object_mut().unwrap().remove("timestamp");
        r
    };
    assert_eq!(strip(&reports[0]), strip(&reports[1]));
    assert_eq!(reports[0]["seed"], json!(3));
}

#[test]
fn no_record_leaves_workspace_untouched() {
    let (_d, ws) = scratch("kummer.json");
    let before = std::fs::read_to_string(&ws).unwrap();
    in_ws(&ws, &["--no-record", "u", "kummer"]);
    assert_eq!(before, std::fs::read_to_string(&ws).unwrap());
}

#[test]
fn origination_of_kummer_class() {
    let (_d, ws) = scratch("kummer.json");
    let (_, yes) = in_ws(&ws, &["originates", "kummer_class", "--from", "kummer"]);
    assert_eq!(yes["originates"], json!(true));
    let (_, no) = in_ws(&ws, &["originates", "kummer_class", "--from", "unit"]);
    assert_eq!(no["originates"], json!(false));
    let c = &no["certificate"];
    assert!(c["combination"].is_array() && c["rhs"].is_array(), "{no}");
}

#[test]
fn blend_obstructed_and_compatible_fixture_pairs() {
    let (_d, ws) = scratch("rank_two_pairs.json");
    let (code, v) = in_ws(&ws, &["blend", "obstructed"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["outcome"], json!("obstructed"));
    assert_eq!(v["yoneda_vanishes"], json!(false));
    let (code, v) = in_ws(&ws, &["blend", "compatible", "--save-as", "blended"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["outcome"], json!("blended"));
    assert_eq!(v["dim"], json!(3));
    assert_eq!(v["graded_pieces"], json!(["yes", "yes", "yes"]));
    let (code, u) = in_ws(&ws, &["u", "blended"]);
    assert_eq!(code, EXIT_OK);
    assert!(u["dim_u"].as_u64().unwrap() >= 1);
}

#[test]
fn equivalence_of_fixture_pairs() {
    let (_d, ws) = scratch("rank_two_pairs.json");
    let (_, v) = in_ws(&ws, &["equiv", "compatible", "compatible_rescaled"]);
    assert_eq!(v["verdict"], json!("equivalent"));
    assert_eq!(v["g_a"], json!([["2/1"]]));
    let (_, v) = in_ws(&ws, &["equiv", "compatible", "independent"]);
    assert_eq!(v["verdict"], json!("not_equivalent"));
}

#[test]
fn theorem_reports_on_three_weights() {
    let (_d, ws) = scratch("three_weights.json");
    let (code, t1) = in_ws(&ws, &["theorem1", "m"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(t1["total_mod_u"]["split"], json!(true));
    for s in t1["samples_avoiding_u"].as_array().unwrap() {
        assert_eq!(s["split"], json!(false));
    }
    let (code, t2) = in_ws(&ws, &["theorem2", "m", "--p", "-1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(t2["split"], json!(true));
    let (code, t2p) = in_ws(&ws, &["theorem2", "m", "--p", "-1", "--q", "0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(t2p["originates"], json!(true));
}

#[test]
fn theorem3_on_kummer() {
    let (_d, ws) = scratch("kummer.json");
    let (code, v) = in_ws(&ws, &["theorem3", "kummer", "--p", "-2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["consistent"], json!(true));
    assert_eq!(v["conclusion_large"], json!(true));
}

#[test]
fn ext_quotients() {
    let (_d, ws) = scratch("three_weights.json");
    let (_, plain) = in_ws(&ws, &["ext", "m", "--p", "-1"]);
    assert_eq!(plain["split"], json!(false));
    assert!(plain["certificate"]["combination"].is_array());
    let (_, up) = in_ws(&ws, &["ext", "m", "--p", "-1", "--quotient-by", "up"]);
    assert_eq!(up["split"], json!(true));
    let (_, u) = in_ws(&ws, &["ext", "m", "--p", "-1", "--quotient-by", "u"]);
    assert_eq!(u["split"], json!(true));
    let (_, a) = in_ws(&ws, &["ext", "m", "--p", "-1", "--quotient-by", "[[\"1\", \"0\"], [\"0\", \"1\"]]"]);
    assert_eq!(a["quotient_dim"], json!(2));
    assert_eq!(a["split"], json!(true));
    let (code, _) = in_ws(&ws, &["ext", "m", "--p", "-1", "--quotient-by", "[[\"1\"]]"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn search_reports_certificates_and_saves_instances() {
    let dir = tempfile::tempdir().unwrap();
    let save = dir.path().join("found.json");
    let (code, v) = run_json(&["search-counterexample", "--pattern", "0,-2,-4", "--seeds", "0..60", "--save", save.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["found"], json!(true));
    assert_eq!(v["theorem_violation"], json!(false));
    let n = v["instances"].as_array().unwrap().len();
    let (code, saved) = run_json(&["--no-record", "--workspace", save.to_str().unwrap(), "validate"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(saved["objects"], json!(n));
}

#[test]
fn search_over_ia3_pattern_finds_nothing() {
    let (code, v) = run_json(&["search-counterexample", "--pattern", "0,-2,-6", "--degrees", "1,2,3", "--seeds", "0..80", "--workers", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["found"], json!(false));
    assert_eq!(v["log"]["ia3_instances"], json!(80));
}

#[test]
fn search_rejects_odd_weights() {
    let (code, _) = run_json(&["search-counterexample", "--pattern", "0,-3"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn corpus_run_is_worker_independent() {
    let (code, one) = run_json(&["--seed", "11", "corpus", "run", "--suite", "up-kernel", "--count", "12"]);
    assert_eq!(code, EXIT_OK);
    let (_, four) = run_json(&["--seed", "11", "corpus", "run", "--suite", "up-kernel", "--count", "12", "--workers", "4"]);
    assert_eq!(one, four);
    assert_eq!(one["instances"], json!(12));
    assert_eq!(one["failing_seeds"], json!([]));
}

#[test]
fn corpus_unknown_suite_is_usage_error() {
    let (code, v) = run_json(&["corpus", "run", "--suite", "nope"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(v["error"].as_str().unwrap().contains("total-split"));
}

#[test]
fn corpus_generate_writes_loadable_workspaces() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = run_json(&["corpus", "generate", "--count", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    for f in v["written"].as_array().unwrap() {
        let (code, _) = run_json(&["--no-record", "--workspace", f.as_str().unwrap(), "validate"]);
        assert_eq!(code, EXIT_OK);
    }
}

#[test]
fn text_format_prints_period_matrix() {
    let (code, text) = run(&["--format", "text", "report-periods", "--n", "4", "--k", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("(2πi)^-1 log 2"), "{text}");
    assert!(text.contains("ζ(3)"));
    assert!(text.contains("galois_dim: 4"));
}

#[test]
fn four_dim_period_report() {
    let (code, v) = run_json(&["report-periods", "--four-dim"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["ia3"], json!(true));
    assert_eq!(v["dim_u"], json!(6));
    assert_eq!(v["galois_dim"], json!(7));
}

#[test]
fn binary_honours_workspace_environment_variable() {
    let (_d, ws) = scratch("kummer.json");
    let out = Command::new(env!("CARGO_BIN_EXE_panache")).args(["--no-record", "u", "kummer"]).env("PANACHE_WORKSPACE", &ws).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, json!({ "dim_u": 1, "large": true }));
    let bad = Command::new(env!("CARGO_BIN_EXE_panache")).arg("frobnicate").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage"));
}

fn schema_validator() -> jsonschema::Validator {
    let read = |f: &str| -> Value { serde_json::from_str(&std::fs::read_to_string(fixtures().join("../schema").join(f)).unwrap()).unwrap() };
    let registry = jsonschema::Registry::new()
        .add("https://panache.local/schema/report.schema.json", read("report.schema.json"))
        .unwrap()
        .prepare()
        .unwrap();
    jsonschema::options().with_registry(&registry).build(&read("workspace.schema.json")).unwrap()
}

#[test]
fn fixtures_and_recorded_reports_match_schema() {
    let v = schema_validator();
    let (_d, ws) = scratch("rank_two_pairs.json");
    in_ws(&ws, &["blend", "compatible"]);
    let mut files = vec![fixtures().join("kummer.json"), fixtures().join("three_weights.json"), ws];
    for e in std::fs::read_dir(fixtures().join("corpus")).unwrap() {
        files.push(e.unwrap().path());
    }
    for f in files {
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
        let errs: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errs.is_empty(), "{}: {errs:?}", f.display());
    }
    assert!(!v.is_valid(&json!({ "format_version": 2, "presentation": {} })));
}
