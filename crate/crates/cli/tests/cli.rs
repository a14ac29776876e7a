use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lhslab(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lhslab"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("LHSLAB_CACHE_DIR", dir),
        None => cmd.env_remove("LHSLAB_CACHE_DIR"),
    };
    cmd.output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn verdicts(v: &Value) -> Vec<(String, String)> {
    v["verdicts"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.clone(), v["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn e2_sign_lattice_mod_two_is_all_ones() {
    let out = lhslab(
        &[
            "e2",
            "c2-sign",
            "--field",
            "F2",
            "--coeff",
            "triv",
            "--max-degree",
            "3",
            "--cross-check",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["schema"], "report-v1");
    assert_eq!(
        v["tables"]["e2"],
        serde_json::json!([[1, 1, 1, 1], [1, 1, 1]])
    );
    assert_eq!(v["tables"]["e2"], v["tables"]["e2FromTwistedComplex"]);
}

#[test]
fn e2_over_rationals_vanishes_in_positive_degree() {
    let out = lhslab(
        &["e2", "c2-swap", "--field", "Q", "--coeff", "wedge:1"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    for row in report(&out)["tables"]["e2"].as_array().unwrap() {
        assert!(row.as_array().unwrap()[1..].iter().all(|d| d == 0));
    }
}

#[test]
fn rank_zero_lattice_has_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("c.jsonl");
    std::fs::write(
        &cat,
        r#"{"name":"z","group":{"cyclic":2},"rank":0,"generators":{"1":[]}}"#,
    )
    .unwrap();
    let out = lhslab(
        &[
            "--catalog",
            cat.to_str().unwrap(),
            "e2",
            "z",
            "--field",
            "2",
        ],
        None,
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        report(&out)["tables"]["e2"],
        serde_json::json!([[1, 1, 1, 1, 1]])
    );
}

#[test]
fn charclass_mod_three_is_zero_for_c3() {
    for lattice in ["c3-rotation", "c3-regular"] {
        let out = lhslab(&["charclass", lattice, "--field", "F3"], None);
        assert_eq!(out.status.code(), Some(0));
        let v = report(&out);
        let classes = v["statuses"]["classes"].as_array().unwrap();
        assert!(!classes.is_empty());
        assert!(classes.iter().all(|c| c["status"] == "Zero"));
    }
}

#[test]
fn sumcheck_sign_plus_sign_passes() {
    let out = lhslab(
        &[
            "sumcheck",
            "c2-sign",
            "c2-sign",
            "--field",
            "F2",
            "--t",
            "2",
            "--sign-audit",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["statuses"]["declaredSum"], "c2-sign2");
    assert!(verdicts(&v).iter().all(|(_, s)| s == "PASS"));
    let lhs = v["tables"]["primeFirst"]["sumLhs"].as_array().unwrap();
    assert!(lhs.iter().all(|x| x == "0"));
}

#[test]
fn collapse_report_for_prime_cyclic() {
    let out = lhslab(
        &[
            "collapse",
            "c2-regular-sign",
            "--field",
            "F2",
            "--coeff",
            "triv",
            "--coeff",
            "dual(wedge:1)",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["statuses"]["collapsed"], true);
    assert!(verdicts(&v)
        .iter()
        .any(|(k, s)| k == "primeCyclicCollapse" && s == "PASS"));
}

#[test]
fn scan_of_cyclic_catalog_is_all_zero() {
    let out = lhslab(
        &[
            "scan",
            "--field",
            "F2",
            "--group",
            "cyclic",
            "--max-total",
            "4",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert!(v["statuses"]["hits"].as_array().unwrap().is_empty());
    let rows = v["tables"]["evidence"].as_array().unwrap();
    assert!(rows.len() >= 10);
    assert!(rows.iter().all(|r| r["allZero"] == true));
}

#[test]
fn reports_are_byte_identical_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["charclass", "c2-regular-sign", "--field", "F2"];
    let a = lhslab(&args, None);
    let b = lhslab(&args, Some(dir.path()));
    let c = lhslab(&args, Some(dir.path()));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
}

#[test]
fn corrupt_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["e2", "c3-rotation", "--field", "F3"];
    let first = lhslab(&args, Some(dir.path()));
    let entry = std::fs::read_dir(dir.path())
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    std::fs::write(&entry, "{ truncated").unwrap();
    let second = lhslab(&args, Some(dir.path()));
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("corrupt cache entry"));
    assert_eq!(std::fs::read(&entry).unwrap(), first.stdout);
}

#[test]
fn timings_only_on_request() {
    let plain = report(&lhslab(&["e2", "c2-sign", "--field", "F2"], None));
    assert!(plain.get("timings").is_none());
    let timed = report(&lhslab(
        &["--timings", "e2", "c2-sign", "--field", "F2"],
        None,
    ));
    assert!(timed["timings"]["totalSeconds"].is_number());
}

#[test]
fn report_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = lhslab(
        &[
            "--out",
            path.to_str().unwrap(),
            "e2",
            "c2-sign",
            "--field",
            "F2",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "e2");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(
        lhslab(&["e2", "no-such-lattice", "--field", "F2"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lhslab(&["e2", "c2-sign", "--field", "F4"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lhslab(
            &["e2", "c2-sign", "--field", "F2", "--coeff", "wedge(1)"],
            None
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(lhslab(&["frobnicate"], None).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("bad.jsonl");
    std::fs::write(&cat, "{\"name\": \"x\", \"group\": {\"cyclic\": 2}}\n").unwrap();
    let out = lhslab(
        &[
            "--catalog",
            cat.to_str().unwrap(),
            "e2",
            "x",
            "--field",
            "F2",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_lattices_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"name":"x","group":{"cyclic":2},"rank":1,"generators":{"1":[[2]]}}"#,
        r#"{"name":"x","group":{"table":[[0,1],[0,1]]},"rank":1,"generators":{"1":[[1]]}}"#,
        "{\"name\":\"s\",\"group\":{\"cyclic\":2},\"rank\":1,\"generators\":{\"1\":[[-1]]}}\n\
         {\"name\":\"x\",\"group\":{\"cyclic\":2},\"rank\":2,\"generators\":{\"1\":[[0,1],[1,0]]},\"decomposition\":[\"s\",\"s\"]}",
    ];
    for (i, text) in cases.iter().enumerate() {
        let cat = dir.path().join(format!("{i}.jsonl"));
        std::fs::write(&cat, text).unwrap();
        let out = lhslab(
            &[
                "--catalog",
                cat.to_str().unwrap(),
                "e2",
                "x",
                "--field",
                "F2",
            ],
            None,
        );
        assert_eq!(
            out.status.code(),
            Some(3),
            "case {i}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn catalog_directory_is_merged() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("a.jsonl"),
        r#"{"name":"s","group":{"cyclic":2},"rank":1,"generators":{"1":[[-1]]}}"#,
    )
    .unwrap();
    std::fs::write(
        dir.path().join("b.jsonl"),
        r#"{"name":"ss","group":{"cyclic":2},"rank":2,"generators":{"1":[[-1,0],[0,-1]]},"decomposition":["s","s"]}"#,
    )
    .unwrap();
    std::fs::write(dir.path().join("ignored.txt"), "not a catalog").unwrap();
    let out = lhslab(
        &[
            "--catalog",
            dir.path().to_str().unwrap(),
            "sumcheck",
            "s",
            "s",
            "--field",
            "F2",
            "--t",
            "1",
        ],
        None,
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(report(&out)["statuses"]["declaredSum"], "ss");
}

#[test]
fn scan_finds_nonzero_class_on_extension_lattice() {
    let out = lhslab(
        &[
            "scan",
            "--field",
            "F2",
            "--group",
            "table",
            "--max-rank",
            "3",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let hits = v["statuses"]["hits"].as_array().unwrap();
    assert!(hits
        .iter()
        .any(|h| h["name"] == "v4-ext-a" && h["t"] == 2 && h["r"] == 2));
    assert_eq!(v["verdicts"]["replay"]["status"], "PASS");
}

#[test]
fn sumcheck_with_nonzero_sides() {
    let out = lhslab(
        &[
            "sumcheck",
            "v4-ext-a",
            "v4-trivial",
            "--field",
            "F2",
            "--t",
            "2",
            "--sign-audit",
        ],
        None,
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = report(&out);
    assert_eq!(v["statuses"]["declaredSum"], "v4-ext-a-trivial");
    assert!(verdicts(&v).iter().all(|(_, s)| s == "PASS"));
    let lhs = v["tables"]["primeFirst"]["sumLhs"].as_array().unwrap();
    assert!(lhs.iter().any(|x| x != "0"));
}
