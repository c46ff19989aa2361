//! End-to-end tests of the gmspec binary: output formats, exit codes,
//! determinism, and schema conformance of the verify report.

use serde_json::Value;
use std::process::{Command, Output};

fn gmspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmspec"))
        .args(args)
        .env_remove("GMSPEC_SEED")
        .output()
        .expect("failed to spawn gmspec")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn count_formula_prints_decimal_count() {
    let out = gmspec(&["count-formula", "--m", "2", "--n", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "12");
}

#[test]
fn count_dominant_matches_formula() {
    let out = gmspec(&["count-dominant", "--m", "2", "--q", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "12");
}

#[test]
fn count_dominant_list_is_valid_jsonl() {
    let dir = std::env::temp_dir().join(format!("gmspec-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dominant.jsonl");
    let out = gmspec(&[
        "count-dominant",
        "--m",
        "1",
        "--q",
        "3",
        "--check-structure",
        "--list",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    for line in lines {
        let blocks: Vec<Vec<String>> = serde_json::from_str(line).unwrap();
        let total: usize = blocks.iter().map(|b| b.len()).sum();
        assert_eq!(total, 6); // |V(H(1, 6))|
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn slow_sizes_require_allow_slow() {
    let out = gmspec(&["count-dominant", "--m", "2", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("infeasible"), "stderr: {err}");
}

#[test]
fn unknown_flag_exits_2() {
    let out = gmspec(&["count-formula", "--m", "2", "--n", "3", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn density_grid_rows_strictly_increase() {
    let out = gmspec(&["density", "--family", "z", "--grid", "10", "--out", "-"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f"));
    let xs: Vec<f64> =
        lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(xs.len(), 10);
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn density_z3_needs_ode() {
    let out = gmspec(&["density", "--family", "z3", "--closed-form", "--out", "-"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_csv_has_documented_header_and_is_deterministic() {
    let args = [
        "sample", "--m", "1", "--n", "12", "--reps", "2", "--seed", "5", "--bins", "10",
        "--out", "-",
    ];
    let out1 = gmspec(&args);
    let out2 = gmspec(&args);
    assert!(out1.status.success());
    assert_eq!(stdout(&out1), stdout(&out2));
    let text = stdout(&out1);
    assert_eq!(text.lines().next(), Some("bin_lo,bin_hi,count,density"));
    assert_eq!(text.lines().count(), 11);
    // density column integrates to 1
    let total: f64 = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
            (f[1] - f[0]) * f[3]
        })
        .sum();
    assert!((total - 1.0).abs() < 1e-9, "integral {total}");
}

#[test]
fn trace_moments_json_shape() {
    let out = gmspec(&[
        "trace-moments",
        "--m",
        "1",
        "--n",
        "10",
        "--q-max",
        "2",
        "--reps",
        "2",
        "--seed",
        "3",
        "--out",
        "-",
    ]);
    assert!(out.status.success());
    let rows: Vec<Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 2);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row["q"], Value::from(i as u64 + 1));
        for key in ["empirical", "theoretical", "rel_err"] {
            assert!(row[key].is_f64(), "missing {key}");
        }
    }
    // randomized commands report their seed on the diagnostic stream
    assert!(String::from_utf8(out.stderr).unwrap().contains("seed: 3"));
}

#[test]
fn moments_check_passes_for_z() {
    let out = gmspec(&["moments-check", "--family", "z", "--k-max", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).matches("PASS").count(), 7);
}

#[test]
fn verify_combinatorics_report_matches_schema() {
    let out = gmspec(&["verify", "--suite", "combinatorics", "--out", "-"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();

    // validate against the shipped schema by hand (required fields,
    // types, no extras)
    let schema: Value = serde_json::from_str(include_str!("../schema/verify-report.schema.json"))
        .unwrap();
    let props = schema["properties"].as_object().unwrap();
    let obj = report.as_object().unwrap();
    for req in schema["required"].as_array().unwrap() {
        assert!(obj.contains_key(req.as_str().unwrap()), "missing {req}");
    }
    for key in obj.keys() {
        assert!(props.contains_key(key), "undocumented field {key}");
    }
    assert!(report["suite"].is_string());
    assert!(report["seed"].is_u64());
    assert!(report["passed"].is_boolean());
    let allowed: Vec<&str> =
        props["suite"]["enum"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(allowed.contains(&report["suite"].as_str().unwrap()));
    let check_props = props["checks"]["items"]["properties"].as_object().unwrap();
    for c in report["checks"].as_array().unwrap() {
        let c = c.as_object().unwrap();
        for key in c.keys() {
            assert!(check_props.contains_key(key), "undocumented check field {key}");
        }
        assert!(c["name"].is_string() && c["passed"].is_boolean() && c["detail"].is_string());
        assert_eq!(c["passed"], Value::Bool(true));
    }
    assert_eq!(report["passed"], Value::Bool(true));
}

#[test]
fn seed_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_gmspec"))
        .args(["verify", "--suite", "combinatorics", "--out", "-"])
        .env("GMSPEC_SEED", "99")
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["seed"], Value::from(99u64));
}
