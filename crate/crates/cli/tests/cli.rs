use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn testsched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_testsched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn fig1_ratio_example() {
    let out = testsched(&[
        "ratio",
        "--family",
        "fig1",
        "--param",
        "M=10",
        "--param",
        "eps=0.5",
        "--alg",
        "beta-sort",
        "--beta",
        "1",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], ["algorithm", "source", "alg", "opt", "ratio"]);
    assert_eq!(rows[1][2..], ["49.5", "40.0", "1.2375"]);
}

#[test]
fn bounds_reproduce_the_optimal_parameters() {
    let out = testsched(&["bounds", "--format", "json"]);
    assert!(out.status.success());
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    let get = |name: &str| {
        rows.as_array()
            .unwrap()
            .iter()
            .find(|r| r["quantity"] == name)
            .unwrap()["value"]
            .as_f64()
            .unwrap()
    };
    assert!((get("mu0") - 6.16277).abs() < 1e-4);
    assert!((get("one_sort_ratio") - 1.86039).abs() < 1e-4);
    assert!((get("y0") - 1.35542).abs() < 1e-4);
    assert!((get("sidle_ratio") - 1.58451).abs() < 1e-4);
}

#[test]
fn empty_instance_has_zero_objective() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    std::fs::write(&path, "# no jobs\n").unwrap();
    let trace = dir.path().join("trace.csv");
    let out = testsched(&[
        "run",
        "--alg",
        "sidle",
        "--y",
        "1.35542",
        "--instance",
        path.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0][3], "alg_objective");
    assert_eq!(rows[1][3], "0.0");
    assert_eq!(
        std::fs::read_to_string(trace).unwrap(),
        "job_id,kind,start,end\n"
    );
}

#[test]
fn generated_instance_runs_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let gen = testsched(&[
        "generate",
        "--family",
        "fig1",
        "--param",
        "M=10",
        "--param",
        "eps=0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "# t,p\n0,10\n9.5,10.5\n"
    );
    let trace = dir.path().join("trace.csv");
    let out = testsched(&[
        "run",
        "--instance",
        path.to_str().unwrap(),
        "--format",
        "json",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["alg_objective"], 49.5);
    assert_eq!(report["opt_objective"], 40.0);
    let ops = csv_rows(&std::fs::read_to_string(trace).unwrap());
    assert_eq!(ops[0], ["job_id", "kind", "start", "end"]);
    assert_eq!(ops.len(), 5);
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 4] = [
        &["sweep", "--over", "beta", "--n", "100"],
        &["sweep", "--over", "y", "--step", "0.25", "--n", "200"],
        &["verify", "--count", "40", "--seed", "3"],
        &[
            "generate", "--family", "random", "--n", "20", "--seed", "11",
        ],
    ];
    for args in cases {
        let (a, b) = (testsched(args), testsched(args));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let other = testsched(&[
        "generate", "--family", "random", "--n", "20", "--seed", "12",
    ]);
    assert_ne!(
        other.stdout,
        testsched(&["generate", "--family", "random", "--n", "20", "--seed", "11"]).stdout
    );
}

#[test]
fn beta_sweep_matches_the_grid_and_closed_form() {
    let out = testsched(&["sweep", "--over", "beta", "--n", "2000"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(
        rows[0],
        ["beta", "gamma_star", "lower_bound", "family", "measured"]
    );
    assert_eq!(rows.len(), 32);
    assert_eq!(rows[1][0], "0.5");
    assert_eq!(rows[31][0], "2.0");
    let at = |beta: &str| {
        rows.iter().find(|r| r[0] == beta).unwrap()[2]
            .parse::<f64>()
            .unwrap()
    };
    assert!((at("0.5") - 2.0).abs() < 1e-3);
    assert!((at("1.0") - 1.6180).abs() < 1e-3);
    assert!((at("2.0") - 1.851).abs() < 1e-3);
    for r in &rows[1..] {
        let (bound, measured): (f64, f64) = (r[2].parse().unwrap(), r[4].parse().unwrap());
        assert!(measured <= bound + 1e-9 && measured > bound - 1e-2, "{r:?}");
    }
}

#[test]
fn y_sweep_has_its_minimum_near_y0() {
    let out = testsched(&[
        "sweep", "--over", "y", "--from", "1.0", "--to", "1.7", "--step", "0.05", "--n", "100",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    let best = rows[1..]
        .iter()
        .min_by(|a, b| {
            a[1].parse::<f64>()
                .unwrap()
                .total_cmp(&b[1].parse::<f64>().unwrap())
        })
        .unwrap();
    assert_eq!(best[0], "1.35");
}

#[test]
fn adversary_ratio_through_the_cli() {
    let out = testsched(&[
        "ratio",
        "--family",
        "adversary",
        "--n",
        "10000",
        "--alg",
        "immediate",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((r["ratio"].as_f64().unwrap() - 2f64.sqrt()).abs() < 5e-3);
}

#[test]
fn verify_report_matches_schema() {
    let schema_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/verify-report.schema.json");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for args in [
        &["verify", "--count", "60", "--seed", "5"][..],
        &["verify", "--family", "fig2", "--param", "k=10"][..],
    ] {
        let out = testsched(args);
        assert!(out.status.success(), "{args:?}");
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        let errors: Vec<String> = validator
            .iter_errors(&report)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{errors:?}");
        assert_eq!(report["passed"], true);
        assert_eq!(report["violations"], 0);
    }
    let bad: Value = serde_json::json!({ "passed": "yes" });
    assert!(!validator.is_valid(&bad));
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 7] = [
        &["ratio"],
        &["ratio", "--family", "nope"],
        &["ratio", "--family", "fig1", "--param", "k=3"],
        &["sweep", "--over", "beta", "--step", "0"],
        &["sweep", "--over", "gamma", "--from", "1", "--to", "0"],
        &["run", "--instance", "/nonexistent/instance.csv"],
        &[
            "run",
            "--family",
            "fig1",
            "--alg",
            "beta-sort",
            "--beta",
            "-1",
        ],
    ];
    for args in cases {
        assert_eq!(testsched(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn malformed_instance_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "1,2\n3\n").unwrap();
    let out = testsched(&["run", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
