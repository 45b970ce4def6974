use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn rkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rkit"))
        .args(args)
        .env("RKIT_THREADS", "2")
        .output()
        .expect("run rkit")
}

fn rkit_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn rkit");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--json", "--deterministic"]);
    let o = rkit(&all);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../../../docs/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

fn row(doc: &Value, i: usize) -> &Value {
    &doc["rows"][i]
}

#[test]
fn eval_examples() {
    assert_eq!(row(&json(&["eval", "phi-star", "12"]), 0)["value"], 6);
    assert_eq!(
        row(&json(&["eval", "rsum", "--kind", "unitary", "4", "2"]), 0)["value"],
        -1
    );
    assert_eq!(
        row(&json(&["eval", "sigma", "--s", "1", "1"]), 0)["value"],
        1
    );
    assert_eq!(
        row(&json(&["eval", "piltz", "--m", "3", "4"]), 0)["value"],
        6
    );
    assert_eq!(
        row(&json(&["eval", "unitary-gcd", "4", "12"]), 0)["value"],
        4
    );
    let m = json(&["eval", "mangoldt-star", "12", "8"]);
    assert_eq!(row(&m, 0)["value"], "0");
    assert_eq!(row(&m, 1)["value"], "3 log 2");
}

#[test]
fn coeff_examples() {
    let d = json(&[
        "coeff", "--family", "sigma", "--s", "1", "--k", "2", "--kind", "unitary", "--q", "2", "2",
        "--mode", "closed",
    ]);
    assert_eq!(row(&d, 0)["symbolic"], "7/64 * zeta(3)");
    let v = row(&d, 0)["value"].as_f64().unwrap();
    assert!((v - 0.131_475).abs() < 1e-6);

    let d = json(&[
        "coeff",
        "--family",
        "phi",
        "--s",
        "1",
        "--k",
        "1",
        "--kind",
        "classical",
        "--q",
        "4",
    ]);
    assert_eq!(row(&d, 0)["value"], 0.0);

    let d = json(&[
        "coeff", "--family", "piltz", "--m", "3", "--k", "2", "--kind", "unitary", "--q", "1", "2",
        "--mode", "closed",
    ]);
    assert_eq!(row(&d, 0)["symbolic"], "9/32 * zeta(2)^2");

    let d = json(&[
        "coeff", "--family", "sigma", "--k", "2", "--kind", "unitary", "--q", "2", "2", "--mode",
        "series",
    ]);
    let r = row(&d, 0);
    assert_eq!(r["bound"], "rigorous");
    let diff = (r["value"].as_f64().unwrap() - r["closed_value"].as_f64().unwrap()).abs();
    assert!(diff <= r["tail_bound"].as_f64().unwrap());
}

fn final_error(doc: &Value) -> f64 {
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4, "checkpoints at Q/8, Q/4, Q/2, Q");
    rows[3]["abs_error"].as_f64().unwrap()
}

#[test]
fn expand_examples() {
    let d = json(&[
        "expand",
        "--family",
        "sigma",
        "--k",
        "2",
        "--n",
        "4",
        "6",
        "--qmax",
        "256",
        "--kind",
        "classical",
    ]);
    assert_eq!(d["meta"]["summary"]["lhs_exact"], "3/2");
    assert!(final_error(&d) < 1e-6);
    let d = json(&[
        "expand", "--family", "tau", "--k", "2", "--n", "12", "18", "--qmax", "256", "--kind",
        "unitary",
    ]);
    assert_eq!(d["meta"]["summary"]["lhs"], 4.0);
    assert!(final_error(&d) < 0.01);
    let d = json(&[
        "expand", "--family", "r", "--k", "1", "--n", "5", "--qmax", "999",
    ]);
    assert_eq!(row(&d, 3)["q_max"], 999);
    assert!(final_error(&d) < 0.01);
}

#[test]
fn check_suites() {
    let d = json(&["check", "--suite", "ramanujan-identities", "--max", "60"]);
    assert_eq!(d["meta"]["status"], "ok");
    assert_eq!(d["meta"]["summary"]["failures"], 0);
    let d = json(&[
        "check",
        "--suite",
        "closed-vs-series",
        "--qmax",
        "3",
        "--M",
        "2000",
    ]);
    assert_eq!(d["meta"]["summary"]["outside"], 0);
    let d = json(&[
        "check",
        "--suite",
        "orthogonality-counterexample",
        "--p",
        "2",
    ]);
    assert_eq!(row(&d, 0)["sum"], 4);
    assert_eq!(row(&d, 0)["expected"], 4);
}

#[test]
fn meanvalue_and_lambda_star() {
    let d = json(&["meanvalue", "--family", "sigma", "--k", "2", "--x", "1000"]);
    assert!(row(&d, 0)["relative_error"].as_f64().unwrap() < 0.01);
    let d = json(&["meanvalue", "--family", "one", "--k", "2", "--x", "50"]);
    assert_eq!(row(&d, 0)["estimate"], 1.0);

    let d = json(&["lambda-star", "--q", "9", "--N", "100"]);
    let target = row(&d, 0)["unitary_target"].as_f64().unwrap();
    assert!((target + 2.0 * 3f64.ln()).abs() < 1e-15);
    let d = json(&["lambda-star", "--q", "6", "--N", "100"]);
    assert_eq!(row(&d, 3)["unitary_target"], 0.0);
    assert_eq!(row(&d, 3)["N"], 100);
}

#[test]
fn every_command_emits_schema_valid_json() {
    let validator = schema();
    let commands: [&[&str]; 8] = [
        &["eval", "divisors", "12", "30"],
        &["eval", "tau", "340282366920938463"],
        &[
            "coeff", "--family", "beta", "--k", "2", "--q", "2", "3", "--mode", "series", "--M",
            "100",
        ],
        &[
            "coeff", "--family", "sigma", "--s", "0.5", "--k", "1", "--q", "3",
        ],
        &[
            "expand", "--family", "psi", "--n", "3", "4", "--qmax", "40", "--mode", "box",
        ],
        &["check", "--suite", "ramanujan-identities", "--max", "10"],
        &[
            "meanvalue",
            "--family",
            "phi",
            "--k",
            "3",
            "--x",
            "10",
            "20",
        ],
        &["lambda-star", "--q", "8", "--N", "5", "50"],
    ];
    for args in commands {
        let doc = json(args);
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let mut bad = json(&["eval", "tau", "6"]);
    bad["meta"]["status"] = "maybe".into();
    assert!(!validator.is_valid(&bad));
    bad["meta"]["status"] = "ok".into();
    bad["rows"][0]["value"] = serde_json::json!([[1]]);
    assert!(!validator.is_valid(&bad));
}

#[test]
fn rendering_a_parsed_report_is_idempotent() {
    let args = [
        "expand", "--family", "sigma", "--n", "4", "6", "--qmax", "64", "--json",
    ];
    let first = stdout(&rkit(&args));
    let again = rkit_stdin(&["render", "--json"], &first);
    assert_eq!(stdout(&again), first);
    for format in ["text", "csv"] {
        let direct = rkit(&[
            "expand",
            "--family",
            "sigma",
            "--n",
            "4",
            "6",
            "--qmax",
            "64",
            "--deterministic",
            "--format",
            format,
        ]);
        let det_json = stdout(&rkit(&[
            "expand",
            "--family",
            "sigma",
            "--n",
            "4",
            "6",
            "--qmax",
            "64",
            "--deterministic",
            "--json",
        ]));
        let rendered = rkit_stdin(&["render", "--format", format], &det_json);
        assert_eq!(stdout(&rendered), stdout(&direct));
    }
}

#[test]
fn deterministic_output_is_byte_identical() {
    let args = [
        "expand",
        "--family",
        "tau",
        "--kind",
        "unitary",
        "--n",
        "12",
        "18",
        "--qmax",
        "20000",
        "--deterministic",
        "--json",
    ];
    let a = Command::new(env!("CARGO_BIN_EXE_rkit"))
        .args(args)
        .env("RKIT_THREADS", "1")
        .output()
        .unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_rkit"))
        .args(args)
        .env("RKIT_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("elapsed_ms"));
}

#[test]
fn csv_is_a_flat_projection_of_rows() {
    let o = rkit(&["lambda-star", "--q", "4", "--N", "10", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "N,unitary_partial,unitary_target,unitary_gap,classical_partial,classical_target,classical_gap"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn exit_codes() {
    assert_eq!(
        rkit(&["eval", "no-such-function", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(rkit(&["eval", "rsum", "3"]).status.code(), Some(1));
    assert_eq!(rkit(&["coeff", "--family", "sigma"]).status.code(), Some(1));
    assert_eq!(
        rkit(&["meanvalue", "--family", "sigma", "--x", "10"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(rkit(&["--help"]).status.code(), Some(0));

    let domain = rkit(&[
        "coeff", "--family", "sigma", "--s", "-1", "--k", "2", "--q", "1", "1",
    ]);
    assert_eq!(domain.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&domain.stderr).contains("s + k > 1"));
    assert_eq!(
        rkit(&[
            "check",
            "--suite",
            "orthogonality-counterexample",
            "--p",
            "4"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        rkit(&["lambda-star", "--q", "1", "--N", "10"])
            .status
            .code(),
        Some(3)
    );
    let budget = rkit(&[
        "expand", "--family", "sigma", "--n", "1", "1", "--qmax", "100", "--mode", "box",
        "--budget", "50",
    ]);
    assert_eq!(budget.status.code(), Some(3));

    // a failed suite report keeps its status through render
    let mut doc = json(&[
        "check",
        "--suite",
        "orthogonality-counterexample",
        "--p",
        "3",
    ]);
    doc["meta"]["status"] = "failed".into();
    let o = rkit_stdin(&["render"], &doc.to_string());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("status: FAILED"));
}
