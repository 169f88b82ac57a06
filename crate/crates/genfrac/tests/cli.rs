//! End-to-end tests of the command-line interface: output formats, the
//! CSV/JSON value round-trip, seeded determinism, and the exit-code
//! contract (0 ok, 1 usage, 2 validation, 3 numerical, 4 suite failure).

use std::process::{Command, Output};

fn genfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genfrac"))
        .args(args)
        .output()
        .expect("binary runs to completion")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

const EVAL_RANGE: [&str; 21] = [
    "eval", "--alpha", "0.6", "--beta", "0.2", "--rho", "1.7", "--eta", "0.4", "--kappa", "-0.5",
    "--a", "0.25", "--b", "3", "--side", "left", "--f", "poly:1,0.5,2", "--x", "0.5:2.5:7",
];

#[test]
fn csv_header_and_line_endings_match_the_contract() {
    let output = genfrac(&EVAL_RANGE);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.starts_with("x,value,abs_err,method\n"), "header line: {text}");
    assert!(!text.contains('\r'), "line endings must be bare LF");
    assert_eq!(text.lines().count(), 8, "header plus seven rows");
}

#[test]
fn csv_and_json_outputs_carry_identical_values() {
    let csv_run = genfrac(&EVAL_RANGE);
    let mut json_args: Vec<&str> = EVAL_RANGE.to_vec();
    json_args.extend_from_slice(&["--format", "json"]);
    let json_run = genfrac(&json_args);
    assert_eq!(csv_run.status.code(), Some(0));
    assert_eq!(json_run.status.code(), Some(0));

    let doc: serde_json::Value =
        serde_json::from_str(&stdout_of(&json_run)).expect("JSON output parses");
    let results = doc["results"].as_array().expect("results array");

    let csv_text = stdout_of(&csv_run);
    let rows: Vec<&str> = csv_text.lines().skip(1).collect();
    assert_eq!(rows.len(), results.len());
    for (row, record) in rows.iter().zip(results) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        for (field, key) in fields.iter().take(3).zip(["x", "value", "abs_err"]) {
            let from_csv: f64 = field.parse().expect("CSV field parses as f64");
            let from_json = record[key].as_f64().expect("JSON field is a number");
            assert_eq!(
                from_csv.to_bits(),
                from_json.to_bits(),
                "{key} differs between CSV ({from_csv}) and JSON ({from_json})"
            );
        }
        assert_eq!(fields[3], record["method"].as_str().expect("method string"));
    }
}

#[test]
fn json_document_has_params_and_results() {
    let output = genfrac(&[
        "eval", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--a", "0", "--side", "left", "--f", "const:1", "--x", "2", "--format", "json",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&output)).expect("parses");
    let object = doc.as_object().expect("one top-level object");
    assert_eq!(object.len(), 2, "exactly params and results");
    assert_eq!(doc["params"]["side"], "left");
    assert_eq!(doc["params"]["f"], "const:1.0", "canonical function spelling");
    assert_eq!(doc["params"]["b"], "inf", "infinite endpoint serializes as a string");
    assert_eq!(doc["results"].as_array().map(Vec::len), Some(1));
    let value = doc["results"][0]["value"].as_f64().expect("value");
    assert!((value - 2.0).abs() < 1e-12);
}

#[test]
fn geometric_range_doubles_and_linear_range_steps() {
    let output = genfrac(&[
        "eval", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--a", "0", "--side", "left", "--f", "const:1", "--x", "0.5:2:3",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    let xs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|row| row.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(xs, vec![0.5, 1.0, 2.0], "positive ranges are geometric");

    // A range that starts at zero (or below) falls back to linear spacing;
    // the operator from -inf accepts nonpositive points.
    let output = genfrac(&[
        "eval", "--alpha", "0.5", "--beta", "0.5", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--a", "-inf", "--side", "left", "--f", "exp:1", "--x", "-1:1:3",
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|row| row.split(',').take(2).map(|v| v.parse().unwrap()).collect())
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(xs, vec![-1.0, 0.0, 1.0], "ranges crossing zero are linear");
    // Exponential input reproduces itself up to the quoted accuracy.
    assert!((rows[1][1] - 1.0).abs() < 1e-5, "value at x=0 was {}", rows[1][1]);
}

#[test]
fn general_right_side_with_matching_omega_equals_plain_right_side() {
    let plain = genfrac(&[
        "eval", "--alpha", "0.8", "--beta", "0.3", "--rho", "1.5", "--eta", "0.8", "--kappa",
        "0.5", "--a", "0.1", "--b", "2", "--side", "right", "--f", "poly:1,1", "--x", "1.1",
    ]);
    let general = genfrac(&[
        "eval", "--alpha", "0.8", "--beta", "0.3", "--rho", "1.5", "--eta", "0.8", "--kappa",
        "0.5", "--a", "0.1", "--b", "2", "--side", "right-general", "--omega", "1.2", "--f",
        "poly:1,1", "--x", "1.1",
    ]);
    assert_eq!(plain.status.code(), Some(0), "stderr: {}", stderr_of(&plain));
    assert_eq!(general.status.code(), Some(0), "stderr: {}", stderr_of(&general));
    assert_eq!(
        stdout_of(&plain),
        stdout_of(&general),
        "omega = rho*eta reproduces the plain right side bit-for-bit"
    );
}

#[test]
fn validation_failures_exit_2() {
    let bad_domain = genfrac(&[
        "eval", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--a", "-1", "--side", "left", "--f", "const:1", "--x", "2",
    ]);
    assert_eq!(bad_domain.status.code(), Some(2));
    assert!(stderr_of(&bad_domain).contains("invalid domain"));

    let bad_alpha = genfrac(&[
        "eval", "--alpha", "0", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--a", "0", "--side", "left", "--f", "const:1", "--x", "2",
    ]);
    assert_eq!(bad_alpha.status.code(), Some(2));
    assert!(stderr_of(&bad_alpha).contains("must be positive"));

    let outside = genfrac(&[
        "eval", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--a", "0", "--b", "2", "--side", "left", "--f", "const:1", "--x", "5",
    ]);
    assert_eq!(outside.status.code(), Some(2));
    assert!(stderr_of(&outside).contains("not strictly inside"));
}

#[test]
fn numerical_failures_exit_3() {
    // A growing integrand under an integral to +inf cannot converge.
    let divergent = genfrac(&[
        "eval", "--alpha", "1.2", "--beta", "0", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--a", "0", "--b", "inf", "--side", "right", "--f", "exp:1", "--x", "0.5",
    ]);
    assert_eq!(divergent.status.code(), Some(3), "stderr: {}", stderr_of(&divergent));

    // The accuracy demand --tol turns an honest error estimate into failure.
    let weyl = [
        "eval", "--alpha", "0.5", "--beta", "0.5", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--a", "-inf", "--side", "left", "--f", "exp:1", "--x", "0.3",
    ];
    let mut strict: Vec<&str> = weyl.to_vec();
    strict.extend_from_slice(&["--tol", "1e-12"]);
    let strict_run = genfrac(&strict);
    assert_eq!(strict_run.status.code(), Some(3));
    assert!(stderr_of(&strict_run).contains("exceeds the requested tolerance"));

    let mut relaxed: Vec<&str> = weyl.to_vec();
    relaxed.extend_from_slice(&["--tol", "1e-3"]);
    assert_eq!(genfrac(&relaxed).status.code(), Some(0));
}

#[test]
fn usage_failures_exit_1() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["eval", "--alpha", "1"], // missing required flags
        vec!["totally-not-a-command"],
        vec![
            "eval", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
            "--a", "0", "--side", "left", "--f", "quux:1", "--x", "2",
        ], // unknown function name
        vec![
            "eval", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
            "--a", "0", "--side", "left", "--f", "const:1", "--x", "2:1:5",
        ], // reversed range
        vec![
            "eval", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
            "--a", "0", "--side", "left", "--f", "const:1", "--x", "1:2",
        ], // malformed range
        vec![
            "eval", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
            "--a", "0", "--side", "left", "--omega", "2", "--f", "const:1", "--x", "2",
        ], // omega without the general side
        vec!["verify", "--suite", "semigroup", "--cases", "0"],
        vec!["verify", "--suite", "nonsense"],
    ];
    for args in cases {
        let output = genfrac(&args);
        assert_eq!(output.status.code(), Some(1), "args {args:?}");
        assert!(!stderr_of(&output).is_empty(), "args {args:?} should explain on stderr");
    }
}

#[test]
fn help_and_version_exit_0() {
    let help = genfrac(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = stdout_of(&help);
    for subcommand in ["eval", "classify", "verify", "norm", "kconst"] {
        assert!(text.contains(subcommand), "help should mention {subcommand}");
    }
    assert_eq!(genfrac(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_is_byte_identical_for_a_fixed_seed() {
    let args = ["verify", "--suite", "shift", "--seed", "5", "--cases", "10"];
    let first = genfrac(&args);
    let second = genfrac(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_of(&first);
    assert!(text.starts_with("shift: 10/10 pass"), "summary was: {text}");
}

#[test]
fn verify_seeds_differ_in_worst_case_diffs() {
    let first = genfrac(&["verify", "--suite", "product", "--seed", "3", "--cases", "6"]);
    let second = genfrac(&["verify", "--suite", "product", "--seed", "4", "--cases", "6"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    assert_ne!(
        first.stdout, second.stdout,
        "different seeds should draw different cases"
    );
}

#[test]
fn classify_prints_name_line_then_json_detail() {
    let output = genfrac(&[
        "classify", "--alpha", "0.5", "--beta", "0.5", "--rho", "2", "--eta", "0", "--kappa",
        "0", "--a", "0", "--b", "1",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("katugampola"));
    let detail: serde_json::Value =
        serde_json::from_str(lines.next().expect("JSON detail line")).expect("detail parses");
    assert_eq!(detail["reduction"], "katugampola");
    assert_eq!(detail["classical"]["rho"], 2.0);
    assert_eq!(detail["classical"]["order"], 0.5);

    let weyl = genfrac(&[
        "classify", "--alpha", "0.7", "--beta", "0", "--rho", "1", "--eta", "0.3", "--kappa",
        "0.4", "--a", "-inf", "--b", "2",
    ]);
    assert_eq!(weyl.status.code(), Some(0));
    assert!(stdout_of(&weyl).starts_with("weyl-type\n"));

    let general = genfrac(&[
        "classify", "--alpha", "0.5", "--beta", "0.25", "--rho", "2", "--eta", "0.75",
        "--kappa", "0.5", "--a", "0", "--b", "1",
    ]);
    let text = stdout_of(&general);
    assert!(text.starts_with("general\n"));
    let detail: serde_json::Value =
        serde_json::from_str(text.lines().nth(1).expect("JSON line")).expect("parses");
    assert!(detail.get("classical").is_none(), "general tuples have no classical form");

    let invalid = genfrac(&[
        "classify", "--alpha", "0.5", "--beta", "0", "--rho", "0", "--eta", "0", "--kappa",
        "0", "--a", "0", "--b", "1",
    ]);
    assert_eq!(invalid.status.code(), Some(2));
}

#[test]
fn norm_prints_twelve_significant_digits() {
    let unit = genfrac(&["norm", "--f", "const:1", "--p", "1", "--c", "1", "--a", "1", "--b", "2"]);
    assert_eq!(unit.status.code(), Some(0));
    assert_eq!(stdout_of(&unit), "1.00000000000\n");

    // sup over [1,2] of x^c * x = 4 at the right endpoint.
    let sup = genfrac(&["norm", "--f", "pow:1", "--p", "inf", "--c", "1", "--a", "1", "--b", "2"]);
    assert_eq!(sup.status.code(), Some(0));
    assert_eq!(stdout_of(&sup), "4.00000000000\n");

    let sub_one = genfrac(&["norm", "--f", "const:1", "--p", "0.5", "--c", "1", "--a", "1", "--b", "2"]);
    assert_eq!(sub_one.status.code(), Some(2));
    assert!(stderr_of(&sub_one).contains("requires p >= 1"));
}

#[test]
fn kconst_spot_values_and_hypothesis_checks() {
    let plain = genfrac(&[
        "kconst", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--p", "1", "--c", "0", "--a", "1", "--b", "2",
    ]);
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(stdout_of(&plain), "1.00000000000\n");

    let weighted = genfrac(&[
        "kconst", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--p", "1", "--c", "1", "--a", "1", "--b", "2",
    ]);
    assert_eq!(weighted.status.code(), Some(0));
    assert_eq!(stdout_of(&weighted), "1.38629436112\n");

    let violated = genfrac(&[
        "kconst", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--p", "1", "--c", "2", "--a", "1", "--b", "2",
    ]);
    assert_eq!(violated.status.code(), Some(2));
    assert!(stderr_of(&violated).contains("requires rho >= c"));

    let zero_a = genfrac(&[
        "kconst", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0",
        "--p", "1", "--c", "0", "--a", "0", "--b", "2",
    ]);
    assert_eq!(zero_a.status.code(), Some(2));
    assert!(stderr_of(&zero_a).contains("0 < a"));
}
