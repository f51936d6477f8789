//! End-to-end checks of the binary: spec loading, output shapes, exit codes,
//! and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_padicwords"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generate_builtin_sequences() {
    let out = run(&["generate", "--spec", "thue-morse", "--length", "16"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0110100110010110\n");

    let out = run(&["generate", "--spec", "golden-sturmian", "--length", "10"]);
    assert_eq!(stdout(&out), "1011010110\n");

    let out = run(&["generate", "--spec", "fibonacci-word", "--length", "13"]);
    assert_eq!(stdout(&out), "0100101001001\n");

    let out = run(&["generate", "--spec", "period-doubling", "--length", "16"]);
    assert_eq!(stdout(&out), "0100010101000100\n");
}

#[test]
fn complexity_csv_shape_and_failure_exit() {
    let out = run(&[
        "complexity",
        "--spec",
        "golden-sturmian",
        "--window",
        "600",
        "--n-max",
        "10",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p_n,bound,pass"));
    assert_eq!(lines.next(), Some("1,2,2,true"));

    // a window too short to exhibit all factors fails the equality check
    let out = run(&[
        "complexity",
        "--spec",
        "golden-sturmian",
        "--window",
        "30",
        "--n-max",
        "25",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn spec_file_roundtrip_and_parse_errors() {
    let dir = std::env::temp_dir().join(format!("padicwords-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let good = dir.join("ok.json");
    std::fs::write(
        &good,
        r#"{"kind":"sturmian","theta":{"quadratic":[-1,1,2,5]},"rho":"0","variant":"floor","coding":[0,1]}"#,
    )
    .unwrap();
    let out = run(&["generate", "--spec", good.to_str().unwrap(), "--length", "10"]);
    assert_eq!(stdout(&out), "1011010110\n");

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"kind":"mystery"}"#).unwrap();
    let out = run(&["generate", "--spec", bad.to_str().unwrap(), "--length", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error"), "diagnostics missing: {err}");

    let missing = dir.join("missing.json");
    let out = run(&["generate", "--spec", missing.to_str().unwrap(), "--length", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites_pass_quickly() {
    let out = run(&["verify", "st", "--theta", "1,1,2,5", "--rho", "0", "--terms", "1000"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("pass"));

    let out = run(&["verify", "height", "--trials", "200", "--seed", "0"]);
    assert!(out.status.success());

    let out = run(&["verify", "liouville", "--trials", "100", "--seed", "0", "--prime", "3"]);
    assert!(out.status.success());

    let out = run(&[
        "verify",
        "repetition",
        "--spec",
        "fibonacci-word",
        "--n-from",
        "2",
        "--n-to",
        "40",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn outputs_are_byte_identical_for_fixed_inputs() {
    let args = [
        "classify",
        "--spec",
        "thue-morse",
        "--prime",
        "2",
        "--ladder",
        "64,256",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(!stdout(&a).is_empty());

    let args = ["verify", "liouville", "--trials", "50", "--seed", "7", "--prime", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn classify_writes_output_files() {
    let dir: PathBuf =
        std::env::temp_dir().join(format!("padicwords-out-{}", std::process::id()));
    let out = run(&[
        "classify",
        "--spec",
        "fibonacci-word",
        "--prime",
        "2",
        "--ladder",
        "64,256",
        "--format",
        "json",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let payload = std::fs::read_to_string(dir.join("classify.json")).unwrap();
    assert!(payload.contains("\"spec_version\": \"1\""));
    assert!(payload.contains("predicted_class"));
}

#[test]
fn prime_and_ladder_validation() {
    let out = run(&["classify", "--spec", "thue-morse", "--prime", "6", "--ladder", "64,256"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["classify", "--spec", "thue-morse", "--prime", "2", "--ladder", "64,32"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn approx_emits_record_lines() {
    let out = run(&[
        "approx",
        "--spec",
        "thue-morse",
        "--prime",
        "2",
        "--precision",
        "8",
        "--height-cap",
        "50",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["p"], 2);
        assert!(v["alpha"].is_string());
        assert!(v["m"].is_number());
    }
    assert!(!text.is_empty());
}
