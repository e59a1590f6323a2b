//! The `cmdeg` binary end to end.

use std::process::{Command, Output};

fn cmdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmdeg"))
        .args(args)
        .env_remove("CMDEG_DIGITS")
        .output()
        .expect("running cmdeg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_r0_at_one() {
    let o = cmdeg(&["--digits", "30", "eval", "--fn", "R", "--n", "0", "--x", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("0.0810614667953272582196702"), "{out}");
    assert!(out.contains("err_bound"));
}

#[test]
fn digits_flag_beats_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cmdeg"))
        .args(["--digits", "20", "eval", "--n", "0", "--x", "2"])
        .env("CMDEG_DIGITS", "200")
        .output()
        .unwrap();
    let value = stdout(&o).lines().next().unwrap().split_whitespace().nth(1).unwrap().to_string();
    assert!(value.len() < 40, "{value}");
}

#[test]
fn laplace_and_closed_paths_agree() {
    let a = stdout(&cmdeg(&["eval", "--n", "2", "--x", "3", "--path", "closed"]));
    let b = stdout(&cmdeg(&["eval", "--n", "2", "--x", "3", "--path", "laplace"]));
    let head = |s: &str| s.lines().next().unwrap()[..40].to_string();
    assert_eq!(head(&a), head(&b));
}

#[test]
fn kernel_representations_agree() {
    let a = stdout(&cmdeg(&["kernel", "--family", "laguerre-f", "--m", "3", "--t", "2", "--repr", "laguerre"]));
    let b = stdout(&cmdeg(&["kernel", "--family", "laguerre-f", "--m", "3", "--t", "2", "--repr", "integral"]));
    let head = |s: &str| s.lines().next().unwrap()[..35].to_string();
    assert_eq!(head(&a), head(&b));
}

#[test]
fn degree_json_for_r2() {
    let o = cmdeg(&["degree", "--target", "Rn", "--n", "2", "--grid-points", "400"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["target"], "R2");
    assert_eq!(v["lo"], 2.0);
    assert_eq!(v["hi"], 3.0);
    assert_eq!(v["witness"]["kind"], "kernel");
    assert_eq!(v["conjecture_tag"], "R2");
}

#[test]
fn degree_csv_header() {
    let o = cmdeg(&["degree", "--target", "Rn", "--n", "1", "--grid-points", "50", "--format", "csv"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("t,value,err_bound"));
    assert_eq!(out.lines().count(), 51);
}

#[test]
fn unknown_proposition_is_a_usage_error() {
    let o = cmdeg(&["verify", "--prop", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_prop1_reports_known_failures() {
    let o = cmdeg(&["verify", "--prop", "1", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["fail"], 3);
    assert_eq!(v["summary"]["inconclusive"], 0);
}

#[test]
fn table_r4_is_consistent() {
    let o = cmdeg(&["table", "--conjecture", "R4", "--grid-points", "400", "--format", "json"]);
    assert!(o.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["consistent"] == true));
}
