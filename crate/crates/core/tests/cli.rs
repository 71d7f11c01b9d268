use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvertex")).args(args).output().unwrap()
}

#[test]
fn verify_d4_example() {
    let out = run(&["verify", "--n", "4", "--node", "4", "--v", "1,2,1,1", "--D", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let js: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(js["equal"], true);
    assert_eq!(js["roots"].as_array().unwrap().len(), 5);
}

#[test]
fn dims_fundamental_d5() {
    let out = run(&["dims", "--n", "5", "--node", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let js: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(js.as_array().unwrap().len(), 10);
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(run(&["verify", "--n", "4", "--node", "4", "--v", "9,9,9,9", "--D", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "4", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "--n", "4", "--node", "7"]).status.code(), Some(2));
}

#[test]
fn unequal_exit_code() {
    let out = run(&["rep-check", "--n", "5", "--node", "1", "--v", "1,2,2,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["rep-check", "--n", "5", "--node", "1", "--v", "1,2,2,1,1", "--signed"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn deterministic_json() {
    let args = ["verify", "--n", "5", "--node", "5", "--D", "3", "--mode", "sampled", "--seed", "3", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
