use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scg")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (serde_json::Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = scg(&all);
    (serde_json::from_slice(&out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn min_k_prints_three() {
    let out = scg(&["relate", "--left", "list:2,16", "--right", "list:4", "--min-k"]);
    assert_eq!(stdout(&out), "3\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn torus_fails_verification() {
    let (v, code) = json(&["verify", "--presentation", &fixture("torus.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["c_prime"], false);
    assert_eq!(v["max_ratio"], "1/4");
}

#[test]
fn generator_is_nontrivial() {
    let out = scg(&["solve", "--presentation", &fixture("torus.json"), "--word", "a"]);
    assert_eq!(stdout(&out).lines().next(), Some("nontrivial"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn relator_conjugate_is_trivial() {
    let (v, code) = json(&[
        "solve",
        "--set",
        "list:2",
        "--top",
        "7",
        "--word",
        "b^3 a^-1 b^-16 a b^16 a^-2 b^-16 a^2 b^16 a^-3 b^-16 a^3 b^16 a^-4 b^-16 a^4 b^16 a^-5 b^-16 a^5 b^16 a^-6 b^-16 a^6 b^16 a^-7 b^-16 a^7 b^13",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "trivial");
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_g123_holds() {
    let (v, code) = json(&["verify", "--presentation", &fixture("g123.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["c_prime"], true);
    assert_eq!(v["relator_count"], 3);
}

#[test]
fn build_reports_length() {
    let (v, code) = json(&["build", "--family", "wise-chong", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["length"], "10900");
    let (v, _) = json(&["build", "--family", "bowditch-tf", "--n", "1"]);
    assert_eq!(v["length"], "97");
}

#[test]
fn quotient_projects() {
    let (v, code) = json(&["quotient", "--set", "list:2,3", "--k", "2", "--word", "a^3 b^18"]);
    assert_eq!(code, 1);
    assert_eq!(v["projected"], "a^3 b^2");
}

#[test]
fn rf_witness_minimal_k() {
    let (v, code) = json(&["rf-witness", "--set", "list:2,3", "--word", "b^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["k"], 2);
    assert_eq!(v["E_k"], "16");
    assert_eq!(v["verdict"], "nontrivial_in_Gk");
    // G_2 over {1,2,3} keeps w_1, whose b^4 is a quarter of b^16
    let (v, code) = json(&["rf-witness", "--set", "list:1,2,3", "--word", "b^3"]);
    assert_eq!(code, 1);
    assert_eq!(v["k"], 2);
    assert_eq!(v["verdict"], "unverified");
}

#[test]
fn rf_witness_rejects_relators() {
    let out = scg(&["rf-witness", "--set", "list:0", "--top", "1", "--word", "a^-1 b^-2 a b^2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not majority-reduced"));
}

#[test]
fn relate_with_k_reports_failure() {
    let (v, code) = json(&["relate", "--left", "2,16", "--right", "4", "--k", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["direction"], "left_to_right");
    assert_eq!(v["element"], "16");
}

#[test]
fn profile_table_and_json() {
    let (v, _) = json(&["profile", "--left", "evens", "--right", "odds", "--depth", "4"]);
    let ks: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["min_k"].as_str().unwrap()).collect();
    assert_eq!(ks, ["1", "1", "3", "15", "255"]);
    let text = stdout(&scg(&["profile", "--left", "evens", "--right", "odds", "--depth", "4"]));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn sym_diff_and_spectrum() {
    let out = scg(&["sym-diff", "--left", "list:1,2", "--right", "list:2,3"]);
    assert_eq!(stdout(&out), "{1, 3}\n");
    let out = scg(&["spectrum", "--set", "list:0,1", "--top", "1"]);
    assert_eq!(stdout(&out), "{6, 10}\n");
}

#[test]
fn exit_codes_for_errors() {
    assert_eq!(scg(&["solve", "--set", "list:1", "--word", "a c"]).status.code(), Some(2));
    assert_eq!(scg(&["verify", "--set", "evens"]).status.code(), Some(2));
    assert_eq!(scg(&["verify"]).status.code(), Some(2));
    assert_eq!(scg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(scg(&["build", "--family", "wise-chong", "--n", "40"]).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_scg"))
        .args(["build", "--family", "b-power", "--n", "5"])
        .env("SCG_EXPONENT_BUDGET_BITS", "16")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = scg(&["solve", "--set", "list:1", "--top", "1", "--word", "a^-1 b^-4 a b^4", "--step-limit", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bowditch_quotient_kills_higher_relators() {
    let (v, code) = json(&["bowditch-quotient", "--n", "3", "--set", "list:3,4", "--m-max", "4"]);
    assert_eq!(code, 0);
    let row = &v[0];
    assert_eq!(row["all_killed"], true);
    assert!(row["tf_images"].as_array().unwrap().iter().all(|i| i["image"] == "a"));
}
