use std::process::{Command, Output};

use cyclomds::badprimes::{compute_bad_primes, Budgets, MinorCertificate};
use cyclomds::cycmatrix::CodeSpec;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclomds")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_str(&stdout(&out)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&out)));
    (v, out.status.code().unwrap())
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn badprimes_small_examples() {
    let (v, code) = json(&["badprimes", "--n", "7", "--j", "0,1,3"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&v["verdicts"]["bad_primes"]), ["2", "7"]);
    assert_eq!(v["verdicts"]["has_zero_minor"], false);
    assert_eq!(v["certificate_count"], 35);

    let (v, _) = json(&["badprimes", "--n", "13", "--j", "0,1,3,6"]);
    assert_eq!(strings(&v["verdicts"]["bad_primes"]), ["3", "5", "13", "53", "521", "1327"]);

    let out = run(&["badprimes", "--n", "7", "--j", "0,1,3"]);
    assert!(stdout(&out).contains("P_bad: {2, 7}"));
}

#[test]
fn badprimes_full_length_has_one_minor() {
    let (v, code) = json(&["badprimes", "--n", "4", "--j", "0..4"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate_count"], 1);
    assert_eq!(strings(&v["verdicts"]["bad_primes"]), ["2"]);
}

#[test]
fn certificates_round_trip_through_json() {
    let (v, _) = json(&["--full", "badprimes", "--n", "9", "--j", "0,1,4"]);
    let certs: Vec<MinorCertificate> = serde_json::from_value(v["certificates"].clone()).unwrap();
    let spec = CodeSpec::new(9, vec![0, 1, 4]).unwrap();
    let expected = compute_bad_primes(&spec, &Budgets::default()).unwrap();
    assert_eq!(certs, expected.certificates);
    assert_eq!(v["verdicts"]["has_zero_minor"], true);
    for (c, raw) in certs.iter().zip(v["certificates"].as_array().unwrap()) {
        assert_eq!(raw["abs_norm"].as_str().unwrap(), c.abs_norm.to_string());
    }
}

#[test]
fn analyze_reports_classification() {
    let (v, code) = json(&["analyze", "--n", "9", "--j", "0,2,4", "--auto", "100", "1"]);
    assert_eq!(code, 0);
    let r = &v["reports"][0];
    assert_eq!(r["classification"], "RS");
    assert_eq!(r["field"]["q"], 64);
    assert_eq!(r["is_mds"], true);

    let (v, code) = json(&["analyze", "--n", "7", "--j", "0,1,3", "--p", "3"]);
    assert_eq!(code, 0);
    let r = &v["reports"][0];
    assert_eq!(r["classification"], "NonRS");
    assert_eq!(r["schur_dim"], 6);
    assert_eq!(r["sumset_mod_size"], 6);
}

#[test]
fn analyze_error_exit_codes() {
    let bad = run(&["analyze", "--n", "7", "--j", "0,1,3", "--p", "2"]);
    assert_eq!(bad.status.code(), Some(6));
    assert!(stderr(&bad).contains("bad prime"));

    let zero = run(&["analyze", "--n", "9", "--j", "0,1,4", "--p", "5"]);
    assert_eq!(zero.status.code(), Some(7));

    let (v, code) = json(&["analyze", "--n", "9", "--j", "0,1,4", "--p", "5"]);
    assert_eq!(code, 7);
    assert_eq!(v["exit_code"], 7);

    assert_eq!(run(&["analyze", "--n", "7", "--j", "0,1,9", "--p", "3"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--n", "7", "--j", "0,1,3"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--n", "7", "--j", "0,1,3", "--p", "4"]).status.code(), Some(2));
}

#[test]
fn defining_set_parsing_warns_and_normalizes() {
    let out = run(&["badprimes", "--n", "7", "--j", "3,1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning"));
    assert!(stdout(&out).contains("J={0,1,3}"));

    let (a, _) = json(&["badprimes", "--n", "8", "--j", "0..=2"]);
    let (b, _) = json(&["badprimes", "--n", "8", "--j", "0,1,2"]);
    assert_eq!(a["verdicts"], b["verdicts"]);
}

#[test]
fn reproduce_tables_exit_cleanly() {
    for table in ["T1", "T3", "T6"] {
        let (v, code) = json(&["reproduce", table]);
        assert_eq!(code, 0, "{table}");
        assert_eq!(v["all_match"], true, "{table}");
        assert!(v["mismatched_rows"].as_array().unwrap().is_empty());
    }
}

#[test]
fn chebotarev_counts() {
    let (v, code) = json(&["chebotarev", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["submatrices"], "251");
    assert_eq!(v["passed"], true);
    assert_eq!(run(&["chebotarev", "12"]).status.code(), Some(2));
}

#[test]
fn lift_recovers_generator() {
    let out = run(&["lift", "--n", "7", "--j", "0,1,3", "--p", "29"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("35/35"));
    assert!(text.contains("lift equals G: true"));
}
