use assert_cmd::Command;
use flatrank::SparsePolynomial;
use serde_json::Value;

fn flatrank() -> Command {
    let mut cmd = Command::cargo_bin("flatrank").unwrap();
    cmd.env_remove("FLATRANK_SEED").env_remove("FLATRANK_PRIMES").env_remove("FLATRANK_DENSE_CAP");
    cmd
}

fn json(args: &[&str]) -> Value {
    let out = flatrank().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn catalecticant_of_h_is_full_rank() {
    let v = json(&["catalecticant", "--family", "h", "--n", "3", "--d", "4"]);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    let ranks: Vec<u64> = results.iter().map(|r| r["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [1, 3, 6, 3, 1]);
    assert!(results.iter().all(|r| r["full_rank"] == true && r["certainty"].is_string()));
}

#[test]
fn every_output_records_seed_and_primes() {
    let v = json(&["--seed", "9", "--primes", "3", "lgv", "--tuples", "[[0,1],[0,1],[2,2]]"]);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["prime_count"], 3);
    assert_eq!(v["results"]["rank"], 2);
    assert_eq!(v["results"]["distinct"], 2);
    assert_eq!(v["results"]["semidefinite"], true);
    assert_eq!(v["results"]["definite"], false);
}

#[test]
fn seed_can_come_from_the_environment() {
    let out = flatrank().env("FLATRANK_SEED", "5").args(["lgv", "--tuples", "[[1]]"]).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 5);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["--seed", "3", "sweep", "koszul", "--family", "generic", "--n", "3..4", "--k", "1..2"];
    let a = flatrank().args(args).output().unwrap();
    let b = flatrank().args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn koszul_sweep_rows_follow_parameter_order() {
    let v = json(&["sweep", "koszul", "--family", "generic", "--n", "3..4", "--k", "1..2"]);
    let rows = v["results"]["rows"].as_array().unwrap();
    let keys: Vec<(u64, u64)> = rows.iter().map(|r| (r["params"]["n"].as_u64().unwrap(), r["params"]["k"].as_u64().unwrap())).collect();
    assert_eq!(keys, [(3, 1), (3, 2), (4, 1), (4, 2)]);
    let equal: Vec<bool> = rows.iter().map(|r| r["rank_equals_bound"].as_bool().unwrap()).collect();
    assert_eq!(equal, [true, false, true, true]);
}

#[test]
fn koszul_reports_border_rank_bound_and_skew() {
    let v = json(&["koszul", "--family", "ftilde", "--n", "3", "--k", "1", "--check-skew"]);
    let r = &v["results"];
    assert_eq!(r["params"]["s"], 1);
    assert_eq!(r["params"]["q"], 1);
    assert_eq!(r["rank"], r["apriori"]);
    assert_eq!(r["skew"]["skew"], true);
    assert_eq!(r["denominator"], 2);
}

#[test]
fn shifted_partials_of_perm() {
    let v = json(&["shifted", "--family", "perm", "--m", "3", "--e", "1", "--tau", "0"]);
    assert_eq!(v["results"]["rank"], 9);
    assert_eq!(v["results"]["cols"], 45);
}

#[test]
fn csv_header_is_fixed_and_versioned() {
    let out = flatrank().args(["--format", "csv", "catalecticant", "--family", "p", "--n", "2", "--d", "3", "--e", "1"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("schema_version,command,"));
    assert!(header.ends_with(",seed,prime_count"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("1,catalecticant,,power-sum,2,3,"), "{row}");
    assert!(row.contains(",exact,"));
    assert_eq!(lines.next(), None);
}

#[test]
fn family_json_round_trips() {
    let v = json(&["family", "--family", "det", "--m", "3"]);
    let poly = SparsePolynomial::from_json(&v["results"]["polynomial"].to_string()).unwrap();
    assert_eq!(poly, flatrank::families::determinant(3).unwrap());
    assert_eq!(v["results"]["family"]["family"], "det");
}

#[test]
fn family_list_names_every_family() {
    let v = json(&["family", "--list"]);
    let names: Vec<&str> = v["results"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    for name in ["complete", "f", "ftilde", "bierman", "perm", "det", "imm", "pow", "generic"] {
        assert!(names.contains(&name), "{name}");
    }
}

#[test]
fn out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    flatrank()
        .args(["--format", "csv", "--out"])
        .arg(&path)
        .args(["lgv", "--tuples", "[[0],[3]]"])
        .assert()
        .success()
        .stdout("");
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn verify_suites_pass() {
    for suite in ["flattenings", "specializations", "lgv", "koszul"] {
        let v = json(&["--seed", "42", "verify", suite]);
        let r = &v["results"];
        assert_eq!(r["failed"], 0, "{suite}");
        assert!(r["passed"].as_u64().unwrap() > 0, "{suite}");
        assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] != "fail"));
    }
}

#[test]
fn cap_exceeded_in_verify_is_skipped_not_failed() {
    let v = json(&["--cap", "10", "verify", "flattenings"]);
    let r = &v["results"];
    assert_eq!(r["failed"], 0);
    assert!(r["skipped"].as_u64().unwrap() > 0);
}

#[test]
fn configuration_errors_exit_2() {
    flatrank().args(["catalecticant", "--family", "h", "--n", "3"]).assert().code(2);
    flatrank().args(["catalecticant", "--family", "nope", "--n", "3", "--d", "2"]).assert().code(2);
    flatrank().args(["lgv", "--tuples", "not json"]).assert().code(2);
    flatrank().args(["lgv", "--tuples", "[[1],[1,2]]"]).assert().code(2);
    flatrank().args(["--format", "csv", "family", "--family", "h", "--n", "2", "--d", "2"]).assert().code(2);
    flatrank().args(["--primes", "0", "lgv", "--tuples", "[[1]]"]).assert().code(2);
    flatrank().args(["sweep", "shifted", "--family", "perm", "--m", "2"]).assert().code(2);
    flatrank().args(["sweep", "catalecticant", "--family", "h", "--n", "2"]).assert().code(2);
    flatrank().args(["--cap", "3", "family", "--family", "h", "--n", "4", "--d", "4"]).assert().code(2);
}

#[test]
fn sweep_reports_out_of_range_cases_as_skipped() {
    let v = json(&["sweep", "koszul", "--family", "h", "--n", "1..2", "--k", "1"]);
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["status"] == "ok" || r["status"] == "skipped"));
}
