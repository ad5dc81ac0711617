use std::process::{Command, Output};

use serde_json::Value;

fn pftl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pftl")).args(args).env_remove("PFTL_PREC_BITS").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    serde_json::from_str(&stdout(&pftl(&all))).expect("valid JSON")
}

#[test]
fn field_descriptor_for_a_non_squarefree_radicand() {
    let doc = json(&["field", "--d", "3", "--a", "150"]);
    let keys: Vec<&String> = doc.as_object().unwrap().keys().take(2).collect();
    assert_eq!(keys, ["schema", "command"]);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["parts"], serde_json::json!([6, 5]));
    assert_eq!(doc["discriminant"]["lower"], 900);
    assert_eq!(doc["discriminant"]["exact"], 24300);
    assert_eq!(doc["ramified_primes"], serde_json::json!([2, 3, 5]));
}

#[test]
fn invalid_configurations_exit_with_code_two() {
    for args in [
        &["field", "--d", "4", "--a", "2"][..],
        &["field", "--d", "3", "--a", "1"],
        &["field", "--d", "3", "--a", "8", "--json"],
        &["field", "--d", "3", "--a", "2", "--csv"],
        &["bounds", "--d", "3", "--a", "2", "--ell", "0"],
        &["fdl-family", "--d", "5", "--ell", "2", "--a-max", "10"],
        &["primes", "--d", "3", "--a", "2", "--delta", "1/4", "--eps", "1/2"],
        &["enumerate", "--d", "3", "--a", "2", "--X", "-1"],
        &["enumerate", "--d", "3", "--a", "2", "--X", "2", "--workers", "0"],
        &["field", "--d", "3", "--a", "2", "--json", "--csv"],
        &["nonsense"],
    ] {
        let out = pftl(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
    }
}

#[test]
fn precision_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pftl")).args(["field", "--d", "3", "--a", "2"]).env("PFTL_PREC_BITS", "8").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out =
        Command::new(env!("CARGO_BIN_EXE_pftl")).args(["field", "--d", "3", "--a", "2", "--json"]).env("PFTL_PREC_BITS", "512").output().unwrap();
    assert!(out.status.success());
}

#[test]
fn work_limit_exits_with_code_three() {
    let out = pftl(&["enumerate", "--d", "3", "--a", "2", "--X", "300", "--limit", "100"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_csv_has_exact_rationals() {
    let text = stdout(&pftl(&["bounds", "--d", "3", "--a", "2", "--ell", "1", "--csv"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,lo,hi,lo_f64,hi_f64"));
    let hbd = text.lines().find(|l| l.starts_with("HBD,")).expect("HBD row");
    assert!(hbd.starts_with("HBD,1/6,1/6,"), "{hbd}");
    let sil = stdout(&pftl(&["bounds", "--d", "3", "--a", "2", "--ell", "3", "--csv"]));
    assert!(sil.lines().any(|l| l.starts_with("SilHB,5/12,5/12,")), "{sil}");
    assert!(sil.lines().any(|l| l.starts_with("HBD,7/18,7/18,")), "{sil}");
}

#[test]
fn family_rows_use_the_least_admissible_partner() {
    let text = stdout(&pftl(&["fdl-family", "--d", "3", "--ell", "3", "--a-max", "6", "--csv"]));
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rows.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[..4], ["A_top", "A_1", "a", "eta"]);
    let records: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    let five = records.iter().find(|r| &r[0] == "5").expect("A_top = 5 row");
    assert_eq!((&five[1], &five[2], &five[3]), ("6", "150", "6"));
    assert_eq!(&five[5], "24300");
    // A_top = 1 has no partner other than 1 and A_top = 4 is not squarefree
    assert!(records.iter().all(|r| &r[0] != "1" && &r[0] != "4"));
    assert!(records.iter().all(|r| &r[10] == "true" && &r[11] == "true"));
}

#[test]
fn primes_and_enumeration_defaults() {
    let text = stdout(&pftl(&["primes", "--d", "3", "--a", "2", "--delta", "1/2", "--eps", "1/10"]));
    assert!(text.contains("# count 1"), "{text}");
    let doc = json(&["primes", "--d", "3", "--a", "2", "--delta", "1/2", "--eps", "1/10"]);
    assert_eq!(doc["command"], "primes");

    let out = pftl(&["enumerate", "--d", "3", "--a", "2", "--X", "5/2"]);
    let text = stdout(&out);
    let elements: Vec<&str> = text.lines().collect();
    assert_eq!(elements, ["-t", "t", "-t^2/2", "t^2/2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("count in [4, 4]"));
}

#[test]
fn growth_and_mkl() {
    let text = stdout(&pftl(&["growth", "--d", "3", "--a", "2", "--X", "2,3", "--csv"]));
    assert_eq!(text, "X,count,ambiguous\n2,0,0\n3,4,0\n");
    let several = stdout(&pftl(&["growth", "--d", "3", "--a", "2,3", "--X", "3", "--csv"]));
    assert!(several.starts_with("a,X,count,ambiguous\n"), "{several}");

    let doc = json(&["mkl", "--d", "3", "--a", "2", "--ell", "3", "--X", "2,3"]);
    assert_eq!(doc["argmin"], "2");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    assert_eq!(doc["rows"][1]["count"], 4);
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["enumerate", "--d", "3", "--a", "12", "--X", "6", "--json"];
    let first = pftl(&args);
    let again = pftl(&[&args[..], &["--workers", "1"]].concat());
    let wide = pftl(&[&args[..], &["--workers", "7"]].concat());
    assert!(first.status.success());
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(first.stdout, wide.stdout);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("pftl-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bounds.json");
    let out = pftl(&["bounds", "--d", "5", "--a", "6", "--ell", "2", "--json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["command"], "bounds");
    std::fs::remove_dir_all(&dir).unwrap();
}
