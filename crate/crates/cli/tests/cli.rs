use std::process::{Command, Output};

use serde_json::Value;

fn hhgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhgap")).args(args).output().expect("spawn hhgap")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn corpus_listing_matches_golden() {
    let o = hhgap(&["corpus"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("corpus.txt"));
}

#[test]
fn zsqrt2_homology_through_five() {
    let o = hhgap(&["hh", "--algebra", "corpus:zsqrt2", "--max-degree", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out, golden("zsqrt2_hh5.json"));
    let v: Value = serde_json::from_str(&out).unwrap();
    let modules: Vec<&str> = v["results"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["descriptor"]["module"].as_str().unwrap())
        .collect();
    assert_eq!(modules, ["Z^2", "Z/2 + Z/4", "0", "Z/2 + Z/4", "0", "Z/2 + Z/4"]);
}

#[test]
fn campillo_deviations() {
    let o = hhgap(&["deviations", "--algebra", "corpus:campillo", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out, golden("campillo_deviations.json"));
    let v: Value = serde_json::from_str(&out).unwrap();
    let d = &v["results"]["deviations"][0];
    assert_eq!((d["eps2"].as_u64(), d["eps3"].as_u64()), (Some(1), Some(1)));
}

#[test]
fn smooth_check_exit_codes() {
    let o = hhgap(&["smooth-check", "--algebra", "corpus:qx_poly", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"]["outcome"], "smooth-certified");

    let o = hhgap(&["smooth-check", "--algebra", "corpus:dual_numbers_q", "--max-degree", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("outcome: criterion-not-met"));
}

#[test]
fn interval_override_never_certifies() {
    let o = hhgap(&[
        "smooth-check",
        "--algebra",
        "corpus:zsqrt2",
        "--interval-override",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"]["outcome"], "criterion-not-met");
    assert_ne!(v["results"]["experimental"]["outcome"], "smooth-certified");
}

#[test]
fn json_output_is_deterministic() {
    let args = ["hcoh", "--algebra", "corpus:qxy_poly", "--max-degree", "3", "--hkr", "--format", "json"];
    let a = hhgap(&args);
    let b = hhgap(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("elapsed"));
}

#[test]
fn parse_errors_carry_position() {
    let dir = std::env::temp_dir().join(format!("hhgap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    std::fs::write(&path, "ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2 +* 1\"]\n").unwrap();
    let o = hhgap(&["hh", "--algebra", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3, column 20"), "{err}");
}

#[test]
fn oracle_rejects_integral_algebras() {
    let o = hhgap(&["oracle", "--algebra", "corpus:zsqrt2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = hhgap(&["oracle", "--algebra", "corpus:etale", "--max-degree", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"]["homology"], serde_json::json!([2, 0, 0, 0, 0]));
}

#[test]
fn closedness_for_campillo() {
    let o = hhgap(&["closed", "--algebra", "corpus:campillo", "--cutoff", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let certs = v["results"]["certificates"].as_array().unwrap();
    assert_eq!(certs[0]["closed"], true);
    assert_eq!(certs[1]["closed"], false);
}

#[test]
fn corpus_verify_passes() {
    let o = hhgap(&["corpus", "--verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for e in v["results"]["entries"].as_array().unwrap() {
        assert_eq!(e["verified"], true, "{}", e["name"]);
    }
}
