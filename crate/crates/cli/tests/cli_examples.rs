use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

fn corpus(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("corpus");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn suture(args: &[&str], stdin: Option<&str>) -> (i32, Value, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_suture"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn product_pair_is_diagonal() {
    let (code, v, _) = suture(&["find-primitive-pair", &corpus("product_g2.json")], None);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "verified");
    assert_eq!(v["result"]["c_plus"], serde_json::json!(["1", "0", "0", "0"]));
    assert_eq!(v["result"]["c_minus"], v["result"]["c_plus"]);
    assert_eq!(v["result"]["multiplier"], "1");
}

#[test]
fn unit_tower_is_z() {
    let (code, v, _) = suture(&["tower", "--f", "1", "--depth", "5"], None);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["hfplus_is_z"], true);
    let (code, _, _) = suture(&["tower", &corpus("tower_2u.json")], None);
    assert_eq!(code, 1);
}

#[test]
fn stdin_input() {
    let doc = r#"{"primes": ["3", 5], "residues": [[2], ["4"]]}"#;
    let (code, v, _) = suture(&["crt-lift", "-"], Some(doc));
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["command"], "crt-lift");
}

#[test]
fn invalid_inputs_exit_two() {
    let (code, v, err) = suture(&["lagrangian-check", &corpus("empty.json")], None);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "invalid");
    assert!(err.starts_with("error:"));

    let (code, v, _) = suture(&["lagrangian-check", &corpus("malformed.json")], None);
    assert_eq!(code, 2);
    assert!(v["error"]["line"].is_string());

    let (code, _, _) = suture(&["crt-lift", "-"], Some(r#"{"primes": [3.0], "residues": [[1]]}"#));
    assert_eq!(code, 2);
}

#[test]
fn strict_rejects_unknown_keys() {
    let path = corpus("unknown_key.json");
    let (lenient, _, _) = suture(&["lagrangian-check", &path], None);
    let (strict, _, _) = suture(&["--strict", "lagrangian-check", &path], None);
    assert_eq!((lenient, strict), (0, 2));
}

#[test]
fn every_field_agrees_on_product() {
    let (code, v, _) = suture(&["--field", "all", "lagrangian-check", &corpus("product_g2.json")], None);
    assert_eq!(code, 0, "{v}");
}
