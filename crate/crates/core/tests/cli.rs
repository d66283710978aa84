use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const TRIVIAL: &str = r#"{"field":{"kind":"rational"},"d":0,"theta":["0/1"],"theta_star":["0/1"],"varphi":[],"phi":[]}"#;
const NON_SELF_DUAL: &str =
    r#"{"field":{"kind":"prime","p":7},"d":1,"theta":[0,1],"theta_star":[0,2],"varphi":[1],"phi":[3]}"#;
const SELF_DUAL: &str =
    r#"{"field":{"kind":"prime","p":7},"d":1,"theta":[0,1],"theta_star":[0,1],"varphi":[1],"phi":[2]}"#;

fn leonard(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_leonard"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("JSON document")
}

fn failed_checks(report: &Value) -> Vec<String> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn verify_passes_on_trivial_system() {
    let out = leonard(&["verify"], TRIVIAL);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out.stdout)["pass"], true);
}

#[test]
fn dualize_self_dual() {
    let out = leonard(&["dualize", "--require-self-dual"], SELF_DUAL);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = json(&out.stdout);
    assert_eq!(doc["self_dual"], true);
    assert_eq!(doc["report"]["pass"], true);
}

#[test]
fn dualize_non_self_dual_fails_intertwining() {
    let out = leonard(&["dualize"], NON_SELF_DUAL);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out.stdout);
    assert_eq!(doc["self_dual"], false);
    assert!(failed_checks(&doc["report"]).contains(&"a_t_equals_t_a_star".to_string()));

    let out = leonard(&["dualize", "--require-self-dual"], NON_SELF_DUAL);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stderr)["error"], "NotSelfDual");
}

#[test]
fn malformed_input_exits_two() {
    for input in ["{", r#"{"field":{"kind":"rational"},"d":1}"#] {
        let out = leonard(&["verify"], input);
        assert_eq!(out.status.code(), Some(2));
        let err = json(&out.stderr);
        assert!(err["error"].is_string() && err["message"].is_string());
    }
    let repeated = r#"{"field":{"kind":"prime","p":7},"d":1,"theta":[1,1],"theta_star":[0,2],"varphi":[1],"phi":[3]}"#;
    assert_eq!(leonard(&["verify"], repeated).status.code(), Some(2));
}

#[test]
fn relatives_are_an_orbit() {
    let out = leonard(&["relatives"], NON_SELF_DUAL);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out.stdout);
    let map = doc.as_object().unwrap();
    assert_eq!(map.len(), 8);
    assert_eq!(map["id"], json(NON_SELF_DUAL.as_bytes()));

    let starred = serde_json::to_string(&map["*"]).unwrap();
    let back = json(&leonard(&["relatives"], &starred).stdout);
    assert_eq!(back["*"], json(NON_SELF_DUAL.as_bytes()));
}

#[test]
fn bases_verb() {
    let out = leonard(&["bases"], NON_SELF_DUAL);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out.stdout);
    assert_eq!(doc["bases"].as_array().unwrap().len(), 24);
    assert_eq!(doc["report"]["pass"], true);
}

#[test]
fn matrix_of_t_is_the_same_in_all_four_bases() {
    let mut matrices = Vec::new();
    for basis in ["etastar-v0", "eta-vstar0", "taustar-vd", "tau-vstard"] {
        let out = leonard(&["matrix-of-t", "--basis", basis], SELF_DUAL);
        assert_eq!(out.status.code(), Some(0));
        let doc = json(&out.stdout);
        assert_eq!(doc["matrix"], doc["expected"]);
        matrices.push(doc["matrix"].clone());
    }
    assert!(matrices.windows(2).all(|w| w[0] == w[1]));
    for basis in ["tau-vstar0", "nonsense"] {
        let out = leonard(&["matrix-of-t", "--basis", basis], SELF_DUAL);
        assert_eq!(out.status.code(), Some(2));
        assert_eq!(json(&out.stderr)["error"], "UnknownBasis");
    }
}

#[test]
fn search_emits_certified_json_lines() {
    let out = leonard(&["search", "--field", "prime:7", "--d", "1", "--self-dual", "--limit", "3"], "");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in lines {
        let verified = leonard(&["dualize", "--require-self-dual"], line);
        assert_eq!(verified.status.code(), Some(0));
    }

    let out = leonard(&["search", "--field", "prime:2", "--d", "1"], "");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["error"], "InvalidConfig");
}

#[test]
fn files_for_input_and_output() {
    let dir = std::env::temp_dir().join(format!("leonard-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("array.json");
    let output = dir.join("report.json");
    std::fs::write(&input, TRIVIAL).unwrap();
    let out = leonard(
        &["verify", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(json(&std::fs::read(&output).unwrap())["pass"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}
