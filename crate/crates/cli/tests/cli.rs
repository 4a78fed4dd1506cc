use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn rinf(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rinf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

#[test]
fn present_sphere_two_two() {
    let out = rinf(&["present", "--surface", "sphere:2", "--strands", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["relators"].as_array().unwrap().len(), 2);
}

#[test]
fn classify_small_sphere_group() {
    let out = rinf(&["classify", "--surface", "o:0,0", "--strands", "3", "--flavor", "pure"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "No");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.last().unwrap()["rule"], "FiniteGroupNo");
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("{\"verdict\""));
}

#[test]
fn goldberg_verify_requires_verified() {
    let out = rinf(&["goldberg-verify", "--surface", "o:1,1", "--strands", "2", "--require-verified"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"]["kind"], "Verified");

    let starved = ["goldberg-verify", "--surface", "o:1,1", "--strands", "2", "--kb-max-rules", "3"];
    let out = rinf(&starved, None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"]["kind"], "Unverified");
    let mut strict = starved.to_vec();
    strict.push("--require-verified");
    let out = rinf(&strict, None);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"]["kind"], "Unverified");
}

#[test]
fn present_output_feeds_abelianize_and_kb_complete() {
    let present = rinf(&["present", "--surface", "o:1,1", "--strands", "1"], None);
    let text = String::from_utf8(present.stdout).unwrap();
    let ab = rinf(&["abelianize"], Some(&text));
    assert_eq!(ab.status.code(), Some(0));
    let v = json(&ab);
    assert_eq!(v["free_rank"], 2);
    assert_eq!(v["torsion"], serde_json::json!([]));
    let kb = rinf(&["kb-complete"], Some(&text));
    assert_eq!(kb.status.code(), Some(0));
    let v = json(&kb);
    assert_eq!(v["status"], "complete");
    assert_eq!(v["confluent"], true);
}

#[test]
fn kb_exhaustion_is_data_unless_required() {
    let input = r#"{"generators":["a","b","c"],"relators":["a^-1 b^-1 a b","c^2","b^-1 c^-1 b c"]}"#;
    let out = rinf(&["kb-complete", "--max-rule-length", "8"], Some(input));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "exhausted");
    assert_eq!(json(&out)["dimension"], "max_rule_length");
    let out = rinf(&["kb-complete", "--max-rule-length", "8", "--require-verified"], Some(input));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn enumerate_and_overflow() {
    let out = rinf(&["enumerate"], Some(r#"{"generators":["a","b"],"relators":["a^3","b^4","b^-1 a b a"]}"#));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 12);
    assert_eq!(v["group"]["order"], 12);
    let out = rinf(&["enumerate", "--max-cosets", "1000"], Some(r#"{"generators":["a"]}"#));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "overflow");
}

#[test]
fn reidemeister_modes() {
    let out = rinf(&["reidemeister", "--matrix", "[[3,0],[0,-2]]"], None);
    assert_eq!(json(&out)["R"], 6);
    assert_eq!(json(&out)["method"], "abelian");
    let out = rinf(&["reidemeister", "--matrix", "[[1]]"], None);
    assert_eq!(json(&out)["R"], "inf");
    let z3 = r#"{"order":3,"table":[[0,1,2],[1,2,0],[2,0,1]],"identity":0}"#;
    let out = rinf(&["reidemeister", "--group", z3, "--endo", "[0,2,1]"], None);
    assert_eq!(json(&out)["R"], 1);
    assert_eq!(json(&out)["method"], "orbit");
    let f2 = r#"{"generators":["x","y"]}"#;
    let out = rinf(&["reidemeister", "--presentation", f2, "--images", r#"["y","y^-1 x y"]"#], None);
    assert_eq!(json(&out)["R"], "inf");
    assert_eq!(json(&out)["method"], "certificate");
}

#[test]
fn census_bound() {
    let endo = r#"{"generators":["x"],"images":["x^-1"]}"#;
    let out = rinf(&["census", "--endo", endo, "--max-length", "3", "--max-witness", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["upper_bound"].as_u64().unwrap() >= 2);
}

#[test]
fn table_matches_headline_cells() {
    let out = rinf(&["table", "--max-g", "1", "--max-p", "3", "--max-n", "4"], None);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    let row = |g: u64, p: u64| rows.iter().find(|r| r["g"] == g && r["p"] == p).unwrap();
    assert_eq!(row(0, 0)["pure"], serde_json::json!(["No", "No", "No", "Yes"]));
    assert_eq!(row(0, 3)["full"], serde_json::json!(["Yes", "Yes", "Yes", "Yes"]));
    assert_eq!(row(1, 1)["pure"], serde_json::json!(["Yes", "Unknown", "Unknown", "Unknown"]));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        vec!["present", "--surface", "bogus", "--strands", "2"],
        vec!["present", "--surface", "o:0,0", "--strands", "2"],
        vec!["classify", "--surface", "n:1,1", "--strands", "2"],
        vec!["reidemeister", "--matrix", "[[1,2]]"],
        vec!["goldberg-verify", "--surface", "o:2,0", "--strands", "2"],
    ] {
        let out = rinf(&args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    let out = rinf(&["abelianize"], Some("{not json"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_indentable() {
    let args = ["goldberg-verify", "--surface", "n:1,2", "--strands", "2"];
    let a = rinf(&args, None);
    let b = rinf(&args, None);
    assert_eq!(a.stdout, b.stdout);
    let pretty = rinf(&["--json-indent", "4", "classify", "--surface", "o:2,1", "--strands", "2"], None);
    let text = String::from_utf8(pretty.stdout).unwrap();
    assert!(text.contains("\n    \"trace\""));
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap()["verdict"], "Yes");
}
