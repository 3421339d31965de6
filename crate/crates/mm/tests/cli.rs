use std::process::Command;

use serde_json::Value;

fn mm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mm")).args(args).env("MM_THREADS", "1").output().expect("run mm")
}

#[test]
fn verify_writes_json_and_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let (j, m) = (dir.path().join("out.json"), dir.path().join("out.md"));
    let out = mm(&["verify", "lemma", "--json", j.to_str().unwrap(), "--md", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(v["suite"], "lemma");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    assert!(std::fs::read_to_string(&m).unwrap().starts_with("# Suite `lemma`: PASS"));
}

#[test]
fn exit_codes() {
    assert_eq!(mm(&["verify", "lemma", "--inject-fault"]).status.code(), Some(1));
    assert_eq!(mm(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(mm(&["modcoh", "hdr", "--y", "2*(t"]).status.code(), Some(2));
}

#[test]
fn modcoh_hdr_reports_dims_and_oracle() {
    let out = mm(&["modcoh", "hdr", "--y", "2*(t)", "--z", "3*inf"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dims"]["total"], 3);
    assert_eq!(v["oracle"], 3);
    assert_eq!(v["dims"]["u"], 1);
    assert_eq!(v["dims"]["v"], 2);
}

#[test]
fn nori_end_matches_field_degree() {
    let out = mm(&["nori", "end", "--field", "-2,0,0,1", "--nmax", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["end_dim"], 3);
    assert_eq!(v["degree"], 3);
}

#[test]
fn laumon_compat_runs() {
    let out = mm(&["laumon", "compat", "--y", "2*(t)+(t-1)", "--z", "2*inf"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["oracle"], v["graded"]["total"]);
}
