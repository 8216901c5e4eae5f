use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zerosum(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerosum")).args(args).env("ZS_CACHE", cache).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn without_timing(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v["elapsed_ms"] = Value::from(0);
    v
}

#[test]
fn davenport_prints_the_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = zerosum(&["davenport", "--n", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "7");
    let o = zerosum(&["sleq", "--n", "3"], dir.path());
    assert_eq!(stdout(&o).trim(), "7");
    // second run is served from the cache
    assert!(dir.path().join("manifest.json").exists());
    let o = zerosum(&["davenport", "--n", "4"], dir.path());
    assert_eq!(stdout(&o).trim(), "7");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(zerosum(&["davenport"], dir.path()).status.code(), Some(2));
    assert_eq!(zerosum(&["davenport", "--n", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(zerosum(&["davenport", "--n", "9"], dir.path()).status.code(), Some(3));
    assert_eq!(
        zerosum(&["verify", "casen", "--n", "3", "--s", "1", "--max-nodes", "3"], dir.path()).status.code(),
        Some(3)
    );
    assert_eq!(zerosum(&["verify", "perturbation", "--m", "4", "--lemma", "III"], dir.path()).status.code(), Some(0));
    assert_eq!(zerosum(&["verify", "perturbation", "--m", "4", "--lemma", "IV"], dir.path()).status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    for text in [r#"{"n":3,"terms":[[3,0,1]]}"#, r#"{"n":3,"terms":[[1,0,1],[1,0,1]]}"#, "{"] {
        std::fs::write(&bad, text).unwrap();
        let o = zerosum(&["classify", "--n", "3", "--file", bad.to_str().unwrap()], dir.path());
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn construct_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("exceptional.json");
    let o =
        zerosum(&["construct", "exceptional", "--n", "5", "--x", "2", "--output", file.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let o = zerosum(&["classify", "--n", "5", "--file", file.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["item1"].as_array().unwrap().is_empty());
    let item2 = v["item2"].as_array().unwrap();
    assert!(item2.iter().any(|w| w["x"] == 2 && w["a"] == 1 && w["b"] == 1 && w["c"] == 1));
}

#[test]
fn reports_do_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let suites: [&[&str]; 4] = [
        &["verify", "property-b", "--n", "4"],
        &["verify", "casen", "--n", "4", "--s", "1"],
        &["verify", "perturbation", "--m", "5", "--lemma", "I"],
        &["verify", "propbfix", "--m", "4", "--n", "2", "--samples", "500"],
    ];
    for suite in suites {
        let mut outs = Vec::new();
        for jobs in ["1", "4"] {
            let mut args = vec!["--no-cache", "--jobs", jobs];
            args.extend_from_slice(suite);
            let o = zerosum(&args, dir.path());
            assert_eq!(o.status.code(), Some(0), "{suite:?}");
            outs.push(without_timing(&stdout(&o)));
        }
        assert_eq!(outs[0], outs[1], "{suite:?}");
        assert_eq!(outs[0]["status"], "pass");
        assert!(outs[0]["config"].is_object());
    }
}

#[test]
fn replay_reproduces_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = zerosum(&["verify", "casen", "--n", "4", "--output", report.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let o = zerosum(&["replay", "--file", report.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["identical"], true);

    let mut tampered: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    tampered["counts"]["item1_only"] = Value::from(1000);
    std::fs::write(&report, tampered.to_string()).unwrap();
    let o = zerosum(&["replay", "--file", report.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["differing"], serde_json::json!(["counts"]));
}

#[test]
fn pretty_and_cache_purge() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let o = zerosum(&["--pretty", "verify", "property-c", "--n", "4"], &cache);
    let text = stdout(&o);
    assert!(text.contains("status") && text.contains("pass"), "{text}");
    let o = zerosum(&["enumerate", "--n", "2", "--length", "3"], &cache);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 1);
    assert!(cache.exists());
    let o = zerosum(&["cache", "purge"], &cache);
    assert_eq!(o.status.code(), Some(0));
    assert!(!cache.exists());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["purged"], true);
}
