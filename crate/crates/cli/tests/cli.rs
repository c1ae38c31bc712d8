//! Behavioral tests of the `canext` binary: exit codes, determinism,
//! environment overrides, and the file formats spoken by the subcommands.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

static STAMP: AtomicU32 = AtomicU32::new(0);

fn scratch(tag: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"))
        .join(format!("{tag}-{}", STAMP.fetch_add(1, Ordering::Relaxed)));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn canext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canext"))
        .args(args)
        .env_remove("CANEXT_SEED")
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

#[test]
fn passing_run_exits_zero_with_an_all_pass_report() {
    let out = canext(&["ba", "--atoms", "2", "--samples", "50", "--seed", "3"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"].as_bool().unwrap()));
}

#[test]
fn failing_run_exits_one() {
    let out = canext(&[
        "--mutant",
        "s-dependent-alpha",
        "bal",
        "--dim",
        "1",
        "--samples",
        "20",
    ]);
    assert_eq!(exit_code(&out), 1);
    let doc = stdout_json(&out);
    let failed: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| !c["pass"].as_bool().unwrap())
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"shift-choice-irrelevant"), "{failed:?}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(exit_code(&canext(&["no-such-command"])), 2);
    assert_eq!(exit_code(&canext(&["--mutant", "bogus", "suite"])), 2);
    assert_eq!(exit_code(&canext(&["poset", "--file", "/no/such/file.json", "--op", "normalize"])), 2);
    assert_eq!(exit_code(&canext(&["bal"])), 2); // --dim is required
    let out = Command::new(env!("CARGO_BIN_EXE_canext"))
        .args(["suite"])
        .env("CANEXT_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn suite_runs_are_byte_identical() {
    let dir = scratch("determinism");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"maxAtoms":2,"maxDim":1,"samples":25,"seed":11}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let out_dir = dir.join("reports");
    let run_a = canext(&["suite", "--config", cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(exit_code(&run_a), 0);
    // snapshot the first run, then rerun with the exact same arguments
    let mut first: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            let name = e.file_name().into_string().unwrap();
            (name, std::fs::read(e.path()).unwrap())
        })
        .collect();
    first.sort();
    assert!(first.iter().any(|(name, _)| name == "summary.json"));
    let run_b = canext(&["suite", "--config", cfg, "--out", out_dir.to_str().unwrap()]);
    // stdout summaries agree byte for byte
    assert_eq!(run_a.stdout, run_b.stdout);
    // and so does every written report
    for (name, bytes) in first {
        let again = std::fs::read(out_dir.join(&name)).unwrap();
        assert_eq!(bytes, again, "report {name} differs between identical runs");
    }
}

#[test]
fn env_seed_overrides_the_config_seed() {
    let dir = scratch("env-seed");
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"maxAtoms":1,"maxDim":1,"samples":10,"seed":4}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_canext"))
        .args(["suite", "--config", cfg.to_str().unwrap()])
        .env("CANEXT_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["config"]["seed"], 123);
}

#[test]
fn replay_reproduces_a_report_byte_for_byte() {
    let dir = scratch("replay");
    let first = dir.join("first.json");
    let second = dir.join("second.json");
    let run = canext(&[
        "bal",
        "--dim",
        "2",
        "--samples",
        "30",
        "--seed",
        "6",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0);
    let replayed = canext(&[
        "replay",
        "--file",
        first.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&replayed), 0);
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );
}

#[test]
fn replay_narrows_to_a_named_check() {
    let dir = scratch("replay-narrow");
    let report = dir.join("report.json");
    canext(&[
        "ba", "--atoms", "2", "--out", report.to_str().unwrap(),
    ]);
    let out = canext(&[
        "replay",
        "--file",
        report.to_str().unwrap(),
        "--check",
        "extension-is-boolean",
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "extension-is-boolean");
    // asking for a check the instance does not produce is a usage error
    let missing = canext(&[
        "replay",
        "--file",
        report.to_str().unwrap(),
        "--check",
        "no-such-check",
    ]);
    assert_eq!(exit_code(&missing), 2);
}

#[test]
fn generated_posets_round_trip_through_export() {
    let dir = scratch("export");
    let poset = dir.join("poset.json");
    let run = canext(&[
        "generate", "--kind", "poset", "--size", "5", "--seed", "8",
        "--out", poset.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0);

    let dot = canext(&["export", "--format", "dot", "--file", poset.to_str().unwrap()]);
    assert_eq!(exit_code(&dot), 0);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph"));

    let json = canext(&["export", "--format", "json", "--file", poset.to_str().unwrap()]);
    assert_eq!(exit_code(&json), 0);
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&poset).unwrap()).unwrap();
    assert_eq!(stdout_json(&json), original);
}

#[test]
fn poset_function_normalization_and_csv() {
    let dir = scratch("posetfn");
    let file = dir.join("fn.json");
    std::fs::write(
        &file,
        r#"{"poset":{"elements":["a","b","c"],"le":[["a","b"],["a","c"]]},
            "values":{"a":"1","b":"1/2","c":"2"}}"#,
    )
    .unwrap();
    let out = canext(&["poset", "--file", file.to_str().unwrap(), "--op", "normalize"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["isNormal"], false);
    assert_eq!(doc["normalized"]["a"], "1/2");

    let csv = canext(&["export", "--format", "csv", "--file", file.to_str().unwrap()]);
    assert_eq!(exit_code(&csv), 0);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("element,value,upper,lower,normalized"));
    assert!(text.lines().count() >= 4);
}

#[test]
fn regular_opens_of_a_generated_poset() {
    let dir = scratch("ro");
    let poset = dir.join("poset.json");
    canext(&[
        "generate", "--kind", "poset", "--size", "4", "--seed", "2",
        "--out", poset.to_str().unwrap(),
    ]);
    let out = canext(&["poset", "--file", poset.to_str().unwrap(), "--op", "regular-opens"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    let count = doc["count"].as_u64().unwrap();
    assert_eq!(count, doc["regularOpens"].as_array().unwrap().len() as u64);
    // a regular open algebra always holds at least bottom and top
    assert!(count >= 2);
    assert!(count.is_power_of_two() || count > 2);
}

#[test]
fn vector_export_tabulates_the_ideal_minima() {
    let dir = scratch("vector");
    let vec_file = dir.join("v.json");
    std::fs::write(&vec_file, r#"{"dim":2,"coords":["3","1/2"]}"#).unwrap();
    let out = canext(&["export", "--format", "csv", "--file", vec_file.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ideal,value"));
    assert_eq!(lines.next(), Some("I{1},3"));
    assert_eq!(lines.next(), Some("I{2},1/2"));
    assert_eq!(lines.next(), Some("\"I{1,2}\",1/2"));
}
