use std::process::{Command, Output};

use serde_json::Value;

fn ybsl21(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybsl21"))
        .args(args)
        .env_remove("YBSL21_SEED")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("every line is JSON"))
        .collect()
}

#[test]
fn recurrences_emit_reports_and_summary() {
    let out = ybsl21(&["--command", "check-recurrences", "--samples", "2", "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    let (summary, reports) = lines.split_last().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["check_name"], "recurrences");
        assert_eq!(r["status"], "pass");
        assert!(r.get("elapsed_ms").is_none());
    }
    assert_eq!(summary["summary"]["pass"], 2);
    assert_eq!(summary["summary"]["fail"], 0);
}

#[test]
fn timing_is_opt_in() {
    let out = ybsl21(&["--command", "check-recurrences", "--samples", "1", "--timing"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_lines(&out)[0]["elapsed_ms"].is_u64());
}

#[test]
fn singular_explicit_parameters_exit_2() {
    let out = ybsl21(&["--command", "check-defining", "--params", "1,2,2,0,1/2,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("regularity"));
}

#[test]
fn malformed_input_exits_2() {
    for args in [
        ["--command", "check-lax", "--params", "1,2,3"],
        ["--command", "check-lax", "--params", "1,2,x,4,5,6"],
        ["--command", "check-rll", "--weights", "1,0,1,0,1/0,2"],
    ] {
        assert_eq!(ybsl21(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn explicit_parameters_are_echoed() {
    let out = ybsl21(&["--command", "check-recurrences", "--params", "1/3,-2/5,7/4,5/7,3/2,-1/6"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    let params = lines[0]["params"].as_array().unwrap();
    assert!(params.iter().any(|p| p["name"] == "u1" && p["value"] == "1/3"));
    assert!(params.iter().any(|p| p["name"] == "v3" && p["value"] == "-1/6"));
}

#[test]
fn spectrum_prints_a_table() {
    let out = ybsl21(&["--command", "spectrum", "--samples", "1", "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    let rows = lines[0]["spectrum_table"]["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["agree"] == true));

    let text = ybsl21(&["--command", "spectrum", "--samples", "1", "--max-degree", "1", "--format", "text"]);
    let s = String::from_utf8(text.stdout).unwrap();
    assert!(s.starts_with("spectrum ["));
    assert!(s.lines().last().unwrap().ends_with("0 failed, 0 errors"));
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("ybsl21-out-{}.jsonl", std::process::id()));
    let out = ybsl21(&[
        "--command",
        "check-recurrences",
        "--samples",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written.lines().count(), 2);
}

#[test]
fn seed_changes_sampled_parameters() {
    let a = ybsl21(&["--command", "check-recurrences", "--samples", "1", "--seed", "3"]);
    let b = ybsl21(&["--command", "check-recurrences", "--samples", "1", "--seed", "4"]);
    assert_ne!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_ybsl21"))
        .args(["--command", "check-recurrences", "--samples", "1"])
        .env("YBSL21_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}
