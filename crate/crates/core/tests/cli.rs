mod common;

use std::process::{Command, Output};

fn kitchen(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_kitchen")).args(args).env("RUST_LOG", "warn").output().unwrap();
    assert!(out.status.success() || !(out.stderr.is_empty() && out.stdout.is_empty()), "{args:?} failed silently");
    out
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn selfplay_metrics_and_replay_agree() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("ledger.json");
    let script = common::fixture_path("reward_ledger.script");
    let out = kitchen(&["selfplay", "--script", script.to_str().unwrap(), "--out", log.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("final score 40  ticks 500"), "{}", stdout(&out));

    let out = kitchen(&["metrics", "--log", log.to_str().unwrap(), "--csv", "--header"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), row.len());
    let field = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(field("task_score"), "40");
    assert_eq!(field("missed"), "1");
    assert_eq!(field("wrong_serve"), "1");

    let out = kitchen(&["metrics", "--log", log.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["task_score"], 40);

    let out = kitchen(&["replay", "--log", log.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("500 ticks verified, final score 40"));
}

#[test]
fn replay_rejects_a_tampered_log() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("k.json");
    let script = common::fixture_path("key_events.script");
    assert!(kitchen(&["selfplay", "--script", script.to_str().unwrap(), "--out", log.to_str().unwrap()]).status.success());

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&log).unwrap()).unwrap();
    v["ticks"][120]["state_hash"] = "00".repeat(32).into();
    std::fs::write(&log, v.to_string()).unwrap();
    let out = kitchen(&["replay", "--log", log.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stdout(&out).contains("mismatch at tick 120"), "{}", stdout(&out));
}

#[test]
fn metrics_refuses_a_truncated_log() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("t.json");
    let script = common::fixture_path("reward_ledger.script");
    assert!(kitchen(&["selfplay", "--script", script.to_str().unwrap(), "--out", log.to_str().unwrap()]).status.success());
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&log).unwrap()).unwrap();
    v["ticks"].as_array_mut().unwrap().truncate(300);
    std::fs::write(&log, v.to_string()).unwrap();
    let out = kitchen(&["metrics", "--log", log.to_str().unwrap(), "--csv"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncated"));
}

#[test]
fn validate_with_the_mock_backend() {
    let dir = tempfile::tempdir().unwrap();
    let out = kitchen(&["validate", "--games", "2", "--tom", "on", "--backend", "mock", "--transcripts", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("mean"), "{text}");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);

    let out = kitchen(&["validate", "--games", "2", "--tom", "on", "--backend", "replay", "--transcripts", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = |t: &str| t.lines().skip_while(|l| !l.starts_with("agent ")).collect::<Vec<_>>().join("\n");
    assert_eq!(summary(&stdout(&out)), summary(&text));
}

#[test]
fn bad_arguments_fail() {
    assert!(!kitchen(&["validate", "--tom", "maybe"]).status.success());
    assert!(!kitchen(&["replay", "--log", "/nonexistent/log.json"]).status.success());
    assert!(!kitchen(&["serve", "--config", "/nonexistent/cfg.toml", "--port", "0"]).status.success());
}

#[test]
fn bundled_session_config_loads() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/session.toml");
    let cfg = coop_kitchen::session::SessionConfig::load(std::path::Path::new(path)).unwrap();
    assert_eq!(cfg.game.episode_ticks, 500);
    assert_eq!(cfg.countdown_secs, 3);
}
