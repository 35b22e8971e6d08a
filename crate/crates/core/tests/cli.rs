//! End-to-end runs of the `qpmshg` binary.

use std::path::Path;
use std::process::{Command, Output};

fn qpmshg(config: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpmshg"))
        .arg(config)
        .args(extra)
        .env("RUST_LOG", "warn")
        .output()
        .expect("spawn qpmshg")
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

const MODES: &str = r#"
command = "modes"
[modes]
lambda_nm = 800.0
polarizations = ["TE"]
count = 2
profile = ["TE00"]
"#;

#[test]
fn bad_configs_exit_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["", "command = \"modes\"\nbogus = 1\n", "command = \"scan\"\n"] {
        let cfg = write_config(dir.path(), text);
        let out = qpmshg(&cfg, &[]);
        assert_eq!(out.status.code(), Some(2), "{text:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        let record: serde_json::Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
        assert_eq!(record["error"]["kind"], "config");
    }
}

#[test]
fn oracle_command_writes_its_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "command = \"oracle\"\n");
    let out_dir = dir.path().join("out");
    let out = qpmshg(&cfg, &["--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("oracle.json")).unwrap()).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["command"], "oracle");
}

#[test]
fn cache_and_thread_count_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MODES);
    let run = |name: &str, extra: &[&str]| {
        let out_dir = dir.path().join(name);
        let mut args = vec!["--out", out_dir.to_str().unwrap()];
        args.extend_from_slice(extra);
        let out = qpmshg(&cfg, &args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (
            std::fs::read(out_dir.join("modes.json")).unwrap(),
            std::fs::read(out_dir.join("profile.csv")).unwrap(),
        )
    };
    let fresh = run("a", &["--no-cache", "--threads", "1"]);
    let cold = run("b", &["--threads", "4"]);
    let warm = run("b", &["--threads", "4"]);
    assert_eq!(fresh, cold);
    assert_eq!(cold, warm);
}

#[test]
fn command_line_overrides_the_configured_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MODES);
    let out_dir = dir.path().join("o");
    let out = qpmshg(&cfg, &["--command", "oracle", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("oracle.json").exists());
    assert!(!out_dir.join("modes.json").exists());
}
