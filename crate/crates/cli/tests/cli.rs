use std::process::Command;

fn flashvault() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flashvault"))
}

#[test]
fn budget_reports_engine_count() {
    let out = flashvault().args(["bench", "budget"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("power budget 41.73 mW"), "{text}");
    assert!(text.contains("engines 2 "), "{text}");
}

#[test]
fn log_run_writes_files_and_enforces_bounds() {
    let dir = std::env::temp_dir().join(format!("flashvault-cli-{}", std::process::id()));
    let out = flashvault().args(["bench", "log", "--placement", "fv", "--out-dir"]).arg(&dir).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("tamper_log.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.contains(",FV,")));
    assert!(dir.join("tamper_log.svg").exists());

    let out = flashvault().args(["bench", "log", "--placement", "cpu", "--enforce-bounds", "--out-dir"]).arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unknown_placement_fails() {
    let out = flashvault().args(["bench", "cipher", "--placement", "gpu", "--out-dir", "/nonexistent"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gpu"));
}
