use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_injstab"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("injstab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn demo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn demo_workspace_runs_clean() {
    let out = run(&["run", demo().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("module=Z/6"));
    assert!(!text.contains(" failed ") && !text.contains(" error "));
}

#[test]
fn json_report_is_byte_identical() {
    let a = scratch("a.json", "");
    let b = scratch("b.json", "");
    for p in [&a, &b] {
        let out = run(&["run", demo().to_str().unwrap(), "--seed", "9", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ra.is_empty());
    assert_eq!(ra, rb);
    let v: serde_json::Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["tasks"][0]["result"]["dim"], 1);
}

#[test]
fn input_errors_exit_with_two() {
    let bad = scratch(
        "bad.json",
        r#"{"algebras":[{"name":"L","preset":"ground_field"}],"tasks":[{"op":"hom","M":"L","X":"missing"}]}"#,
    );
    let out = run(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("$.tasks[0].X"));
    let out = run(&["run", "/nonexistent/ws.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["check", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--max-dim", "50"]).status.code(), Some(2));
}

#[test]
fn strict_turns_task_errors_into_failure() {
    let ws = scratch(
        "err.json",
        r#"{"algebras":[{"name":"L","preset":"ground_field"}],
            "modules":[{"name":"Z0","algebra":"L","side":"left","dim":0,"action":[[]]}],
            "tasks":[{"op":"splice","A":"L","ses":["Z0","L","L"],"sigma_rows":0},{"op":"hom","M":"L","X":"L"}]}"#,
    );
    let loose = run(&["run", ws.to_str().unwrap()]);
    assert_eq!(loose.status.code(), Some(0));
    let strict = run(&["run", ws.to_str().unwrap(), "--strict"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn check_command_passes() {
    let out = run(&["check", "--seed", "42", "--samples", "5", "--max-dim", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
