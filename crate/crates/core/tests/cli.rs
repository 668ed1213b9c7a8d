use std::path::PathBuf;
use std::process::Command;

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_myopic"))
}

fn bundled(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

#[test]
fn bound_prints_the_value() {
    let out = cli()
        .args(["bound", "--m", "1", "--eps", "1", "--delta", "1", "--Delta", "1", "--L", "1", "--M0", "1", "--M1", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "366");
}

#[test]
fn a_collision_is_a_result_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli()
        .args(["sweep", "--scenario"])
        .arg(bundled("example1.scn"))
        .args(["--param", "e", "--values", "1.5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("e=1.5 mode=nominal outcome=collided"), "{text}");
    assert!(dir.path().join("e=1.5").join("summary.txt").exists());
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli()
        .args(["run", "--mode", "robust", "--seed", "7", "--scenario"])
        .arg(bundled("lti1d.scn"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("scenario=lti1d\nmode=robust\n"));
    for f in ["trajectory_true.csv", "trajectory_obs.csv", "decisions.csv", "summary.txt"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn tool_errors_exit_nonzero() {
    let out = cli().args(["run", "--scenario", "/nonexistent.scn"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));

    let out = cli()
        .args(["sweep", "--scenario"])
        .arg(bundled("example1.scn"))
        .args(["--param", "gravity", "--values", "1"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
