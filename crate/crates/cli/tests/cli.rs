use std::path::Path;
use std::process::{Command, Output};

fn poromech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poromech")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// The terzaghi preset on a coarse mesh, stopped at the second plot time.
fn short_terzaghi(dir: &Path, edit: impl Fn(String) -> String) -> String {
    let text = stdout(&poromech(&["presets", "show", "terzaghi"]));
    let mut out = String::new();
    for line in text.lines() {
        let line = match line.split_once(" = ") {
            Some(("ny", _)) => "ny = 10".to_string(),
            Some(("output_times", v)) => format!("output_times = {}", v.split(", ").take(2).collect::<Vec<_>>().join(", ")),
            Some(("t_end", _)) => {
                let t2 = text.lines().find_map(|l| l.strip_prefix("output_times = ")).unwrap().split(", ").nth(1).unwrap();
                format!("t_end = {t2}")
            }
            _ => line.to_string(),
        };
        out.push_str(&line);
        out.push('\n');
    }
    let path = dir.join("case.cfg");
    std::fs::write(&path, edit(out)).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn presets_are_listed() {
    let o = poromech(&["presets", "list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for name in ["terzaghi", "mandel", "vdw_injection", "vdw_injection_285", "vdw_injection_320", "two_gas", "unsaturated"] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name} missing from\n{text}");
    }
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_terzaghi(dir.path(), |t| t);
    let out = dir.path().join("out");
    let o = poromech(&["run", &cfg, "--out", out.to_str().unwrap(), "--dt", "20"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("L2 error at t")).count(), 2);
    for file in ["steps.csv", "probes.csv", "profile_000.csv", "profile_001.csv", "fields_000.vtk", "fields_001.vtk"] {
        assert!(out.join(file).is_file(), "{file}");
    }
}

#[test]
fn refinement_multiplies_the_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_terzaghi(dir.path(), |t| t);
    let out = dir.path().join("out");
    let o = poromech(&["run", &cfg, "--out", out.to_str().unwrap(), "--dt", "40", "--refine", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let profile = std::fs::read_to_string(out.join("profile_000.csv")).unwrap();
    assert_eq!(profile.lines().count(), 1 + 21);
}

#[test]
fn missing_file_is_a_validation_failure() {
    let o = poromech(&["run", "/nonexistent/case.cfg"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("/nonexistent/case.cfg"));
}

#[test]
fn bad_fractions_are_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_terzaghi(dir.path(), |t| t.replace("phi0 = 0.375", "phi0 = 0.275"));
    let o = poromech(&["run", &cfg]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("phi0"));
}

#[test]
fn misspelled_key_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_terzaghi(dir.path(), |t| t.replace("lambda = ", "lamda = "));
    let text = std::fs::read_to_string(&cfg).unwrap();
    let line = text.lines().position(|l| l.starts_with("lamda")).unwrap() + 1;
    let o = poromech(&["run", &cfg]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains(&format!("line {line}")), "{}", stderr(&o));
}

#[test]
fn zero_time_step_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_terzaghi(dir.path(), |t| t);
    assert_eq!(code(&poromech(&["run", &cfg, "--dt", "0"])), 2);
}

#[test]
fn crushing_load_is_a_solver_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_terzaghi(dir.path(), |t| t.replace("traction = 0, -10000", "traction = 0, -1e9"));
    let o = poromech(&["run", &cfg]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("terzaghi"));
}

#[test]
fn verify_terzaghi_passes() {
    let o = poromech(&["verify", "terzaghi"]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS L2 error")).count(), 4);
    assert!(text.contains("verification passed"));
}

#[test]
fn unknown_benchmark_is_rejected() {
    let o = poromech(&["verify", "biot"]);
    assert_eq!(code(&o), 2);
}
