//! End-to-end tests of the binary: formats, exit codes, determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ryser"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_design(dir: &Path, name: &str, catalog_name: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let status = bin()
        .args(["build", "--name", catalog_name, "-o"])
        .arg(&path)
        .status()
        .expect("build runs");
    assert_eq!(status.code(), Some(0));
    path
}

#[test]
fn catalog_lists_builtins() {
    let output = run(&["catalog"]);
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("fano: v=7 k=3 lambda=1"));
    assert!(stdout.lines().count() >= 6);
}

#[test]
fn build_from_difference_set_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fano.des");
    let status = bin()
        .args(["build", "--ds", "7:1,2,4", "-o"])
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "v=7\n1 2 4\n2 3 5\n3 4 6\n0 4 5\n1 5 6\n0 2 6\n0 1 3\n");
    // reparse and reserialize: canonical form is a fixed point
    let rebuilt = ryser::IncidenceStructure::parse(&text).unwrap();
    assert_eq!(rebuilt.to_des_string(), text);
}

#[test]
fn build_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.des");
    for args in [
        vec!["build", "-o", out.to_str().unwrap()],
        vec!["build", "--name", "nonesuch", "-o", out.to_str().unwrap()],
        vec!["build", "--ds", "7;1,2,4", "-o", out.to_str().unwrap()],
        vec!["build", "--ds", "7:1,2,x", "-o", out.to_str().unwrap()],
    ] {
        let output = run(&args);
        assert_eq!(output.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_reports_kinds_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fano = write_design(dir.path(), "fano.des", "fano");
    let output = run(&["verify", "-i", fano.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&output.stdout),
        "Symmetric(k=3, lambda=1)\n"
    );

    // a structure that is not a design: invalid, exit 1
    let bad = dir.path().join("bad.des");
    std::fs::write(&bad, "v=3\n0 1\n1 2\n0 1 2\n").unwrap();
    let output = run(&["verify", "-i", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2)); // full block: parse error
    let bad2 = dir.path().join("bad2.des");
    std::fs::write(&bad2, "v=4\n0 1\n1 2\n2 3\n0 3\n").unwrap();
    let output = run(&["verify", "-i", bad2.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stdout).starts_with("Invalid("));
}

#[test]
fn missing_file_and_bad_flags_exit_2() {
    let output = run(&["verify", "-i", "/nonexistent/x.des"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["scan", "--lam-max", "2"]);
    assert_eq!(output.status.code(), Some(2)); // missing --r-max
}

#[test]
fn complement_pipeline_and_involution() {
    let dir = tempfile::tempdir().unwrap();
    let fano = write_design(dir.path(), "fano.des", "fano");
    let once = dir.path().join("r.des");
    let twice = dir.path().join("rr.des");
    let status = bin()
        .args(["complement", "-i"])
        .arg(&fano)
        .args(["--block", "3", "-o"])
        .arg(&once)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let output = run(&["verify", "-i", once.to_str().unwrap()]);
    assert_eq!(
        String::from_utf8_lossy(&output.stdout),
        "Ryser(lambda=2)\n"
    );
    let status = bin()
        .args(["complement", "-i"])
        .arg(&once)
        .args(["--block", "3", "-o"])
        .arg(&twice)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&fano).unwrap(),
        std::fs::read_to_string(&twice).unwrap()
    );

    let output = run(&[
        "complement",
        "-i",
        fano.to_str().unwrap(),
        "--block",
        "7",
        "-o",
        once.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn params_prints_profile_and_identities() {
    let dir = tempfile::tempdir().unwrap();
    let fano = write_design(dir.path(), "fano.des", "fano");
    let complemented = dir.path().join("r.des");
    bin()
        .args(["complement", "-i"])
        .arg(&fano)
        .args(["--block", "0", "-o"])
        .arg(&complemented)
        .status()
        .unwrap();
    let output = run(&["params", "-i", complemented.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout).to_string();
    assert!(stdout.contains(
        "profile: v=7 lambda=2 r1=5 r2=3 e1=3 e2=4 rho=2/1 g=2 a=1 D=0 x=1 y=1"
    ));
    assert!(stdout.contains("block 0: size=3 t=-1 tau1=3 tau2=0"));
    assert!(stdout.contains("identities: 23 pass, 0 fail"));

    // params on a symmetric design is a check failure
    let output = run(&["params", "-i", fano.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn invert_passes_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let fano = write_design(dir.path(), "fano.des", "fano");
    let complemented = dir.path().join("r.des");
    bin()
        .args(["complement", "-i"])
        .arg(&fano)
        .args(["--block", "0", "-o"])
        .arg(&complemented)
        .status()
        .unwrap();
    let output = run(&["invert", "-i", complemented.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout).to_string();
    assert!(stdout.contains("gram identities: pass"));
    assert!(stdout.contains("determinant: closed=576 direct=576 pass"));
    assert!(stdout.contains("inverse matches elimination: pass"));

    let dumped = run(&["invert", "-i", complemented.to_str().unwrap(), "--dump"]);
    assert_eq!(dumped.status.code(), Some(0));
    let dump = String::from_utf8_lossy(&dumped.stdout).to_string();
    // 7 matrix rows follow the report lines
    assert_eq!(dump.lines().count(), stdout.lines().count() + 7);
}

#[test]
fn classify_json_mode() {
    let dir = tempfile::tempdir().unwrap();
    let fano = write_design(dir.path(), "fano.des", "fano");
    let complemented = dir.path().join("r.des");
    bin()
        .args(["complement", "-i"])
        .arg(&fano)
        .args(["--block", "0", "-o"])
        .arg(&complemented)
        .status()
        .unwrap();
    let output = run(&["classify", "-i", complemented.to_str().unwrap(), "--json"]);
    assert_eq!(output.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("valid JSON");
    assert_eq!(value["v"], 7);
    assert_eq!(value["D"], 0);
    assert_eq!(value["type1_by_columns"], "yes");
    assert_eq!(value["all_pass"], true);

    // a symmetric design cannot be classified: exit 1
    let output = run(&["classify", "-i", fano.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn scan_table_and_json_agree() {
    let table = run(&["scan", "--lam-max", "3", "--r-max", "6", "--type1-only"]);
    assert_eq!(table.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&table.stdout).to_string();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("v lambda r D rho e1 e2 x y conjecture"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().any(|r| r.starts_with("11 3 2 0 3/2 ")));
    assert!(rows.iter().any(|r| r.starts_with("13 3 6 0 3/1 ")));

    let json = run(&[
        "scan", "--lam-max", "3", "--r-max", "6", "--type1-only", "--json",
    ]);
    let json_lines: Vec<String> = String::from_utf8_lossy(&json.stdout)
        .lines()
        .map(str::to_string)
        .collect();
    assert_eq!(json_lines.len(), rows.len());
    for line in &json_lines {
        let value: serde_json::Value = serde_json::from_str(line).expect("valid JSON");
        assert!(value["lambda"].as_i64().unwrap() <= 3);
        let d = value["D"].as_i64().unwrap();
        assert!(d == 0 || d == -1);
    }

    // byte-identical across repeated runs
    let rerun = run(&["scan", "--lam-max", "3", "--r-max", "6", "--type1-only"]);
    assert_eq!(table.stdout, rerun.stdout);
}
