//! End-to-end tests of the command-line surface: exit codes, formats,
//! reproducibility, and the dump/scale pipeline.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_olines"));
    c.env("OLINES_FIXTURES", fixtures_dir());
    c
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn gen_and_stats_fermat() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("f3.cfg");
    let out = run(&["gen", "fermat", "--k", "3", "--out", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("n=9"));

    let out = run(&["stats", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("t2=0 t3=12"), "{}", stdout(&out));
}

#[test]
fn gen_apex_point_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("a4.cfg");
    let out = run(&["gen", "fermat-apex", "--k", "4", "--out", cfg.to_str().unwrap()]);
    assert!(stdout(&out).contains("n=13"));
}

#[test]
fn gen_random_deterministic() {
    let a = run(&["gen", "random", "--n", "10", "--d", "3", "--seed", "7"]);
    let b = run(&["gen", "random", "--n", "10", "--d", "3", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    let c = run(&["gen", "random", "--n", "10", "--d", "3", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_exit_codes() {
    // Kelly on the apex fixture: pass.
    let out = run(&["verify", "kelly", "fermat_apex3.cfg"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    // Melchior on a complex configuration: inapplicable.
    let out = run(&["verify", "melchior", "hesse.cfg"]);
    assert_eq!(out.status.code(), Some(2));

    // Missing required flag: usage error.
    let out = run(&["verify", "dichotomy", "hesse.cfg"]);
    assert_eq!(out.status.code(), Some(3));

    // Unknown file: usage error.
    let out = run(&["stats", "no-such-file.cfg"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_3n2_passes_on_random() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("r24.cfg");
    run(&[
        "gen",
        "random",
        "--n",
        "24",
        "--d",
        "3",
        "--seed",
        "3",
        "--out",
        cfg.to_str().unwrap(),
    ]);
    let out = run(&["verify", "3n2", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], serde_json::json!(true));
    assert_eq!(v["statement"], serde_json::json!("3n2"));
}

#[test]
fn verify_dichotomy_bound() {
    let out = run(&[
        "verify",
        "dichotomy",
        "fermat_apex3.cfg",
        "--bstar",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["claimed"], serde_json::json!("13/3"));
    assert_eq!(v["observed"], serde_json::json!("9"));
}

#[test]
fn parse_error_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "dim 2\n1//2, 3\n").unwrap();
    let out = run(&["stats", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("line 2"), "{}", err);
}

#[test]
fn depmat_scale_pipeline_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let mat = dir.path().join("hesse.mat");
    let out = run(&[
        "depmat",
        "hesse.cfg",
        "--construction",
        "v2",
        "--out",
        mat.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let dump = std::fs::read_to_string(&mat).unwrap();
    assert!(dump.starts_with("72 9\ncyclotomic 6\n"));

    let a = run(&["scale", mat.to_str().unwrap(), "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    for field in [
        "rank_bound",
        "D",
        "E",
        "min_col_sum",
        "witness_rows",
        "witness_cols",
        "score_num",
        "score_den",
    ] {
        assert!(!v[field].is_null(), "missing field {}", field);
    }
    assert_eq!(v["converged"], serde_json::json!(true));
    // min column l2^2 reaches m/n − ε = 8 − 1e−6.
    let min_col: f64 = v["min_col_sum"].as_str().unwrap().parse().unwrap();
    assert!(min_col >= 8.0 - 1e-6);

    // Rerunning the same manifest reproduces byte-identical output.
    let b = run(&["scale", mat.to_str().unwrap(), "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);

    // The dependency matrix dump itself is reproducible too.
    let mat2 = dir.path().join("hesse2.mat");
    run(&[
        "depmat",
        "hesse.cfg",
        "--construction",
        "v2",
        "--out",
        mat2.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read_to_string(&mat).unwrap(),
        std::fs::read_to_string(&mat2).unwrap()
    );
}

#[test]
fn depmat_rejects_ordinary_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tri.cfg");
    run(&[
        "gen", "random", "--n", "3", "--d", "2", "--out", cfg.to_str().unwrap(),
    ]);
    let out = run(&["depmat", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn latin_six_grid() {
    let out = run(&["latin", "6", "--skew"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("1 4 5 3 6 2\n"), "{}", text);

    let out = run(&["latin", "5", "--triples"]);
    assert_eq!(stdout(&out).lines().count(), 20);
}

#[test]
fn verify_prune_trace_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("r30.cfg");
    run(&[
        "gen", "random", "--n", "30", "--d", "4", "--seed", "1", "--out",
        cfg.to_str().unwrap(),
    ]);
    let out = run(&[
        "verify",
        "prune",
        cfg.to_str().unwrap(),
        "--floor",
        "flat3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["trace"]["stop"], serde_json::json!("j-cap"));
    assert_eq!(v["trace"]["steps"].as_array().unwrap().len(), 10);
}

#[test]
fn stats_json_shape() {
    let out = run(&["stats", "fermat4.cfg", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], serde_json::json!(12));
    assert_eq!(v["manifest"]["command"], serde_json::json!("stats"));
    let profile = v["t_profile"].as_array().unwrap();
    assert!(profile.contains(&serde_json::json!([4, 3])));
}
