use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use frametour::export::{load_path, read_matrix_csv, save_frame, PathFormat};
use frametour::linalg::orthonormalize;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_frametour"));
    cmd.env_remove("FRAMETOUR_OUTPUT_DIR").env_remove("FRAMETOUR_LOG");
    cmd
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn summary(out: &Output) -> Vec<(String, String)> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "stdout: {text}");
    text.trim()
        .split(' ')
        .map(|kv| {
            let (k, v) = kv.split_once('=').unwrap();
            (k.to_owned(), v.to_owned())
        })
        .collect()
}

fn field(out: &Output, key: &str) -> String {
    summary(out)
        .into_iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("no {key} in summary"))
        .1
}

fn num(out: &Output, key: &str) -> f64 {
    field(out, key).parse().unwrap()
}

fn write_frame(dir: &Path, name: &str, rows: &str) -> PathBuf {
    let m = read_matrix_csv(rows.as_bytes()).unwrap();
    let path = dir.join(name);
    save_frame(&orthonormalize(&m).unwrap(), &path).unwrap();
    path
}

fn frame_pair(dir: &Path) {
    write_frame(
        dir,
        "a.csv",
        "0.3,-1.2\n1.1,0.4\n-0.7,0.9\n0.2,0.3\n0.5,-0.6\n-1.3,0.1\n",
    );
    write_frame(
        dir,
        "b.csv",
        "-0.4,0.8\n0.6,1.5\n1.2,-0.2\n-0.9,0.7\n0.1,0.4\n0.8,-1.1\n",
    );
}

#[test]
fn givens_path_ends_on_the_target_frame() {
    let dir = tempfile::tempdir().unwrap();
    frame_pair(dir.path());
    let out = run(
        dir.path(),
        &["interpolate", "--start", "a.csv", "--target", "b.csv", "--nsteps", "5", "-o", "g.csv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(field(&out, "nsteps"), "5");
    assert!(num(&out, "frame_error") <= 1e-8);
    let frames = load_path(PathFormat::Csv, dir.path().join("g.csv")).unwrap();
    assert_eq!(frames.len(), 6);
}

#[test]
fn geodesic_path_ends_on_the_target_plane_only() {
    let dir = tempfile::tempdir().unwrap();
    frame_pair(dir.path());
    let out = run(
        dir.path(),
        &[
            "interpolate", "--start", "a.csv", "--target", "b.csv", "--method", "geodesic",
            "--nsteps", "5", "--format", "json", "-o", "h.json",
        ],
    );
    assert!(out.status.success());
    assert!(num(&out, "plane_error") <= 1e-8);
    assert!(num(&out, "frame_error") > 1e-3);
    assert_eq!(load_path(PathFormat::Json, dir.path().join("h.json")).unwrap().len(), 6);
}

#[test]
fn identical_frames_give_a_single_frame_path() {
    let dir = tempfile::tempdir().unwrap();
    frame_pair(dir.path());
    let out = run(dir.path(), &["interpolate", "--start", "a.csv", "--target", "a.csv"]);
    assert!(out.status.success());
    assert_eq!(field(&out, "nsteps"), "0");
    let text = fs::read_to_string(dir.path().join("path.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 12);
}

#[test]
fn frames_are_repaired_or_rejected() {
    let dir = tempfile::tempdir().unwrap();
    frame_pair(dir.path());
    fs::write(dir.path().join("near.csv"), "1.0000002,0\n0,1\n0,0\n0,0\n0,0\n0,0\n").unwrap();
    fs::write(dir.path().join("far.csv"), "1.01,0\n0,1\n0,0\n0,0\n0,0\n0,0\n").unwrap();
    let near = run(dir.path(), &["interpolate", "--start", "near.csv", "--target", "b.csv"]);
    assert!(near.status.success());
    assert!(String::from_utf8_lossy(&near.stderr).contains("re-orthonormalized"));
    let far = run(dir.path(), &["interpolate", "--start", "far.csv", "--target", "b.csv"]);
    assert_eq!(far.status.code(), Some(2));
    assert!(far.stdout.is_empty());
    assert!(String::from_utf8_lossy(&far.stderr).contains("not orthonormal"));
}

#[test]
fn bad_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("na.csv"), "a,b\n1,2\n3,NA\n").unwrap();
    for args in [
        vec!["pca", "-i", "missing.csv"],
        vec!["pca", "-i", "na.csv"],
        vec!["grand"],
        vec!["index-eval", "-i", "na.csv", "--index", "nope"],
    ] {
        let out = run(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = run(dir.path(), &["pca", "-i", "na.csv"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2, column 'b'"));
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("results");
    let out = bin()
        .current_dir(dir.path())
        .env("FRAMETOUR_OUTPUT_DIR", &target)
        .args(["grand", "--p", "4", "--targets", "2", "--trace", "trace.csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("grand.csv").exists());
    assert!(target.join("trace.csv").exists());
}

#[test]
fn index_eval_follows_rotation() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["generate", "sine", "-o", "sine.csv"]).status.success());
    let at = |deg: &str| {
        let out = run(dir.path(), &["index-eval", "-i", "sine.csv", "--rotate", deg]);
        assert!(out.status.success());
        num(&out, "value")
    };
    let (a, b, c) = (at("0"), at("45"), at("60"));
    assert!(a >= 0.95 && a > b && b > c);
}

#[test]
fn pca_reports_cumulative_variance() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["generate", "two-factor", "--n", "152", "-o", "f.csv"]).status.success());
    let out = run(
        dir.path(),
        &["pca", "-i", "f.csv", "--components", "2", "--rotation", "rot.csv", "--negate", "x1"],
    );
    assert!(out.status.success());
    assert!(num(&out, "cumulative_proportion") >= 0.95);
    let scores = fs::read_to_string(dir.path().join("scores.csv")).unwrap();
    assert!(scores.starts_with("PC1,PC2\n"));
    assert_eq!(scores.lines().count(), 153);
}

#[test]
fn geometry_shows_the_antipode() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("u.csv"), "0.6\n0\n0.8\n").unwrap();
    fs::write(dir.path().join("v.csv"), "-0.6\n0\n-0.8\n").unwrap();
    let out = run(
        dir.path(),
        &["geometry", "--start", "u.csv", "--target", "v.csv", "--nsteps", "10", "--background", "20"],
    );
    assert!(out.status.success());
    assert!((num(&out, "givens_angle") - std::f64::consts::PI).abs() <= 1e-6);
    assert!(num(&out, "givens_endpoint_error") <= 1e-8);
    assert!(num(&out, "geodesic_angle") <= 1e-8);
    assert_eq!(field(&out, "points"), "42");
    frame_pair(dir.path());
    let bad = run(dir.path(), &["geometry", "--start", "a.csv", "--target", "b.csv"]);
    assert_eq!(bad.status.code(), Some(2));
}

/// Runs every stochastic subcommand into `dir` and returns the written files.
fn stochastic_outputs(dir: &Path, seed: &str) -> Vec<(String, Vec<u8>)> {
    let runs: Vec<Vec<&str>> = vec![
        vec!["generate", "sine-in-noise", "--seed", seed, "-o", "data.csv"],
        vec!["grand", "--p", "5", "--targets", "4", "--seed", seed, "-o", "grand.csv", "--trace", "grand_trace.csv"],
        vec!["grand", "-i", "data.csv", "--targets", "3", "--seed", seed, "--method", "geodesic", "--format", "json", "-o", "grand.json"],
        vec!["guided", "-i", "data.csv", "--seed", seed, "-o", "sagiv.csv", "--frames", "sagiv_frames.csv"],
        vec!["guided", "-i", "data.csv", "--seed", seed, "--method", "geodesic", "-o", "sageo.csv"],
        vec!["guided", "-i", "data.csv", "--seed", seed, "--method", "geodesic", "--search", "geodesic", "-o", "geoo.csv"],
        vec!["geometry", "--start", "u.csv", "--target", "v.csv", "--seed", seed, "-o", "sphere.csv"],
    ];
    fs::write(dir.join("u.csv"), "0.6\n0\n0.8\n").unwrap();
    fs::write(dir.join("v.csv"), "0\n1\n0\n").unwrap();
    for args in &runs {
        let out = run(dir, args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b, c) = (
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
    );
    let first = stochastic_outputs(a.path(), "7");
    let second = stochastic_outputs(b.path(), "7");
    assert_eq!(first.len(), 11);
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        assert!(x == y, "{name} differs between runs");
    }
    let other = stochastic_outputs(c.path(), "8");
    assert_ne!(first, other);
}
