use std::fs;

use frametour::data::{
    bundled_sine, generate_sine, load_csv, save_csv, standardize, Dataset, SINE_N, SINE_NOISE_SD,
};
use frametour::export::{
    background_geometry, load_frame, load_path, path_geometry, save_frame, save_geometry,
    save_path, save_trace, PathFormat,
};
use frametour::geodesic::geodesic_full_path;
use frametour::givens::givens_full_path;
use frametour::index::{ProjectedData, ProjectionIndex, SplinesIndex};
use frametour::linalg::{Frame, Tolerances};
use frametour::tour::{grand_tour, TourConfig};
use frametour::TourError;
use nalgebra::DMatrix;

fn relative_digits(a: f64, b: f64) -> f64 {
    if a == b {
        return f64::INFINITY;
    }
    -((a - b).abs() / a.abs().max(b.abs())).log10()
}

#[test]
fn csv_round_trip_keeps_twelve_digits() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sine.csv");
    let data = bundled_sine();
    save_csv(&data, &path).unwrap();
    let back = load_csv(&path).unwrap();
    assert_eq!(back.column_names(), data.column_names());
    for (a, b) in data.values().iter().zip(back.values().iter()) {
        assert!(relative_digits(*a, *b) >= 12.0);
    }
}

#[test]
fn missing_file_error_names_the_path() {
    let err = load_csv("/nonexistent/data.csv").unwrap_err();
    assert!(matches!(err, TourError::Io { .. }));
    assert!(err.to_string().contains("/nonexistent/data.csv"));
}

#[test]
fn standardize_is_idempotent() {
    let values = DMatrix::from_fn(40, 3, |i, j| (i as f64 * 0.7 + j as f64).sin() * (j + 1) as f64 + 5.0);
    let data = Dataset::new(values, vec!["a".into(), "b".into(), "c".into()]).unwrap();
    let once = standardize(&data).unwrap();
    let twice = standardize(&once).unwrap();
    for (a, b) in once.values().iter().zip(twice.values().iter()) {
        assert!((a - b).abs() <= 1e-12);
    }
    for k in 0..3 {
        let col = once.values().column(k);
        let mean = col.mean();
        let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 39.0).sqrt();
        assert!(mean.abs() <= 1e-12 && (sd - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn sine_generator_shows_a_functional_relation() {
    for seed in [1, 2, 3] {
        let data = generate_sine(SINE_N, SINE_NOISE_SD, seed).unwrap();
        let projected = ProjectedData::new(data.values().clone()).unwrap();
        assert!(SplinesIndex::oriented().evaluate(&projected).unwrap() >= 0.95);
    }
}

#[test]
fn path_files_round_trip_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let fa = Frame::from_axes(5, &[0, 1]).unwrap();
    let fz = Frame::from_axes(5, &[3, 2]).unwrap();
    let path = givens_full_path(&fa, &fz, 7, &Tolerances::default()).unwrap();
    for format in [PathFormat::Csv, PathFormat::Json] {
        let file = dir.path().join(format!("path.{format:?}"));
        save_path(path.frames(), format, &file).unwrap();
        let back = load_path(format, &file).unwrap();
        assert_eq!(back.len(), 8);
        for (a, b) in path.frames().iter().zip(&back) {
            assert_eq!(a.as_matrix(), b);
        }
    }
}

#[test]
fn frames_and_traces_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let frame = Frame::from_axes(4, &[2, 0]).unwrap();
    let file = dir.path().join("frame.csv");
    save_frame(&frame, &file).unwrap();
    let loaded = load_frame(&file, 1e-6, &Tolerances::default()).unwrap();
    assert_eq!(loaded.frame, frame);
    assert!(!loaded.repaired);

    let config = TourConfig {
        max_targets: 2,
        ..TourConfig::default()
    };
    let trace = grand_tour(&config, 4, None, &Tolerances::default()).unwrap();
    let file = dir.path().join("trace.csv");
    save_trace(&trace, &file).unwrap();
    let text = fs::read_to_string(&file).unwrap();
    assert_eq!(text.lines().count(), trace.records.len() + 1);
}

#[test]
fn sphere_view_separates_givens_from_geodesic() {
    let fa = Frame::new(
        DMatrix::from_column_slice(3, 1, &[0.6, 0.0, 0.8]),
        &Tolerances::default(),
    )
    .unwrap();
    let fz = fa.negated();
    let givens = givens_full_path(&fa, &fz, 12, &Tolerances::default()).unwrap();
    let geodesic = geodesic_full_path(&fa, &fz, 12).unwrap();
    let g = path_geometry(givens.frames(), "givens").unwrap();
    let h = path_geometry(geodesic.frames(), "geodesic").unwrap();
    for pt in g.iter().chain(&h) {
        assert!(((pt.x * pt.x + pt.y * pt.y + pt.z * pt.z).sqrt() - 1.0).abs() <= 1e-12);
    }
    let (gend, hend) = (g.last().unwrap(), h.last().unwrap());
    assert!((gend.x + 0.6).abs() <= 1e-12 && (gend.z + 0.8).abs() <= 1e-12);
    // The geodesic stays put, on the opposite side of the sphere from the target.
    assert!((hend.x - 0.6).abs() <= 1e-12 && (hend.z - 0.8).abs() <= 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let mut points = g;
    points.extend(background_geometry(1, 50, 1).unwrap());
    let file = dir.path().join("sphere.csv");
    save_geometry(&points, &file).unwrap();
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("series,step,x,y,z\n"));
    assert_eq!(text.lines().count(), 13 + 50 + 1);
}

#[test]
fn torus_view_of_a_two_frame_path() {
    let fa = Frame::from_axes(3, &[0, 1]).unwrap();
    let fz = Frame::from_axes(3, &[1, 2]).unwrap();
    let path = givens_full_path(&fa, &fz, 10, &Tolerances::default()).unwrap();
    let points = path_geometry(path.frames(), "givens").unwrap();
    for pt in &points {
        let ring = (pt.x * pt.x + pt.y * pt.y).sqrt() - 2.0;
        assert!(((ring * ring + pt.z * pt.z).sqrt() - 1.0).abs() <= 1e-12);
    }
}
