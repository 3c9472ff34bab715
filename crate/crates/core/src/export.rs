//! File formats for frames, paths, tour traces and 3-d path geometry.
//!
//! Paths are written in long format, one matrix entry per line
//! (`step,row,col,value`, all indices 0-based), or as a JSON array of
//! matrices given row by row. Numbers carry 17 significant digits.

use std::f64::consts::TAU;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::format_number;
use crate::error::{Result, TourError};
use crate::linalg::{orthonormalize, Frame, Tolerances};
use crate::tour::{TourTrace, TraceEvent};

/// Major radius of the torus used for 2-frames in three dimensions.
pub const TORUS_R: f64 = 2.0;
/// Minor radius of that torus.
pub const TORUS_MINOR_R: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathFormat {
    Csv,
    Json,
}

impl FromStr for PathFormat {
    type Err = TourError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(PathFormat::Csv),
            "json" => Ok(PathFormat::Json),
            other => Err(TourError::InvalidInput(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| TourError::io(path, e))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| TourError::io(path, e))
}

fn parse_cell<T: FromStr>(cell: &str, row: usize, column: &str) -> Result<T> {
    cell.trim().parse().map_err(|_| TourError::Parse {
        row,
        column: column.to_owned(),
        value: cell.to_owned(),
    })
}

// ---------------------------------------------------------------------------
// Frames

/// Writes a matrix as headerless CSV, one matrix row per line.
pub fn write_matrix_csv<W: Write>(m: &DMatrix<f64>, writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for row in m.row_iter() {
        w.write_record(row.iter().map(|v| format_number(*v)))?;
    }
    w.flush().map_err(|e| TourError::io("<csv writer>", e))?;
    Ok(())
}

/// Reads a headerless numeric CSV matrix.
pub fn read_matrix_csv<R: Read>(reader: R) -> Result<DMatrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut cells = Vec::new();
    let mut ncols = None;
    let mut nrows = 0;
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        match ncols {
            None => ncols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(TourError::InvalidInput(format!(
                    "row {} has {} entries, expected {c}",
                    r + 1,
                    record.len()
                )))
            }
            _ => {}
        }
        for (c, cell) in record.iter().enumerate() {
            cells.push(parse_cell::<f64>(cell, r + 1, &(c + 1).to_string())?);
        }
        nrows += 1;
    }
    let ncols = ncols.ok_or_else(|| TourError::InvalidInput("matrix file is empty".into()))?;
    Ok(DMatrix::from_row_slice(nrows, ncols, &cells))
}

pub fn save_matrix(m: &DMatrix<f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    write_matrix_csv(m, &mut w)?;
    w.flush().map_err(|e| TourError::io(path, e))
}

pub fn save_frame(frame: &Frame, path: impl AsRef<Path>) -> Result<()> {
    save_matrix(frame.as_matrix(), path)
}

/// A frame read from a file, possibly after repair.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedFrame {
    pub frame: Frame,
    /// Largest `|FᵀF − I|` entry of the matrix as read.
    pub orthonormality_error: f64,
    pub repaired: bool,
}

/// Turns a matrix into a frame, re-orthonormalizing it when its
/// orthonormality error lies within `repair_tol`.
pub fn frame_from_matrix(m: DMatrix<f64>, repair_tol: f64, tol: &Tolerances) -> Result<LoadedFrame> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(TourError::InvalidInput("frame contains non-finite values".into()));
    }
    let gram = m.transpose() * &m;
    let err = (&gram - DMatrix::identity(gram.nrows(), gram.ncols()))
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if err <= tol.orth_tol {
        let frame = Frame::new(m, tol)?;
        return Ok(LoadedFrame {
            frame,
            orthonormality_error: err,
            repaired: false,
        });
    }
    if err > repair_tol {
        return Err(TourError::InvalidInput(format!(
            "matrix is not orthonormal (max |FᵀF − I| = {err:e} exceeds {repair_tol:e})"
        )));
    }
    Ok(LoadedFrame {
        frame: orthonormalize(&m)?,
        orthonormality_error: err,
        repaired: true,
    })
}

pub fn load_frame(path: impl AsRef<Path>, repair_tol: f64, tol: &Tolerances) -> Result<LoadedFrame> {
    let path = path.as_ref();
    let m = read_matrix_csv(open(path)?)?;
    frame_from_matrix(m, repair_tol, tol)
}

// ---------------------------------------------------------------------------
// Paths

#[derive(Serialize, Deserialize)]
struct PathEntry {
    step: usize,
    row: usize,
    col: usize,
    value: String,
}

pub fn write_path_csv<W: Write>(frames: &[Frame], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (step, frame) in frames.iter().enumerate() {
        let m = frame.as_matrix();
        for row in 0..m.nrows() {
            for col in 0..m.ncols() {
                w.serialize(PathEntry {
                    step,
                    row,
                    col,
                    value: format_number(m[(row, col)]),
                })?;
            }
        }
    }
    w.flush().map_err(|e| TourError::io("<csv writer>", e))?;
    Ok(())
}

/// Reads a long-format path back into one matrix per step.
pub fn read_path_csv<R: Read>(reader: R) -> Result<Vec<DMatrix<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let expected = ["step", "row", "col", "value"];
    if rdr.headers()?.iter().ne(expected) {
        return Err(TourError::InvalidInput(format!(
            "path header must be {}",
            expected.join(",")
        )));
    }
    let mut entries = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let line = r + 1;
        if record.len() != 4 {
            return Err(TourError::InvalidInput(format!("row {line} has {} fields", record.len())));
        }
        let step: usize = parse_cell(&record[0], line, "step")?;
        let row: usize = parse_cell(&record[1], line, "row")?;
        let col: usize = parse_cell(&record[2], line, "col")?;
        let value: f64 = parse_cell(&record[3], line, "value")?;
        entries.push((step, row, col, value));
    }
    let Some(nsteps) = entries.iter().map(|e| e.0).max().map(|s| s + 1) else {
        return Ok(Vec::new());
    };
    let p = entries.iter().map(|e| e.1).max().unwrap_or(0) + 1;
    let d = entries.iter().map(|e| e.2).max().unwrap_or(0) + 1;
    let mut frames = vec![DMatrix::from_element(p, d, f64::NAN); nsteps];
    for (step, row, col, value) in entries {
        let slot = &mut frames[step][(row, col)];
        if !slot.is_nan() {
            return Err(TourError::InvalidInput(format!(
                "duplicate entry for step {step}, row {row}, col {col}"
            )));
        }
        *slot = value;
    }
    if let Some(step) = frames.iter().position(|m| m.iter().any(|v| v.is_nan())) {
        return Err(TourError::InvalidInput(format!("step {step} is incomplete")));
    }
    Ok(frames)
}

pub fn write_path_json<W: Write>(frames: &[Frame], writer: W) -> Result<()> {
    let rows: Vec<Vec<Vec<f64>>> = frames
        .iter()
        .map(|f| {
            f.as_matrix()
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect()
        })
        .collect();
    serde_json::to_writer(writer, &rows)?;
    Ok(())
}

pub fn read_path_json<R: Read>(reader: R) -> Result<Vec<DMatrix<f64>>> {
    let rows: Vec<Vec<Vec<f64>>> = serde_json::from_reader(reader)?;
    rows.into_iter()
        .enumerate()
        .map(|(step, m)| {
            let p = m.len();
            let d = m.first().map_or(0, Vec::len);
            if p == 0 || d == 0 || m.iter().any(|r| r.len() != d) {
                return Err(TourError::InvalidInput(format!(
                    "step {step} is not a non-empty rectangular matrix"
                )));
            }
            Ok(DMatrix::from_row_iterator(p, d, m.into_iter().flatten()))
        })
        .collect()
}

pub fn write_path<W: Write>(frames: &[Frame], format: PathFormat, writer: W) -> Result<()> {
    match format {
        PathFormat::Csv => write_path_csv(frames, writer),
        PathFormat::Json => write_path_json(frames, writer),
    }
}

pub fn read_path<R: Read>(format: PathFormat, reader: R) -> Result<Vec<DMatrix<f64>>> {
    match format {
        PathFormat::Csv => read_path_csv(reader),
        PathFormat::Json => read_path_json(reader),
    }
}

pub fn save_path(frames: &[Frame], format: PathFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    write_path(frames, format, &mut w)?;
    w.flush().map_err(|e| TourError::io(path, e))
}

pub fn load_path(format: PathFormat, path: impl AsRef<Path>) -> Result<Vec<DMatrix<f64>>> {
    read_path(format, open(path.as_ref())?)
}

// ---------------------------------------------------------------------------
// Traces

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step_id: usize,
    pub target_id: usize,
    pub event: String,
    pub index_value: Option<String>,
}

/// Writes `step_id,target_id,event,index_value`; the value is empty when
/// the tour has no index.
pub fn write_trace_csv<W: Write>(trace: &TourTrace, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in &trace.records {
        w.serialize(TraceRow {
            step_id: r.step_id,
            target_id: r.target_id,
            event: r.event.as_str().to_owned(),
            index_value: r.index_value.map(format_number),
        })?;
    }
    w.flush().map_err(|e| TourError::io("<csv writer>", e))?;
    Ok(())
}

pub fn save_trace(trace: &TourTrace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    write_trace_csv(trace, &mut w)?;
    w.flush().map_err(|e| TourError::io(path, e))
}

/// Parsed trace line.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceLine {
    pub step_id: usize,
    pub target_id: usize,
    pub event: TraceEvent,
    pub index_value: Option<f64>,
}

pub fn read_trace_csv<R: Read>(reader: R) -> Result<Vec<TraceLine>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut lines = Vec::new();
    for (r, row) in rdr.deserialize::<TraceRow>().enumerate() {
        let row = row?;
        let line = r + 1;
        let event = TraceEvent::parse(&row.event).ok_or_else(|| TourError::Parse {
            row: line,
            column: "event".into(),
            value: row.event.clone(),
        })?;
        let index_value = row
            .index_value
            .filter(|s| !s.is_empty())
            .map(|s| parse_cell::<f64>(&s, line, "index_value"))
            .transpose()?;
        lines.push(TraceLine {
            step_id: row.step_id,
            target_id: row.target_id,
            event,
            index_value,
        });
    }
    Ok(lines)
}

// ---------------------------------------------------------------------------
// Geometry

/// A point of a 3-d view of a path, or of the surface it lives on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryPoint {
    pub series: String,
    pub step: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

fn check_geometry_shape(p: usize, d: usize) -> Result<()> {
    if p != 3 || !(1..=2).contains(&d) {
        return Err(TourError::InvalidInput(format!(
            "geometry views exist for p = 3 and d ∈ {{1, 2}}, got p = {p}, d = {d}"
        )));
    }
    Ok(())
}

fn torus_point(phi: f64, psi: f64) -> [f64; 3] {
    let ring = TORUS_R + TORUS_MINOR_R * psi.cos();
    [ring * phi.cos(), ring * phi.sin(), TORUS_MINOR_R * psi.sin()]
}

/// Torus coordinates of a 3×2 frame.
///
/// `φ` is the azimuth of the first column. `ψ` is the angle of the second
/// column measured from the horizontal direction `(−sin φ, cos φ, 0)`
/// towards the vertical axis.
pub fn torus_angles(frame: &Frame) -> Result<(f64, f64)> {
    check_geometry_shape(frame.p(), frame.d())?;
    if frame.d() != 2 {
        return Err(TourError::InvalidInput("torus view needs 2-frames".into()));
    }
    let m = frame.as_matrix();
    let phi = m[(1, 0)].atan2(m[(0, 0)]);
    let horizontal = -m[(0, 1)] * phi.sin() + m[(1, 1)] * phi.cos();
    Ok((phi, m[(2, 1)].atan2(horizontal)))
}

/// 3-d points for each frame of a path in `p = 3`: the unit vector itself
/// for `d = 1`, its torus embedding for `d = 2`.
pub fn path_geometry(frames: &[Frame], series: &str) -> Result<Vec<GeometryPoint>> {
    let Some(first) = frames.first() else {
        return Ok(Vec::new());
    };
    let (p, d) = (first.p(), first.d());
    check_geometry_shape(p, d)?;
    frames
        .iter()
        .enumerate()
        .map(|(step, f)| {
            if (f.p(), f.d()) != (p, d) {
                return Err(TourError::InvalidInput(format!(
                    "frame {step} is {}×{}, expected {p}×{d}",
                    f.p(),
                    f.d()
                )));
            }
            let [x, y, z] = if d == 1 {
                let m = f.as_matrix();
                [m[(0, 0)], m[(1, 0)], m[(2, 0)]]
            } else {
                let (phi, psi) = torus_angles(f)?;
                torus_point(phi, psi)
            };
            Ok(GeometryPoint {
                series: series.to_owned(),
                step,
                x,
                y,
                z,
            })
        })
        .collect()
}

/// `m` random points on the unit sphere (`d = 1`) or the torus (`d = 2`).
pub fn background_geometry(d: usize, m: usize, seed: u64) -> Result<Vec<GeometryPoint>> {
    check_geometry_shape(3, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(m);
    for step in 0..m {
        let [x, y, z] = if d == 1 {
            loop {
                let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                if norm > 1e-8 {
                    break v.map(|c| c / norm);
                }
            }
        } else {
            torus_point(rng.random::<f64>() * TAU, rng.random::<f64>() * TAU)
        };
        points.push(GeometryPoint {
            series: "background".into(),
            step,
            x,
            y,
            z,
        });
    }
    Ok(points)
}

/// Writes `series,step,x,y,z`.
pub fn write_geometry_csv<W: Write>(points: &[GeometryPoint], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["series", "step", "x", "y", "z"])?;
    for pt in points {
        w.write_record([
            pt.series.clone(),
            pt.step.to_string(),
            format_number(pt.x),
            format_number(pt.y),
            format_number(pt.z),
        ])?;
    }
    w.flush().map_err(|e| TourError::io("<csv writer>", e))?;
    Ok(())
}

pub fn save_geometry(points: &[GeometryPoint], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    write_geometry_csv(points, &mut w)?;
    w.flush().map_err(|e| TourError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::givens::givens_full_path;

    fn sample_frames() -> Vec<Frame> {
        let fa = Frame::from_axes(4, &[0, 1]).unwrap();
        let fz = Frame::from_axes(4, &[2, 3]).unwrap();
        givens_full_path(&fa, &fz, 4, &Tolerances::default())
            .unwrap()
            .into_frames()
    }

    #[test]
    fn csv_path_round_trip_is_exact() {
        let frames = sample_frames();
        let mut buf = Vec::new();
        write_path_csv(&frames, &mut buf).unwrap();
        let back = read_path_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), frames.len());
        for (a, b) in frames.iter().zip(&back) {
            assert_eq!(a.as_matrix(), b);
        }
    }

    #[test]
    fn json_path_round_trip_is_exact() {
        let frames = sample_frames();
        let mut buf = Vec::new();
        write_path_json(&frames, &mut buf).unwrap();
        let back = read_path_json(buf.as_slice()).unwrap();
        for (a, b) in frames.iter().zip(&back) {
            assert_eq!(a.as_matrix(), b);
        }
    }

    #[test]
    fn single_frame_path_has_p_times_d_rows() {
        let f = Frame::from_axes(5, &[1, 3]).unwrap();
        let mut buf = Vec::new();
        write_path_csv(std::slice::from_ref(&f), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("step,row,col,value"));
        assert_eq!(lines.count(), 10);
    }

    #[test]
    fn malformed_path_files_are_rejected() {
        assert!(read_path_csv("a,b,c,d\n".as_bytes()).is_err());
        assert!(read_path_csv("step,row,col,value\n0,0,0,x\n".as_bytes()).is_err());
        assert!(read_path_csv("step,row,col,value\n0,0,0,1\n0,0,0,1\n".as_bytes()).is_err());
        assert!(read_path_csv("step,row,col,value\n0,0,0,1\n0,1,1,1\n".as_bytes()).is_err());
        assert!(read_path_json("[[[1.0],[0.0, 1.0]]]".as_bytes()).is_err());
    }

    #[test]
    fn frames_are_repaired_only_when_close() {
        let tol = Tolerances::default();
        let near = DMatrix::from_row_slice(3, 1, &[1.0 + 2e-7, 0.0, 0.0]);
        let loaded = frame_from_matrix(near, 1e-6, &tol).unwrap();
        assert!(loaded.repaired);
        assert_eq!(loaded.frame.as_matrix()[(0, 0)], 1.0);
        let far = DMatrix::from_row_slice(3, 1, &[1.1, 0.0, 0.0]);
        assert!(frame_from_matrix(far, 1e-6, &tol).is_err());
        let exact = DMatrix::from_row_slice(3, 1, &[0.0, 1.0, 0.0]);
        assert!(!frame_from_matrix(exact, 1e-6, &tol).unwrap().repaired);
    }

    #[test]
    fn matrix_csv_round_trip() {
        let f = sample_frames()[2].clone();
        let mut buf = Vec::new();
        write_matrix_csv(f.as_matrix(), &mut buf).unwrap();
        assert_eq!(&read_matrix_csv(buf.as_slice()).unwrap(), f.as_matrix());
        assert!(read_matrix_csv("1,2\n3\n".as_bytes()).is_err());
    }

    #[test]
    fn background_points_lie_on_their_surface() {
        for p in background_geometry(1, 200, 4).unwrap() {
            let r = (p.x * p.x + p.y * p.y + p.z * p.z).sqrt();
            assert!((r - 1.0).abs() <= 1e-12);
        }
        for p in background_geometry(2, 200, 4).unwrap() {
            let ring = (p.x * p.x + p.y * p.y).sqrt() - TORUS_R;
            let r = (ring * ring + p.z * p.z).sqrt();
            assert!((r - TORUS_MINOR_R).abs() <= 1e-12);
        }
    }

    #[test]
    fn torus_view_of_standard_frame() {
        let f = Frame::from_axes(3, &[0, 1]).unwrap();
        assert_eq!(torus_angles(&f).unwrap(), (0.0, 0.0));
        let f = Frame::from_axes(3, &[0, 2]).unwrap();
        let (phi, psi) = torus_angles(&f).unwrap();
        assert_eq!(phi, 0.0);
        assert!((psi - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn unsupported_shapes_are_explicit_errors() {
        let frames = sample_frames();
        assert!(path_geometry(&frames, "givens").is_err());
        assert!(background_geometry(3, 10, 1).is_err());
    }

    #[test]
    fn trace_csv_round_trip() {
        let config = crate::tour::TourConfig {
            max_targets: 2,
            d: 1,
            ..Default::default()
        };
        let trace = crate::tour::grand_tour(&config, 3, None, &Tolerances::default()).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("step_id,target_id,event,index_value\n"));
        let lines = read_trace_csv(buf.as_slice()).unwrap();
        assert_eq!(lines.len(), trace.records.len());
        assert!(lines.iter().all(|l| l.index_value.is_none()));
    }
}
