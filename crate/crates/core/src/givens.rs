//! Frame-to-frame interpolation through a sequence of Givens rotations.
//!
//! The start frame `Fa` and target `Fz` are first expressed in a small
//! orthonormal basis `B = (Fa, F★)` of their joint span, giving preframes
//! `Wa = BᵀFa = E_d` and `Wz = BᵀFz`. A sequence of plane rotations that
//! zeroes `Wz` entry by entry, column by column, maps it onto `E_d`.
//! Running that sequence backwards with scaled angles traces a path of
//! preframes from `E_d` to `Wz`, and `F_t = B W_t` lifts it back to
//! `p` dimensions. Unlike the geodesic path between planes, the last
//! frame is `Fz` itself, including its orientation within the plane.
//!
//! Row indices in [`GivensRotation`] are 0-based.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TourError};
use crate::linalg::{self, check_same_shape, max_abs_diff, Frame, Tolerances};

/// Coordinate pairs with a radius below this get a zero rotation angle.
const NULL_PAIR_RADIUS: f64 = 1e-12;

/// Orthonormal `p × n` basis of the joint span of start and target, with
/// `n = min(2d, p)`. The first `d` columns are the start frame, bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct PreprojectionBasis {
    basis: DMatrix<f64>,
    d: usize,
}

impl PreprojectionBasis {
    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Number of basis columns (the preframe row count).
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

/// A frame expressed in preprojection coordinates: an `n × d` orthonormal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PreFrame(DMatrix<f64>);

impl PreFrame {
    pub fn new(w: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        if !linalg::is_orthonormal(&w, tol.orth_tol)? {
            return Err(TourError::InvalidInput(
                "preframe columns are not orthonormal".into(),
            ));
        }
        Ok(PreFrame(w))
    }

    /// `E_d` in `n` coordinates.
    pub fn standard(n: usize, d: usize) -> Self {
        PreFrame(DMatrix::identity(n, d))
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn d(&self) -> usize {
        self.0.ncols()
    }
}

/// One plane rotation in coordinates `(i, j)`, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GivensRotation {
    pub i: usize,
    pub j: usize,
    /// Polar angle `atan2(w_j, w_i)` of the pair that this rotation zeroes,
    /// in `(−π, π]`.
    pub theta: f64,
}

/// Ordered rotations that take `Wz` to `E_d` when applied as zeroing steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GivensSequence {
    rotations: Vec<GivensRotation>,
    /// Preframe dimension `n` the rotations act on.
    rows: usize,
    d: usize,
}

impl GivensSequence {
    pub fn rotations(&self) -> &[GivensRotation] {
        &self.rotations
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Euclidean norm of the angle vector; the path length used for step counts.
    pub fn total_angle(&self) -> f64 {
        self.rotations
            .iter()
            .map(|r| r.theta * r.theta)
            .sum::<f64>()
            .sqrt()
    }

    /// Applies every rotation as a zeroing step: `R_m(θ_m)···R_1(θ_1) W`.
    pub fn apply_forward(&self, w: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let mut out = w.clone();
        for r in &self.rotations {
            out = row_rot(&out, r.i, r.j, -r.theta)?;
        }
        Ok(out)
    }

    /// Applies the inverse with every angle scaled by `fraction`:
    /// `R_1(−f θ_1)···R_m(−f θ_m) W`.
    pub fn apply_inverse(&self, w: &DMatrix<f64>, fraction: f64) -> Result<DMatrix<f64>> {
        let mut out = w.clone();
        for r in self.rotations.iter().rev() {
            out = row_rot(&out, r.i, r.j, fraction * r.theta)?;
        }
        Ok(out)
    }
}

/// Number of zeroing rotations for an `n × d` preframe: `Σ_{k=1}^{d} (n − k)`.
pub fn rotation_count(n: usize, d: usize) -> usize {
    (1..=d).map(|k| n.saturating_sub(k)).sum()
}

/// Builds `B = (Fa, F★)` where `F★` spans the part of `Fz` orthogonal to `Fa`.
///
/// If that residual has rank below `d` (for instance when `Fz` is a rotation
/// or reflection of `Fa` inside the same plane) the basis is completed with
/// coordinate axes up to `min(2d, p)` columns, so that in-plane reflections
/// stay reachable by rotations.
pub fn preprojection(fa: &Frame, fz: &Frame, tol: &Tolerances) -> Result<PreprojectionBasis> {
    check_same_shape(fa, fz)?;
    let (p, d) = (fa.p(), fa.d());
    let mut basis = linalg::columns(fa.as_matrix());
    for k in 0..d {
        let mut v = fz.as_matrix().column(k).into_owned();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&v);
                v.axpy(-c, q, 1.0);
            }
        }
        let norm = v.norm();
        if norm > tol.orth_tol {
            basis.push(v / norm);
        }
    }
    linalg::complete_basis(&mut basis, p, 2 * d);
    let mut m = DMatrix::from_columns(&basis);
    // The start frame must be reproduced exactly by the first d columns.
    m.columns_mut(0, d).copy_from(fa.as_matrix());
    Ok(PreprojectionBasis { basis: m, d })
}

/// `W = BᵀF` for a frame lying in the span of `B`.
pub fn construct_preframe(
    frame: &Frame,
    basis: &PreprojectionBasis,
    tol: &Tolerances,
) -> Result<PreFrame> {
    let b = basis.as_matrix();
    if frame.p() != b.nrows() || frame.d() != basis.d() {
        return Err(TourError::InvalidInput(format!(
            "frame {:?} does not match preprojection basis {:?}",
            frame.as_matrix().shape(),
            b.shape()
        )));
    }
    let w = b.transpose() * frame.as_matrix();
    let deviation = max_abs_diff(&(b * &w), frame.as_matrix());
    if deviation > tol.orth_tol {
        return Err(TourError::SubspaceViolation { deviation });
    }
    Ok(PreFrame(w))
}

/// Rotates rows `i` and `j` of `m` by `theta`:
/// `(r_i, r_j) ← (cos θ r_i − sin θ r_j, sin θ r_i + cos θ r_j)`.
pub fn row_rot(m: &DMatrix<f64>, i: usize, j: usize, theta: f64) -> Result<DMatrix<f64>> {
    if i >= j || j >= m.nrows() {
        return Err(TourError::InvalidInput(format!(
            "rotation rows ({i}, {j}) invalid for a matrix with {} rows",
            m.nrows()
        )));
    }
    let mut out = m.clone();
    if theta == 0.0 {
        return Ok(out);
    }
    let (s, c) = theta.sin_cos();
    for col in 0..m.ncols() {
        let (a, b) = (m[(i, col)], m[(j, col)]);
        out[(i, col)] = c * a - s * b;
        out[(j, col)] = s * a + c * b;
    }
    Ok(out)
}

/// Angles of the zeroing rotations that map `wz` onto `wa = E_d`.
///
/// Column `c` is cleared below the diagonal with rotations in rows
/// `(c, c+1), (c, c+2), …`; for `d = 2, n = 4` that is `(0,1), (0,2), (0,3)`
/// then `(1,2), (1,3)`.
pub fn calculate_angles(wa: &PreFrame, wz: &PreFrame, tol: &Tolerances) -> Result<GivensSequence> {
    let (n, d) = (wz.n(), wz.d());
    if wa.as_matrix().shape() != (n, d) {
        return Err(TourError::InvalidInput(
            "start and target preframes differ in shape".into(),
        ));
    }
    if max_abs_diff(wa.as_matrix(), &DMatrix::identity(n, d)) > tol.orth_tol {
        return Err(TourError::InvalidInput(
            "start preframe must be the standard frame E_d".into(),
        ));
    }
    if !linalg::is_orthonormal(wz.as_matrix(), tol.orth_tol)? {
        return Err(TourError::InvalidInput(
            "target preframe is not orthonormal".into(),
        ));
    }

    let mut work = wz.as_matrix().clone();
    let mut rotations = Vec::with_capacity(rotation_count(n, d));
    for col in 0..d {
        for row in col + 1..n {
            let (wi, wj) = (work[(col, col)], work[(row, col)]);
            let theta = if wi.hypot(wj) < NULL_PAIR_RADIUS {
                0.0
            } else {
                wj.atan2(wi)
            };
            work = row_rot(&work, col, row, -theta)?;
            rotations.push(GivensRotation {
                i: col,
                j: row,
                theta,
            });
        }
    }

    let residual = max_abs_diff(&work, &DMatrix::identity(n, d));
    if residual > tol.arrival_tol {
        // Only possible when n = d: a reflection with no spare dimension.
        return Err(TourError::InvalidInput(format!(
            "target is not reachable by rotations in {n} dimensions (residual {residual:e})"
        )));
    }
    Ok(GivensSequence { rotations, rows: n, d })
}

/// Preframe a `fraction` of the way along the path from `E_d` to `Wz`.
pub fn interpolate_preframe(seq: &GivensSequence, fraction: f64) -> Result<PreFrame> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(TourError::InvalidInput(format!(
            "fraction must lie in [0, 1], got {fraction}"
        )));
    }
    let start = DMatrix::identity(seq.rows, seq.d);
    Ok(PreFrame(seq.apply_inverse(&start, fraction)?))
}

/// Lifts a preframe back to `p` dimensions: `F = B W`.
pub fn construct_moving_frame(w: &PreFrame, basis: &PreprojectionBasis) -> Frame {
    Frame::from_matrix_unchecked(basis.as_matrix() * w.as_matrix())
}

/// Number of steps that keeps every step at most `delta` radians.
pub fn steps_for_speed(seq: &GivensSequence, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(TourError::InvalidInput(format!(
            "angular step must be positive, got {delta}"
        )));
    }
    Ok(((seq.total_angle() / delta).ceil() as usize).max(1))
}

/// Everything needed to evaluate the Givens path between two frames at any
/// point, without materializing it.
#[derive(Debug, Clone)]
pub struct GivensPlan {
    start: Frame,
    basis: Option<PreprojectionBasis>,
    sequence: Option<GivensSequence>,
}

impl GivensPlan {
    pub fn new(fa: &Frame, fz: &Frame, tol: &Tolerances) -> Result<Self> {
        check_same_shape(fa, fz)?;
        if fa == fz {
            return Ok(GivensPlan {
                start: fa.clone(),
                basis: None,
                sequence: None,
            });
        }
        let basis = preprojection(fa, fz, tol)?;
        let wa = construct_preframe(fa, &basis, tol)?;
        let wz = construct_preframe(fz, &basis, tol)?;
        let sequence = calculate_angles(&wa, &wz, tol)?;
        Ok(GivensPlan {
            start: fa.clone(),
            basis: Some(basis),
            sequence: Some(sequence),
        })
    }

    /// `None` when start and target are identical.
    pub fn sequence(&self) -> Option<&GivensSequence> {
        self.sequence.as_ref()
    }

    pub fn basis(&self) -> Option<&PreprojectionBasis> {
        self.basis.as_ref()
    }

    pub fn total_angle(&self) -> f64 {
        self.sequence.as_ref().map_or(0.0, GivensSequence::total_angle)
    }

    pub fn frame_at(&self, fraction: f64) -> Result<Frame> {
        match (&self.basis, &self.sequence) {
            (Some(basis), Some(seq)) if fraction > 0.0 => {
                Ok(construct_moving_frame(&interpolate_preframe(seq, fraction)?, basis))
            }
            _ => Ok(self.start.clone()),
        }
    }

    /// Frame reached after turning `angle` radians of the total path length.
    pub fn frame_at_angle(&self, angle: f64) -> Result<Frame> {
        let total = self.total_angle();
        if total == 0.0 {
            return Ok(self.start.clone());
        }
        self.frame_at((angle / total).clamp(0.0, 1.0))
    }

    pub fn path(&self, nsteps: usize) -> Result<InterpolationPath> {
        if nsteps == 0 {
            return Err(TourError::InvalidInput("nsteps must be positive".into()));
        }
        let Some(seq) = &self.sequence else {
            return Ok(InterpolationPath {
                frames: vec![self.start.clone()],
                fractions: vec![0.0],
                step_angle: 0.0,
                total_angle: 0.0,
                sequence: None,
            });
        };
        let mut frames = Vec::with_capacity(nsteps + 1);
        let mut fractions = Vec::with_capacity(nsteps + 1);
        for k in 0..=nsteps {
            let fraction = k as f64 / nsteps as f64;
            fractions.push(fraction);
            frames.push(self.frame_at(fraction)?);
        }
        let total_angle = seq.total_angle();
        Ok(InterpolationPath {
            frames,
            fractions,
            step_angle: total_angle / nsteps as f64,
            total_angle,
            sequence: Some(seq.clone()),
        })
    }
}

/// Frames from `Fa` to `Fz` in equal-angle steps.
#[derive(Debug, Clone)]
pub struct InterpolationPath {
    frames: Vec<Frame>,
    fractions: Vec<f64>,
    step_angle: f64,
    total_angle: f64,
    sequence: Option<GivensSequence>,
}

impl InterpolationPath {
    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    /// Number of steps; zero for the trivial path of identical endpoints.
    pub fn nsteps(&self) -> usize {
        self.frames.len() - 1
    }

    /// Fraction of the rotation sequence applied at each frame.
    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn step_angle(&self) -> f64 {
        self.step_angle
    }

    pub fn total_angle(&self) -> f64 {
        self.total_angle
    }

    pub fn sequence(&self) -> Option<&GivensSequence> {
        self.sequence.as_ref()
    }

    /// Angle of each individual rotation between consecutive frames; the
    /// Euclidean norm of row `k` is the preframe rotation of step `k`.
    pub fn step_rotation_angles(&self) -> Vec<Vec<f64>> {
        let Some(seq) = &self.sequence else {
            return Vec::new();
        };
        self.fractions
            .windows(2)
            .map(|w| {
                seq.rotations()
                    .iter()
                    .map(|r| (w[1] - w[0]) * r.theta)
                    .collect()
            })
            .collect()
    }

    pub fn last(&self) -> &Frame {
        self.frames.last().expect("paths hold at least one frame")
    }
}

/// Full Givens path with `nsteps + 1` frames (a single frame when `Fa = Fz`).
pub fn givens_full_path(
    fa: &Frame,
    fz: &Frame,
    nsteps: usize,
    tol: &Tolerances,
) -> Result<InterpolationPath> {
    GivensPlan::new(fa, fz, tol)?.path(nsteps)
}

/// Givens path whose step count keeps every step within `delta` radians.
pub fn givens_path_with_speed(
    fa: &Frame,
    fz: &Frame,
    delta: f64,
    tol: &Tolerances,
) -> Result<InterpolationPath> {
    let plan = GivensPlan::new(fa, fz, tol)?;
    match plan.sequence() {
        Some(seq) => {
            let nsteps = steps_for_speed(seq, delta)?;
            plan.path(nsteps)
        }
        None => plan.path(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn frame(rows: usize, cols: usize, data: &[f64]) -> Frame {
        Frame::new(DMatrix::from_row_slice(rows, cols, data), &tol()).unwrap()
    }

    #[test]
    fn preprojection_of_orthogonal_planes() {
        let fa = Frame::from_axes(6, &[0, 1]).unwrap();
        let fz = Frame::from_axes(6, &[2, 3]).unwrap();
        let b = preprojection(&fa, &fz, &tol()).unwrap();
        assert_eq!(b.as_matrix(), &DMatrix::identity(6, 4));
    }

    #[test]
    fn preprojection_by_hand() {
        let fa = Frame::from_axes(3, &[0]).unwrap();
        let s = FRAC_1_SQRT_2;
        let fz = frame(3, 1, &[s, s, 0.0]);
        let b = preprojection(&fa, &fz, &tol()).unwrap();
        let expected = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(max_abs_diff(b.as_matrix(), &expected) < 1e-15);
    }

    #[test]
    fn preprojection_completes_a_shared_plane() {
        let fa = Frame::from_axes(4, &[0, 1]).unwrap();
        let fz = Frame::from_axes(4, &[1, 0]).unwrap();
        let b = preprojection(&fa, &fz, &tol()).unwrap();
        assert_eq!(b.dim(), 4);
        assert!(linalg::is_orthonormal(b.as_matrix(), 1e-12).unwrap());
    }

    #[test]
    fn preframe_of_start_is_standard() {
        let fa = Frame::from_axes(6, &[0, 1]).unwrap();
        let fz = Frame::from_axes(6, &[2, 3]).unwrap();
        let b = preprojection(&fa, &fz, &tol()).unwrap();
        let wa = construct_preframe(&fa, &b, &tol()).unwrap();
        assert_eq!(wa.as_matrix(), &DMatrix::identity(4, 2));
    }

    #[test]
    fn preframe_of_third_column() {
        let fa = Frame::from_axes(3, &[0]).unwrap();
        let fz = Frame::from_axes(3, &[1]).unwrap();
        let b = preprojection(&fa, &fz, &tol()).unwrap();
        let w = construct_preframe(&fz, &b, &tol()).unwrap();
        assert_eq!(w.as_matrix().as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn preframe_outside_span_is_rejected() {
        let fa = Frame::from_axes(4, &[0]).unwrap();
        let fz = Frame::from_axes(4, &[1]).unwrap();
        let b = preprojection(&fa, &fz, &tol()).unwrap();
        let other = Frame::from_axes(4, &[3]).unwrap();
        assert!(matches!(
            construct_preframe(&other, &b, &tol()),
            Err(TourError::SubspaceViolation { .. })
        ));
    }

    #[test]
    fn row_rot_quarter_turn() {
        let e = DMatrix::<f64>::identity(2, 2);
        let r = row_rot(&e, 0, 1, FRAC_PI_2).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(max_abs_diff(&r, &expected) < 1e-16);
    }

    #[test]
    fn row_rot_leaves_other_rows_alone() {
        let m = DMatrix::from_fn(4, 2, |i, j| (i * 2 + j) as f64 + 0.1);
        let r = row_rot(&m, 1, 3, 0.7).unwrap();
        assert_eq!(r.row(0), m.row(0));
        assert_eq!(r.row(2), m.row(2));
        assert_eq!(row_rot(&m, 0, 2, 0.0).unwrap(), m);
    }

    #[test]
    fn row_rot_rejects_bad_indices() {
        let m = DMatrix::<f64>::identity(3, 1);
        assert!(row_rot(&m, 1, 1, 0.1).is_err());
        assert!(row_rot(&m, 0, 3, 0.1).is_err());
        assert!(row_rot(&m, 2, 1, 0.1).is_err());
    }

    #[test]
    fn angles_of_standard_frame_are_zero() {
        let e = PreFrame::standard(4, 2);
        let seq = calculate_angles(&e, &e, &tol()).unwrap();
        assert_eq!(seq.len(), 5);
        assert!(seq.rotations().iter().all(|r| r.theta == 0.0));
    }

    #[test]
    fn quarter_turn_angle_d1() {
        let wa = PreFrame::standard(2, 1);
        let wz = PreFrame::new(DMatrix::from_column_slice(2, 1, &[0.0, 1.0]), &tol()).unwrap();
        let seq = calculate_angles(&wa, &wz, &tol()).unwrap();
        assert_eq!(seq.len(), 1);
        assert!((seq.rotations()[0].theta.abs() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn in_plane_quarter_turn_d2() {
        // E_2 rotated by 90° inside its own plane.
        let wz = DMatrix::from_row_slice(4, 2, &[0.0, -1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let seq = calculate_angles(
            &PreFrame::standard(4, 2),
            &PreFrame::new(wz.clone(), &tol()).unwrap(),
            &tol(),
        )
        .unwrap();
        let rots = seq.rotations();
        assert_eq!((rots[0].i, rots[0].j), (0, 1));
        assert!((rots[0].theta.abs() - FRAC_PI_2).abs() < 1e-15);
        assert!(rots[1..].iter().all(|r| r.theta == 0.0));

        // brute force: multiply out the zeroing rotations as full matrices
        let mut acc = wz;
        for r in rots {
            let mut g = DMatrix::<f64>::identity(4, 4);
            let (s, c) = (-r.theta).sin_cos();
            g[(r.i, r.i)] = c;
            g[(r.i, r.j)] = -s;
            g[(r.j, r.i)] = s;
            g[(r.j, r.j)] = c;
            acc = g * acc;
        }
        assert!(max_abs_diff(&acc, &DMatrix::identity(4, 2)) < 1e-15);
    }

    #[test]
    fn reflection_without_spare_dimension_is_rejected() {
        let wz = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let res = calculate_angles(
            &PreFrame::standard(2, 2),
            &PreFrame::new(wz, &tol()).unwrap(),
            &tol(),
        );
        assert!(matches!(res, Err(TourError::InvalidInput(_))));
    }

    #[test]
    fn interpolate_halfway_quarter_turn() {
        let wz = PreFrame::new(DMatrix::from_column_slice(2, 1, &[0.0, 1.0]), &tol()).unwrap();
        let seq = calculate_angles(&PreFrame::standard(2, 1), &wz, &tol()).unwrap();
        let half = interpolate_preframe(&seq, 0.5).unwrap();
        let expected = [FRAC_PI_4.cos(), FRAC_PI_4.sin()];
        assert!((half.as_matrix()[0] - expected[0]).abs() < 1e-15);
        assert!((half.as_matrix()[1] - expected[1]).abs() < 1e-15);
        assert_eq!(interpolate_preframe(&seq, 0.0).unwrap().as_matrix(), &DMatrix::identity(2, 1));
        assert!(max_abs_diff(interpolate_preframe(&seq, 1.0).unwrap().as_matrix(), wz.as_matrix()) < 1e-15);
        assert!(interpolate_preframe(&seq, 1.5).is_err());
    }

    #[test]
    fn two_dimensional_quarter_path() {
        let fa = Frame::from_axes(2, &[0]).unwrap();
        let fz = Frame::from_axes(2, &[1]).unwrap();
        let path = givens_full_path(&fa, &fz, 2, &tol()).unwrap();
        assert_eq!(path.frames().len(), 3);
        let mid = path.frames()[1].as_matrix();
        assert!((mid[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((mid[1] - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn identical_endpoints_give_single_frame() {
        let fa = Frame::from_axes(5, &[1, 3]).unwrap();
        let path = givens_full_path(&fa, &fa, 10, &tol()).unwrap();
        assert_eq!(path.frames(), std::slice::from_ref(&fa));
        assert_eq!(path.nsteps(), 0);
        assert_eq!(path.total_angle(), 0.0);
    }

    #[test]
    fn antipode_takes_half_turn() {
        let fa = Frame::from_axes(3, &[0]).unwrap();
        let fz = fa.negated();
        let path = givens_full_path(&fa, &fz, 8, &tol()).unwrap();
        assert!((path.total_angle() - PI).abs() < 1e-12);
        assert!(path.last().max_distance(&fz) < 1e-15);
    }

    #[test]
    fn step_counts() {
        let e = PreFrame::standard(2, 1);
        let zero = calculate_angles(&e, &e, &tol()).unwrap();
        assert_eq!(steps_for_speed(&zero, 0.05).unwrap(), 1);
        let quarter = GivensSequence {
            rotations: vec![GivensRotation {
                i: 0,
                j: 1,
                theta: FRAC_PI_2,
            }],
            rows: 2,
            d: 1,
        };
        assert_eq!(steps_for_speed(&quarter, 0.05).unwrap(), 32);
        assert!(steps_for_speed(&quarter, 0.0).is_err());
    }

    #[test]
    fn rotation_counts() {
        assert_eq!(rotation_count(2, 1), 1);
        assert_eq!(rotation_count(4, 2), 5);
        assert_eq!(rotation_count(3, 2), 3);
    }
}
