//! Small dense linear algebra: frames, Gram-Schmidt, SVD and principal angles.
//!
//! Everything here works on `nalgebra::DMatrix<f64>` with column-major
//! semantics: column `k` of a frame is its `k`-th projection direction.

use nalgebra::{DMatrix, DVector, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TourError};

/// Largest projection dimension supported by the interpolators.
pub const MAX_PROJECTION_DIM: usize = 2;

/// Residual norm below which Gram-Schmidt declares a column dependent.
const RANK_EPS: f64 = 1e-12;

/// Relative residual below which a second orthogonalization pass runs.
const REORTH_RATIO: f64 = 1e-6;

const SVD_MAX_ITER: usize = 1000;

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max-norm bound on `FᵀF − I` for a matrix to count as orthonormal.
    pub orth_tol: f64,
    /// Max-norm bound on the distance between a path endpoint and its target.
    pub arrival_tol: f64,
    /// Bound for angle comparisons, in radians.
    pub angle_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orth_tol: 1e-9,
            arrival_tol: 1e-8,
            angle_tol: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.orth_tol, self.arrival_tol, self.angle_tol]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0);
        if ok {
            Ok(())
        } else {
            Err(TourError::InvalidInput(format!(
                "tolerances must be strictly positive: {self:?}"
            )))
        }
    }
}

/// A `p × d` matrix with orthonormal columns, `d ∈ {1, 2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    data: DMatrix<f64>,
}

impl Frame {
    /// Wraps `data` after checking shape, finiteness and orthonormality.
    pub fn new(data: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        check_frame_shape(data.nrows(), data.ncols())?;
        if !is_orthonormal(&data, tol.orth_tol)? {
            return Err(TourError::InvalidInput(format!(
                "matrix is not orthonormal (max |FᵀF − I| = {:e})",
                orthonormality_error(&data)
            )));
        }
        Ok(Frame { data })
    }

    /// Callers guarantee orthonormality up to roundoff.
    pub(crate) fn from_matrix_unchecked(data: DMatrix<f64>) -> Self {
        debug_assert!(data.ncols() >= 1 && data.nrows() >= data.ncols());
        Frame { data }
    }

    /// The standard frame `E_d` in `p` dimensions.
    pub fn standard(p: usize, d: usize) -> Result<Self> {
        check_frame_shape(p, d)?;
        Ok(Frame {
            data: DMatrix::identity(p, d),
        })
    }

    /// Frame whose columns are the given coordinate axes (0-based).
    pub fn from_axes(p: usize, axes: &[usize]) -> Result<Self> {
        check_frame_shape(p, axes.len())?;
        let mut data = DMatrix::zeros(p, axes.len());
        for (col, &axis) in axes.iter().enumerate() {
            if axis >= p {
                return Err(TourError::InvalidInput(format!(
                    "axis {axis} out of range for p = {p}"
                )));
            }
            data[(axis, col)] = 1.0;
        }
        Frame::new(data, &Tolerances::default())
    }

    pub fn p(&self) -> usize {
        self.data.nrows()
    }

    pub fn d(&self) -> usize {
        self.data.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// Orthogonal projector `F Fᵀ` onto the plane spanned by the frame.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.data * self.data.transpose()
    }

    /// Same frame with every entry negated.
    pub fn negated(&self) -> Frame {
        Frame {
            data: -&self.data,
        }
    }

    /// Max-norm distance between two frames of equal shape.
    pub fn max_distance(&self, other: &Frame) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }

    /// Max-norm distance between the projectors of two frames.
    pub fn plane_distance(&self, other: &Frame) -> f64 {
        max_abs_diff(&self.projector(), &other.projector())
    }
}

fn check_frame_shape(p: usize, d: usize) -> Result<()> {
    if d == 0 || d > MAX_PROJECTION_DIM {
        return Err(TourError::InvalidInput(format!(
            "projection dimension must be 1 or 2, got {d}"
        )));
    }
    if p < d {
        return Err(TourError::InvalidInput(format!(
            "ambient dimension p = {p} is smaller than d = {d}"
        )));
    }
    Ok(())
}

pub(crate) fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn orthonormality_error(m: &DMatrix<f64>) -> f64 {
    let gram = m.transpose() * m;
    max_abs_diff(&gram, &DMatrix::identity(m.ncols(), m.ncols()))
}

/// True iff `max |MᵀM − I| ≤ tol`.
pub fn is_orthonormal(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(TourError::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    Ok(orthonormality_error(m) <= tol)
}

/// Removes from `v` its components along the columns of `basis`.
fn project_out(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for q in basis {
        let c = q.dot(v);
        v.axpy(-c, q, 1.0);
    }
}

/// Orthogonalizes `v` against `basis` (modified Gram-Schmidt, one extra pass
/// on heavy cancellation). Returns the residual norm; `v` holds the residual.
fn orthogonalize_against(v: &mut DVector<f64>, basis: &[DVector<f64>]) -> f64 {
    let original = v.norm();
    project_out(v, basis);
    let mut norm = v.norm();
    if norm < REORTH_RATIO * original {
        project_out(v, basis);
        norm = v.norm();
    }
    norm
}

/// Modified Gram-Schmidt over the columns of an arbitrary matrix.
pub(crate) fn gram_schmidt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(TourError::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(m.ncols());
    for k in 0..m.ncols() {
        let mut v = m.column(k).into_owned();
        let norm = orthogonalize_against(&mut v, &basis);
        if norm < RANK_EPS {
            return Err(TourError::DegenerateInput(format!(
                "column {} is linearly dependent on the preceding columns (residual {norm:e})",
                k + 1
            )));
        }
        basis.push(v / norm);
    }
    Ok(DMatrix::from_columns(&basis))
}

/// Orthonormalizes the columns of `m` into a [`Frame`] spanning the same space.
pub fn orthonormalize(m: &DMatrix<f64>) -> Result<Frame> {
    check_frame_shape(m.nrows(), m.ncols())?;
    Ok(Frame::from_matrix_unchecked(gram_schmidt(m)?))
}

/// Orthonormal basis `F★` for the part of `Fz` orthogonal to `Fa`.
pub fn orthogonal_complement(fz: &Frame, fa: &Frame) -> Result<Frame> {
    check_same_shape(fa, fz)?;
    let mut basis: Vec<DVector<f64>> = columns(fa.as_matrix());
    let d = fa.d();
    for k in 0..d {
        let mut v = fz.as_matrix().column(k).into_owned();
        let norm = orthogonalize_against(&mut v, &basis);
        if norm < RANK_EPS {
            return Err(TourError::SharedSubspace {
                column: k + 1,
                norm,
            });
        }
        basis.push(v / norm);
    }
    Ok(Frame::from_matrix_unchecked(DMatrix::from_columns(
        &basis[d..],
    )))
}

pub(crate) fn columns(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    m.column_iter().map(|c| c.into_owned()).collect()
}

/// Extends the orthonormal columns `basis` to `target` columns using
/// coordinate axes, always taking the axis with the largest residual.
pub(crate) fn complete_basis(basis: &mut Vec<DVector<f64>>, p: usize, target: usize) {
    while basis.len() < target.min(p) {
        let best = (0..p)
            .map(|axis| {
                let mut v = DVector::zeros(p);
                v[axis] = 1.0;
                let norm = orthogonalize_against(&mut v, basis);
                (norm, v)
            })
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .expect("p > 0");
        let (norm, v) = best;
        basis.push(v / norm);
    }
}

pub(crate) fn check_same_shape(a: &Frame, b: &Frame) -> Result<()> {
    if a.as_matrix().shape() != b.as_matrix().shape() {
        return Err(TourError::InvalidInput(format!(
            "frame shapes differ: {:?} vs {:?}",
            a.as_matrix().shape(),
            b.as_matrix().shape()
        )));
    }
    Ok(())
}

/// Thin singular value decomposition `M = U Σ Vᵀ`.
#[derive(Debug, Clone)]
pub struct SmallSvd {
    pub u: DMatrix<f64>,
    /// Non-negative, non-increasing.
    pub singular_values: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl SmallSvd {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.u * DMatrix::from_diagonal(&self.singular_values) * self.v.transpose()
    }
}

/// SVD for the tiny matrices that show up in interpolation (at most 4×4).
pub fn svd_small(m: &DMatrix<f64>) -> Result<SmallSvd> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(TourError::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    let svd = SVD::try_new(m.clone(), true, true, f64::EPSILON, SVD_MAX_ITER).ok_or_else(|| {
        TourError::NumericalFailure(format!(
            "SVD did not converge within {SVD_MAX_ITER} iterations"
        ))
    })?;
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(TourError::NumericalFailure("SVD factors missing".into()));
    };
    Ok(SmallSvd {
        u,
        singular_values: svd.singular_values,
        v: v_t.transpose(),
    })
}

/// Principal angles between the planes of `fa` and `fz`, non-decreasing.
pub fn principal_angles(fa: &Frame, fz: &Frame) -> Result<Vec<f64>> {
    check_same_shape(fa, fz)?;
    let cross = fa.as_matrix().transpose() * fz.as_matrix();
    let svd = svd_small(&cross)?;
    let aligned_start = fa.as_matrix() * &svd.u;
    let aligned_target = fz.as_matrix() * &svd.v;
    // atan2 of sine and cosine stays accurate for tiny angles, unlike acos.
    let mut angles: Vec<f64> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let cos = s.clamp(-1.0, 1.0);
            let sine = (aligned_target.column(k) - aligned_start.column(k) * cos).norm();
            sine.atan2(cos)
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}
