//! Projection pursuit indexes on projected data.

use nalgebra::DMatrix;

use crate::error::{Result, TourError};
use crate::linalg::Frame;
use crate::spline::{fit_cubic_spline_with, SplineConfig};

/// Response variance below this counts as zero.
const ZERO_VARIANCE: f64 = 1e-300;

/// `n × d` matrix of projected observations.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedData(DMatrix<f64>);

impl ProjectedData {
    pub fn new(points: DMatrix<f64>) -> Result<Self> {
        if points.iter().any(|v| !v.is_finite()) {
            return Err(TourError::InvalidInput(
                "projected data contains non-finite values".into(),
            ));
        }
        Ok(ProjectedData(points))
    }

    /// Projects the rows of `data` (`n × p`) onto `frame`.
    pub fn project(data: &DMatrix<f64>, frame: &Frame) -> Result<Self> {
        if data.ncols() != frame.p() {
            return Err(TourError::InvalidInput(format!(
                "data has {} columns but the frame has p = {}",
                data.ncols(),
                frame.p()
            )));
        }
        ProjectedData::new(data * frame.as_matrix())
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

    /// Rotates the projected points by `angle` radians within their plane.
    pub fn rotated(&self, angle: f64) -> Result<Self> {
        if self.d() != 2 {
            return Err(TourError::InvalidInput(
                "in-plane rotation needs 2-dimensional projections".into(),
            ));
        }
        let (s, c) = angle.sin_cos();
        let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        Ok(ProjectedData(&self.0 * rot))
    }
}

/// A projection pursuit index: larger values mean more interesting views.
///
/// Implementations must be pure so that candidate views can be scored
/// concurrently.
pub trait ProjectionIndex: Send + Sync {
    fn name(&self) -> &str;

    /// Whether the value is unchanged by rotations inside the projection plane.
    fn rotation_invariant(&self) -> bool;

    /// Index value in `[0, 1]`.
    fn evaluate(&self, data: &ProjectedData) -> Result<f64>;
}

fn variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
}

/// Share of the response variance explained by a spline in the predictor.
fn oriented_splines(x: &[f64], y: &[f64], config: &SplineConfig) -> Result<f64> {
    let var_y = variance(y);
    if var_y <= ZERO_VARIANCE {
        return Ok(0.0);
    }
    let fitted = fit_cubic_spline_with(x, y, config)?;
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    Ok((1.0 - variance(&residuals) / var_y).clamp(0.0, 1.0))
}

/// Splines index on 2-d projections: horizontal axis is the predictor,
/// vertical axis the response.
///
/// With `symmetric` set, both assignments are tried and the larger value
/// wins, which removes most of the orientation dependence.
#[derive(Debug, Clone, Default)]
pub struct SplinesIndex {
    pub symmetric: bool,
    pub config: SplineConfig,
}

impl SplinesIndex {
    pub fn oriented() -> Self {
        SplinesIndex::default()
    }

    pub fn symmetric() -> Self {
        SplinesIndex {
            symmetric: true,
            ..SplinesIndex::default()
        }
    }
}

impl ProjectionIndex for SplinesIndex {
    fn name(&self) -> &str {
        if self.symmetric {
            "splines2d_sym"
        } else {
            "splines2d"
        }
    }

    fn rotation_invariant(&self) -> bool {
        false
    }

    fn evaluate(&self, data: &ProjectedData) -> Result<f64> {
        if data.d() != 2 {
            return Err(TourError::InvalidInput(format!(
                "splines index needs 2-d projections, got d = {}",
                data.d()
            )));
        }
        let x: Vec<f64> = data.as_matrix().column(0).iter().copied().collect();
        let y: Vec<f64> = data.as_matrix().column(1).iter().copied().collect();
        let forward = oriented_splines(&x, &y, &self.config)?;
        if self.symmetric {
            Ok(forward.max(oriented_splines(&y, &x, &self.config)?))
        } else {
            Ok(forward)
        }
    }
}

/// Holes index: high when the center of the projection is empty.
///
/// `(1 − mean(exp(−‖z‖²/2))) / (1 − exp(−d/2))`, clamped to `[0, 1]`.
/// It depends on radii only and so is rotation invariant.
#[derive(Debug, Clone, Copy, Default)]
pub struct HolesIndex;

impl ProjectionIndex for HolesIndex {
    fn name(&self) -> &str {
        "holes"
    }

    fn rotation_invariant(&self) -> bool {
        true
    }

    fn evaluate(&self, data: &ProjectedData) -> Result<f64> {
        let m = data.as_matrix();
        if m.nrows() == 0 {
            return Err(TourError::InvalidInput("no observations".into()));
        }
        let d = m.ncols() as f64;
        let mean = m
            .row_iter()
            .map(|r| (-0.5 * r.norm_squared()).exp())
            .sum::<f64>()
            / m.nrows() as f64;
        Ok(((1.0 - mean) / (1.0 - (-0.5 * d).exp())).clamp(0.0, 1.0))
    }
}

/// Names accepted by [`index_by_name`].
pub const INDEX_NAMES: [&str; 3] = ["splines2d", "splines2d_sym", "holes"];

pub fn index_by_name(name: &str) -> Result<Box<dyn ProjectionIndex>> {
    match name {
        "splines2d" => Ok(Box::new(SplinesIndex::oriented())),
        "splines2d_sym" => Ok(Box::new(SplinesIndex::symmetric())),
        "holes" => Ok(Box::new(HolesIndex)),
        other => Err(TourError::InvalidInput(format!(
            "unknown index '{other}' (expected one of {})",
            INDEX_NAMES.join(", ")
        ))),
    }
}
