//! Geodesic interpolation between planes.
//!
//! The SVD `FaᵀFz = U Σ Vᵀ` aligns both frames along their principal
//! vectors (`Ga = Fa U`, `Gz = Fz V`). Each aligned pair of columns is then
//! rotated in its own 2-plane by its principal angle, so the path carries no
//! within-plane spin. Frames are reported back in the start orientation,
//! `F_t = G_t Uᵀ`, which means the last frame spans the target plane but is
//! generally not the target frame.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::linalg::{check_same_shape, svd_small, Frame, Tolerances};

/// Below this sine the principal pair is treated as already aligned.
const ALIGNED_SINE: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct GeodesicPlan {
    aligned_start: DMatrix<f64>,
    aligned_target: DMatrix<f64>,
    /// Unit directions orthogonal to the start plane, one per principal pair.
    directions: DMatrix<f64>,
    principal_angles: Vec<f64>,
    start_rotation: DMatrix<f64>,
    start: Frame,
}

impl GeodesicPlan {
    pub fn new(fa: &Frame, fz: &Frame) -> Result<Self> {
        check_same_shape(fa, fz)?;
        let cross = fa.as_matrix().transpose() * fz.as_matrix();
        let svd = svd_small(&cross)?;
        let aligned_start = fa.as_matrix() * &svd.u;
        let aligned_target = fz.as_matrix() * &svd.v;

        let d = fa.d();
        let mut principal_angles = Vec::with_capacity(d);
        let mut directions = Vec::with_capacity(d);
        for k in 0..d {
            let cos = svd.singular_values[k].clamp(-1.0, 1.0);
            let residual: DVector<f64> =
                aligned_target.column(k) - aligned_start.column(k) * cos;
            let sine = residual.norm();
            // acos loses half the digits near cos = 1.
            let angle = sine.atan2(cos);
            directions.push(if sine > ALIGNED_SINE {
                residual / sine
            } else {
                DVector::zeros(fa.p())
            });
            principal_angles.push(angle);
        }

        Ok(GeodesicPlan {
            aligned_start,
            aligned_target,
            directions: DMatrix::from_columns(&directions),
            principal_angles,
            start_rotation: svd.u,
            start: fa.clone(),
        })
    }

    /// Principal angles, in the order of the singular values (non-decreasing).
    pub fn principal_angles(&self) -> &[f64] {
        &self.principal_angles
    }

    /// Euclidean norm of the principal angles.
    pub fn total_angle(&self) -> f64 {
        self.principal_angles.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Aligned frame `G_t` a `fraction` of the way along the geodesic.
    pub fn aligned_frame_at(&self, fraction: f64) -> DMatrix<f64> {
        let mut g = self.aligned_start.clone();
        for (k, angle) in self.principal_angles.iter().enumerate() {
            let (s, c) = (fraction * angle).sin_cos();
            let col = self.aligned_start.column(k) * c + self.directions.column(k) * s;
            g.set_column(k, &col);
        }
        g
    }

    pub fn frame_at(&self, fraction: f64) -> Frame {
        if fraction == 0.0 {
            return self.start.clone();
        }
        Frame::from_matrix_unchecked(self.aligned_frame_at(fraction) * self.start_rotation.transpose())
    }

    /// Frame after turning `angle` radians of the total path length.
    pub fn frame_at_angle(&self, angle: f64) -> Frame {
        let total = self.total_angle();
        if total == 0.0 {
            return self.start.clone();
        }
        self.frame_at((angle / total).clamp(0.0, 1.0))
    }

    pub fn path(&self, nsteps: usize) -> GeodesicPath {
        let nsteps = nsteps.max(1);
        let frames = (0..=nsteps)
            .map(|k| self.frame_at(k as f64 / nsteps as f64))
            .collect();
        GeodesicPath {
            frames,
            principal_angles: self.principal_angles.clone(),
            aligned_start: Frame::from_matrix_unchecked(self.aligned_start.clone()),
            aligned_target: Frame::from_matrix_unchecked(self.aligned_target.clone()),
            start_rotation: self.start_rotation.clone(),
            step_angle: self.total_angle() / nsteps as f64,
        }
    }
}

/// Frames along the geodesic between the start plane and the target plane.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    frames: Vec<Frame>,
    principal_angles: Vec<f64>,
    aligned_start: Frame,
    aligned_target: Frame,
    start_rotation: DMatrix<f64>,
    step_angle: f64,
}

impl GeodesicPath {
    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    pub fn nsteps(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn principal_angles(&self) -> &[f64] {
        &self.principal_angles
    }

    /// `Fa U`: the start frame rotated onto its principal vectors.
    pub fn aligned_start(&self) -> &Frame {
        &self.aligned_start
    }

    /// `Fz V`: the target frame rotated onto its principal vectors.
    pub fn aligned_target(&self) -> &Frame {
        &self.aligned_target
    }

    /// The `d × d` rotation `U` with `aligned_start = Fa U`.
    pub fn start_rotation(&self) -> &DMatrix<f64> {
        &self.start_rotation
    }

    /// Rotation of each principal pair per step, as a Euclidean norm.
    pub fn step_angle(&self) -> f64 {
        self.step_angle
    }

    pub fn total_angle(&self) -> f64 {
        self.principal_angles.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn last(&self) -> &Frame {
        self.frames.last().expect("paths hold at least one frame")
    }
}

pub fn geodesic_full_path(fa: &Frame, fz: &Frame, nsteps: usize) -> Result<GeodesicPath> {
    Ok(GeodesicPlan::new(fa, fz)?.path(nsteps))
}

/// Geodesic path whose steps stay within `delta` radians.
pub fn geodesic_path_with_speed(
    fa: &Frame,
    fz: &Frame,
    delta: f64,
    _tol: &Tolerances,
) -> Result<GeodesicPath> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(crate::error::TourError::InvalidInput(format!(
            "angular step must be positive, got {delta}"
        )));
    }
    let plan = GeodesicPlan::new(fa, fz)?;
    let nsteps = ((plan.total_angle() / delta).ceil() as usize).max(1);
    Ok(plan.path(nsteps))
}
