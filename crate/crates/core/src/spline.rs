//! Ridge-penalized least-squares cubic B-spline regression.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, TourError};

const DEGREE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineConfig {
    /// Interior knots, placed at equally spaced quantiles of `x`.
    pub interior_knots: usize,
    /// Ridge penalty on the basis coefficients.
    pub ridge: f64,
}

impl Default for SplineConfig {
    fn default() -> Self {
        SplineConfig {
            interior_knots: 10,
            ridge: 1e-4,
        }
    }
}

/// Sample quantile with linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Clamped knot vector: boundary knots repeated `DEGREE + 1` times.
fn knot_vector(sorted: &[f64], interior: usize) -> Vec<f64> {
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    let mut knots = vec![lo; DEGREE + 1];
    knots.extend((1..=interior).map(|k| quantile(sorted, k as f64 / (interior + 1) as f64)));
    knots.extend(std::iter::repeat_n(hi, DEGREE + 1));
    knots
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Values of every B-spline basis function at `x` (Cox-de Boor recursion).
fn basis_row(knots: &[f64], x: f64, out: &mut [f64]) {
    let nbasis = knots.len() - DEGREE - 1;
    let last = knots[knots.len() - 1];
    // Degree-zero indicators; the right boundary belongs to the last
    // non-empty interval.
    let mut n: Vec<f64> = (0..knots.len() - 1)
        .map(|i| {
            let inside = knots[i] <= x && x < knots[i + 1];
            let at_end = x == last && knots[i] < knots[i + 1] && knots[i + 1] == last;
            if inside || at_end {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for k in 1..=DEGREE {
        for i in 0..knots.len() - 1 - k {
            let left = ratio(x - knots[i], knots[i + k] - knots[i]) * n[i];
            let right = ratio(knots[i + k + 1] - x, knots[i + k + 1] - knots[i + 1]) * n[i + 1];
            n[i] = left + right;
        }
    }
    out.copy_from_slice(&n[..nbasis]);
}

/// Fitted values of a cubic spline regression of `y` on `x`.
///
/// `y` is centered before the ridge solve and the mean added back, so the
/// fit commutes with translations of `y`.
pub fn fit_cubic_spline(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    fit_cubic_spline_with(x, y, &SplineConfig::default())
}

pub fn fit_cubic_spline_with(x: &[f64], y: &[f64], config: &SplineConfig) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(TourError::InvalidInput(format!(
            "x has {} values but y has {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 10 {
        return Err(TourError::InvalidInput(format!(
            "spline fit needs at least 10 observations, got {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(TourError::InvalidInput("non-finite observation".into()));
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let distinct = 1 + sorted.windows(2).filter(|w| w[0] != w[1]).count();
    if distinct < 4 {
        return Err(TourError::DegenerateInput(format!(
            "predictor has only {distinct} distinct values"
        )));
    }

    let knots = knot_vector(&sorted, config.interior_knots);
    let nbasis = knots.len() - DEGREE - 1;
    let n = x.len();
    let mut design = DMatrix::zeros(n, nbasis);
    let mut row = vec![0.0; nbasis];
    for (r, &xv) in x.iter().enumerate() {
        basis_row(&knots, xv, &mut row);
        for (c, v) in row.iter().enumerate() {
            design[(r, c)] = *v;
        }
    }

    let mean = y.iter().sum::<f64>() / n as f64;
    let centered = DVector::from_iterator(n, y.iter().map(|v| v - mean));
    let mut gram = design.transpose() * &design;
    for k in 0..nbasis {
        gram[(k, k)] += config.ridge;
    }
    let rhs = design.transpose() * &centered;
    let chol = gram.cholesky().ok_or_else(|| {
        TourError::NumericalFailure("spline normal equations are not positive definite".into())
    })?;
    let coef = chol.solve(&rhs);
    let fitted = design * coef;
    Ok(fitted.iter().map(|v| v + mean).collect())
}
