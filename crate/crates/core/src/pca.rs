//! Principal components via the SVD of the centered data.

use nalgebra::{DMatrix, DVector};

use crate::data::Dataset;
use crate::error::{Result, TourError};
use crate::linalg;

#[derive(Debug, Clone)]
pub struct PcaResult {
    /// `p × p` orthonormal; column `k` holds the loadings of component `k`.
    pub rotation: DMatrix<f64>,
    /// Component variances, non-increasing.
    pub variances: Vec<f64>,
    /// `n × p` centered data expressed in the components.
    pub scores: DMatrix<f64>,
    pub cumulative_proportion: Vec<f64>,
    pub column_names: Vec<String>,
}

impl PcaResult {
    /// Scores of the first `k` components as a dataset named `PC1..PCk`.
    pub fn scores_dataset(&self, k: usize) -> Result<Dataset> {
        if k == 0 || k > self.scores.ncols() {
            return Err(TourError::InvalidInput(format!(
                "cannot keep {k} of {} components",
                self.scores.ncols()
            )));
        }
        let values = self.scores.columns(0, k).into_owned();
        Dataset::new(values, (1..=k).map(|i| format!("PC{i}")).collect())
    }
}

pub fn pca(dataset: &Dataset) -> Result<PcaResult> {
    let (n, p) = (dataset.n(), dataset.p());
    let mut centered = dataset.values().clone();
    for k in 0..p {
        let mean = centered.column(k).mean();
        centered.column_mut(k).add_scalar_mut(-mean);
    }

    let svd = centered.clone().try_svd(false, true, f64::EPSILON, 10_000).ok_or_else(|| {
        TourError::NumericalFailure("SVD of the centered data did not converge".into())
    })?;
    let v_t = svd
        .v_t
        .ok_or_else(|| TourError::NumericalFailure("missing right singular vectors".into()))?;

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(p);
    let mut variances = Vec::with_capacity(p);
    for &k in &order {
        let mut v: DVector<f64> = v_t.row(k).transpose();
        // Sign convention: the largest loading is positive.
        let lead = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if lead < 0.0 {
            v.neg_mut();
        }
        columns.push(v);
        let s = svd.singular_values[k];
        variances.push(s * s / (n as f64 - 1.0));
    }
    // Fewer observations than variables: the rest carry no variance.
    linalg::complete_basis(&mut columns, p, p);
    variances.resize(p, 0.0);

    let rotation = DMatrix::from_columns(&columns);
    let scores = &centered * &rotation;
    let total: f64 = variances.iter().sum();
    let mut acc = 0.0;
    let cumulative_proportion: Vec<f64> = variances
        .iter()
        .map(|v| {
            acc += v;
            if total > 0.0 {
                acc / total
            } else {
                1.0
            }
        })
        .collect();

    Ok(PcaResult {
        rotation,
        variances,
        scores,
        cumulative_proportion,
        column_names: dataset.column_names().to_vec(),
    })
}
