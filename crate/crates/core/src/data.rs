//! Numeric datasets: CSV ingestion, standardization and synthetic generators.

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, TourError};

/// Default number of observations in the bundled sine data.
pub const SINE_N: usize = 300;
/// Default noise level (relative to a unit sine) of the bundled sine data.
pub const SINE_NOISE_SD: f64 = 0.05;
/// Seed of the bundled sine data.
pub const SINE_SEED: u64 = 2023;

/// An `n × p` numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: DMatrix<f64>,
    column_names: Vec<String>,
}

impl Dataset {
    pub fn new(values: DMatrix<f64>, column_names: Vec<String>) -> Result<Self> {
        if values.ncols() != column_names.len() {
            return Err(TourError::InvalidInput(format!(
                "{} columns but {} names",
                values.ncols(),
                column_names.len()
            )));
        }
        if values.nrows() < 2 {
            return Err(TourError::InvalidInput(format!(
                "dataset needs at least 2 rows, got {}",
                values.nrows()
            )));
        }
        let mut seen = HashSet::new();
        for name in &column_names {
            if !seen.insert(name.as_str()) {
                return Err(TourError::InvalidInput(format!(
                    "duplicate column name '{name}'"
                )));
            }
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            let (row, col) = (pos % values.nrows(), pos / values.nrows());
            return Err(TourError::InvalidInput(format!(
                "non-finite value at row {}, column '{}'",
                row + 1,
                column_names[col]
            )));
        }
        Ok(Dataset {
            values,
            column_names,
        })
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.column_names
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| TourError::InvalidInput(format!("no column named '{name}'")))
    }

    /// Flips the sign of the named columns.
    pub fn negate_columns(&mut self, names: &[impl AsRef<str>]) -> Result<()> {
        for name in names {
            let k = self.column_index(name.as_ref())?;
            self.values.column_mut(k).neg_mut();
        }
        Ok(())
    }

    /// Keeps the given columns, in the given order.
    pub fn select(&self, columns: &[usize]) -> Result<Dataset> {
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.p()) {
            return Err(TourError::InvalidInput(format!(
                "column {bad} out of range for p = {}",
                self.p()
            )));
        }
        let values = DMatrix::from_fn(self.n(), columns.len(), |i, j| {
            self.values[(i, columns[j])]
        });
        let names = columns
            .iter()
            .map(|&c| self.column_names[c].clone())
            .collect();
        Dataset::new(values, names)
    }
}

fn is_missing(cell: &str) -> bool {
    matches!(cell, "" | "NA" | "NaN" | "nan" | "null" | "NULL")
}

/// Reads a headed numeric CSV.
pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let column_names: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if column_names.is_empty() {
        return Err(TourError::InvalidInput("CSV has no columns".into()));
    }
    let mut cells = Vec::new();
    let mut n = 0;
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let row = r + 1;
        for (cell, name) in record.iter().zip(&column_names) {
            if is_missing(cell) {
                return Err(TourError::MissingValue {
                    row,
                    column: name.clone(),
                });
            }
            let v: f64 = cell.parse().map_err(|_| TourError::Parse {
                row,
                column: name.clone(),
                value: cell.to_owned(),
            })?;
            cells.push(v);
        }
        n += 1;
    }
    let values = DMatrix::from_row_slice(n, column_names.len(), &cells);
    Dataset::new(values, column_names)
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| TourError::io(path, e))?;
    read_csv(file)
}

/// Numbers are written with 17 significant digits so they read back exactly.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(dataset: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(&dataset.column_names)?;
    for row in dataset.values.row_iter() {
        w.write_record(row.iter().map(|v| format_number(*v)))?;
    }
    w.flush().map_err(|e| TourError::io("<csv writer>", e))?;
    Ok(())
}

pub fn save_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| TourError::io(path, e))?;
    write_csv(dataset, file)
}

pub(crate) fn column_mean_sd(values: &DMatrix<f64>, k: usize) -> (f64, f64) {
    let col = values.column(k);
    let n = col.len() as f64;
    let mean = col.sum() / n;
    let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Centers every column and scales it to unit sample standard deviation.
pub fn standardize(dataset: &Dataset) -> Result<Dataset> {
    let mut values = dataset.values.clone();
    for k in 0..values.ncols() {
        let (mean, sd) = column_mean_sd(&values, k);
        if sd.is_nan() || sd <= 0.0 || sd < 1e-12 * mean.abs() {
            return Err(TourError::DegenerateInput(format!(
                "column '{}' has zero variance",
                dataset.column_names[k]
            )));
        }
        values.column_mut(k).apply(|v| *v = (*v - mean) / sd);
    }
    Dataset::new(values, dataset.column_names.clone())
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn check_n(n: usize) -> Result<()> {
    if n < 10 {
        return Err(TourError::InvalidInput(format!(
            "generators need n >= 10, got {n}"
        )));
    }
    Ok(())
}

/// Two periods of a sine curve: `x ~ U(−1, 1)`, `y = (sin(2πx) + ε) / 2`
/// with `ε ~ N(0, noise_sd²)`. Columns `x`, `y`.
pub fn generate_sine(n: usize, noise_sd: f64, seed: u64) -> Result<Dataset> {
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = DMatrix::zeros(n, 2);
    for i in 0..n {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y = 0.5 * ((2.0 * std::f64::consts::PI * x).sin() + noise_sd * normal(&mut rng));
        values[(i, 0)] = x;
        values[(i, 1)] = y;
    }
    Dataset::new(values, vec!["x".into(), "y".into()])
}

/// The bundled sine data set.
pub fn bundled_sine() -> Dataset {
    generate_sine(SINE_N, SINE_NOISE_SD, SINE_SEED).expect("valid generator arguments")
}

/// Standard deviation of the pure-noise columns of [`generate_sine_in_noise`].
pub const NOISE_COLUMN_SD: f64 = 0.5;

/// Four columns: two independent Gaussian noise columns (`noise1`, `noise2`,
/// sd [`NOISE_COLUMN_SD`]) followed by the sine pair (`x`, `y`) of
/// [`generate_sine`].
pub fn generate_sine_in_noise(n: usize, noise_sd: f64, seed: u64) -> Result<Dataset> {
    check_n(n)?;
    let sine = generate_sine(n, noise_sd, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut values = DMatrix::zeros(n, 4);
    for i in 0..n {
        values[(i, 0)] = NOISE_COLUMN_SD * normal(&mut rng);
        values[(i, 1)] = NOISE_COLUMN_SD * normal(&mut rng);
        values[(i, 2)] = sine.values[(i, 0)];
        values[(i, 3)] = sine.values[(i, 1)];
    }
    Dataset::new(
        values,
        vec!["noise1".into(), "noise2".into(), "x".into(), "y".into()],
    )
}

/// Six columns driven by two latent factors with a curved relation
/// between them, plus small independent noise. A stand-in for a panel of
/// co-moving series such as exchange rates.
pub fn generate_two_factor(n: usize, noise_sd: f64, seed: u64) -> Result<Dataset> {
    check_n(n)?;
    const LOADINGS: [[f64; 2]; 6] = [
        [0.9, 0.2],
        [0.8, -0.1],
        [0.3, 0.9],
        [-0.2, 1.0],
        [0.85, 0.1],
        [0.7, -0.3],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = DMatrix::zeros(n, 6);
    for i in 0..n {
        let t: f64 = rng.random_range(-1.5..1.5);
        let f1 = t;
        let f2 = t * t - 0.75 + 0.3 * normal(&mut rng);
        for (k, l) in LOADINGS.iter().enumerate() {
            values[(i, k)] = l[0] * f1 + l[1] * f2 + noise_sd * normal(&mut rng);
        }
    }
    let names = (1..=6).map(|k| format!("x{k}")).collect();
    Dataset::new(values, names)
}
