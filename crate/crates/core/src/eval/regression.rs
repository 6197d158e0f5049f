//! Closed-form ridge regression and L2-regularized logistic regression.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

fn design(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let dim = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || dim == 0 || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidParameter("design matrix needs non-empty rows of equal width".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]))
}

fn column_means(x: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_fn(x.ncols(), |j, _| x.column(j).mean())
}

/// Linear model with an unpenalized intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl RidgeModel {
    /// Solves `(Xc'Xc + lambda I) w = Xc'yc` on centered data.
    pub fn fit(rows: &[Vec<f64>], targets: &[f64], lambda: f64) -> Result<Self> {
        if rows.len() != targets.len() {
            return Err(Error::InvalidParameter("ridge: row and target counts differ".into()));
        }
        if !(lambda >= 0.0) {
            return Err(Error::InvalidParameter("ridge: lambda must be non-negative".into()));
        }
        let x = design(rows)?;
        let y = DVector::from_column_slice(targets);
        let x_mean = column_means(&x);
        let y_mean = y.mean();
        let mut xc = x.clone();
        for mut row in xc.row_iter_mut() {
            row -= x_mean.transpose();
        }
        let yc = y.add_scalar(-y_mean);
        let mut gram = xc.transpose() * &xc;
        for d in 0..gram.nrows() {
            gram[(d, d)] += lambda;
        }
        let rhs = xc.transpose() * yc;
        let w = match gram.clone().cholesky() {
            Some(ch) => ch.solve(&rhs),
            None => gram
                .svd(true, true)
                .solve(&rhs, 1e-12)
                .map_err(|e| Error::Internal(format!("ridge solve failed: {e}")))?,
        };
        let intercept = y_mean - w.dot(&x_mean);
        Ok(RidgeModel { weights: w.iter().copied().collect(), intercept })
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        self.intercept + row.iter().zip(&self.weights).map(|(a, b)| a * b).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub l2: f64,
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig { l2: 1e-4, epochs: 500, learning_rate: 0.1 }
    }
}

/// Logistic regression fit by full-batch gradient descent on standardized features.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    mean: Vec<f64>,
    scale: Vec<f64>,
    weights: Vec<f64>,
    bias: f64,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl LogisticModel {
    pub fn fit(rows: &[Vec<f64>], labels: &[bool], config: &LogisticConfig) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidParameter("logistic: row and label counts differ".into()));
        }
        if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
            return Err(Error::SingleClass);
        }
        let x = design(rows)?;
        let (m, d) = x.shape();
        let mean = column_means(&x);
        let scale = DVector::from_fn(d, |j, _| {
            let sd = (x.column(j).map(|v| (v - mean[j]).powi(2)).sum() / m as f64).sqrt();
            if sd > 1e-12 { sd } else { 1.0 }
        });
        let z = DMatrix::from_fn(m, d, |i, j| (x[(i, j)] - mean[j]) / scale[j]);
        let y = DVector::from_iterator(m, labels.iter().map(|&l| if l { 1.0 } else { 0.0 }));
        let mut w = DVector::zeros(d);
        let mut b = 0.0;
        for _ in 0..config.epochs {
            let residual = (&z * &w).add_scalar(b).map(sigmoid) - &y;
            let grad_w = z.transpose() * &residual / m as f64 + &w * config.l2;
            let grad_b = residual.sum() / m as f64;
            w -= grad_w * config.learning_rate;
            b -= grad_b * config.learning_rate;
        }
        Ok(LogisticModel {
            mean: mean.iter().copied().collect(),
            scale: scale.iter().copied().collect(),
            weights: w.iter().copied().collect(),
            bias: b,
        })
    }

    /// Log-odds of the positive class.
    pub fn decision(&self, row: &[f64]) -> f64 {
        self.bias
            + row
                .iter()
                .zip(&self.mean)
                .zip(&self.scale)
                .zip(&self.weights)
                .map(|(((x, m), s), w)| (x - m) / s * w)
                .sum::<f64>()
    }

    pub fn probability(&self, row: &[f64]) -> f64 {
        sigmoid(self.decision(row))
    }
}
