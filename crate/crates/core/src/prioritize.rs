//! Priority vectors by the eigenvalue method (EVM) and the geometric mean
//! method (GMM). Both are normalized to sum to 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::PcMatrix;

pub const EVM_DEFAULT_TOL: f64 = 1e-12;
pub const EVM_DEFAULT_MAX_ITER: usize = 10_000;

/// Allowed drift of `Σ w_i` from 1.
pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Ev,
    Gm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityVector {
    weights: Vec<f64>,
    method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    lambda_max: Option<f64>,
}

impl PriorityVector {
    /// Wraps externally supplied weights. They must be positive and already
    /// sum to 1.
    pub fn new(weights: Vec<f64>, method: Method, lambda_max: Option<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::TooSmall(weights.len()));
        }
        if let Some(i) = weights.iter().position(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::NonPositiveWeight(i));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self {
            weights,
            method,
            lambda_max,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn lambda_max(&self) -> Option<f64> {
        self.lambda_max
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
}

/// Principal right eigenvector by power iteration from the uniform vector.
///
/// Iterates `x <- A x / Σ(A x)` until two successive iterates differ by less
/// than `tol` in L1. Perron-Frobenius guarantees convergence for positive
/// matrices. `lambda_max` is the mean of `(A w)_i / w_i` at the final iterate.
pub fn evm(m: &PcMatrix, tol: f64, max_iter: usize) -> Result<PriorityVector> {
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::InvalidParameter(format!(
            "evm needs tol > 0 and max_iter >= 1, got tol = {tol}, max_iter = {max_iter}"
        )));
    }
    let n = m.n();
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut converged = false;
    for _ in 0..max_iter {
        m.mul_vec_into(&x, &mut y);
        normalize(&mut y);
        let delta: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut y);
        if delta < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(max_iter));
    }
    m.mul_vec_into(&x, &mut y);
    let lambda = y.iter().zip(&x).map(|(ax, w)| ax / w).sum::<f64>() / n as f64;
    Ok(PriorityVector {
        weights: x,
        method: Method::Ev,
        lambda_max: Some(lambda),
    })
}

/// [`evm`] with the default tolerance and iteration cap.
pub fn evm_default(m: &PcMatrix) -> Result<PriorityVector> {
    evm(m, EVM_DEFAULT_TOL, EVM_DEFAULT_MAX_ITER)
}

/// Normalized row geometric means, computed as the exponential of the mean
/// row logarithm.
pub fn gmm(m: &PcMatrix) -> PriorityVector {
    let n = m.n() as f64;
    let logs: Vec<f64> = m
        .rows()
        .map(|row| row.iter().map(|a| a.ln()).sum::<f64>() / n)
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    normalize(&mut w);
    PriorityVector {
        weights: w,
        method: Method::Gm,
        lambda_max: None,
    }
}
