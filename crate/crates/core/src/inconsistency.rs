//! Koczkodaj's triad index and Saaty's consistency index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::PcMatrix;
use crate::prioritize::evm_default;

/// `λmax` may undershoot `n` by this much before [`saaty_ci`] rejects it.
pub const LAMBDA_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InconsistencyReport {
    pub n: usize,
    pub ki: f64,
    pub kappa: f64,
    pub lambda_max: f64,
    pub ci: f64,
}

impl InconsistencyReport {
    /// Runs the eigenvalue method once and derives every index from it.
    pub fn compute(m: &PcMatrix) -> Result<Self> {
        let ev = evm_default(m)?;
        let lambda_max = ev.lambda_max().expect("evm always reports lambda_max");
        let ki = koczkodaj_ki(m);
        Ok(Self {
            n: m.n(),
            ki,
            kappa: 1.0 - ki,
            lambda_max,
            ci: saaty_ci(lambda_max, m.n())?,
        })
    }
}

/// Worst triad deviation `max 1 - min(q, 1/q)` with `q = a_ij / (a_ik a_kj)`
/// over ordered triples of distinct indices. Zero for `n < 3`.
pub fn koczkodaj_ki(m: &PcMatrix) -> f64 {
    let n = m.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let direct = m.get(i, j);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let q = direct / (m.get(i, k) * m.get(k, j));
                worst = worst.max(1.0 - q.min(1.0 / q));
            }
        }
    }
    worst
}

/// `CI = (λmax - n) / (n - 1)`, floored at zero.
pub fn saaty_ci(lambda_max: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    if !lambda_max.is_finite() || lambda_max < n as f64 - LAMBDA_SLACK {
        return Err(Error::InvalidLambda { lambda: lambda_max, n });
    }
    Ok(((lambda_max - n as f64) / (n as f64 - 1.0)).max(0.0))
}
