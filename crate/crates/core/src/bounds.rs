//! Distance bounds between EVM and GMM priority vectors and the rank-stability
//! certificates derived from them.
//!
//! With `κ = 1 - KI`, the Manhattan distance between the two vectors obeys
//! `κ² - 1 <= MD <= 1/κ² - 1 = K`. If the smallest adjacent gap `d` of the
//! sorted EVM weights exceeds `K`, both methods rank all objects identically;
//! if the top gap `d*` exceeds `K`, they agree on the best object. Otherwise
//! `k`, the largest integer with `k d < K`, bounds the number of swaps and
//! yields lower bounds for Kendall's τ and Spearman's ρ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inconsistency::koczkodaj_ki;
use crate::matrix::PcMatrix;
use crate::prioritize::{evm_default, PriorityVector};
use crate::rankstats::TIE_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    pub n: usize,
    pub ki: f64,
    pub kappa: f64,
    /// Upper bound `1/κ² - 1` on the EVM/GMM Manhattan distance.
    #[serde(rename = "K")]
    pub distance_budget: f64,
    /// Lower bound `κ² - 1`; never positive.
    pub md_lower: f64,
    pub d: f64,
    pub d_star: f64,
    /// Largest number of adjacent swaps the distance budget allows.
    #[serde(rename = "k")]
    pub max_swaps: usize,
    pub prop1_holds: bool,
    pub prop2_holds: bool,
    pub tau_lower: f64,
    pub rho_lower: f64,
}

fn check_ki(ki: f64) -> Result<f64> {
    if (0.0..1.0).contains(&ki) {
        Ok(1.0 - ki)
    } else {
        Err(Error::InvalidKi(ki))
    }
}

/// `(κ² - 1, 1/κ² - 1)` for `κ = 1 - ki`.
pub fn md_bounds(ki: f64) -> Result<(f64, f64)> {
    let kappa = check_ki(ki)?;
    let k2 = kappa * kappa;
    Ok((k2 - 1.0, 1.0 / k2 - 1.0))
}

/// `(d, d*)`: smallest adjacent gap and top gap of the weights sorted
/// descending.
pub fn weight_gaps(w: &PriorityVector) -> Result<(f64, f64)> {
    let (d, d_star) = raw_gaps(w.weights());
    if d < TIE_TOL {
        return Err(Error::TiesPresent);
    }
    Ok((d, d_star))
}

/// Gaps without the tie check; `d` may be zero.
pub(crate) fn raw_gaps(w: &[f64]) -> (f64, f64) {
    let mut sorted = w.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let d = sorted
        .windows(2)
        .map(|p| p[0] - p[1])
        .fold(f64::INFINITY, f64::min);
    (d, sorted[0] - sorted[1])
}

/// True iff the smallest EVM gap strictly exceeds `1/κ² - 1`.
pub fn prop1_certify(w_ev: &PriorityVector, ki: f64) -> Result<bool> {
    let (_, budget) = md_bounds(ki)?;
    let (d, _) = weight_gaps(w_ev)?;
    Ok(d > budget)
}

/// True iff the top EVM gap strictly exceeds `1/κ² - 1`.
pub fn prop2_certify(w_ev: &PriorityVector, ki: f64) -> Result<bool> {
    let (_, budget) = md_bounds(ki)?;
    let (_, d_star) = weight_gaps(w_ev)?;
    Ok(d_star > budget)
}

fn pairs(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Largest `k >= 0` with `k d < K`, capped at `C(n,2)`.
///
/// When `K / d` is an integer the two defining inequalities cannot both be
/// strict; the strict `k d < K` wins, giving `k = K/d - 1`.
pub fn find_k(d: f64, budget: f64, n: usize) -> Result<usize> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::DegenerateGap(d));
    }
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "distance budget must be finite and >= 0, got {budget}"
        )));
    }
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    let cap = pairs(n);
    let guess = ((budget / d).ceil() - 1.0).max(0.0);
    let mut k = if guess >= cap as f64 { cap } else { guess as usize };
    // Repair rounding in the division so the inequalities hold in the same
    // arithmetic the caller will check them in.
    while k > 0 && k as f64 * d >= budget {
        k -= 1;
    }
    while k < cap && (k + 1) as f64 * d < budget {
        k += 1;
    }
    Ok(k)
}

fn check_k(n: usize, k: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    let c = pairs(n);
    if k > c {
        return Err(Error::KOutOfRange { n, k });
    }
    Ok(c)
}

/// Kendall lower bound `(C(n,2) - 2k) / C(n,2)`.
pub fn tau_lower_bound(n: usize, k: usize) -> Result<f64> {
    let c = check_k(n, k)? as i64;
    Ok((c - 2 * k as i64) as f64 / c as f64)
}

/// Spearman lower bound `1 - 6(k² + k) / (n(n² - 1))`.
pub fn rho_lower_bound(n: usize, k: usize) -> Result<f64> {
    check_k(n, k)?;
    let denom = (n * (n * n - 1)) as i64;
    let k = k as i64;
    Ok((denom - 6 * (k * k + k)) as f64 / denom as f64)
}

/// Supremum of `d` over positive weight vectors summing to 1:
/// `1 / (1 + 2 + ... + (n-1)) = 2 / (n(n-1))`.
pub fn max_feasible_gap(n: usize) -> f64 {
    assert!(n >= 2, "max_feasible_gap needs n >= 2");
    1.0 / pairs(n) as f64
}

/// Certificate from scalar inputs, without a matrix.
pub fn certify_scalars(n: usize, ki: f64, d: f64, d_star: f64) -> Result<StabilityCertificate> {
    let (md_lower, budget) = md_bounds(ki)?;
    if d_star < d {
        return Err(Error::InvalidParameter(format!(
            "top gap d* = {d_star} is smaller than the minimum gap d = {d}"
        )));
    }
    let k = find_k(d, budget, n)?;
    Ok(StabilityCertificate {
        n,
        ki,
        kappa: 1.0 - ki,
        distance_budget: budget,
        md_lower,
        d,
        d_star,
        max_swaps: k,
        prop1_holds: d > budget,
        prop2_holds: d_star > budget,
        tau_lower: tau_lower_bound(n, k)?,
        rho_lower: rho_lower_bound(n, k)?,
    })
}

/// Certificate for an EVM priority vector and an inconsistency value.
pub fn certify(w_ev: &PriorityVector, ki: f64) -> Result<StabilityCertificate> {
    let (d, d_star) = weight_gaps(w_ev)?;
    certify_scalars(w_ev.len(), ki, d, d_star)
}

/// Runs EVM and KI on `m` and assembles the certificate.
pub fn full_certificate(m: &PcMatrix) -> Result<StabilityCertificate> {
    let ev = evm_default(m)?;
    certify(&ev, koczkodaj_ki(m))
}
