//! Ordinal rankings, Kendall's τ, Spearman's ρ and the Manhattan distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prioritize::PriorityVector;

/// Adjacent sorted weights closer than this are treated as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Objects ordered from best to worst.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinalRanking {
    /// `order[p]` is the object at position `p` (0 = best).
    order: Vec<usize>,
    /// `rank_of[i]` is the 1-based rank of object `i`.
    rank_of: Vec<usize>,
    tied: bool,
}

impl OrdinalRanking {
    /// Ranking from an explicit best-to-worst order. Carries no tie flag.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut rank_of = vec![0; n];
        for (p, &obj) in order.iter().enumerate() {
            if obj >= n || rank_of[obj] != 0 {
                return Err(Error::InvalidParameter(format!(
                    "{order:?} is not a permutation of 0..{n}"
                )));
            }
            rank_of[obj] = p + 1;
        }
        Ok(Self {
            order,
            rank_of,
            tied: false,
        })
    }

    /// Sorts by weight, descending; equal weights keep ascending index order.
    pub fn from_weights(w: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..w.len()).collect();
        order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
        let tied = order
            .windows(2)
            .any(|p| (w[p[0]] - w[p[1]]).abs() <= TIE_TOL);
        let mut r = Self::from_order(order).expect("sorted indices form a permutation");
        r.tied = tied;
        r
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn rank_of(&self) -> &[usize] {
        &self.rank_of
    }

    pub fn has_ties(&self) -> bool {
        self.tied
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn best(&self) -> Option<usize> {
        self.order.first().copied()
    }
}

pub fn ordinal_ranking(w: &PriorityVector) -> OrdinalRanking {
    OrdinalRanking::from_weights(w.weights())
}

fn check_pair(x: &OrdinalRanking, y: &OrdinalRanking) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.has_ties() || y.has_ties() {
        return Err(Error::TiesPresent);
    }
    if x.len() < 2 {
        return Err(Error::TooSmall(x.len()));
    }
    Ok(x.len())
}

/// `τ = 2 / (n(n-1)) Σ_{i<j} sgn(x_i - x_j) sgn(y_i - y_j)` on object ranks.
pub fn kendall_tau(x: &OrdinalRanking, y: &OrdinalRanking) -> Result<f64> {
    let n = check_pair(x, y)?;
    let (rx, ry) = (x.rank_of(), y.rank_of());
    let mut s: i64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let sx = (rx[i] as i64 - rx[j] as i64).signum();
            let sy = (ry[i] as i64 - ry[j] as i64).signum();
            s += sx * sy;
        }
    }
    let pairs = (n * (n - 1) / 2) as i64;
    Ok(s as f64 / pairs as f64)
}

/// `ρ = 1 - 6 Σ d_i² / (n(n² - 1))` with `d_i` the rank difference of object `i`.
pub fn spearman_rho(x: &OrdinalRanking, y: &OrdinalRanking) -> Result<f64> {
    let n = check_pair(x, y)?;
    let d2: i64 = x
        .rank_of()
        .iter()
        .zip(y.rank_of())
        .map(|(&a, &b)| (a as i64 - b as i64).pow(2))
        .sum();
    let denom = (n * (n * n - 1)) as i64;
    Ok((denom - 6 * d2) as f64 / denom as f64)
}

/// `Σ |u_i - v_i|`.
pub fn manhattan_distance(u: &PriorityVector, v: &PriorityVector) -> Result<f64> {
    l1_distance(u.weights(), v.weights())
}

pub fn l1_distance(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(u.iter().zip(v).map(|(a, b)| (a - b).abs()).sum())
}
