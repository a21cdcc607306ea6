//! Pairwise comparison matrices.
//!
//! A [`PcMatrix`] is a square, positive, reciprocal matrix `A = [a_ij]` where
//! `a_ij` says how many times object `i` is preferred over object `j`. Both
//! triangles are stored so row products and matrix-vector products need no
//! index juggling.

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for `a_ij * a_ji == 1` and `a_ii == 1`.
pub const RECIPROCITY_TOL: f64 = 1e-12;

/// Symmetric bound `[1/hi, hi]` on comparison values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScaleBoundRepr", into = "ScaleBoundRepr")]
pub struct ScaleBound {
    hi: f64,
}

#[derive(Serialize, Deserialize)]
struct ScaleBoundRepr {
    lo: f64,
    hi: f64,
}

impl ScaleBound {
    pub fn new(hi: f64) -> Result<Self> {
        if !hi.is_finite() || hi < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "scale upper bound must be a finite value >= 1, got {hi}"
            )));
        }
        Ok(Self { hi })
    }

    /// Saaty's fundamental scale, `[1/9, 9]`.
    pub fn fundamental() -> Self {
        Self { hi: 9.0 }
    }

    pub fn lo(&self) -> f64 {
        1.0 / self.hi
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo(), self.hi)
    }
}

impl Default for ScaleBound {
    fn default() -> Self {
        Self::fundamental()
    }
}

impl TryFrom<ScaleBoundRepr> for ScaleBound {
    type Error = Error;

    fn try_from(r: ScaleBoundRepr) -> Result<Self> {
        let b = ScaleBound::new(r.hi)?;
        if ((r.lo * r.hi) - 1.0).abs() > RECIPROCITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "scale bounds must satisfy lo * hi = 1, got lo = {}, hi = {}",
                r.lo, r.hi
            )));
        }
        Ok(b)
    }
}

impl From<ScaleBound> for ScaleBoundRepr {
    fn from(b: ScaleBound) -> Self {
        Self {
            lo: b.lo(),
            hi: b.hi,
        }
    }
}

/// Validated pairwise comparison matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct PcMatrix {
    n: usize,
    entries: Vec<f64>,
}

/// On-disk JSON shape: `{"n": 3, "entries": [[..], [..], [..]]}`.
#[derive(Serialize, Deserialize)]
pub(crate) struct MatrixRepr {
    pub(crate) n: usize,
    pub(crate) entries: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for PcMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.entries.len() != r.n {
            return Err(Error::NonSquare {
                row: r.entries.len().min(r.n),
                expected: r.n,
                found: r.entries.len(),
            });
        }
        PcMatrix::new(r.entries)
    }
}

impl From<PcMatrix> for MatrixRepr {
    fn from(m: PcMatrix) -> Self {
        Self {
            n: m.n,
            entries: m.rows().map(<[f64]>::to_vec).collect(),
        }
    }
}

impl PcMatrix {
    /// Validates a row-major grid and stores it unchanged.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        let entries: Vec<f64> = rows.into_iter().flatten().collect();
        Self::from_flat(n, entries)
    }

    fn from_flat(n: usize, entries: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(entries.len(), n * n);
        for i in 0..n {
            for j in 0..n {
                let a = entries[i * n + j];
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::NonPositiveEntry(i, j));
                }
            }
        }
        for i in 0..n {
            if (entries[i * n + i] - 1.0).abs() > RECIPROCITY_TOL {
                return Err(Error::UnitDiagonalViolation(i));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let prod = entries[i * n + j] * entries[j * n + i];
                if (prod - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(Error::ReciprocityViolation(i, j));
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// Consistent matrix `a_ij = w_i / w_j`.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let n = w.len();
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        if let Some(i) = w.iter().position(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::NonPositiveWeight(i));
        }
        let mut entries = vec![1.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let a = w[i] / w[j];
                entries[i * n + j] = a;
                entries[j * n + i] = 1.0 / a;
            }
        }
        Self::from_flat(n, entries)
    }

    /// Consistent matrix generated from hidden weights drawn log-uniformly on
    /// `[1, scale.hi]`.
    pub fn random_consistent(n: usize, seed: u64, scale: ScaleBound) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log_hi = scale.hi().ln();
        let w: Vec<f64> = (0..n).map(|_| (rng.gen::<f64>() * log_hi).exp()).collect();
        Self::from_weights(&w)
    }

    /// Multiplies or divides every upper-triangle comparison by an independent
    /// `alpha ~ U[1, beta]` and rebuilds the lower triangle by reciprocity.
    pub fn disturb(&self, beta: f64, seed: u64, clamp: Option<ScaleBound>) -> Result<Self> {
        if !(beta.is_finite() && beta >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "disturbance coefficient must be >= 1, got {beta}"
            )));
        }
        let n = self.n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = Uniform::new_inclusive(1.0, beta);
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = alpha.sample(&mut rng);
                let up: bool = rng.gen();
                let old = self.entries[i * n + j];
                let mut new = if up { old * a } else { old / a };
                if let Some(bound) = clamp {
                    new = bound.clamp(new);
                }
                if new != old {
                    entries[i * n + j] = new;
                    entries[j * n + i] = 1.0 / new;
                }
            }
        }
        Self::from_flat(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.n)
    }

    /// `A * v`, written into `out`.
    pub(crate) fn mul_vec_into(&self, v: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.rows()) {
            *o = row.iter().zip(v).map(|(a, x)| a * x).sum();
        }
    }

    /// True iff `|a_ij * a_jk / a_ik - 1| <= tol` for every triple.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    (self.get(i, j) * self.get(j, k) / self.get(i, k) - 1.0).abs() <= tol
                })
            })
        })
    }

    /// Relabels objects: row/column `p` of the result is row/column `perm[p]` here.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        if perm.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(perm[i], perm[j]))
            .collect();
        Self::from_flat(n, entries)
    }

    pub fn transposed(&self) -> Self {
        let n = self.n;
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(j, i))
            .collect();
        Self { n, entries }
    }
}
