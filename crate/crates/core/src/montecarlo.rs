//! Monte Carlo study of how often the full-ranking certificate holds.
//!
//! `base_count` consistent matrices are each disturbed once per value of the
//! disturbance coefficient `β` in an arithmetic sweep. Every trial records
//! both priority vectors, the inconsistency indices, the certificate verdicts
//! and the measured agreement between the EVM and GMM rankings.
//!
//! Randomness is derived per trial from `(master_seed, base, beta)`, and
//! results are gathered in trial order, so output does not depend on how
//! many threads evaluate the trials.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{certify_scalars, md_bounds, raw_gaps};
use crate::error::{Error, Result};
use crate::inconsistency::{koczkodaj_ki, saaty_ci};
use crate::matrix::{PcMatrix, ScaleBound};
use crate::prioritize::{evm_default, gmm};
use crate::rankstats::{kendall_tau, l1_distance, spearman_rho, OrdinalRanking};

pub const DEFAULT_SEED: u64 = 20_230_529;

/// Slack for the distance-bound soundness check.
pub const MD_BOUND_SLACK: f64 = 1e-8;
/// Slack for the τ and ρ lower-bound soundness checks.
pub const CORRELATION_SLACK: f64 = 1e-12;

/// Uniform bins over `[lo, hi)`. A missing bound is taken from the data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    pub count: usize,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl BinSpec {
    pub fn fixed(count: usize, lo: f64, hi: f64) -> Self {
        Self {
            count,
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    /// `count` bins from 0 to the largest observed value.
    pub fn observed(count: usize) -> Self {
        Self {
            count,
            lo: Some(0.0),
            hi: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n: usize,
    pub base_count: usize,
    pub beta_start: f64,
    pub beta_step: f64,
    pub beta_end: f64,
    pub master_seed: u64,
    /// Clip disturbed comparisons into this range.
    pub clamp: Option<ScaleBound>,
    /// Hidden weights of the base matrices are log-uniform on `[1, hi]`.
    pub base_scale: ScaleBound,
    pub ki_bins: BinSpec,
    pub ci_bins: BinSpec,
}

impl McConfig {
    /// 250 bases, `β = 1, 1.02, ..., 30`.
    pub fn standard(n: usize) -> Self {
        Self {
            n,
            base_count: 250,
            beta_start: 1.0,
            beta_step: 0.02,
            beta_end: 30.0,
            master_seed: DEFAULT_SEED,
            clamp: None,
            base_scale: ScaleBound::fundamental(),
            ki_bins: BinSpec::fixed(50, 0.0, 1.0),
            ci_bins: BinSpec::observed(50),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n < 2 {
            return Err(Error::TooSmall(self.n));
        }
        if self.base_count == 0 {
            return bad("base_count must be at least 1".into());
        }
        if !(self.beta_start >= 1.0 && self.beta_start.is_finite()) {
            return bad(format!("beta_start must be >= 1, got {}", self.beta_start));
        }
        if !(self.beta_step > 0.0 && self.beta_step.is_finite()) {
            return bad(format!("beta_step must be > 0, got {}", self.beta_step));
        }
        if !(self.beta_end >= self.beta_start && self.beta_end.is_finite()) {
            return bad(format!(
                "beta_end {} is below beta_start {}",
                self.beta_end, self.beta_start
            ));
        }
        for (name, b) in [("ki_bins", self.ki_bins), ("ci_bins", self.ci_bins)] {
            if b.count == 0 {
                return bad(format!("{name} needs at least one bin"));
            }
            if let (Some(lo), Some(hi)) = (b.lo, b.hi) {
                if hi.is_nan() || hi <= lo {
                    return bad(format!("{name} range [{lo}, {hi}) is empty"));
                }
            }
        }
        Ok(())
    }

    /// The `β` sweep. Values are `start + i * step`, so no rounding drift
    /// accumulates; the count tolerates `(end - start) / step` landing a hair
    /// below an integer.
    pub fn betas(&self) -> Vec<f64> {
        let steps = ((self.beta_end - self.beta_start) / self.beta_step + 1e-9).floor() as usize;
        (0..=steps)
            .map(|i| (self.beta_start + i as f64 * self.beta_step).min(self.beta_end))
            .collect()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a sequence of words into one seed.
pub fn derive_seed(master: u64, words: &[u64]) -> u64 {
    words
        .iter()
        .fold(splitmix64(master), |h, &w| splitmix64(h ^ splitmix64(w)))
}

const BASE_TAG: u64 = 0xBA5E;
const TRIAL_TAG: u64 = 0x7E57;

pub fn base_seed(master: u64, base: usize) -> u64 {
    derive_seed(master, &[BASE_TAG, base as u64])
}

pub fn trial_seed(master: u64, base: usize, beta_index: usize) -> u64 {
    derive_seed(master, &[TRIAL_TAG, base as u64, beta_index as u64])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: usize,
    pub base_index: usize,
    pub beta_index: usize,
    pub beta: f64,
    pub ki: f64,
    pub ci: f64,
    pub d: f64,
    pub d_star: f64,
    #[serde(rename = "K")]
    pub distance_budget: f64,
    pub k: Option<usize>,
    pub prop1_holds: bool,
    pub prop2_holds: bool,
    pub rankings_identical: bool,
    pub top1_identical: bool,
    pub md: f64,
    pub tau: Option<f64>,
    pub rho: Option<f64>,
    pub tau_lower: Option<f64>,
    pub rho_lower: Option<f64>,
    pub tie_flag: bool,
}

impl TrialRecord {
    pub fn category(&self) -> Category {
        if self.prop1_holds {
            Category::Met
        } else if self.rankings_identical {
            Category::UnmetIdentical
        } else {
            Category::NotIdentical
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Met,
    UnmetIdentical,
    NotIdentical,
}

/// Evaluates one disturbed matrix.
pub fn evaluate_trial(
    m: &PcMatrix,
    trial_id: usize,
    base_index: usize,
    beta_index: usize,
    beta: f64,
) -> Result<TrialRecord> {
    let n = m.n();
    let ev = evm_default(m)?;
    let gm = gmm(m);
    let ki = koczkodaj_ki(m);
    let ci = saaty_ci(ev.lambda_max().expect("evm reports lambda_max"), n)?;
    let (_, budget) = md_bounds(ki)?;
    let (d, d_star) = raw_gaps(ev.weights());
    let o_ev = OrdinalRanking::from_weights(ev.weights());
    let o_gm = OrdinalRanking::from_weights(gm.weights());
    let tie_flag = o_ev.has_ties() || o_gm.has_ties();
    let md = l1_distance(ev.weights(), gm.weights())?;

    let mut rec = TrialRecord {
        trial_id,
        base_index,
        beta_index,
        beta,
        ki,
        ci,
        d,
        d_star,
        distance_budget: budget,
        k: None,
        prop1_holds: false,
        prop2_holds: false,
        rankings_identical: o_ev.order() == o_gm.order(),
        top1_identical: o_ev.best() == o_gm.best(),
        md,
        tau: None,
        rho: None,
        tau_lower: None,
        rho_lower: None,
        tie_flag,
    };
    if !tie_flag {
        let cert = certify_scalars(n, ki, d, d_star)?;
        rec.k = Some(cert.max_swaps);
        rec.prop1_holds = cert.prop1_holds;
        rec.prop2_holds = cert.prop2_holds;
        rec.tau_lower = Some(cert.tau_lower);
        rec.rho_lower = Some(cert.rho_lower);
        rec.tau = Some(kendall_tau(&o_ev, &o_gm)?);
        rec.rho = Some(spearman_rho(&o_ev, &o_gm)?);
    }
    Ok(rec)
}

/// Counts of trials contradicting the certificates. All should be zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Soundness {
    /// Full-ranking certificate held but the rankings differ.
    pub prop1_violations: usize,
    /// Top-object certificate held but the best objects differ.
    pub prop2_violations: usize,
    /// `MD > 1/κ² - 1 + slack`.
    pub md_bound_violations: usize,
    pub tau_bound_violations: usize,
    pub rho_bound_violations: usize,
}

impl Soundness {
    fn record(&mut self, t: &TrialRecord) {
        self.prop1_violations += usize::from(t.prop1_holds && !t.rankings_identical);
        self.prop2_violations += usize::from(t.prop2_holds && !t.top1_identical);
        self.md_bound_violations += usize::from(t.md > t.distance_budget + MD_BOUND_SLACK);
        if let (Some(tau), Some(lo)) = (t.tau, t.tau_lower) {
            self.tau_bound_violations += usize::from(tau < lo - CORRELATION_SLACK);
        }
        if let (Some(rho), Some(lo)) = (t.rho, t.rho_lower) {
            self.rho_bound_violations += usize::from(rho < lo - CORRELATION_SLACK);
        }
    }

    pub fn is_clean(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "KI")]
    Ki,
    #[serde(rename = "CI")]
    Ci,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistBin {
    pub bin_low: f64,
    pub bin_high: f64,
    pub met: usize,
    pub unmet_identical: usize,
    pub not_identical: usize,
}

impl HistBin {
    pub fn total(&self) -> usize {
        self.met + self.unmet_identical + self.not_identical
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub axis: Axis,
    pub bins: Vec<HistBin>,
}

impl Histogram {
    /// Bins untied trials by `axis`. Values outside the range land in the
    /// nearest edge bin. Empty when there are no untied trials.
    fn build(axis: Axis, spec: BinSpec, trials: &[TrialRecord]) -> Self {
        let value = |t: &TrialRecord| match axis {
            Axis::Ki => t.ki,
            Axis::Ci => t.ci,
        };
        let untied: Vec<&TrialRecord> = trials.iter().filter(|t| !t.tie_flag).collect();
        if untied.is_empty() {
            return Self { axis, bins: vec![] };
        }
        let observed_max = untied.iter().map(|t| value(t)).fold(f64::MIN, f64::max);
        let observed_min = untied.iter().map(|t| value(t)).fold(f64::MAX, f64::min);
        let lo = spec.lo.unwrap_or(observed_min);
        let mut hi = spec.hi.unwrap_or(observed_max);
        if hi.is_nan() || hi <= lo {
            hi = lo + 1.0;
        }
        let width = (hi - lo) / spec.count as f64;
        let mut bins: Vec<HistBin> = (0..spec.count)
            .map(|i| HistBin {
                bin_low: lo + i as f64 * width,
                bin_high: if i + 1 == spec.count {
                    hi
                } else {
                    lo + (i + 1) as f64 * width
                },
                met: 0,
                unmet_identical: 0,
                not_identical: 0,
            })
            .collect();
        for t in untied {
            let pos = ((value(t) - lo) / width).floor();
            let idx = if pos < 0.0 {
                0
            } else {
                (pos as usize).min(spec.count - 1)
            };
            let b = &mut bins[idx];
            match t.category() {
                Category::Met => b.met += 1,
                Category::UnmetIdentical => b.unmet_identical += 1,
                Category::NotIdentical => b.not_identical += 1,
            }
        }
        Self { axis, bins }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub config: McConfig,
    /// Trials that produced a record.
    pub total_trials: usize,
    /// Trials where the full-ranking certificate held.
    pub trials_meeting_condition: usize,
    pub fraction_meeting: f64,
    /// Trials with tied weights; excluded from histograms and correlations.
    pub tied_trial_count: usize,
    /// Trials dropped because the eigenvalue iteration failed.
    pub failed_trial_count: usize,
    pub rankings_identical_count: usize,
    pub soundness: Soundness,
    pub ki_histogram: Histogram,
    pub ci_histogram: Histogram,
    #[serde(skip)]
    pub trials: Vec<TrialRecord>,
}

impl McResult {
    /// Aggregates records; counts only, so the result is independent of
    /// evaluation order.
    pub fn from_trials(config: McConfig, trials: Vec<TrialRecord>, failed: usize) -> Self {
        let mut soundness = Soundness::default();
        trials.iter().for_each(|t| soundness.record(t));
        let met = trials.iter().filter(|t| t.prop1_holds).count();
        let total = trials.len();
        Self {
            ki_histogram: Histogram::build(Axis::Ki, config.ki_bins, &trials),
            ci_histogram: Histogram::build(Axis::Ci, config.ci_bins, &trials),
            config,
            total_trials: total,
            trials_meeting_condition: met,
            fraction_meeting: if total == 0 {
                0.0
            } else {
                met as f64 / total as f64
            },
            tied_trial_count: trials.iter().filter(|t| t.tie_flag).count(),
            failed_trial_count: failed,
            rankings_identical_count: trials.iter().filter(|t| t.rankings_identical).count(),
            soundness,
            trials,
        }
    }

    pub fn histogram(&self, axis: Axis) -> &Histogram {
        match axis {
            Axis::Ki => &self.ki_histogram,
            Axis::Ci => &self.ci_histogram,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization is infallible")
    }

    /// One row per trial, with a header.
    pub fn trials_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(vec![]);
        for t in &self.trials {
            w.serialize(t).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
    }
}

/// `bin_low,bin_high,met,unmet_identical,not_identical` rows for one axis.
pub fn histogram_csv(r: &McResult, axis: Axis) -> String {
    let mut out = String::from("bin_low,bin_high,met,unmet_identical,not_identical\n");
    for b in &r.histogram(axis).bins {
        out.push_str(&format!(
            "{:?},{:?},{},{},{}\n",
            b.bin_low, b.bin_high, b.met, b.unmet_identical, b.not_identical
        ));
    }
    out
}

fn run_base(cfg: &McConfig, betas: &[f64], base: usize) -> Result<Vec<Result<TrialRecord>>> {
    let m0 = PcMatrix::random_consistent(cfg.n, base_seed(cfg.master_seed, base), cfg.base_scale)?;
    Ok(betas
        .iter()
        .enumerate()
        .map(|(bi, &beta)| {
            let m = m0.disturb(beta, trial_seed(cfg.master_seed, base, bi), cfg.clamp)?;
            evaluate_trial(&m, base * betas.len() + bi, base, bi, beta)
        })
        .collect())
}

fn collect(cfg: &McConfig, per_base: Vec<Vec<Result<TrialRecord>>>) -> McResult {
    let mut trials = Vec::with_capacity(per_base.iter().map(Vec::len).sum());
    let mut failed = 0;
    for r in per_base.into_iter().flatten() {
        match r {
            Ok(t) => trials.push(t),
            Err(_) => failed += 1,
        }
    }
    McResult::from_trials(cfg.clone(), trials, failed)
}

/// Runs the sweep on the current rayon pool.
pub fn run_experiment(cfg: &McConfig) -> Result<McResult> {
    cfg.validate()?;
    let betas = cfg.betas();
    let per_base = (0..cfg.base_count)
        .into_par_iter()
        .map(|b| run_base(cfg, &betas, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(cfg, per_base))
}

/// Runs the sweep on a dedicated pool of `threads` workers. `threads == 1`
/// evaluates sequentially on the calling thread.
pub fn run_experiment_with_threads(cfg: &McConfig, threads: usize) -> Result<McResult> {
    if threads <= 1 {
        cfg.validate()?;
        let betas = cfg.betas();
        let per_base = (0..cfg.base_count)
            .map(|b| run_base(cfg, &betas, b))
            .collect::<Result<Vec<_>>>()?;
        return Ok(collect(cfg, per_base));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}
