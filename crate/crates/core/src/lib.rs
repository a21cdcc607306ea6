//! Pairwise comparison matrix analysis.
//!
//! Priority vectors by the eigenvalue method and the geometric mean method,
//! Koczkodaj and Saaty inconsistency indices, rank correlation, and
//! certificates that both methods produce the same ordinal ranking.

pub mod bounds;
pub mod error;
pub mod inconsistency;
pub mod io;
pub mod matrix;
pub mod montecarlo;
pub mod prioritize;
pub mod rankstats;

pub use bounds::{
    certify, certify_scalars, find_k, full_certificate, max_feasible_gap, md_bounds,
    prop1_certify, prop2_certify, rho_lower_bound, tau_lower_bound, weight_gaps,
    StabilityCertificate,
};
pub use error::{Error, Result};
pub use inconsistency::{koczkodaj_ki, saaty_ci, InconsistencyReport};
pub use matrix::{PcMatrix, ScaleBound};
pub use montecarlo::{histogram_csv, run_experiment, Axis, McConfig, McResult, TrialRecord};
pub use prioritize::{evm, evm_default, gmm, Method, PriorityVector};
pub use rankstats::{
    kendall_tau, manhattan_distance, ordinal_ranking, spearman_rho, OrdinalRanking,
};
