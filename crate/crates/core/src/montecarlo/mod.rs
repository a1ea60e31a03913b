//! Streaming estimators, deterministic chunked execution and the experiments
//! that verify the polar integration identities numerically.
//!
//! Every experiment splits its sample budget into chunks of
//! [`RunOptions::chunk_size`]; chunk `i` draws from `RngStream(seed, i)` (plus
//! a fixed offset for a second independent estimator), and chunk results are
//! merged in index order. Reports are therefore bit-identical for any
//! [`Execution`] policy or thread count.

mod estimator;
mod exec;
mod invariance;
mod moments;
mod pif;
mod quadrature;
mod report;
mod suite;
mod testfn;

pub use estimator::{CovarianceState, EstimatorState};
pub use exec::{chunk_plan, map_indexed, run_chunks, Execution, DEFAULT_CHUNK_SIZE};
pub use invariance::{
    conjugation_jacobian_det, ks_critical_value, ks_statistic_uniform, push_forward_second_moment,
    verify_invariance, InvarianceKind, Probe, KS_ALPHA,
};
pub use moments::{
    estimate_det_moment, log_abs_det, verify_det_moment, verify_gaussian_identity, DetProposal,
};
pub use pif::{estimate_pif_lhs, estimate_pif_rhs, verify_pif, MAX_LOG_WEIGHT, RHS_STREAM_OFFSET};
pub use quadrature::{verify_density_normalization, QuadratureGrid};
pub use report::{relative_gap, z_score, Component, Parameters, Report, Thresholds};
pub use suite::{run_suite, ExperimentId, ExperimentSpec, SuiteConfig};
pub use testfn::{TestFnKind, TestFunction};

/// Execution settings shared by all experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub exec: Execution,
    pub chunk_size: u64,
    pub thresholds: Thresholds,
    /// Record wall time in reports. Off by default so that reports are
    /// reproducible byte for byte.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            exec: Execution::default(),
            chunk_size: DEFAULT_CHUNK_SIZE,
            thresholds: Thresholds::default(),
            timings: false,
        }
    }
}

impl RunOptions {
    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub(crate) fn stamp(&self, report: &mut Report, started: std::time::Instant) {
        if self.timings {
            report.elapsed_wall_time_s = Some(started.elapsed().as_secs_f64());
        }
    }
}

/// Monte Carlo estimates need two samples for a standard error.
pub(crate) fn check_samples(samples: u64) -> crate::Result<()> {
    if samples < 2 {
        return Err(crate::Error::Config(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    Ok(())
}
