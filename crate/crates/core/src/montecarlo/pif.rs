//! Both sides of the polar integration formula
//! `∫_{(ℝⁿ)ᵏ} φ = C_{n,k} ∫_{(ℝᵏ)ᵏ} φ·|det|^{n−k}`, estimated by importance
//! sampling under a standard normal proposal of matching shape.

use std::f64::consts::PI;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::measures::{bp_constant_c, Variant};
use crate::montecarlo::estimator::EstimatorState;
use crate::montecarlo::exec::run_chunks;
use crate::montecarlo::moments::log_abs_det;
use crate::montecarlo::report::{relative_gap, z_score, Component, Parameters, Report};
use crate::montecarlo::testfn::{TestFnKind, TestFunction};
use crate::montecarlo::RunOptions;
use crate::sampling::{sample_ginibre_into, RngStream};

/// Per-sample log-weights above this abort the experiment.
pub const MAX_LOG_WEIGHT: f64 = 700.0;

/// Stream offset used by the right-hand estimator so that it never shares a
/// stream with the left-hand one.
pub const RHS_STREAM_OFFSET: u64 = 1 << 40;

fn check(n: usize, k: usize) -> Result<()> {
    if k == 0 || n < k {
        return Err(Error::Dimension(format!("need n >= k >= 1, got n={n}, k={k}")));
    }
    Ok(())
}

#[inline]
fn weight(log_w: f64) -> Result<f64> {
    if log_w > MAX_LOG_WEIGHT {
        return Err(Error::Overflow { log_weight: log_w });
    }
    Ok(log_w.exp())
}

/// Left side: `φ(X)·(2π)^{nk/2}·exp(‖X‖²/2)` averaged over `X ~ N(0,1)^{n×k}`.
pub fn estimate_pif_lhs(
    phi: &TestFunction,
    n: usize,
    k: usize,
    samples: u64,
    seed: u64,
    opts: &RunOptions,
) -> Result<EstimatorState> {
    check(n, k)?;
    super::check_samples(samples)?;
    let phi = TestFunction::new(phi.kind, phi.scale)?;
    let log_norm = 0.5 * (n * k) as f64 * (2.0 * PI).ln();
    run_chunks(
        opts.exec,
        samples,
        opts.chunk_size,
        |chunk, len| {
            let mut rng = RngStream::new(seed, chunk);
            let mut x = Matrix::zeros(n, k);
            let mut acc = EstimatorState::new();
            for _ in 0..len {
                sample_ginibre_into(&mut x, &mut rng);
                let trace = x.frobenius_norm_sq();
                let log_w = log_norm + (phi.log_value(&x, trace) + 0.5 * trace);
                acc.update(weight(log_w)?);
            }
            Ok(acc)
        },
        |a, b| a.merge(&b),
    )
}

/// Right side: `φ(Y)·C_{n,k}·|det Y|^{n−k}·(2π)^{k²/2}·exp(‖Y‖²/2)` averaged
/// over `Y ~ N(0,1)^{k×k}`, with `Y` embedded in the first `k` coordinates of
/// `ℝⁿ`.
pub fn estimate_pif_rhs(
    phi: &TestFunction,
    n: usize,
    k: usize,
    samples: u64,
    seed: u64,
    variant: Variant,
    opts: &RunOptions,
) -> Result<EstimatorState> {
    check(n, k)?;
    super::check_samples(samples)?;
    let phi = TestFunction::new(phi.kind, phi.scale)?;
    let log_c = bp_constant_c(n, k, variant)?;
    let log_norm = 0.5 * (k * k) as f64 * (2.0 * PI).ln() + log_c;
    let excess = (n - k) as f64;
    run_chunks(
        opts.exec,
        samples,
        opts.chunk_size,
        |chunk, len| {
            let mut rng = RngStream::new(seed, RHS_STREAM_OFFSET + chunk);
            let mut y = Matrix::zeros(k, k);
            let mut acc = EstimatorState::new();
            for _ in 0..len {
                sample_ginibre_into(&mut y, &mut rng);
                let trace = y.frobenius_norm_sq();
                let mut log_w = log_norm + (phi.log_value(&y, trace) + 0.5 * trace);
                if excess > 0.0 {
                    // a singular sample contributes zero
                    log_w += excess * log_abs_det(&y);
                }
                acc.update(if log_w == f64::NEG_INFINITY {
                    0.0
                } else {
                    weight(log_w)?
                });
            }
            Ok(acc)
        },
        |a, b| a.merge(&b),
    )
}

/// Estimates both sides on disjoint streams and reports the z-score of their
/// difference. `estimate` is the right side, `reference_value` the left side.
pub fn verify_pif(
    phi: &TestFunction,
    n: usize,
    k: usize,
    samples: u64,
    seed: u64,
    variant: Variant,
    opts: &RunOptions,
) -> Result<Report> {
    let started = Instant::now();
    let lhs = estimate_pif_lhs(phi, n, k, samples, seed, opts)?;
    let rhs = estimate_pif_rhs(phi, n, k, samples, seed, variant, opts)?;
    let analytic = phi.log_integral(n, k).exp();

    let se = (lhs.std_error().powi(2) + rhs.std_error().powi(2)).sqrt();
    let params = Parameters {
        n: Some(n),
        k: Some(k),
        testfn: Some(phi.kind),
        scale: (phi.kind != TestFnKind::Gaussian).then_some(phi.scale),
        variant: Some(variant),
        ..Default::default()
    };
    let mut report = Report::compare(
        "pif",
        params,
        rhs.mean,
        se,
        lhs.mean,
        "mc_lhs",
        lhs.count + rhs.count,
        seed,
        &opts.thresholds,
    );
    for (name, side) in [("lhs", &lhs), ("rhs", &rhs)] {
        report.components.push(Component {
            name: format!("{name}_vs_analytic"),
            estimate: side.mean,
            standard_error: side.std_error(),
            reference_value: analytic,
            z_score: Some(z_score(side.mean, analytic, side.std_error())),
        });
    }
    if let Some(gap) = relative_gap(rhs.mean, analytic) {
        if gap > opts.thresholds.rel_max {
            report.warnings.push(format!(
                "rhs differs from the analytic integral by {:.3}%",
                100.0 * gap
            ));
        }
    }
    opts.stamp(&mut report, started);
    Ok(report)
}
