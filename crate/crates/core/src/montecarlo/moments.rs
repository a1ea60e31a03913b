//! Absolute determinant moments of square Ginibre matrices and the Gaussian
//! identity `(2π)^{nk/2} = (2π)^{k²/2}·C_{n,k}·E[|Δ_k|^{n−k}]`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eigenvalues_in_place, Matrix};
use crate::measures::{bp_constant_c, gaussian_det_moment, Variant};
use crate::montecarlo::estimator::EstimatorState;
use crate::montecarlo::exec::run_chunks;
use crate::montecarlo::report::{Parameters, Report};
use crate::montecarlo::RunOptions;
use crate::sampling::{sample_ginibre_into, RngStream};

/// Sampling law for the determinant moment estimator.
///
/// `Tilted` draws `Y = σZ` with `σ² = 1 + 2r/k` and reweights by the
/// likelihood ratio against the standard normal. This centres the proposal
/// where `|det Y|^{2r}·e^{−‖Y‖²/2}` has its mass and keeps the relative error
/// of high moments small. For `r = 0` both laws coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetProposal {
    Standard,
    #[default]
    Tilted,
}

impl DetProposal {
    pub fn as_str(self) -> &'static str {
        match self {
            DetProposal::Standard => "standard",
            DetProposal::Tilted => "tilted",
        }
    }

    fn sigma(self, k: usize, r: f64) -> f64 {
        match self {
            DetProposal::Standard => 1.0,
            DetProposal::Tilted => (1.0 + 2.0 * r / k as f64).sqrt(),
        }
    }
}

impl fmt::Display for DetProposal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetProposal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(DetProposal::Standard),
            "tilted" => Ok(DetProposal::Tilted),
            other => Err(Error::Config(format!("unknown proposal `{other}`"))),
        }
    }
}

/// `log |det Y|` of a square matrix; `−∞` when singular. Cofactor expansion
/// for `k ≤ 3`, half the log-eigenvalue sum of `YᵀY` above that.
pub fn log_abs_det(y: &Matrix) -> f64 {
    let k = y.rows();
    debug_assert_eq!(k, y.cols());
    let a = y.as_slice();
    let det = match k {
        0 => 1.0,
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => return log_abs_det_spectral(a, k),
    };
    det.abs().ln()
}

fn log_abs_det_spectral(a: &[f64], k: usize) -> f64 {
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let mut acc = 0.0;
            for r in 0..k {
                acc += a[r * k + i] * a[r * k + j];
            }
            g[i * k + j] = acc;
            g[j * k + i] = acc;
        }
    }
    let mut eig = vec![0.0; k];
    if eigenvalues_in_place(&mut g, k, &mut eig).is_err() {
        return f64::NAN;
    }
    if eig[k - 1] <= 0.0 {
        return f64::NEG_INFINITY;
    }
    0.5 * eig.iter().map(|l| l.ln()).sum::<f64>()
}

/// Monte Carlo estimate of `E[|Δ_k|^{2r}]` for a `k × k` Ginibre determinant.
pub fn estimate_det_moment(
    k: usize,
    r: f64,
    samples: u64,
    seed: u64,
    proposal: DetProposal,
    opts: &RunOptions,
) -> Result<EstimatorState> {
    if k == 0 {
        return Err(Error::Dimension("k must be at least 1".into()));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Domain(format!(
            "moment order r must be finite and >= 0, got {r}"
        )));
    }
    super::check_samples(samples)?;
    let sigma = proposal.sigma(k, r);
    let kk = (k * k) as f64;
    let log_sigma_part = kk * sigma.ln();
    let damp = 0.5 * (1.0 - 1.0 / (sigma * sigma));
    run_chunks(
        opts.exec,
        samples,
        opts.chunk_size,
        |chunk, len| {
            let mut rng = RngStream::new(seed, chunk);
            let mut y = Matrix::zeros(k, k);
            let mut acc = EstimatorState::new();
            for _ in 0..len {
                sample_ginibre_into(&mut y, &mut rng);
                if r == 0.0 {
                    acc.update(1.0);
                    continue;
                }
                if sigma != 1.0 {
                    y.as_mut_slice().iter_mut().for_each(|v| *v *= sigma);
                }
                let log_det = log_abs_det(&y);
                if log_det == f64::NEG_INFINITY {
                    acc.update(0.0);
                    continue;
                }
                let log_w = 2.0 * r * log_det + log_sigma_part - damp * y.frobenius_norm_sq();
                if log_w > super::MAX_LOG_WEIGHT {
                    return Err(Error::Overflow { log_weight: log_w });
                }
                acc.update(log_w.exp());
            }
            Ok(acc)
        },
        |a, b| a.merge(&b),
    )
}

/// Compares the Monte Carlo mean of `|det|^{2r}` with the closed form.
#[allow(clippy::too_many_arguments)]
pub fn verify_det_moment(
    k: usize,
    r: f64,
    samples: u64,
    seed: u64,
    variant: Variant,
    proposal: DetProposal,
    opts: &RunOptions,
) -> Result<Report> {
    let started = Instant::now();
    let reference = gaussian_det_moment(k, r, variant)?.exp();
    let est = estimate_det_moment(k, r, samples, seed, proposal, opts)?;
    let params = Parameters {
        k: Some(k),
        r: Some(r),
        variant: Some(variant),
        proposal: Some(proposal.as_str().to_string()),
        ..Default::default()
    };
    let mut report = Report::compare(
        "det_moment",
        params,
        est.mean,
        est.std_error(),
        reference,
        &format!("closed_form:{variant}"),
        est.count,
        seed,
        &opts.thresholds,
    );
    opts.stamp(&mut report, started);
    Ok(report)
}

/// Estimates `(2π)^{k²/2}·C_{n,k}·E[|Δ_k|^{n−k}]` and compares it with
/// `(2π)^{nk/2}`.
#[allow(clippy::too_many_arguments)]
pub fn verify_gaussian_identity(
    n: usize,
    k: usize,
    samples: u64,
    seed: u64,
    variant: Variant,
    proposal: DetProposal,
    opts: &RunOptions,
) -> Result<Report> {
    let started = Instant::now();
    if k == 0 || n < k {
        return Err(Error::Dimension(format!("need n >= k >= 1, got n={n}, k={k}")));
    }
    let r = 0.5 * (n - k) as f64;
    let log_two_pi = (2.0 * PI).ln();
    let log_prefactor = 0.5 * (k * k) as f64 * log_two_pi + bp_constant_c(n, k, variant)?;
    let est = estimate_det_moment(k, r, samples, seed, proposal, opts)?.scaled(log_prefactor.exp());
    let reference = (0.5 * (n * k) as f64 * log_two_pi).exp();
    let params = Parameters {
        n: Some(n),
        k: Some(k),
        r: Some(r),
        variant: Some(variant),
        proposal: Some(proposal.as_str().to_string()),
        ..Default::default()
    };
    let mut report = Report::compare(
        "gaussian_identity",
        params,
        est.mean,
        est.std_error(),
        reference,
        "analytic",
        est.count,
        seed,
        &opts.thresholds,
    );
    opts.stamp(&mut report, started);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sample_ginibre;

    fn opts() -> RunOptions {
        RunOptions::default()
    }

    #[test]
    fn cofactor_and_spectral_agree() {
        let mut rng = RngStream::new(3, 0);
        for k in 1..=3 {
            let y = sample_ginibre(k, k, &mut rng);
            let direct = log_abs_det(&y);
            let spectral = log_abs_det_spectral(y.as_slice(), k);
            assert!((direct - spectral).abs() < 1e-12, "k={k}");
            let lu = y.det().unwrap().abs().ln();
            assert!((direct - lu).abs() < 1e-12);
        }
        let y = sample_ginibre(5, 5, &mut rng);
        assert!((log_abs_det(&y) - y.det().unwrap().abs().ln()).abs() < 1e-11);
    }

    #[test]
    fn singular_is_minus_infinity() {
        let y = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(log_abs_det(&y), f64::NEG_INFINITY);
    }

    #[test]
    fn zeroth_moment_is_exact() {
        for p in [DetProposal::Standard, DetProposal::Tilted] {
            let s = estimate_det_moment(3, 0.0, 1000, 1, p, &opts()).unwrap();
            assert_eq!(s.mean, 1.0);
            assert_eq!(s.m2, 0.0);
        }
        let r = verify_gaussian_identity(3, 3, 1000, 1, Variant::Corrected, DetProposal::Tilted, &opts())
            .unwrap();
        assert!(r.pass);
        assert_eq!(r.z_score, Some(0.0));
    }

    #[test]
    fn scalar_second_moment() {
        // E[Z²] = 1
        for p in [DetProposal::Standard, DetProposal::Tilted] {
            let r = verify_det_moment(1, 1.0, 200_000, 2, Variant::Corrected, p, &opts()).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn two_by_two_literal_fails() {
        let ok = verify_det_moment(
            2,
            1.0,
            200_000,
            4,
            Variant::Corrected,
            DetProposal::Tilted,
            &opts(),
        )
        .unwrap();
        assert!(ok.pass, "{ok:?}");
        let bad = verify_det_moment(
            2,
            1.0,
            200_000,
            4,
            Variant::PaperLiteral,
            DetProposal::Tilted,
            &opts(),
        )
        .unwrap();
        assert!(!bad.pass);
        assert!((bad.reference_value - 0.5).abs() < 1e-14);
        assert!((bad.estimate - 2.0).abs() < 0.05);
    }

    #[test]
    fn proposals_agree_on_a_low_moment() {
        let a = estimate_det_moment(2, 1.0, 200_000, 8, DetProposal::Standard, &opts()).unwrap();
        let b = estimate_det_moment(2, 1.0, 200_000, 8, DetProposal::Tilted, &opts()).unwrap();
        let z = (a.mean - b.mean) / (a.std_error().powi(2) + b.std_error().powi(2)).sqrt();
        assert!(z.abs() < 4.0);
        // tilting reduces the spread
        assert!(b.std_error() < a.std_error());
    }

    #[test]
    fn identity_in_three_dimensions_for_a_line() {
        let r = verify_gaussian_identity(3, 1, 200_000, 5, Variant::Corrected, DetProposal::Tilted, &opts())
            .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn negative_order_rejected() {
        assert!(estimate_det_moment(2, -1.0, 10, 0, DetProposal::Tilted, &opts()).is_err());
    }
}
