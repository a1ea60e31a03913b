use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{gram, Matrix};
use crate::measures::log_gamma_unchecked;

/// Orthogonally invariant integrands on `(ℝⁿ)ᵏ`, written through the Gram
/// matrix `G` of the arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFnKind {
    /// `exp(−tr G / 2)`
    Gaussian,
    /// `exp(−s·tr G)`
    ExpGram,
    /// `tr G · exp(−s·tr G)`
    TraceExpGram,
    /// `det G · exp(−s·tr G)`
    DetExpGram,
}

impl TestFnKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestFnKind::Gaussian => "gaussian",
            TestFnKind::ExpGram => "exp_gram",
            TestFnKind::TraceExpGram => "trace_exp_gram",
            TestFnKind::DetExpGram => "det_exp_gram",
        }
    }
}

impl fmt::Display for TestFnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TestFnKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(TestFnKind::Gaussian),
            "exp_gram" | "exp-gram" => Ok(TestFnKind::ExpGram),
            "trace_exp_gram" | "trace-exp-gram" => Ok(TestFnKind::TraceExpGram),
            "det_exp_gram" | "det-exp-gram" => Ok(TestFnKind::DetExpGram),
            other => Err(Error::Config(format!("unknown test function `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub kind: TestFnKind,
    /// Decay rate `s`; ignored by `Gaussian`, which is fixed at `s = 1/2`.
    pub scale: f64,
}

impl TestFunction {
    /// Rejects `s < 1/2`, for which the importance weights under a standard
    /// normal proposal are unbounded.
    pub fn new(kind: TestFnKind, scale: f64) -> Result<Self> {
        if kind != TestFnKind::Gaussian && !(scale >= 0.5) {
            return Err(Error::Domain(format!(
                "test function scale must be >= 1/2, got {scale}"
            )));
        }
        Ok(Self { kind, scale })
    }

    pub fn gaussian() -> Self {
        Self {
            kind: TestFnKind::Gaussian,
            scale: 0.5,
        }
    }

    pub fn effective_scale(&self) -> f64 {
        match self.kind {
            TestFnKind::Gaussian => 0.5,
            _ => self.scale,
        }
    }

    /// `log φ(X)` given `X` and its squared Frobenius norm `tr G`. Returns
    /// `−∞` where `φ` vanishes.
    pub fn log_value(&self, x: &Matrix, trace: f64) -> f64 {
        let s = self.effective_scale();
        match self.kind {
            TestFnKind::Gaussian => -0.5 * trace,
            TestFnKind::ExpGram => -s * trace,
            TestFnKind::TraceExpGram => trace.ln() - s * trace,
            TestFnKind::DetExpGram => {
                let det = gram(x).and_then(|g| g.to_full().det()).unwrap_or(0.0);
                if det > 0.0 {
                    det.ln() - s * trace
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub fn value(&self, x: &Matrix) -> f64 {
        self.log_value(x, x.frobenius_norm_sq()).exp()
    }

    /// Closed-form `log ∫_{ℝ^{n×k}} φ(X) dX`.
    pub fn log_integral(&self, n: usize, k: usize) -> f64 {
        let s = self.effective_scale();
        let nk = (n * k) as f64;
        let base = 0.5 * nk * (PI / s).ln();
        match self.kind {
            TestFnKind::Gaussian | TestFnKind::ExpGram => base,
            // E[‖X‖²] with entries N(0, 1/(2s))
            TestFnKind::TraceExpGram => base + (nk / (2.0 * s)).ln(),
            // E[det XᵀX] = (2s)^{−k}·n!/(n−k)! with entries N(0, 1/(2s))
            TestFnKind::DetExpGram => {
                base - (k as f64) * (2.0 * s).ln() + log_gamma_unchecked(n as f64 + 1.0)
                    - log_gamma_unchecked((n - k) as f64 + 1.0)
            }
        }
    }
}
