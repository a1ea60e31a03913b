use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eigenvalues_in_place, PosDef};
use crate::measures::constants::{check_dims, stiefel_log_volume};

/// Ambient dimension `n` and width `k` of the matrices whose positive part is
/// being described.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityParams {
    pub n: usize,
    pub k: usize,
}

impl DensityParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_dims(n, k)?;
        Ok(Self { n, k })
    }

    /// Homogeneity degree of the Jacobian density: `f(cP) = c^deg f(P)`.
    pub fn homogeneity_degree(&self) -> f64 {
        let (n, k) = (self.n as f64, self.k as f64);
        k * (n - k) + k * (k - 1.0) / 2.0
    }
}

/// Precomputed `log D_{n,k}` so that tight loops do not repeat the gamma sums.
#[derive(Debug, Clone, Copy)]
pub struct JacobianDensity {
    params: DensityParams,
    log_d: f64,
}

impl JacobianDensity {
    pub fn new(params: DensityParams) -> Result<Self> {
        let log_d = stiefel_log_volume(params.n, params.k)?;
        Ok(Self { params, log_d })
    }

    pub fn params(&self) -> DensityParams {
        self.params
    }

    /// `log f` from the eigenvalues of `P`:
    /// `log D + (n−k)·Σ log λ_i + Σ_{i<j} log(λ_i + λ_j)`.
    pub fn log_density_from_eigenvalues(&self, eigenvalues: &[f64]) -> Result<f64> {
        let k = self.params.k;
        if eigenvalues.len() != k {
            return Err(Error::Dimension(format!(
                "{} eigenvalues for k={k}",
                eigenvalues.len()
            )));
        }
        if let Some(&bad) = eigenvalues.iter().find(|&&l| !(l > 0.0)) {
            return Err(Error::NotPositiveDefinite { ratio: bad });
        }
        let excess = (self.params.n - k) as f64;
        let mut acc = self.log_d;
        if excess > 0.0 {
            acc += excess * eigenvalues.iter().map(|l| l.ln()).sum::<f64>();
        }
        for i in 0..k {
            for j in i + 1..k {
                acc += (eigenvalues[i] + eigenvalues[j]).ln();
            }
        }
        Ok(acc)
    }

    pub fn log_density(&self, p: &PosDef) -> Result<f64> {
        let k = self.params.k;
        if p.dim() != k {
            return Err(Error::Dimension(format!("P is {0}x{0}, expected k={k}", p.dim())));
        }
        let mut work = p.to_full().into_vec();
        let mut eig = vec![0.0; k];
        eigenvalues_in_place(&mut work, k, &mut eig)?;
        self.log_density_from_eigenvalues(&eig)
    }

    /// Log density of the positive polar part of an `n × k` standard Gaussian
    /// matrix, with respect to `dP = ∏_{i≤j} dP_ij`, given `tr(P²)` and the
    /// eigenvalues of `P`.
    pub fn gaussian_log_density_from_parts(&self, trace_sq: f64, eigenvalues: &[f64]) -> Result<f64> {
        let nk = (self.params.n * self.params.k) as f64;
        Ok(-0.5 * nk * (2.0 * PI).ln() - 0.5 * trace_sq + self.log_density_from_eigenvalues(eigenvalues)?)
    }

    pub fn gaussian_log_density(&self, p: &PosDef) -> Result<f64> {
        let nk = (self.params.n * self.params.k) as f64;
        Ok(-0.5 * nk * (2.0 * PI).ln() - 0.5 * p.as_symmetric().trace_of_square() + self.log_density(p)?)
    }
}

/// `log f(P)` for the polar-coordinates Jacobian
/// `f(P) = D_{n,k}·(det P)^{n−k}·∏_{i<j}(λ_i + λ_j)`.
pub fn bp_log_density(p: &PosDef, params: DensityParams) -> Result<f64> {
    JacobianDensity::new(params)?.log_density(p)
}

/// `log ρ(P) = −(nk/2)·log 2π − tr(P²)/2 + log f(P)`, the density of the
/// positive polar factor of an `n × k` standard Gaussian matrix.
pub fn gaussian_polar_log_density(p: &PosDef, params: DensityParams) -> Result<f64> {
    JacobianDensity::new(params)?.gaussian_log_density(p)
}
