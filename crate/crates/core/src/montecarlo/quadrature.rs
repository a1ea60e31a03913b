//! Deterministic quadrature of the positive-part density for `k ∈ {1, 2}`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{DensityParams, JacobianDensity};
use crate::montecarlo::report::{relative_gap, Component, Parameters, Report};
use crate::montecarlo::RunOptions;

/// Truncation of the shear coordinate for `k = 2`; the integrand decays like
/// `sech²(s)` or faster.
const SHEAR_MAX: f64 = 9.0;

/// Integration box `[0, p_max]` per coordinate, step size and the tolerance
/// on `|∫ρ − 1|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub p_max: f64,
    pub step: f64,
    pub tol: f64,
}

impl QuadratureGrid {
    /// `p_max = √n + 10, h = 1e−4, tol = 1e−8` for `k = 1`;
    /// `p_max = √n + 8, h = 0.02, tol = 1e−4` for `k = 2`.
    pub fn default_for(n: usize, k: usize) -> Result<Self> {
        let root = (n as f64).sqrt();
        match k {
            1 => Ok(Self {
                p_max: root + 10.0,
                step: 1e-4,
                tol: 1e-8,
            }),
            2 => Ok(Self {
                p_max: root + 8.0,
                step: 0.02,
                tol: 1e-4,
            }),
            _ => Err(Error::Dimension(format!(
                "quadrature supports k in {{1, 2}}, got {k}"
            ))),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.p_max > 0.0 && self.p_max.is_finite()) {
            return Err(Error::Config(format!(
                "p_max must be positive, got {}",
                self.p_max
            )));
        }
        if !(self.step > 0.0 && self.step < self.p_max) {
            return Err(Error::Config(format!(
                "step must lie in (0, p_max), got {}",
                self.step
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Node count for a uniform grid on `[0, len]` with spacing at most `step`.
fn intervals(len: f64, step: f64) -> usize {
    ((len / step).ceil() as usize).max(1)
}

#[inline]
fn trapezoid_weight(i: usize, last: usize) -> f64 {
    if i == 0 || i == last {
        0.5
    } else {
        1.0
    }
}

fn integrate_k1(density: &JacobianDensity, n: usize, p_max: f64, step: f64) -> Result<f64> {
    let m = intervals(p_max, step);
    let h = p_max / m as f64;
    let mut sum = 0.0;
    for i in 0..=m {
        let p = i as f64 * h;
        let value = if p == 0.0 {
            // the density vanishes at the origin unless n = 1
            if n == 1 {
                density.gaussian_log_density_from_parts(0.0, &[1.0])?.exp()
            } else {
                0.0
            }
        } else {
            density.gaussian_log_density_from_parts(p * p, &[p])?.exp()
        };
        sum += trapezoid_weight(i, m) * value;
    }
    Ok(sum * h)
}

/// `k = 2` in coordinates `P = [[a², ab·tanh s], [ab·tanh s, b²]]` with
/// `a, b > 0`, `s ∈ ℝ` and Jacobian `4a²b²·sech² s`. The integrand is even in
/// each coordinate, so the trapezoid rule on the half lines converges
/// spectrally.
fn integrate_k2(density: &JacobianDensity, p_max: f64, step: f64) -> Result<f64> {
    let a_max = p_max.sqrt();
    let ma = intervals(a_max, step);
    let ha = a_max / ma as f64;
    let ms = intervals(SHEAR_MAX, step);
    let hs = SHEAR_MAX / ms as f64;

    let shear: Vec<(f64, f64)> = (0..=ms)
        .map(|l| {
            let s = l as f64 * hs;
            let t = s.tanh();
            let sech2 = 1.0 / s.cosh().powi(2);
            (t, sech2)
        })
        .collect();

    let mut sum = 0.0;
    let mut eig = [0.0; 2];
    for i in 1..=ma {
        let a = i as f64 * ha;
        let wa = trapezoid_weight(i, ma);
        for j in 1..=ma {
            let b = j as f64 * ha;
            let wb = trapezoid_weight(j, ma);
            let (p11, p22) = (a * a, b * b);
            let mut inner = 0.0;
            for (l, &(t, sech2)) in shear.iter().enumerate() {
                let p12 = a * b * t;
                let trace = p11 + p22;
                let det = p11 * p22 * sech2;
                if !(det > 0.0) {
                    continue;
                }
                let disc = ((p11 - p22).powi(2) + 4.0 * p12 * p12).sqrt();
                eig[0] = 0.5 * (trace + disc);
                eig[1] = det / eig[0];
                let trace_sq = p11 * p11 + p22 * p22 + 2.0 * p12 * p12;
                let log_rho = density.gaussian_log_density_from_parts(trace_sq, &eig)?;
                let jac = 4.0 * p11 * p22 * sech2;
                inner += trapezoid_weight(l, ms) * log_rho.exp() * jac;
            }
            sum += wa * wb * inner;
        }
    }
    // the shear integral covers s ≥ 0 only
    Ok(2.0 * sum * ha * ha * hs)
}

fn integrate(density: &JacobianDensity, n: usize, k: usize, p_max: f64, step: f64) -> Result<f64> {
    match k {
        1 => integrate_k1(density, n, p_max, step),
        2 => integrate_k2(density, p_max, step),
        _ => Err(Error::Dimension(format!(
            "quadrature supports k in {{1, 2}}, got {k}"
        ))),
    }
}

/// Integrates the density of the positive polar factor over the PD cone and
/// compares with 1. The half-step integral is reported as a component; a
/// warning is attached when it moves the result by more than `tol/2`.
pub fn verify_density_normalization(
    n: usize,
    k: usize,
    grid: Option<QuadratureGrid>,
    opts: &RunOptions,
) -> Result<Report> {
    let started = Instant::now();
    let params = DensityParams::new(n, k)?;
    let grid = match grid {
        Some(g) => g,
        None => QuadratureGrid::default_for(n, k)?,
    };
    grid.validate()?;
    let density = JacobianDensity::new(params)?;

    let coarse = integrate(&density, n, k, grid.p_max, grid.step)?;
    let fine = integrate(&density, n, k, grid.p_max, 0.5 * grid.step)?;
    let shift = (coarse - fine).abs();
    let error = (coarse - 1.0).abs();

    let mut report = Report {
        experiment_id: "normalization".into(),
        parameters: Parameters {
            n: Some(n),
            k: Some(k),
            step: Some(grid.step),
            p_max: Some(grid.p_max),
            ..Default::default()
        },
        estimate: coarse,
        standard_error: shift,
        reference_value: 1.0,
        reference_provenance: "probability".into(),
        z_score: None,
        relative_gap: relative_gap(coarse, 1.0),
        pass: error <= grid.tol,
        sample_count: 0,
        master_seed: 0,
        elapsed_wall_time_s: None,
        components: vec![Component {
            name: "half_step".into(),
            estimate: fine,
            standard_error: 0.0,
            reference_value: 1.0,
            z_score: None,
        }],
        warnings: Vec::new(),
    };
    if shift > 0.5 * grid.tol {
        report.warnings.push(format!(
            "grid too coarse: halving the step moved the integral by {shift:e} (tolerance {:e})",
            grid.tol
        ));
    }
    opts.stamp(&mut report, started);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: usize, k: usize, grid: Option<QuadratureGrid>) -> Report {
        verify_density_normalization(n, k, grid, &RunOptions::default()).unwrap()
    }

    #[test]
    fn rayleigh_and_maxwell() {
        for n in [1, 2, 3] {
            let r = run(n, 1, None);
            assert!(r.pass, "{r:?}");
            assert!(r.warnings.is_empty());
        }
    }

    #[test]
    fn plane_of_two_vectors() {
        let grid = QuadratureGrid {
            step: 0.05,
            ..QuadratureGrid::default_for(3, 2).unwrap()
        };
        let r = run(3, 2, Some(grid));
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn truncated_box_fails() {
        let grid = QuadratureGrid {
            p_max: 1.0,
            step: 1e-3,
            tol: 1e-8,
        };
        let r = run(2, 1, Some(grid));
        assert!(!r.pass);
        // Rayleigh mass below 1 is 1 − e^{−1/2}
        assert!((r.estimate - (1.0 - (-0.5f64).exp())).abs() < 1e-6);
    }

    #[test]
    fn coarse_grid_warns() {
        let grid = QuadratureGrid {
            p_max: 11.0,
            step: 0.5,
            tol: 1e-8,
        };
        assert!(!run(2, 1, Some(grid)).warnings.is_empty());
    }

    #[test]
    fn unsupported_width() {
        assert!(verify_density_normalization(4, 3, None, &RunOptions::default()).is_err());
    }
}
