//! Cyclic Jacobi eigensolver for real symmetric matrices.

use crate::error::{Error, Result};
use crate::matcore::matrix::{Matrix, SymmetricMatrix};

/// Sweep limit for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 50;

/// Convergence threshold relative to the Frobenius norm of the input.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenvalues sorted in descending order together with an orthogonal matrix
/// whose columns are the matching eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomp {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Rebuilds `V · diag(f(λ)) · Vᵀ`.
    pub fn reconstruct_with<F: Fn(f64) -> f64>(&self, f: F) -> SymmetricMatrix {
        let k = self.dim();
        let v = &self.eigenvectors;
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = SymmetricMatrix::zeros(k);
        for i in 0..k {
            for j in i..k {
                let mut acc = 0.0;
                for (l, &m) in mapped.iter().enumerate() {
                    acc += v[(i, l)] * m * v[(j, l)];
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

/// Runs cyclic Jacobi rotations in place on a full row-major `k × k`
/// symmetric array. On return the diagonal of `a` holds the (unsorted)
/// eigenvalues and, when supplied, `v` holds the accumulated rotations.
/// Returns the number of sweeps used.
pub fn jacobi_in_place(a: &mut [f64], k: usize, mut v: Option<&mut [f64]>) -> Result<usize> {
    debug_assert_eq!(a.len(), k * k);
    if let Some(v) = v.as_deref_mut() {
        debug_assert_eq!(v.len(), k * k);
        v.fill(0.0);
        for i in 0..k {
            v[i * k + i] = 1.0;
        }
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * norm;
    for sweep in 0..=MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..k {
            for q in p + 1..k {
                off = off.max(a[p * k + q].abs());
            }
        }
        if off <= threshold {
            return Ok(sweep);
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        for p in 0..k {
            for q in p + 1..k {
                let apq = a[p * k + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * k + p];
                let aqq = a[q * k + q];
                // Rutishauser's stable form of the rotation angle.
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * k + p] = app - t * apq;
                a[q * k + q] = aqq + t * apq;
                a[p * k + q] = 0.0;
                a[q * k + p] = 0.0;
                for r in 0..k {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * k + p];
                    let arq = a[r * k + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * k + p] = new_rp;
                    a[p * k + r] = new_rp;
                    a[r * k + q] = new_rq;
                    a[q * k + r] = new_rq;
                }
                if let Some(v) = v.as_deref_mut() {
                    for r in 0..k {
                        let vrp = v[r * k + p];
                        let vrq = v[r * k + q];
                        v[r * k + p] = vrp - s * (vrq + tau * vrp);
                        v[r * k + q] = vrq + s * (vrp - tau * vrq);
                    }
                }
            }
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

/// Eigenvalues only, in descending order, written into `out`. `work` must
/// hold the full row-major matrix and is destroyed.
pub fn eigenvalues_in_place(work: &mut [f64], k: usize, out: &mut [f64]) -> Result<()> {
    jacobi_in_place(work, k, None)?;
    for i in 0..k {
        out[i] = work[i * k + i];
    }
    out[..k].sort_by(|a, b| b.total_cmp(a));
    Ok(())
}

/// Symmetric eigendecomposition. Eigenvalues are sorted descending; each
/// eigenvector column is flipped so that its largest-magnitude entry is
/// positive (the first such entry when several tie).
pub fn sym_eig(s: &SymmetricMatrix) -> Result<SpectralDecomp> {
    let k = s.dim();
    let mut a = s.to_full().into_vec();
    let mut v = vec![0.0; k * k];
    jacobi_in_place(&mut a, k, Some(&mut v))?;

    let mut order: Vec<usize> = (0..k).collect();
    // stable sort keeps ties in index order for determinism
    order.sort_by(|&i, &j| a[j * k + j].total_cmp(&a[i * k + i]));

    let eigenvalues = order.iter().map(|&i| a[i * k + i]).collect();
    let mut vecs = Matrix::zeros(k, k);
    for (col, &src) in order.iter().enumerate() {
        let mut lead = 0;
        for r in 1..k {
            if v[r * k + src].abs() > v[lead * k + src].abs() {
                lead = r;
            }
        }
        let sign = if v[lead * k + src] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..k {
            vecs[(r, col)] = sign * v[r * k + src];
        }
    }
    Ok(SpectralDecomp {
        eigenvalues,
        eigenvectors: vecs,
    })
}
