//! Gram matrices, positive-definite square roots and the polar decomposition
//! `X = O·P` of a full-rank `n × k` matrix.

use crate::error::{Error, Result};
use crate::matcore::eigen::{sym_eig, MAX_SWEEPS};
use crate::matcore::matrix::{Matrix, SymmetricMatrix};

/// Relative rank tolerance on Gram eigenvalues: `λ_min ≤ RANK_TOL · λ_max`
/// counts as singular.
pub const RANK_TOL: f64 = 1e-12;

/// Orthonormality tolerance enforced on [`Frame`].
pub const FRAME_TOL: f64 = 1e-12;

/// Symmetric positive-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PosDef(SymmetricMatrix);

impl PosDef {
    /// Checks positive definiteness through the spectrum.
    pub fn new(s: SymmetricMatrix) -> Result<Self> {
        let d = sym_eig(&s)?;
        let max = d.eigenvalues[0];
        let min = *d.eigenvalues.last().unwrap();
        if max <= 0.0 || min <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                ratio: if max > 0.0 { min / max } else { f64::NEG_INFINITY },
            });
        }
        Ok(Self(s))
    }

    pub(crate) fn new_unchecked(s: SymmetricMatrix) -> Self {
        Self(s)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_symmetric(&self) -> &SymmetricMatrix {
        &self.0
    }

    pub fn into_symmetric(self) -> SymmetricMatrix {
        self.0
    }

    pub fn to_full(&self) -> Matrix {
        self.0.to_full()
    }

    /// `Vᵀ P V`; still positive definite for any invertible `V`.
    pub fn conjugate(&self, v: &Matrix) -> Result<PosDef> {
        Ok(Self(self.0.conjugate(v)?))
    }

    pub fn scale(&self, c: f64) -> Result<PosDef> {
        if c <= 0.0 {
            return Err(Error::Domain(format!("non-positive scale {c}")));
        }
        Ok(Self(self.0.scale(c)))
    }
}

/// `n × k` matrix with orthonormal columns, an element of the Stiefel
/// manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame(Matrix);

impl Frame {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() < m.cols() {
            return Err(Error::Dimension(format!(
                "frame needs rows >= cols, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let defect = m.orthonormality_defect();
        if defect > FRAME_TOL {
            return Err(Error::Domain(format!(
                "columns are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: Matrix) -> Self {
        Self(m)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Left action `U·O` of a square orthogonal `U`.
    pub fn left_mul(&self, u: &Matrix) -> Result<Frame> {
        Ok(Self(u.matmul(&self.0)?))
    }

    /// Right action `O·V` of a square orthogonal `V`.
    pub fn right_mul(&self, v: &Matrix) -> Result<Frame> {
        Ok(Self(self.0.matmul(v)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors {
    pub frame: Frame,
    pub posdef: PosDef,
}

impl PolarFactors {
    pub fn reconstruct(&self) -> Matrix {
        self.frame
            .as_matrix()
            .matmul(&self.posdef.to_full())
            .expect("polar factors have compatible shapes")
    }

    /// `‖O·P − X‖_F`.
    pub fn reconstruction_error(&self, x: &Matrix) -> f64 {
        self.reconstruct()
            .sub(x)
            .map(|d| d.frobenius_norm())
            .unwrap_or(f64::INFINITY)
    }
}

/// `XᵀX`, with each upper-triangle entry computed once.
pub fn gram(x: &Matrix) -> Result<SymmetricMatrix> {
    let (n, k) = x.shape();
    if n < k {
        return Err(Error::Dimension(format!(
            "Gram matrix needs rows >= cols, got {n}x{k}"
        )));
    }
    let mut g = SymmetricMatrix::zeros(k);
    for a in 0..k {
        for b in a..k {
            let mut acc = 0.0;
            for i in 0..n {
                acc += x[(i, a)] * x[(i, b)];
            }
            g.set(a, b, acc);
        }
    }
    Ok(g)
}

/// Principal square root `V·diag(√λ)·Vᵀ` of a positive-definite matrix.
pub fn sqrt_psd(s: &SymmetricMatrix) -> Result<PosDef> {
    let d = sym_eig(s)?;
    let max = d.eigenvalues[0];
    let min = *d.eigenvalues.last().unwrap();
    if max <= 0.0 || min <= RANK_TOL * max {
        return Err(Error::NotPositiveDefinite {
            ratio: if max > 0.0 { min / max } else { f64::NEG_INFINITY },
        });
    }
    Ok(PosDef::new_unchecked(d.reconstruct_with(f64::sqrt)))
}

/// Polar decomposition `X = O·P` with `P = √(XᵀX)` and `O = X·P⁻¹`.
///
/// Both factors are assembled from a one-sided (Hestenes) Jacobi sweep on the
/// columns of `X`. The rotations are exactly the Jacobi rotations that
/// diagonalize `XᵀX = V·Σ²·Vᵀ`, so `P = V·Σ·Vᵀ` and `O = (X·V·Σ⁻¹)·Vᵀ`, but
/// the Gram matrix is never squared out explicitly and `O` stays orthonormal
/// to working precision even when `X` is badly conditioned.
pub fn polar_decompose(x: &Matrix) -> Result<PolarFactors> {
    let (n, k) = x.shape();
    if n < k {
        return Err(Error::Dimension(format!(
            "polar decomposition needs rows >= cols, got {n}x{k}"
        )));
    }
    // column-major working copy: w[j] is column j of X·V
    let mut w: Vec<Vec<f64>> = (0..k).map(|j| x.column(j)).collect();
    let mut v = Matrix::identity(k);
    let tol = f64::EPSILON * (n as f64).sqrt();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let (alpha, beta, gamma) = {
                    let (wp, wq) = (&w[p], &w[q]);
                    let mut a = 0.0;
                    let mut b = 0.0;
                    let mut g = 0.0;
                    for i in 0..n {
                        a += wp[i] * wp[i];
                        b += wq[i] * wq[i];
                        g += wp[i] * wq[i];
                    }
                    (a, b, g)
                };
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = c * t;
                let (lo, hi) = w.split_at_mut(q);
                let (wp, wq) = (&mut lo[p], &mut hi[0]);
                for i in 0..n {
                    let a = wp[i];
                    let b = wq[i];
                    wp[i] = c * a - s * b;
                    wq[i] = s * a + c * b;
                }
                for r in 0..k {
                    let a = v[(r, p)];
                    let b = v[(r, q)];
                    v[(r, p)] = c * a - s * b;
                    v[(r, q)] = s * a + c * b;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let sigma: Vec<f64> = w
        .iter()
        .map(|col| col.iter().map(|c| c * c).sum::<f64>().sqrt())
        .collect();
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let smin = sigma.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = if smax > 0.0 { (smin / smax).powi(2) } else { 0.0 };
    if smax == 0.0 || ratio <= RANK_TOL {
        return Err(Error::RankDeficient { ratio });
    }

    // O = U·Vᵀ with U = X·V·Σ⁻¹
    let mut o = Matrix::zeros(n, k);
    for i in 0..n {
        for j in 0..k {
            let mut acc = 0.0;
            for l in 0..k {
                acc += w[l][i] / sigma[l] * v[(j, l)];
            }
            o[(i, j)] = acc;
        }
    }
    let mut p = SymmetricMatrix::zeros(k);
    for a in 0..k {
        for b in a..k {
            let mut acc = 0.0;
            for l in 0..k {
                acc += v[(a, l)] * sigma[l] * v[(b, l)];
            }
            p.set(a, b, acc);
        }
    }
    Ok(PolarFactors {
        frame: Frame::new_unchecked(o),
        posdef: PosDef::new_unchecked(p),
    })
}
