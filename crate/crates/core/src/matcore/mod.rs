//! Dense real matrix kernel: Gram matrices, the symmetric eigensolver,
//! positive-definite square roots and the polar decomposition.

pub mod csv;
mod eigen;
mod matrix;
mod polar;

pub use eigen::{
    eigenvalues_in_place, jacobi_in_place, sym_eig, SpectralDecomp, MAX_SWEEPS, OFF_DIAGONAL_TOL,
};
pub use matrix::{Matrix, SymmetricMatrix};
pub use polar::{gram, polar_decompose, sqrt_psd, Frame, PolarFactors, PosDef, FRAME_TOL, RANK_TOL};

/// Householder reflector `I − 2vvᵀ/‖v‖²` built from `v = (1, 2, …, n)`.
/// Used as the fixed orthogonal probe in the invariance experiments.
pub fn householder_probe(n: usize) -> Matrix {
    let v: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    householder(&v)
}

pub fn householder(v: &[f64]) -> Matrix {
    let n = v.len();
    let norm_sq: f64 = v.iter().map(|x| x * x).sum();
    let mut h = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] -= 2.0 * v[i] * v[j] / norm_sq;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn householder_probe_is_orthogonal_involution() {
        for n in 1..6 {
            let h = householder_probe(n);
            assert!(h.orthonormality_defect() < 1e-15);
            let hh = h.matmul(&h).unwrap();
            assert!(hh.sub(&Matrix::identity(n)).unwrap().max_abs() < 1e-15);
        }
        assert_eq!(householder_probe(1)[(0, 0)], -1.0);
    }
}
