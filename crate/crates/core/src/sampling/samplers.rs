use crate::error::{Error, Result};
use crate::matcore::{gram, polar_decompose, sqrt_psd, Frame, Matrix, PolarFactors, PosDef, SymmetricMatrix};
use crate::sampling::rng::RngStream;

/// Fresh draws attempted after a rank-deficient Ginibre sample.
pub const MAX_RETRIES: usize = 3;

/// `n × k` matrix of i.i.d. standard normals, filled row-major.
pub fn sample_ginibre(n: usize, k: usize, rng: &mut RngStream) -> Matrix {
    let mut m = Matrix::zeros(n, k);
    rng.fill_std_normal(m.as_mut_slice());
    m
}

/// Refills an existing matrix in place; same stream consumption as
/// [`sample_ginibre`].
pub fn sample_ginibre_into(m: &mut Matrix, rng: &mut RngStream) {
    rng.fill_std_normal(m.as_mut_slice());
}

fn check(n: usize, k: usize) -> Result<()> {
    if k == 0 || n < k {
        return Err(Error::Dimension(format!("need n >= k >= 1, got n={n}, k={k}")));
    }
    Ok(())
}

fn with_retries<T>(mut draw: impl FnMut() -> Result<T>) -> Result<T> {
    let mut last = None;
    for _ in 0..=MAX_RETRIES {
        match draw() {
            Ok(v) => return Ok(v),
            Err(e @ (Error::RankDeficient { .. } | Error::NotPositiveDefinite { .. })) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one draw was attempted"))
}

/// Both polar factors of one Ginibre draw.
pub fn sample_polar(n: usize, k: usize, rng: &mut RngStream) -> Result<PolarFactors> {
    check(n, k)?;
    with_retries(|| polar_decompose(&sample_ginibre(n, k, rng)))
}

/// Homogeneous (Haar) random frame on `O(n,k)`: the orthogonal polar factor
/// of a Ginibre matrix.
pub fn sample_stiefel(n: usize, k: usize, rng: &mut RngStream) -> Result<Frame> {
    Ok(sample_polar(n, k, rng)?.frame)
}

/// `√(XᵀX)` for a Ginibre `X`, the positive polar factor.
pub fn sample_posdef_part(n: usize, k: usize, rng: &mut RngStream) -> Result<PosDef> {
    check(n, k)?;
    with_retries(|| sqrt_psd(&gram(&sample_ginibre(n, k, rng))?))
}

/// Symmetric matrix whose upper-triangle entries (diagonal included) are
/// i.i.d. standard normal.
pub fn sample_gauss_symmetric(k: usize, rng: &mut RngStream) -> Result<SymmetricMatrix> {
    if k == 0 {
        return Err(Error::Dimension("symmetric matrix needs k >= 1".into()));
    }
    let mut upper = vec![0.0; k * (k + 1) / 2];
    rng.fill_std_normal(&mut upper);
    SymmetricMatrix::from_upper(k, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ginibre_is_row_major_stream_order() {
        let m = sample_ginibre(3, 2, &mut RngStream::new(1, 0));
        let mut r = RngStream::new(1, 0);
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(m[(i, j)], r.std_normal());
            }
        }
    }

    #[test]
    fn stiefel_frames_are_orthonormal() {
        let mut r = RngStream::new(11, 0);
        for &(n, k) in &[(1, 1), (2, 1), (3, 2), (5, 3), (8, 8)] {
            for _ in 0..200 {
                let f = sample_stiefel(n, k, &mut r).unwrap();
                assert!(f.as_matrix().orthonormality_defect() <= 1e-12);
                assert_eq!(f.as_matrix().shape(), (n, k));
            }
        }
    }

    #[test]
    fn posdef_part_is_positive_definite() {
        let mut r = RngStream::new(12, 0);
        for _ in 0..100 {
            let p = sample_posdef_part(4, 3, &mut r).unwrap();
            assert!(PosDef::new(p.into_symmetric()).is_ok());
        }
    }

    #[test]
    fn symmetric_sampler_fills_packed_upper() {
        let s = sample_gauss_symmetric(3, &mut RngStream::new(2, 2)).unwrap();
        let mut r = RngStream::new(2, 2);
        for i in 0..3 {
            for j in i..3 {
                assert_eq!(s.get(i, j), r.std_normal());
                assert_eq!(s.get(j, i), s.get(i, j));
            }
        }
    }

    #[test]
    fn bad_dimensions() {
        let mut r = RngStream::new(0, 0);
        assert!(sample_stiefel(2, 3, &mut r).is_err());
        assert!(sample_posdef_part(1, 0, &mut r).is_err());
        assert!(sample_gauss_symmetric(0, &mut r).is_err());
    }
}
