use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense real `rows × cols` matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data, rejecting empty shapes, length
    /// mismatches and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite matrix entry {bad}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec_unchecked(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from nested rows. Panics on ragged input; intended for
    /// literals in tests and examples.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix literal");
            data.extend_from_slice(r.as_ref());
        }
        Self::new(rows.len(), cols, data).expect("invalid matrix literal")
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                let src = rhs.row(l);
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::Dimension(format!(
                "shape mismatch {:?} vs {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(Matrix::from_vec_unchecked(self.rows, self.cols, data))
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|v| v * c).collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Squared Frobenius norm, i.e. `tr(XᵀX)`.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |(XᵀX − I)_{ij}|`, the orthonormality defect of the columns.
    pub fn orthonormality_defect(&self) -> f64 {
        let k = self.cols;
        let mut worst = 0.0_f64;
        for a in 0..k {
            for b in a..k {
                let mut dot = 0.0;
                for i in 0..self.rows {
                    dot += self[(i, a)] * self[(i, b)];
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Determinant of a square matrix by Gaussian elimination with partial
    /// pivoting.
    pub fn det(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for c in 0..n {
            let pivot = (c..n)
                .max_by(|&x, &y| a[x * n + c].abs().total_cmp(&a[y * n + c].abs()))
                .unwrap_or(c);
            if a[pivot * n + c] == 0.0 {
                return Ok(0.0);
            }
            if pivot != c {
                for j in 0..n {
                    a.swap(c * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[c * n + c];
            det *= p;
            for r in c + 1..n {
                let f = a[r * n + c] / p;
                if f != 0.0 {
                    for j in c..n {
                        a[r * n + j] -= f * a[c * n + j];
                    }
                }
            }
        }
        Ok(det)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Real symmetric `dim × dim` matrix holding only its upper triangle
/// (`i ≤ j`), packed row by row.
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    upper: Vec<f64>,
}

#[inline]
fn packed_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows 0..i hold dim, dim-1, ..., dim-i+1 entries
    i * dim - i * (i + 1) / 2 + j
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            upper: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut s = Self::zeros(dim);
        for i in 0..dim {
            s.set(i, i, 1.0);
        }
        s
    }

    /// Builds from the packed upper triangle (`(0,0),(0,1),…,(0,d−1),(1,1),…`).
    pub fn from_upper(dim: usize, upper: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("empty symmetric matrix".into()));
        }
        if upper.len() != dim * (dim + 1) / 2 {
            return Err(Error::Dimension(format!(
                "{} packed entries supplied for dimension {dim}",
                upper.len()
            )));
        }
        if upper.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite symmetric matrix entry".into()));
        }
        Ok(Self { dim, upper })
    }

    /// Reads the upper triangle of a square matrix. The lower triangle is
    /// ignored.
    pub fn from_upper_of(m: &Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Dimension(format!(
                "symmetric matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let d = m.rows();
        let mut upper = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in i..d {
                upper.push(m[(i, j)]);
            }
        }
        Ok(Self { dim: d, upper })
    }

    /// Symmetrizes `(M + Mᵀ)/2`.
    pub fn symmetrize(m: &Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Dimension(format!(
                "cannot symmetrize {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        let d = m.rows();
        let mut upper = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in i..d {
                upper.push(0.5 * (m[(i, j)] + m[(j, i)]));
            }
        }
        Ok(Self { dim: d, upper })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[packed_index(self.dim, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let idx = packed_index(self.dim, i, j);
        self.upper[idx] = v;
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn to_full(&self) -> Matrix {
        let d = self.dim;
        let mut m = Matrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let v = self.get(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `tr(S²) = Σ_i S_ii² + 2 Σ_{i<j} S_ij²`.
    pub fn trace_of_square(&self) -> f64 {
        let mut t = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.get(i, j);
                t += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, c: f64) -> SymmetricMatrix {
        Self {
            dim: self.dim,
            upper: self.upper.iter().map(|v| v * c).collect(),
        }
    }

    /// `Vᵀ S V` for a square `V`.
    pub fn conjugate(&self, v: &Matrix) -> Result<SymmetricMatrix> {
        if v.rows() != self.dim || v.cols() != self.dim {
            return Err(Error::Dimension(format!(
                "conjugating dimension {} by {}x{}",
                self.dim,
                v.rows(),
                v.cols()
            )));
        }
        let full = self.to_full();
        let q = v.transpose().matmul(&full)?.matmul(v)?;
        SymmetricMatrix::symmetrize(&q)
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symmetric{:?}", self.to_full())
    }
}
