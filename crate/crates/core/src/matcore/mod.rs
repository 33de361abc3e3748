//! Dense real matrices and the handful of factorizations the rest of the
//! crate is written against.
//!
//! Sizes in this crate are small (a few dozen rows at most), so everything is
//! a plain row-major `Vec<f64>` with straightforward O(n³) kernels.

mod decomp;
mod jacobi;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use decomp::{cholesky, det, inv, spd_inverse, spd_log_det, CONDITION_LIMIT};
pub use jacobi::SymEig;

/// Relative/absolute tolerance pair. A quantity of natural size `scale` passes
/// when it is within `abs + rel * scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel > 0.0 && abs >= 0.0 && rel.is_finite() && abs.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be finite with rel > 0 and abs >= 0 (rel={rel}, abs={abs})"
            )));
        }
        Ok(Tolerance { rel, abs })
    }

    #[inline]
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

/// Dense real matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Matrix::new(nrows, ncols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be at least 1x1");
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    /// Column matrix from a slice.
    pub fn column(v: &[f64]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(Error::DimensionMismatch("no columns given".into()));
        }
        let mut m = Matrix::zeros(nrows, ncols);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {nrows}",
                    c.len()
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `z · (self z)` for a square matrix.
    pub fn quadratic_form(&self, z: &[f64]) -> Result<f64> {
        let mz = self.matvec(z)?;
        Ok(mz.iter().zip(z).map(|(a, b)| a * b).sum())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        self.map(|x| x * s)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "shapes {:?} and {:?} differ",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Largest absolute entry.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_max`; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `‖M − Mᵀ‖_max` for square M.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self, tol: Tolerance) -> bool {
        self.is_square() && self.asymmetry() <= tol.bound(self.norm_max())
    }

    /// Fails with `NotSymmetric` unless square and symmetric within `tol`.
    pub fn check_symmetric(&self, tol: Tolerance) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let asymmetry = self.asymmetry();
        let bound = tol.bound(self.norm_max());
        if asymmetry > bound {
            return Err(Error::NotSymmetric { asymmetry, bound });
        }
        Ok(())
    }

    /// `(M + Mᵀ)/2`.
    pub fn symmetrize(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// `(M − Mᵀ)/2`.
    pub fn antisymmetrize(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] - self[(j, i)]))
    }

    /// Submatrix picking the listed rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// Contiguous block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// `[[a, b], [c, d]]` assembled from blocks.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("incompatible block shapes".into()));
        }
        let (r, cc) = (a.rows + c.rows, a.cols + b.cols);
        Ok(Matrix::from_fn(r, cc, |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - a.cols)],
            (false, true) => c[(i - a.rows, j)],
            (false, false) => d[(i - a.rows, j - a.cols)],
        }))
    }

    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        let (r, c) = (a.rows + b.rows, a.cols + b.cols);
        Matrix::from_fn(r, c, |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a[(i, j)],
            (false, false) => b[(i - a.rows, j - a.cols)],
            _ => 0.0,
        })
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Symmetric eigendecomposition; see [`SymEig`].
    pub fn sym_eig(&self, tol: Tolerance) -> Result<SymEig> {
        self.check_symmetric(tol)?;
        jacobi::jacobi_eigen(&self.symmetrize())
    }

    /// Principal square root of a symmetric positive definite matrix.
    pub fn sqrt_pd(&self, tol: Tolerance) -> Result<Matrix> {
        let eig = self.sym_eig(tol)?;
        eig.require_positive(tol)?;
        Ok(eig.apply_fn(f64::sqrt))
    }

    /// Inverse principal square root of a symmetric positive definite matrix.
    pub fn inv_sqrt_pd(&self, tol: Tolerance) -> Result<Matrix> {
        let eig = self.sym_eig(tol)?;
        eig.require_positive(tol)?;
        Ok(eig.apply_fn(|x| 1.0 / x.sqrt()))
    }

    /// Positive semidefiniteness: smallest eigenvalue ≥ −(abs + rel·‖M‖_max).
    pub fn is_psd(&self, tol: Tolerance) -> Result<bool> {
        let eig = self.sym_eig(tol)?;
        Ok(eig.min() >= -tol.bound(self.norm_max()))
    }

    pub fn inv(&self) -> Result<Matrix> {
        inv(self)
    }

    pub fn det(&self) -> Result<f64> {
        det(self)
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

// Operator forms panic on shape mismatch, like slice indexing. Use the
// `Result`-returning methods when shapes come from user input.
impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix::add(self, rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix::sub(self, rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

// Serialized as an array of rows.
impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        Matrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for x in self.row(i) {
                write!(f, "{x:>12.6e} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Euclidean norm of a vector.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Index of the vector with the largest Euclidean norm; first one on ties.
pub(crate) fn argmax_norm(vs: &[Vec<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in vs.iter().enumerate() {
        let r = norm2(v);
        if best.is_none_or(|(_, b)| r > b) {
            best = Some((i, r));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(matches!(
            Matrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(Matrix::new(0, 2, vec![]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(Matrix::new(2, 2, vec![1.0]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(0.0, 1e-12).is_err());
        assert!(Tolerance::new(1e-9, -1.0).is_err());
        let t = Tolerance::default();
        assert_eq!((t.rel, t.abs), (1e-9, 1e-12));
    }

    #[test]
    fn eig_identity_and_diagonal() {
        let tol = Tolerance::default();
        let e = Matrix::identity(2).sym_eig(tol).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        let e = Matrix::from_diag(&[3.0, 1.0]).sym_eig(tol).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
    }

    #[test]
    fn eig_two_by_two_hand_oracle() {
        // λ² − 4λ + 3 = 0
        let m = Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let e = m.sym_eig(Tolerance::default()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn eig_rejects_asymmetric() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(m.sym_eig(Tolerance::default()), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn sqrt_pd_cases() {
        let tol = Tolerance::default();
        assert!(Matrix::identity(4).sqrt_pd(tol).unwrap().max_abs_diff(&Matrix::identity(4)) < 1e-15);
        let r = Matrix::from_diag(&[4.0, 9.0]).sqrt_pd(tol).unwrap();
        assert!(r.max_abs_diff(&Matrix::from_diag(&[2.0, 3.0])) < 1e-15);
        let m = Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let x = m.sqrt_pd(tol).unwrap();
        assert!((&x * &x).max_abs_diff(&m) < 1e-12);
        assert!(x.asymmetry() < 1e-15);
        let bad = Matrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(bad.sqrt_pd(tol), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn psd_cases() {
        let tol = Tolerance::default();
        assert!(Matrix::zeros(2, 2).is_psd(tol).unwrap());
        assert!(!Matrix::from_diag(&[1.0, -1.0]).is_psd(tol).unwrap());
        assert!(Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap().is_psd(tol).unwrap());
    }

    #[test]
    fn inv_and_det_cases() {
        assert!(Matrix::identity(3).inv().unwrap().max_abs_diff(&Matrix::identity(3)) < 1e-15);
        assert!((Matrix::from_diag(&[2.0, 3.0]).det().unwrap() - 6.0).abs() < 1e-14);
        let c = 0.5;
        let shear = Matrix::from_rows(&[[1.0, 0.0], [c, 1.0]]).unwrap();
        let expect = Matrix::from_rows(&[[1.0, 0.0], [-c, 1.0]]).unwrap();
        assert!(shear.inv().unwrap().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn inv_rejects_singular_and_ill_conditioned() {
        let s = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(s.inv(), Err(Error::Singular { .. })));
        let s = Matrix::from_diag(&[1.0, 1e-13]);
        assert!(matches!(s.inv(), Err(Error::Singular { .. })));
        let ok = Matrix::from_diag(&[1.0, 1e-11]);
        assert!(ok.inv().is_ok());
        assert!(matches!(Matrix::zeros(2, 3).inv(), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn blocks_round_trip() {
        let m = Matrix::from_fn(4, 4, |i, j| (i * 4 + j) as f64);
        let a = m.block(0, 0, 1, 1);
        let b = m.block(0, 1, 1, 3);
        let c = m.block(1, 0, 3, 1);
        let d = m.block(1, 1, 3, 3);
        assert_eq!(Matrix::from_blocks(&a, &b, &c, &d).unwrap(), m);
    }
}
