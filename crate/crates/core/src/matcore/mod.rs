//! Dense real matrices and the numerical kernels every other module builds on:
//! lexicographic index sets, minors via LU, spectra, and definiteness tests.
//!
//! Storage is row-major and zero-based. Index sets ([`LexIndexSet`]) carry the
//! one-based κ convention and convert at the boundary.

mod index;
pub(crate) mod lu;
mod spectral;

use std::fmt;
use std::ops::Index;

use serde::Serialize;

use crate::error::{Error, Result};

pub use index::{binomial, lex_index_sets, LexIndexSet, CAPACITY_LIMIT};
pub use lu::{determinant, inverse, minor, solve, Lu};
pub use spectral::{is_positive_definite, spectral_report, Definiteness, Eigenvalue, SpectralReport};

/// Zero band for sign decisions, relative to the largest magnitude in play.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
/// Margin an eigenvalue must clear for a symmetric matrix to count as positive definite.
pub const DEFAULT_PD_TOL: f64 = 1e-10;

/// Dense real matrix with finite entries.
#[derive(Clone, PartialEq, Serialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    /// Builds a matrix from row-major data, rejecting empty shapes and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::shape(format!("matrix must be non-empty, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "entry ({}, {}) is not finite",
                pos / cols + 1,
                pos % cols + 1
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::shape(format!(
                    "row {} has {} entries, expected {n_cols}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Mat::new(n_rows, n_cols, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let n_cols = columns.len();
        let n_rows = columns.first().map_or(0, |c| c.as_ref().len());
        for (j, c) in columns.iter().enumerate() {
            if c.as_ref().len() != n_rows {
                return Err(Error::domain(format!(
                    "vector {} has dimension {}, expected {n_rows}",
                    j + 1,
                    c.as_ref().len()
                )));
            }
        }
        let mut data = vec![0.0; n_rows * n_cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.as_ref().iter().enumerate() {
                data[i * n_cols + j] = *v;
            }
        }
        Mat::new(n_rows, n_cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be non-empty");
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Mat::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = *d;
        }
        m
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
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

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Symmetric part (M + Mᵀ)/2.
    pub fn symmetrized(&self) -> Result<Mat> {
        self.require_square("symmetrization")?;
        Ok(Mat::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)])))
    }

    pub fn scaled(&self, c: f64) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| c * v).collect() }
    }

    pub fn neg(&self) -> Mat {
        self.scaled(-1.0)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.require_same_shape(other, "addition")?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.require_same_shape(other, "subtraction")?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(l, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// Submatrix on zero-based row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// Largest entrywise difference; shapes must agree.
    pub fn max_abs_diff(&self, other: &Mat) -> Result<f64> {
        self.require_same_shape(other, "comparison")?;
        Ok(self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::shape(format!("{what} needs a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }

    fn require_same_shape(&self, other: &Mat, what: &str) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::shape(format!(
                "{what} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Diagonal matrix with strictly positive entries, stored as its diagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PositiveDiagonal(Vec<f64>);

impl PositiveDiagonal {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::shape("diagonal must be non-empty"));
        }
        if let Some(i) = entries.iter().position(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::precondition(format!(
                "diagonal entry {} is {}, must be finite and positive",
                i + 1,
                entries[i]
            )));
        }
        Ok(PositiveDiagonal(entries))
    }

    pub fn ones(n: usize) -> Self {
        PositiveDiagonal(vec![1.0; n])
    }

    /// Reads the diagonal of a matrix, which must be diagonal with positive entries.
    pub fn from_mat(m: &Mat) -> Result<Self> {
        if !m.is_diagonal() {
            return Err(Error::precondition("matrix is not diagonal"));
        }
        PositiveDiagonal::new(m.diagonal())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_diagonal(&self.0)
    }

    /// Quadratic form yᵀ D y.
    pub fn quadratic_form(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.0.len() {
            return Err(Error::shape(format!(
                "vector of length {} against {}x{} diagonal",
                y.len(),
                self.0.len(),
                self.0.len()
            )));
        }
        Ok(self.0.iter().zip(y).map(|(d, v)| d * v * v).sum())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
