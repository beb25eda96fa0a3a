use super::{LexIndexSet, Mat};
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, PA = LU, packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    packed: Vec<f64>,
    perm: Vec<usize>,
    parity: f64,
    scale: f64,
}

impl Lu {
    pub fn new(a: &Mat) -> Result<Self> {
        a.require_square("LU factorization")?;
        let n = a.n_rows();
        let mut m = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = 1.0;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&x, &y| m[x * n + col].abs().total_cmp(&m[y * n + col].abs()))
                .unwrap();
            if pivot_row != col {
                for j in 0..n {
                    m.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
                parity = -parity;
            }
            let pivot = m[col * n + col];
            if pivot == 0.0 {
                continue;
            }
            for i in col + 1..n {
                let factor = m[i * n + col] / pivot;
                m[i * n + col] = factor;
                if factor != 0.0 {
                    for j in col + 1..n {
                        m[i * n + j] -= factor * m[col * n + j];
                    }
                }
            }
        }
        Ok(Lu { n, packed: m, perm, parity, scale: a.max_abs() })
    }

    pub fn determinant(&self) -> f64 {
        (0..self.n).fold(self.parity, |acc, i| acc * self.packed[i * self.n + i])
    }

    /// True when some pivot is negligible relative to the matrix scale.
    pub fn is_singular(&self) -> bool {
        let threshold = self.n as f64 * f64::EPSILON * self.scale;
        (0..self.n).any(|i| self.packed[i * self.n + i].abs() <= threshold)
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::shape(format!("right-hand side of length {} for {n}x{n} system", b.len())));
        }
        if self.is_singular() {
            return Err(Error::numeric("matrix is numerically singular"));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.packed[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.packed[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.packed[i * n + i];
        }
        Ok(x)
    }
}

pub fn determinant(a: &Mat) -> Result<f64> {
    a.require_square("determinant")?;
    Ok(small_or_lu_det(a))
}

pub fn solve(a: &Mat, b: &[f64]) -> Result<Vec<f64>> {
    Lu::new(a)?.solve(b)
}

pub fn inverse(a: &Mat) -> Result<Mat> {
    let lu = Lu::new(a)?;
    let n = a.n_rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(lu.solve(&e)?);
    }
    Mat::from_columns(&cols)
}

/// det A[rows | cols]: closed form up to order 2, pivoted LU beyond.
pub fn minor(a: &Mat, rows: &LexIndexSet, cols: &LexIndexSet) -> Result<f64> {
    if rows.k() != cols.k() {
        return Err(Error::domain(format!("minor needs |rows| = |cols|, got {} and {}", rows.k(), cols.k())));
    }
    if rows.indices().last().copied().unwrap_or(0) > a.n_rows()
        || cols.indices().last().copied().unwrap_or(0) > a.n_cols()
    {
        return Err(Error::domain(format!(
            "minor {rows}|{cols} out of range for {}x{} matrix",
            a.n_rows(),
            a.n_cols()
        )));
    }
    Ok(minor_zero_based(a, &rows.zero_based(), &cols.zero_based()))
}

pub(crate) fn minor_zero_based(a: &Mat, rows: &[usize], cols: &[usize]) -> f64 {
    match rows.len() {
        1 => a[(rows[0], cols[0])],
        2 => a[(rows[0], cols[0])] * a[(rows[1], cols[1])] - a[(rows[0], cols[1])] * a[(rows[1], cols[0])],
        _ => small_or_lu_det(&a.select(rows, cols)),
    }
}

fn small_or_lu_det(a: &Mat) -> f64 {
    match a.n_rows() {
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        _ => Lu::new(a).expect("square by construction").determinant(),
    }
}
