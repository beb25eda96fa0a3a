//! Multiplicative compounds and wedge products.
//!
//! Entry (i, j) of A^(k) is the minor A(κ_i | κ_j) with κ's drawn from
//! [`lex_index_sets`]; the wedge a^1 ∧ … ∧ a^k is the single column of the
//! k-th compound of the n×k matrix [a^1 … a^k].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{lex_index_sets, lu::minor_zero_based, Mat};

/// Upper bound on the number of entries of any materialized compound.
pub const MAX_COMPOUND_ENTRIES: usize = 4_000_000;

/// k-th compound of a (possibly rectangular) matrix, of shape C(n,k)×C(m,k).
pub fn compound(a: &Mat, k: usize) -> Result<Mat> {
    let (n, m) = (a.n_rows(), a.n_cols());
    if k == 0 || k > n.min(m) {
        return Err(Error::domain(format!("compound order {k} outside [1, {}] for {n}x{m}", n.min(m))));
    }
    let row_sets = lex_index_sets(k, n)?;
    let col_sets = if n == m { row_sets.clone() } else { lex_index_sets(k, m)? };
    let entries = row_sets.len() as u128 * col_sets.len() as u128;
    if entries > MAX_COMPOUND_ENTRIES as u128 {
        return Err(Error::Capacity {
            what: format!("order-{k} compound of {n}x{m}"),
            required: entries,
            limit: MAX_COMPOUND_ENTRIES as u128,
        });
    }
    let rows: Vec<Vec<usize>> = row_sets.iter().map(|s| s.zero_based()).collect();
    let cols: Vec<Vec<usize>> = col_sets.iter().map(|s| s.zero_based()).collect();
    Ok(Mat::from_fn(rows.len(), cols.len(), |i, j| minor_zero_based(a, &rows[i], &cols[j])))
}

/// A^(k) for square A.
pub fn mult_compound(a: &Mat, k: usize) -> Result<Mat> {
    a.require_square("multiplicative compound")?;
    compound(a, k)
}

/// Coordinates of a^1 ∧ … ∧ a^k in lexicographic row-set order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WedgeVector {
    pub n: usize,
    pub k: usize,
    pub coords: Vec<f64>,
}

impl WedgeVector {
    pub fn norm(&self) -> f64 {
        crate::matcore::norm2(&self.coords)
    }
}

pub fn wedge<V: AsRef<[f64]>>(vectors: &[V]) -> Result<WedgeVector> {
    let k = vectors.len();
    if k == 0 {
        return Err(Error::domain("wedge of zero vectors"));
    }
    let stacked = Mat::from_columns(vectors)?;
    let n = stacked.n_rows();
    if k > n {
        return Err(Error::domain(format!("wedge of {k} vectors in R^{n}")));
    }
    let c = compound(&stacked, k)?;
    Ok(WedgeVector { n, k, coords: c.column(0) })
}

/// Euclidean norm of the wedge: the k-volume of the spanned parallelotope.
pub fn k_content<V: AsRef<[f64]>>(vectors: &[V]) -> Result<f64> {
    Ok(wedge(vectors)?.norm())
}
