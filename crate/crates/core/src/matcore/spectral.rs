use std::cmp::Ordering;

use serde::Serialize;

use super::Mat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn mul(&self, other: &Eigenvalue) -> Eigenvalue {
        Eigenvalue {
            re: self.re * other.re - self.im * other.im,
            im: self.re * other.im + self.im * other.re,
        }
    }
}

/// Eigenvalues ordered by decreasing modulus, |λ_1| ≥ |λ_2| ≥ … ≥ |λ_n|.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<Eigenvalue>,
    pub moduli: Vec<f64>,
    pub spectral_radius: f64,
}

/// All eigenvalues of a square matrix via Hessenberg reduction and shifted QR (real Schur form).
pub fn spectral_report(a: &Mat) -> Result<SpectralReport> {
    a.require_square("spectral report")?;
    let n = a.n_rows();
    let schur = a
        .to_nalgebra()
        .try_schur(f64::EPSILON, 100 * n)
        .ok_or_else(|| Error::numeric(format!("QR iteration did not converge within {} sweeps", 100 * n)))?;
    let mut eigenvalues: Vec<Eigenvalue> = schur
        .complex_eigenvalues()
        .iter()
        .map(|c| Eigenvalue { re: c.re, im: c.im })
        .collect();
    eigenvalues.sort_by(|x, y| {
        y.modulus()
            .total_cmp(&x.modulus())
            .then_with(|| y.re.total_cmp(&x.re))
            .then_with(|| y.im.partial_cmp(&x.im).unwrap_or(Ordering::Equal))
    });
    let moduli: Vec<f64> = eigenvalues.iter().map(Eigenvalue::modulus).collect();
    Ok(SpectralReport { spectral_radius: moduli[0], moduli, eigenvalues })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Definiteness {
    pub positive_definite: bool,
    /// Smallest eigenvalue of the symmetric part.
    pub margin: f64,
}

/// Tests (M + Mᵀ)/2 ≻ 0 by its smallest eigenvalue.
pub fn is_positive_definite(m: &Mat, tol: f64) -> Result<Definiteness> {
    let sym = m.symmetrized()?;
    let n = sym.n_rows();
    let eig = nalgebra::SymmetricEigen::try_new(sym.to_nalgebra(), f64::EPSILON, 100 * n)
        .ok_or_else(|| Error::numeric("symmetric eigenvalue iteration did not converge"))?;
    let margin = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Definiteness { positive_definite: margin > tol, margin })
}
