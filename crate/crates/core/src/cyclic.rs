//! Cyclic chains: diagonal α, superdiagonal β_1..β_{n−1}, and a corner entry
//! (−1)^{ℓ+1} β_n closing the loop. Such a matrix is SR_ℓ with ε_ℓ = 1 for
//! every ℓ in [1, n−1], so its ℓ-diagonal stability reduces to ρ(A^(ℓ)) < 1.

use serde::{Deserialize, Serialize};

use crate::compound::mult_compound;
use crate::error::{Error, Result};
use crate::matcore::{spectral_report, Mat};
use crate::signreg::{classify_sign_regularity, SignClass, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicSpec {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Only the parity matters for the matrix; the analysis needs ℓ in [1, n−1].
    pub ell: u32,
}

impl CyclicSpec {
    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 2 {
            return Err(Error::precondition("cyclic matrix needs n >= 2"));
        }
        if self.betas.len() != n {
            return Err(Error::precondition(format!("{} betas for {n} alphas", self.betas.len())));
        }
        for (name, vals) in [("alpha", &self.alphas), ("beta", &self.betas)] {
            if let Some(i) = vals.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::precondition(format!("{name}_{} = {} must be nonnegative", i + 1, vals[i])));
            }
        }
        Ok(())
    }
}

pub fn build_cyclic(spec: &CyclicSpec) -> Result<Mat> {
    spec.validate()?;
    let n = spec.n();
    let corner_sign = if spec.ell % 2 == 1 { 1.0 } else { -1.0 };
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        data[i * n + i] = spec.alphas[i];
        if i + 1 < n {
            data[i * n + i + 1] = spec.betas[i];
        }
    }
    data[(n - 1) * n] = corner_sign * spec.betas[n - 1];
    Mat::new(n, n, data)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicReport {
    pub matrix: Mat,
    pub sign_class_at_ell: SignClass,
    /// ρ(A^(ℓ)) < 1 − tol, equivalently DT ℓ-diagonal stability.
    pub ell_diag_stable: bool,
    pub compound_rho: f64,
    /// Odd ℓ only: A ≥ 0 entrywise.
    pub entrywise_nonnegative: Option<bool>,
    /// Odd ℓ only: DT diagonal stability, equivalently ρ(A) < 1 − tol.
    pub diag_stable_if_odd: Option<bool>,
}

pub fn analyze_cyclic(spec: &CyclicSpec, tol: f64) -> Result<CyclicReport> {
    let a = build_cyclic(spec)?;
    let n = spec.n();
    let ell = spec.ell as usize;
    if ell < 1 || ell > n - 1 {
        return Err(Error::precondition(format!("ell = {ell} outside [1, {}]", n - 1)));
    }
    let class = classify_sign_regularity(&a, ell, tol)?;
    let consistent = match class.verdict {
        Verdict::Sr | Verdict::Ssr => class.signature == Some(1),
        Verdict::AllZero => true,
        Verdict::None => false,
    };
    if !consistent {
        return Err(Error::numeric(format!(
            "cyclic matrix is not SR_{ell} with signature +1 ({:?}, {:?})",
            class.verdict, class.signature
        )));
    }
    let compound_rho = spectral_report(&mult_compound(&a, ell)?)?.spectral_radius;
    let (entrywise_nonnegative, diag_stable_if_odd) = if ell % 2 == 1 {
        let nonneg = a.as_slice().iter().all(|v| *v >= 0.0);
        let rho = spectral_report(&a)?.spectral_radius;
        (Some(nonneg), Some(rho < 1.0 - tol))
    } else {
        (None, None)
    };
    Ok(CyclicReport {
        matrix: a,
        sign_class_at_ell: class,
        ell_diag_stable: compound_rho < 1.0 - tol,
        compound_rho,
        entrywise_nonnegative,
        diag_stable_if_odd,
    })
}
