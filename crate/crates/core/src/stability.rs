//! Schur and Stein tests, diagonal Lyapunov certificates and necessary-condition screens.
//!
//! The constructive path for a nonnegative Schur matrix M is
//! ξ = (I − M)⁻¹x, z = (I − Mᵀ)⁻¹y, D = diag(z_i / ξ_i), which satisfies
//! Mξ ≪ ξ, Mᵀz ≪ z and MᵀDM ≺ D. Applied to M = A^(k) this certifies
//! k-diagonal stability whenever A is SR_k and A^(k) is Schur.

use serde::Serialize;

use crate::compound::mult_compound;
use crate::error::{Error, Result};
use crate::matcore::{
    binomial, inverse, is_positive_definite, lex_index_sets, lu::minor_zero_based, spectral_report, LexIndexSet,
    Lu, Mat, PositiveDiagonal,
};
use crate::signreg::{classify_sign_regularity, MinorWitness, Verdict};

/// Largest dimension for the exhaustive principal-minor screens (2^n − 1 minors).
pub const MAX_SCREEN_DIM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchurCheck {
    pub schur: bool,
    pub spectral_radius: f64,
}

/// ρ(A) < 1 − tol.
pub fn is_schur(a: &Mat, tol: f64) -> Result<SchurCheck> {
    let rho = spectral_report(a)?.spectral_radius;
    Ok(SchurCheck { schur: rho < 1.0 - tol, spectral_radius: rho })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SteinCheck {
    pub holds: bool,
    /// Smallest eigenvalue of D − AᵀDA.
    pub margin: f64,
}

/// AᵀDA ≺ D with margin above `tol`.
pub fn stein_holds(a: &Mat, d: &PositiveDiagonal, tol: f64) -> Result<SteinCheck> {
    a.require_square("Stein inequality")?;
    if d.dim() != a.n_rows() {
        return Err(Error::shape(format!("{}x{} diagonal against {}x{} matrix", d.dim(), d.dim(), a.n_rows(), a.n_rows())));
    }
    let n = a.n_rows();
    let w = d.entries();
    // D − AᵀDA
    let gap = Mat::from_fn(n, n, |i, j| {
        let quad: f64 = (0..n).map(|l| a[(l, i)] * w[l] * a[(l, j)]).sum();
        let diag = if i == j { w[i] } else { 0.0 };
        diag - quad
    });
    let pd = is_positive_definite(&gap, tol)?;
    Ok(SteinCheck { holds: pd.positive_definite, margin: pd.margin })
}

/// Diagonal certificate together with the vectors it was built from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalDlf {
    pub d: PositiveDiagonal,
    pub xi: Vec<f64>,
    pub z: Vec<f64>,
    /// Whether −A was used because A ≤ 0.
    pub negated: bool,
    pub stein_margin: f64,
    /// min_i (ξ_i − (Mξ)_i), M the nonnegative matrix actually used.
    pub xi_gap: f64,
    /// min_i (z_i − (Mᵀz)_i).
    pub z_gap: f64,
}

/// D = diag(z/ξ) for a Schur matrix with entries all ≥ 0 or all ≤ 0.
pub fn construct_dlf_nonneg(a: &Mat, x: &[f64], y: &[f64], tol: f64) -> Result<DiagonalDlf> {
    a.require_square("diagonal Lyapunov construction")?;
    let n = a.n_rows();
    if x.len() != n || y.len() != n {
        return Err(Error::shape(format!("weight vectors must have length {n}")));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::precondition("weight vectors x and y must be strictly positive"));
    }
    let band = tol * a.max_abs().max(1.0);
    let nonneg = a.as_slice().iter().all(|v| *v >= -band);
    let nonpos = a.as_slice().iter().all(|v| *v <= band);
    let (m, negated) = match (nonneg, nonpos) {
        (true, _) => (a.clone(), false),
        (false, true) => (a.neg(), true),
        _ => {
            return Err(Error::precondition(
                "matrix has entries of both signs; certify its compound with certify_k_diag_stability instead",
            ))
        }
    };
    let schur = is_schur(&m, tol)?;
    if !schur.schur {
        return Err(Error::precondition(format!("matrix is not Schur (spectral radius {})", schur.spectral_radius)));
    }
    let i_minus_m = Mat::identity(n).sub(&m)?;
    let xi = Lu::new(&i_minus_m)?.solve(x)?;
    let z = Lu::new(&i_minus_m.transpose())?.solve(y)?;
    if xi.iter().chain(&z).any(|v| !(*v > 0.0)) {
        return Err(Error::numeric("constructed xi or z is not strictly positive"));
    }
    let d = PositiveDiagonal::new(xi.iter().zip(&z).map(|(a, b)| b / a).collect())?;

    let m_xi = m.mul_vec(&xi)?;
    let mt_z = m.transpose().mul_vec(&z)?;
    let xi_gap = min_gap(&xi, &m_xi);
    let z_gap = min_gap(&z, &mt_z);
    let stein = stein_holds(&m, &d, 0.0)?;
    if !stein.holds || !strictly_below(&m_xi, &xi, tol) || !strictly_below(&mt_z, &z, tol) {
        return Err(Error::numeric(format!(
            "constructed certificate failed its self-check (Stein margin {:e})",
            stein.margin
        )));
    }
    Ok(DiagonalDlf { d, xi, z, negated, stein_margin: stein.margin, xi_gap, z_gap })
}

fn min_gap(rhs: &[f64], lhs: &[f64]) -> f64 {
    rhs.iter().zip(lhs).map(|(r, l)| r - l).fold(f64::INFINITY, f64::min)
}

/// lhs ≪ rhs with componentwise gap above tol·(1 + |rhs|).
fn strictly_below(lhs: &[f64], rhs: &[f64], tol: f64) -> bool {
    lhs.iter().zip(rhs).all(|(l, r)| r - l > tol * (1.0 + r.abs()))
}

/// Diagonal Stein certificate D for the compound A^(k).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KDiagCertificate {
    pub k: usize,
    /// C(n, k).
    pub r: usize,
    pub d: PositiveDiagonal,
    pub xi: Vec<f64>,
    pub z: Vec<f64>,
    /// Smallest eigenvalue of D − (A^(k))ᵀ D A^(k).
    pub stein_margin: f64,
    pub compound_spectral_radius: f64,
    /// ε_k of A; −1 means the construction ran on −A^(k).
    pub signature: i8,
    pub sign_flipped: bool,
    pub xi_gap: f64,
    pub z_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum KDiagOutcome {
    Certified(KDiagCertificate),
    /// A^(k) has entries of both strict signs.
    NotSignRegular { positive: MinorWitness, negative: MinorWitness },
    CompoundNotSchur { spectral_radius: f64 },
}

impl KDiagOutcome {
    pub fn certificate(&self) -> Option<&KDiagCertificate> {
        match self {
            KDiagOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// Certifies DT k-diagonal stability with x = y = 1.
pub fn certify_k_diag_stability(a: &Mat, k: usize, tol: f64) -> Result<KDiagOutcome> {
    let r = compound_dim(a, k)?;
    let ones = vec![1.0; r];
    certify_k_diag_stability_with(a, k, tol, &ones, &ones)
}

/// Certifies DT k-diagonal stability: A must be SR_k and A^(k) Schur.
///
/// ε_k = −1 is handled by running the construction on −A^(k); the Stein form
/// is unchanged because (−M)ᵀD(−M) = MᵀDM.
pub fn certify_k_diag_stability_with(a: &Mat, k: usize, tol: f64, x: &[f64], y: &[f64]) -> Result<KDiagOutcome> {
    let r = compound_dim(a, k)?;
    if k >= a.n_rows() {
        return Err(Error::domain(format!("k-diagonal stability needs k in [1, {}], got {k}", a.n_rows() - 1)));
    }
    if x.len() != r || y.len() != r {
        return Err(Error::shape(format!("weight vectors must have length C(n,k) = {r}")));
    }
    let class = classify_sign_regularity(a, k, tol)?;
    let mut m = mult_compound(a, k)?;
    let signature = match class.verdict {
        Verdict::None => {
            let (positive, negative) = class.witness_conflict.expect("conflict witness for NONE verdict");
            return Ok(KDiagOutcome::NotSignRegular { positive, negative });
        }
        Verdict::AllZero => 1,
        _ => class.signature.expect("signature for SR verdict"),
    };
    if signature < 0 {
        m = m.neg();
    }
    // minors inside the zero band are zero for the construction
    for v in m.as_mut_slice() {
        if *v < 0.0 && v.abs() <= class.zero_band {
            *v = 0.0;
        }
    }
    let schur = is_schur(&m, tol)?;
    if !schur.schur {
        return Ok(KDiagOutcome::CompoundNotSchur { spectral_radius: schur.spectral_radius });
    }
    let dlf = construct_dlf_nonneg(&m, x, y, tol)?;
    let stein = stein_holds(&mult_compound(a, k)?, &dlf.d, 0.0)?;
    Ok(KDiagOutcome::Certified(KDiagCertificate {
        k,
        r,
        d: dlf.d,
        xi: dlf.xi,
        z: dlf.z,
        stein_margin: stein.margin,
        compound_spectral_radius: schur.spectral_radius,
        signature,
        sign_flipped: signature < 0,
        xi_gap: dlf.xi_gap,
        z_gap: dlf.z_gap,
    }))
}

fn compound_dim(a: &Mat, k: usize) -> Result<usize> {
    a.require_square("k-diagonal stability")?;
    let n = a.n_rows();
    if k == 0 || k > n {
        return Err(Error::domain(format!("order k = {k} outside [1, {n}]")));
    }
    Ok(binomial(n, k).expect("small binomial") as usize)
}

/// P^(k) for positive diagonal P: entries ∏_{s∈κ} p_s in lexicographic order.
pub fn dlf_compound(p: &PositiveDiagonal, k: usize) -> Result<PositiveDiagonal> {
    let sets = lex_index_sets(k, p.dim())?;
    let e = p.entries();
    PositiveDiagonal::new(sets.iter().map(|s| s.indices().iter().map(|&i| e[i - 1]).product()).collect())
}

/// Solves P^(n−1) = D for positive diagonal P, in the log domain.
///
/// p_s = ∏_{q∈κ_s} d_q^{1/(n−1)} / d_{j(s)}^{(n−2)/(n−1)}, with j(s) the index missing from κ_s.
pub fn solve_top_compound_diagonal(d: &PositiveDiagonal) -> Result<PositiveDiagonal> {
    let n = d.dim();
    if n < 2 {
        return Err(Error::domain("P^(n-1) = D needs n >= 2"));
    }
    let logs: Vec<f64> = d.entries().iter().map(|v| v.ln()).collect();
    let sets = lex_index_sets(n - 1, n)?;
    let inv = 1.0 / (n as f64 - 1.0);
    let p: Vec<f64> = sets
        .iter()
        .map(|kappa| {
            let missing = kappa.complement()[0];
            let kept: f64 = kappa.indices().iter().map(|&q| logs[q - 1]).sum();
            (inv * kept - (n as f64 - 2.0) * inv * logs[missing - 1]).exp()
        })
        .collect();
    let p = PositiveDiagonal::new(p)?;
    let back = dlf_compound(&p, n - 1)?;
    let worst = back
        .entries()
        .iter()
        .zip(d.entries())
        .map(|(b, t)| ((b - t) / t).abs())
        .fold(0.0, f64::max);
    if worst > 1e-10 {
        return Err(Error::numeric(format!("P^(n-1) reproduces D only to relative error {worst:e}")));
    }
    Ok(p)
}

/// B = −(A + I)(A − I)⁻¹.
pub fn cayley(a: &Mat, tol: f64) -> Result<Mat> {
    a.require_square("Cayley transform")?;
    let n = a.n_rows();
    let eye = Mat::identity(n);
    let a_minus = a.sub(&eye)?;
    let det = crate::matcore::determinant(&a_minus)?;
    if det.abs() <= tol * a_minus.max_abs().max(1.0).powi(n as i32) {
        return Err(Error::domain("A − I is singular (1 is an eigenvalue of A)"));
    }
    a.add(&eye)?.matmul(&inverse(&a_minus)?).map(|m| m.neg())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScreenTransform {
    /// Principal minors of −(A + I)(A − I)⁻¹.
    CayleyDt,
    /// Principal minors of −A.
    NegateCt,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailingMinor {
    pub kappa: LexIndexSet,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NecessaryConditionReport {
    pub passed: bool,
    pub failing_minor: Option<FailingMinor>,
    pub transform_used: ScreenTransform,
}

/// Necessary condition for AᵀDA ≺ D: all principal minors of the Cayley transform exceed tol.
pub fn necessary_dt_diag(a: &Mat, tol: f64) -> Result<NecessaryConditionReport> {
    let b = cayley(a, tol)?;
    principal_minor_screen(&b, tol, ScreenTransform::CayleyDt)
}

/// Necessary condition for DA + AᵀD ≺ 0: all principal minors of −A exceed tol.
pub fn necessary_ct_diag(a: &Mat, tol: f64) -> Result<NecessaryConditionReport> {
    a.require_square("principal minor screen")?;
    principal_minor_screen(&a.neg(), tol, ScreenTransform::NegateCt)
}

/// Scans principal minors by increasing order, lexicographically within an order.
fn principal_minor_screen(b: &Mat, tol: f64, transform: ScreenTransform) -> Result<NecessaryConditionReport> {
    let n = b.n_rows();
    if n > MAX_SCREEN_DIM {
        return Err(Error::Capacity {
            what: format!("principal minors of {n}x{n}"),
            required: (1u128 << n) - 1,
            limit: (1u128 << MAX_SCREEN_DIM) - 1,
        });
    }
    for k in 1..=n {
        for kappa in lex_index_sets(k, n)? {
            let idx = kappa.zero_based();
            let value = minor_zero_based(b, &idx, &idx);
            if !(value > tol) {
                return Ok(NecessaryConditionReport {
                    passed: false,
                    failing_minor: Some(FailingMinor { kappa, value }),
                    transform_used: transform,
                });
            }
        }
    }
    Ok(NecessaryConditionReport { passed: true, failing_minor: None, transform_used: transform })
}
