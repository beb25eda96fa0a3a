//! Self-contained regressions over the bundled reference matrices.

use kposi_core::compound::mult_compound;
use kposi_core::matcore::spectral_report;
use kposi_core::nonlinear::{lyapunov_decrement_report, wedge_trajectory};
use kposi_core::reference;
use kposi_core::signreg::{classify_sign_regularity, Verdict};
use kposi_core::stability::{
    certify_k_diag_stability, is_schur, necessary_ct_diag, necessary_dt_diag, solve_top_compound_diagonal,
    stein_holds,
};
use kposi_core::{PositiveDiagonal, Result};

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn dt_screen(tol: f64) -> Result<(bool, String)> {
    let a = reference::dt_counterexample();
    let schur = is_schur(&a, tol)?.schur;
    let class = classify_sign_regularity(&a, 2, tol)?;
    let rep = necessary_dt_diag(&a, tol)?;
    let Some(fm) = rep.failing_minor else {
        return Ok((false, "screen passed".into()));
    };
    let pass = schur
        && class.verdict == Verdict::Ssr
        && class.signature == Some(1)
        && fm.kappa.indices() == [1, 3]
        && (fm.value + 8.0 / 461.0).abs() <= 1e-9;
    Ok((pass, format!("Schur {schur}, SSR_2 {:?}, failing minor {} = {:.12}", class.verdict, fm.kappa, fm.value)))
}

fn ct_screen(tol: f64) -> Result<(bool, String)> {
    let rep = necessary_ct_diag(&reference::ct_counterexample(), tol)?;
    let Some(fm) = rep.failing_minor else {
        return Ok((false, "screen passed".into()));
    };
    let pass = fm.kappa.indices() == [2, 3] && (fm.value + 150.0).abs() <= 1e-9;
    Ok((pass, format!("failing minor {} = {}", fm.kappa, fm.value)))
}

fn certified(tol: f64) -> Result<(bool, String)> {
    let a = reference::certified_matrix();
    let d = PositiveDiagonal::new(reference::certified_compound_dlf().to_vec())?;
    let compound_stein = stein_holds(&mult_compound(&a, 2)?, &d, 0.0)?;
    let p = solve_top_compound_diagonal(&d)?;
    let p_err = p.entries().iter().zip(reference::certified_dlf()).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    let stein = stein_holds(&a, &p, 0.0)?;
    let ours = certify_k_diag_stability(&a, 2, tol)?;
    let pass = is_schur(&a, tol)?.schur
        && classify_sign_regularity(&a, 2, tol)?.is_strict()
        && compound_stein.holds
        && p_err <= 1e-12
        && stein.holds
        && ours.certificate().is_some();
    Ok((
        pass,
        format!(
            "compound margin {:.4}, |P - P_ref| {p_err:.1e}, margin for P {:.4}, own certificate {}",
            compound_stein.margin,
            stein.margin,
            ours.certificate().is_some()
        ),
    ))
}

fn squared_system(tol: f64) -> Result<(bool, String)> {
    let sys = reference::squared_system();
    let rho = spectral_report(sys.matrix())?.spectral_radius;
    let outcome = certify_k_diag_stability(sys.matrix(), 2, tol)?;
    let Some(cert) = outcome.certificate() else {
        return Ok((false, "second compound not certified".into()));
    };
    let traj = wedge_trajectory(&sys, 2, &reference::squared_system_initials(), &cert.d, 5)?;
    let rep = lyapunov_decrement_report(&traj, 0.0);
    let decreasing = traj.v_series.windows(2).skip(1).all(|w| w[1] - w[0] < -1e-12);
    let pass = (rho - 2.0).abs() <= 1e-9 && decreasing && rep.monotone;
    Ok((pass, format!("rho(A) = {rho:.12}, rho(A^(2)) = {:.4}, V(5) = {:.3e}", cert.compound_spectral_radius, traj.v_series[5])))
}

pub fn run_all(tol: f64) -> Vec<Check> {
    let cases: [(&'static str, fn(f64) -> Result<(bool, String)>); 4] = [
        ("Schur SSR_2 matrix fails the DT diagonal-stability screen", dt_screen),
        ("strongly 2-positive CT matrix fails the CT screen", ct_screen),
        ("mixed-sign SSR_2 matrix: compound DLF and recovered P", certified),
        ("unstable cyclic matrix with s^2 feedback: V decreases", squared_system),
    ];
    cases
        .into_iter()
        .map(|(name, f)| match f(tol) {
            Ok((pass, detail)) => Check { name, pass, detail },
            Err(e) => Check { name, pass: false, detail: format!("error: {e}") },
        })
        .collect()
}
