//! wasm-bindgen bindings for the static demo page in `www/`.
//!
//! Every export returns a JSON string, `{"error": ...}` on failure, so the
//! same functions are tested natively.

use kposi_core::compound::mult_compound;
use kposi_core::cyclic::{analyze_cyclic, CyclicSpec};
use kposi_core::matcore::spectral_report;
use kposi_core::nonlinear::{lyapunov_decrement_report, wedge_trajectory};
use kposi_core::reference;
use kposi_core::signreg::classify_sign_regularity;
use kposi_core::stability::{certify_k_diag_stability, is_schur, necessary_dt_diag};
use kposi_core::{Mat, DEFAULT_ZERO_TOL};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("not a number: {s:?}")))
        .collect()
}

/// Rows on separate lines (or split by `;`), entries by spaces or commas.
fn parse_matrix(text: &str, scale: &str) -> Result<Mat, String> {
    let rows: Vec<Vec<f64>> = text
        .split(['\n', ';'])
        .filter(|l| !l.trim().is_empty())
        .map(parse_numbers)
        .collect::<Result<_, _>>()?;
    let (p, q) = match scale.trim() {
        "" => (1.0, 1.0),
        s => {
            let (p, q) = s.split_once('/').unwrap_or((s, "1"));
            let p: f64 = p.trim().parse().map_err(|_| format!("bad scale {s:?}"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("bad scale {s:?}"))?;
            if q == 0.0 {
                return Err("scale has a zero denominator".into());
            }
            (p, q)
        }
    };
    let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v * p / q).collect()).collect();
    Mat::from_rows(&scaled).map_err(|e| e.to_string())
}

/// Compound, sign class, Schur test, certificate and DT screen for one k.
#[wasm_bindgen]
pub fn analyze_matrix(text: &str, scale: &str, k: usize) -> String {
    respond((|| {
        let a = parse_matrix(text, scale)?;
        let e = |e: kposi_core::Error| e.to_string();
        let compound = mult_compound(&a, k).map_err(e)?;
        let class = classify_sign_regularity(&a, k, DEFAULT_ZERO_TOL).map_err(e)?;
        let schur = is_schur(&a, DEFAULT_ZERO_TOL).map_err(e)?;
        let certificate = if k < a.n_rows() {
            Some(certify_k_diag_stability(&a, k, DEFAULT_ZERO_TOL).map_err(e)?)
        } else {
            None
        };
        let screen = necessary_dt_diag(&a, DEFAULT_ZERO_TOL).ok();
        Ok(json!({
            "compound": compound.to_rows(),
            "sign_class": class,
            "schur": schur,
            "certificate": certificate,
            "dt_screen": screen,
        }))
    })())
}

/// Builds the cyclic matrix and reports ρ(A^(ℓ)) and ℓ-diagonal stability.
#[wasm_bindgen]
pub fn explore_cyclic(alphas: &str, betas: &str, ell: u32) -> String {
    respond((|| {
        let spec = CyclicSpec { alphas: parse_numbers(alphas)?, betas: parse_numbers(betas)?, ell };
        let report = analyze_cyclic(&spec, DEFAULT_ZERO_TOL).map_err(|e| e.to_string())?;
        let rho = spectral_report(&report.matrix).map_err(|e| e.to_string())?.spectral_radius;
        Ok(json!({ "report": report, "spectral_radius": rho }))
    })())
}

/// V(y(j)) for the squared cyclic system with a^1 = (1/2)·1 and a chosen a^2.
#[wasm_bindgen]
pub fn squared_system_lyapunov(b1: f64, b2: f64, b3: f64, steps: usize) -> String {
    respond((|| {
        let sys = reference::squared_system();
        let outcome = certify_k_diag_stability(sys.matrix(), 2, DEFAULT_ZERO_TOL).map_err(|e| e.to_string())?;
        let cert = outcome.certificate().ok_or("second compound not certified")?;
        let initials = [vec![0.5; 3], vec![b1, b2, b3]];
        let traj = wedge_trajectory(&sys, 2, &initials, &cert.d, steps.min(200)).map_err(|e| e.to_string())?;
        let dec = lyapunov_decrement_report(&traj, 0.0);
        Ok(json!({
            "v": traj.v_series,
            "d": cert.d,
            "monotone": dec.monotone,
            "strictly_decreasing": dec.strictly_decreasing,
            "states": traj.states[1],
        }))
    })())
}
