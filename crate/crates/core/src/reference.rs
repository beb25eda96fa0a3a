//! Worked matrices used throughout the regression suites, the CLI and the demo.

use crate::cyclic::CyclicSpec;
use crate::matcore::Mat;
use crate::nonlinear::{Interval, NonlinearSystem, ScalarMap};

fn scaled(rows: [[f64; 3]; 3], denom: f64) -> Mat {
    // divide rather than multiply by 1/denom so each entry is the correctly rounded quotient
    let data = rows.iter().flatten().map(|v| v / denom).collect();
    Mat::new(3, 3, data).expect("finite 3x3")
}

/// (1/7)[[−4,−2,1],[1,−3,−5],[7,1,−2]]: Schur and SSR_2, yet without a diagonal Lyapunov function.
pub fn dt_counterexample() -> Mat {
    scaled([[-4.0, -2.0, 1.0], [1.0, -3.0, -5.0], [7.0, 1.0, -2.0]], 7.0)
}

/// Hurwitz, strongly 2-positive continuous-time matrix with a negative principal minor of −A.
pub fn ct_counterexample() -> Mat {
    Mat::from_rows(&[[-21.0, 11.0, -14.0], [18.0, -19.0, 37.0], [-49.0, 21.0, -33.0]]).expect("finite")
}

/// (1/8)[[−4,−2,0],[0,−3,−5],[7,0,−2]]: mixed-sign but SSR_2 and Schur.
pub fn certified_matrix() -> Mat {
    scaled([[-4.0, -2.0, 0.0], [0.0, -3.0, -5.0], [7.0, 0.0, -2.0]], 8.0)
}

/// Known Stein certificate for the second compound of [`certified_matrix`].
pub fn certified_compound_dlf() -> [f64; 3] {
    [23.0 / 21.0, 13.0 / 8.0, 7.0 / 13.0]
}

/// Diagonal P with P^(2) equal to [`certified_compound_dlf`].
pub fn certified_dlf() -> [f64; 3] {
    [(3887.0f64 / 1176.0).sqrt(), (184.0f64 / 507.0).sqrt(), (147.0f64 / 184.0).sqrt()]
}

/// Cyclic data of the nonlinear example: ℓ = 2, not Schur (ρ = 2) but A^(2) is.
pub fn cyclic_reference_spec() -> CyclicSpec {
    CyclicSpec { alphas: vec![0.1, 0.05, 2.01], betas: vec![1.9, 1.95, 0.01], ell: 2 }
}

pub fn cyclic_reference_matrix() -> Mat {
    Mat::from_rows(&[[0.1, 1.9, 0.0], [0.0, 0.05, 1.95], [-0.01, 0.0, 2.01]]).expect("finite")
}

/// x(j+1) = A φ(x(j)) with φ_i(s) = s² on S = [−1/2, 1/2].
pub fn squared_system() -> NonlinearSystem {
    NonlinearSystem::new(cyclic_reference_matrix(), vec![ScalarMap::Power { p: 2 }; 3], Interval::new(-0.5, 0.5).expect("valid"))
        .expect("valid system")
}

/// Initial conditions a^1 = (1/2)·1_3 and a^2 = [−1/2, 1/2, 0.4].
pub fn squared_system_initials() -> Vec<Vec<f64>> {
    vec![vec![0.5, 0.5, 0.5], vec![-0.5, 0.5, 0.4]]
}
