#![allow(dead_code)]

use kposi_core::matcore::spectral_report;
use kposi_core::Mat;
use rand::Rng;

/// s^+ by trying every ±1 filling of the zero entries.
pub fn brute_s_plus(x: &[f64]) -> usize {
    let zeros: Vec<usize> = (0..x.len()).filter(|&i| x[i] == 0.0).collect();
    assert!(zeros.len() <= 20, "enumerator limited to 2^20 fillings");
    let mut best = 0;
    for mask in 0u32..(1 << zeros.len()) {
        let mut filled = x.to_vec();
        for (b, &i) in zeros.iter().enumerate() {
            filled[i] = if mask >> b & 1 == 1 { 1.0 } else { -1.0 };
        }
        let changes = filled.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
        best = best.max(changes);
    }
    best
}

/// s^− by deleting zeros and counting sign changes.
pub fn brute_s_minus(x: &[f64]) -> usize {
    let nz: Vec<f64> = x.iter().copied().filter(|v| *v != 0.0).collect();
    nz.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
}

pub fn uniform_mat(rng: &mut impl Rng, n: usize, m: usize, half_width: f64) -> Mat {
    let data = (0..n * m).map(|_| rng.random_range(-half_width..half_width)).collect();
    Mat::new(n, m, data).unwrap()
}

pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

pub fn spectral_norm(a: &Mat) -> f64 {
    let gram = a.transpose().matmul(a).unwrap();
    spectral_report(&gram).unwrap().spectral_radius.sqrt()
}

pub fn inf_norm(a: &Mat) -> f64 {
    (0..a.n_rows()).map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Minor-by-minor Laplace expansion along the first row, for small orders.
pub fn laplace_det(a: &Mat) -> f64 {
    let n = a.n_rows();
    if n == 1 {
        return a[(0, 0)];
    }
    let mut total = 0.0;
    for j in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let rows: Vec<usize> = (1..n).collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * a[(0, j)] * laplace_det(&a.select(&rows, &cols));
    }
    total
}
