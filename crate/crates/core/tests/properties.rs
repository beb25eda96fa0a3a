mod common;

use kposi_core::compound::{compound, k_content, mult_compound, wedge};
use kposi_core::cyclic::{analyze_cyclic, build_cyclic, CyclicSpec};
use kposi_core::matcore::{determinant, is_positive_definite, lex_index_sets, minor, spectral_report};
use kposi_core::signreg::{classify_sign_regularity, cone_membership, sign_variations, Verdict};
use kposi_core::stability::{
    certify_k_diag_stability, construct_dlf_nonneg, dlf_compound, is_schur, necessary_dt_diag,
    solve_top_compound_diagonal, stein_holds,
};
use kposi_core::{LexIndexSet, Mat, PositiveDiagonal};
use proptest::prelude::*;

fn square(max_n: usize) -> impl Strategy<Value = Mat> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |d| Mat::new(n, n, d).unwrap())
    })
}

fn pair(max_n: usize) -> impl Strategy<Value = (Mat, Mat)> {
    (2..=max_n).prop_flat_map(|n| {
        let m = move || prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |d| Mat::new(n, n, d).unwrap());
        (m(), m())
    })
}

fn nonneg(max_n: usize) -> impl Strategy<Value = Mat> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0f64..1.0], n * n)
            .prop_map(move |d| Mat::new(n, n, d).unwrap())
    })
}

fn sparse_vec(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 2 => -5.0f64..5.0], 1..=max_n)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compound_multiplicative((a, b) in pair(6)) {
        for k in 1..=a.n_rows() {
            let prod = mult_compound(&a, k).unwrap().matmul(&mult_compound(&b, k).unwrap()).unwrap();
            let err = mult_compound(&a.matmul(&b).unwrap(), k).unwrap().max_abs_diff(&prod).unwrap();
            prop_assert!(err <= 1e-8 * prod.max_abs().max(1.0));
        }
    }

    #[test]
    fn compound_commutes_with_transpose(a in square(6)) {
        for k in 1..=a.n_rows() {
            let err = mult_compound(&a.transpose(), k).unwrap().max_abs_diff(&mult_compound(&a, k).unwrap().transpose()).unwrap();
            prop_assert!(err <= 1e-12);
        }
    }

    #[test]
    fn extreme_compounds(a in square(6)) {
        let n = a.n_rows();
        prop_assert_eq!(mult_compound(&a, 1).unwrap(), a.clone());
        let top = mult_compound(&a, n).unwrap();
        let det = determinant(&a).unwrap();
        prop_assert!((top[(0, 0)] - det).abs() <= 1e-14 * det.abs().max(1.0));
    }

    #[test]
    fn compound_of_diagonal(d in prop::collection::vec(-2.0f64..2.0, 2..=6)) {
        let a = Mat::from_diagonal(&d);
        for k in 1..=d.len() {
            let c = mult_compound(&a, k).unwrap();
            prop_assert!(c.is_diagonal());
            for (kappa, got) in lex_index_sets(k, d.len()).unwrap().iter().zip(c.diagonal()) {
                let want: f64 = kappa.zero_based().iter().map(|&i| d[i]).product();
                prop_assert!((got - want).abs() <= 1e-14 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn compound_preserves_pd(a in square(5)) {
        let n = a.n_rows();
        let spd = a.transpose().matmul(&a).unwrap().add(&Mat::identity(n).scaled(0.1)).unwrap();
        for k in 1..=n {
            prop_assert!(is_positive_definite(&mult_compound(&spd, k).unwrap(), 1e-10).unwrap().positive_definite);
        }
    }

    #[test]
    fn compound_preserves_schur(a in square(5), target in 0.05f64..0.99) {
        let rho = spectral_report(&a).unwrap().spectral_radius;
        prop_assume!(rho > 1e-6);
        let s = a.scaled(target / rho);
        for k in 1..=s.n_rows() {
            prop_assert!(is_schur(&mult_compound(&s, k).unwrap(), 0.0).unwrap().schur);
        }
    }

    #[test]
    fn wedge_is_compound_of_columns(a in square(5)) {
        let n = a.n_rows();
        let cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
        for k in 1..=n {
            let w = wedge(&cols[..k]).unwrap();
            prop_assert_eq!(&w.coords, &compound(&Mat::from_columns(&cols[..k]).unwrap(), k).unwrap().as_slice().to_vec());
        }
        // Gram determinant identity: |∧ v|² = det(VᵀV)
        let v = Mat::from_columns(&cols[..2]).unwrap();
        let gram = determinant(&v.transpose().matmul(&v).unwrap()).unwrap();
        let c = k_content(&cols[..2]).unwrap();
        prop_assert!((c * c - gram).abs() <= 1e-12 * gram.abs().max(1.0));
    }

    #[test]
    fn determinant_is_eigenvalue_product(a in square(8)) {
        let eigs = spectral_report(&a).unwrap().eigenvalues;
        let (re, im) = eigs.iter().fold((1.0, 0.0), |(r, i), e| (r * e.re - i * e.im, r * e.im + i * e.re));
        let det = determinant(&a).unwrap();
        prop_assert!(im.abs() <= 1e-8 * det.abs().max(1e-3));
        prop_assert!((re - det).abs() <= 1e-8 * det.abs().max(1e-3));
    }

    #[test]
    fn determinant_matches_laplace(a in square(5)) {
        let det = determinant(&a).unwrap();
        prop_assert!((det - common::laplace_det(&a)).abs() <= 1e-12);
    }

    #[test]
    fn triangular_determinant(a in square(8)) {
        let n = a.n_rows();
        let mut rows = a.to_rows();
        for (i, row) in rows.iter_mut().enumerate() {
            for v in row.iter_mut().take(i) {
                *v = 0.0;
            }
        }
        let u = Mat::from_rows(&rows).unwrap();
        let want: f64 = u.diagonal().iter().product();
        prop_assert!((determinant(&u).unwrap() - want).abs() <= 1e-10 * want.abs().max(1e-300));
        for k in 1..=n {
            for kappa in lex_index_sets(k, n).unwrap() {
                let want: f64 = kappa.zero_based().iter().map(|&i| u[(i, i)]).product();
                prop_assert!((minor(&u, &kappa, &kappa).unwrap() - want).abs() <= 1e-12 * want.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn pd_agrees_with_leading_minors(a in square(6), shift in -1.0f64..2.0) {
        let n = a.n_rows();
        let s = a.symmetrized().unwrap().add(&Mat::identity(n).scaled(shift)).unwrap();
        let leading: Vec<f64> = (1..=n)
            .map(|k| {
                let kappa = LexIndexSet::new(n, (1..=k).collect()).unwrap();
                minor(&s, &kappa, &kappa).unwrap()
            })
            .collect();
        let pd = is_positive_definite(&s, 0.0).unwrap();
        prop_assume!(pd.margin.abs() > 1e-8);
        prop_assert_eq!(pd.positive_definite, leading.iter().all(|m| *m > 0.0));
    }

    #[test]
    fn variation_bounds_and_scale(x in sparse_vec(12), c in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0]) {
        let sv = sign_variations(&x);
        prop_assert!(sv.s_minus <= sv.s_plus && sv.s_plus <= x.len() - 1);
        let scaled: Vec<f64> = x.iter().map(|v| c * v).collect();
        prop_assert_eq!(sign_variations(&scaled), sv);
        prop_assert_eq!(sv.s_plus, common::brute_s_plus(&x));
        prop_assert_eq!(sv.s_minus, common::brute_s_minus(&x));
        for k in 1..=x.len() {
            let m = cone_membership(&x, k).unwrap();
            prop_assert_eq!(m.in_pk_minus, sv.s_minus < k);
            prop_assert!(!m.in_pk_plus || m.in_pk_minus);
        }
    }

    #[test]
    fn negation_flips_signature_by_parity(a in square(5)) {
        let n = a.n_rows();
        for k in 1..=n {
            let c = classify_sign_regularity(&a, k, 1e-9).unwrap();
            let neg = classify_sign_regularity(&a.neg(), k, 1e-9).unwrap();
            prop_assert_eq!(c.verdict, neg.verdict);
            if let Some(eps) = c.signature {
                let flip = if k % 2 == 0 { 1 } else { -1 };
                prop_assert_eq!(neg.signature, Some(flip * eps));
            }
        }
    }

    #[test]
    fn scaling_keeps_verdict(a in square(5), c in 0.01f64..100.0) {
        for k in 1..=a.n_rows() {
            let base = classify_sign_regularity(&a, k, 1e-9).unwrap();
            let scaled = classify_sign_regularity(&a.scaled(c), k, 1e-9).unwrap();
            prop_assert_eq!(base.signature, scaled.signature);
        }
    }

    #[test]
    fn first_order_class_is_entrywise(a in nonneg(5), flip in 0usize..25) {
        let mut data = a.as_slice().to_vec();
        if flip < data.len() && data[flip] > 0.0 {
            data[flip] = -data[flip];
        }
        let m = Mat::new(a.n_rows(), a.n_cols(), data).unwrap();
        let c = classify_sign_regularity(&m, 1, 1e-9).unwrap();
        let positive = m.as_slice().iter().all(|v| *v > 0.0);
        let nonnegative = m.as_slice().iter().all(|v| *v >= 0.0);
        prop_assert_eq!(c.verdict == Verdict::Ssr && c.signature == Some(1), positive);
        prop_assert_eq!(c.is_sign_regular() && c.signature == Some(1), nonnegative && !m.as_slice().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn nonneg_schur_gets_dlf(a in nonneg(6), target in 0.05f64..0.98) {
        let rho = spectral_report(&a).unwrap().spectral_radius;
        prop_assume!(rho > 1e-6);
        let m = a.scaled(target / rho);
        let n = m.n_rows();
        let dlf = construct_dlf_nonneg(&m, &vec![1.0; n], &vec![1.0; n], 1e-9).unwrap();
        prop_assert!(dlf.xi_gap > 0.0 && dlf.z_gap > 0.0);
        prop_assert!(stein_holds(&m, &dlf.d, 0.0).unwrap().holds);
    }

    #[test]
    fn certificate_chain(a in square(5), target in 0.05f64..0.98, k_pick in 0usize..4) {
        let n = a.n_rows();
        let k = 1 + k_pick % (n - 1);
        let outcome = certify_k_diag_stability(&a, k, 1e-9).unwrap();
        if let Some(cert) = outcome.certificate() {
            let mut m = mult_compound(&a, k).unwrap();
            if cert.sign_flipped {
                m = m.neg();
            }
            let mx = m.mul_vec(&cert.xi).unwrap();
            let mtz = m.transpose().mul_vec(&cert.z).unwrap();
            prop_assert!(mx.iter().zip(&cert.xi).all(|(a, b)| a < b));
            prop_assert!(mtz.iter().zip(&cert.z).all(|(a, b)| a < b));
            prop_assert!(cert.stein_margin > 0.0);
        }
        // a scaled nonnegative copy always certifies at k = 1
        let pos = Mat::new(n, n, a.as_slice().iter().map(|v| v.abs()).collect()).unwrap();
        let rho = spectral_report(&pos).unwrap().spectral_radius;
        let out = certify_k_diag_stability(&pos.scaled(target / rho), 1, 1e-9).unwrap();
        prop_assert!(out.certificate().is_some());
    }

    #[test]
    fn contraction_inherits_compound_dlf(g in square(6), p in prop::collection::vec(0.1f64..10.0, 6), r in 0.1f64..0.95) {
        let n = g.n_rows();
        let p = PositiveDiagonal::new(p[..n].to_vec()).unwrap();
        let g = g.scaled(r / common::spectral_norm(&g));
        let ph: Vec<f64> = p.entries().iter().map(|v| v.sqrt()).collect();
        let ih: Vec<f64> = ph.iter().map(|v| 1.0 / v).collect();
        let a = Mat::from_diagonal(&ih).matmul(&g).unwrap().matmul(&Mat::from_diagonal(&ph)).unwrap();
        for k in 1..n {
            prop_assert!(stein_holds(&mult_compound(&a, k).unwrap(), &dlf_compound(&p, k).unwrap(), 1e-8).unwrap().holds);
        }
    }

    #[test]
    fn top_compound_round_trip(logs in prop::collection::vec(-13.8f64..13.8, 2..=8)) {
        let d = PositiveDiagonal::new(logs.iter().map(|v| v.exp()).collect()).unwrap();
        let p = solve_top_compound_diagonal(&d).unwrap();
        let back = dlf_compound(&p, d.dim() - 1).unwrap();
        for (got, want) in back.entries().iter().zip(d.entries()) {
            prop_assert!(rel(*got, *want) <= 1e-10);
        }
    }

    #[test]
    fn cyclic_minors_have_parity_sign(
        alphas in prop::collection::vec(0.0f64..2.0, 7),
        betas in prop::collection::vec(0.0f64..2.0, 7),
        n in 2usize..=7,
        ell in 1u32..7,
    ) {
        prop_assume!((ell as usize) < n);
        let spec = CyclicSpec { alphas: alphas[..n].to_vec(), betas: betas[..n].to_vec(), ell };
        let a = build_cyclic(&spec).unwrap();
        let minors = compound(&a, ell as usize).unwrap();
        let floor = -1e-10 * minors.max_abs().max(1.0);
        prop_assert!(minors.as_slice().iter().all(|m| *m >= floor));
        let report = analyze_cyclic(&spec, 1e-9).unwrap();
        if report.ell_diag_stable {
            prop_assert!(certify_k_diag_stability(&a, ell as usize, 1e-9).unwrap().certificate().is_some());
        }
    }
}

/// Coarse search over D = diag(1, d2, …); any hit must pass the necessary screen.
#[test]
fn diagonal_search_implies_necessary_screen() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
    let grid: Vec<f64> = (-12..=12).map(|i| 10f64.powf(i as f64 / 6.0)).collect();
    let mut found = 0;
    for _ in 0..300 {
        let n = rng.random_range(2..=3);
        let a = common::uniform_mat(&mut rng, n, n, 1.0).scaled(rng.random_range(0.3..1.2));
        let mut hit = None;
        'search: for &d2 in &grid {
            for &d3 in if n == 3 { &grid[..] } else { &grid[..1] } {
                let d = PositiveDiagonal::new([1.0, d2, d3][..n].to_vec()).unwrap();
                if stein_holds(&a, &d, 1e-12).unwrap().holds {
                    hit = Some(d);
                    break 'search;
                }
            }
        }
        if hit.is_some() {
            found += 1;
            let rep = necessary_dt_diag(&a, 1e-9).unwrap();
            assert!(rep.passed, "diagonally stable {a:?} failed the screen at {:?}", rep.failing_minor);
        }
    }
    assert!(found > 30, "search found only {found} diagonally stable matrices");
}
