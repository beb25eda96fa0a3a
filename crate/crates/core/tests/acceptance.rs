//! Acceptance suite. Each criterion prints one PASS/FAIL line; any failure
//! makes the binary exit nonzero.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use kposi_core::compound::{compound, mult_compound};
use kposi_core::cyclic::{build_cyclic, CyclicSpec};
use kposi_core::matcore::{inverse, is_positive_definite, lex_index_sets, spectral_report};
use kposi_core::nonlinear::{
    check_k_content_preserving, simulate, wedge_trajectory, Interval, NonlinearSystem, ScalarMap,
};
use kposi_core::reference;
use kposi_core::signreg::{classify_sign_regularity, sign_variations, Verdict};
use kposi_core::stability::{
    certify_k_diag_stability, certify_k_diag_stability_with, dlf_compound, is_schur, necessary_ct_diag,
    necessary_dt_diag, solve_top_compound_diagonal, stein_holds,
};
use kposi_core::{Mat, PositiveDiagonal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn c1_dt_counterexample() -> Outcome {
    let a = reference::dt_counterexample();
    ensure!(is_schur(&a, 1e-9).unwrap().schur, "matrix not Schur");
    let class = classify_sign_regularity(&a, 2, 1e-9).unwrap();
    ensure!(class.verdict == Verdict::Ssr && class.signature == Some(1), "k=2 class {:?} {:?}", class.verdict, class.signature);
    let rep = necessary_dt_diag(&a, 1e-9).unwrap();
    ensure!(!rep.passed, "necessary screen passed");
    let fm = rep.failing_minor.ok_or("no witness")?;
    ensure!(fm.kappa.indices() == [1, 3], "witness {}", fm.kappa);
    ensure!((fm.value + 8.0 / 461.0).abs() <= 1e-9, "minor {}", fm.value);
    Ok(format!("witness {} = {:.12}", fm.kappa, fm.value))
}

fn c2_ct() -> Outcome {
    let rep = necessary_ct_diag(&reference::ct_counterexample(), 1e-9).unwrap();
    ensure!(!rep.passed, "CT screen passed");
    let fm = rep.failing_minor.ok_or("no witness")?;
    ensure!(fm.kappa.indices() == [2, 3], "witness {}", fm.kappa);
    ensure!((fm.value + 150.0).abs() <= 1e-9, "minor {}", fm.value);
    Ok(format!("witness {} = {}", fm.kappa, fm.value))
}

fn c3_certified_matrix() -> Outcome {
    let a = reference::certified_matrix();
    ensure!(is_schur(&a, 1e-9).unwrap().schur, "(a) not Schur");
    let class = classify_sign_regularity(&a, 2, 1e-9).unwrap();
    ensure!(class.verdict == Verdict::Ssr && class.signature == Some(1), "(b) {:?} {:?}", class.verdict, class.signature);
    let d = PositiveDiagonal::new(reference::certified_compound_dlf().to_vec()).unwrap();
    let s = stein_holds(&mult_compound(&a, 2).unwrap(), &d, 0.0).unwrap();
    ensure!(s.holds && s.margin > 0.0, "(c) margin {}", s.margin);
    let p = solve_top_compound_diagonal(&d).unwrap();
    for (got, want) in p.entries().iter().zip(reference::certified_dlf()) {
        ensure!((got - want).abs() <= 1e-12, "(d) p = {:?}", p.entries());
    }
    let sp = stein_holds(&a, &p, 0.0).unwrap();
    ensure!(sp.holds, "(e) margin {}", sp.margin);
    Ok(format!("compound margin {:.4}, recovered margin {:.4}", s.margin, sp.margin))
}

fn c4_squared_system() -> Outcome {
    let a = reference::cyclic_reference_matrix();
    let rho = spectral_report(&a).unwrap().spectral_radius;
    ensure!((rho - 2.0).abs() <= 1e-9, "(a) rho {rho}");
    let c = mult_compound(&a, 2).unwrap();
    ensure!(c.as_slice().iter().all(|v| *v >= -1e-12), "(b) negative compound entry");
    ensure!(is_schur(&c, 1e-9).unwrap().schur, "(b) compound not Schur");
    let ones = vec![1.0; 3];
    let cert = certify_k_diag_stability_with(&a, 2, 1e-9, &ones, &ones).unwrap();
    let cert = cert.certificate().ok_or_else(|| format!("(c) {cert:?}"))?;

    let sys = reference::squared_system();
    let initials = reference::squared_system_initials();
    let traj = wedge_trajectory(&sys, 2, &initials, &cert.d, 5).unwrap();
    ensure!(traj.v_series.len() == 6, "(d) truncated at {:?}", traj.truncated_at);
    for j in 1..=5 {
        let diff = traj.v_series[j] - traj.v_series[j - 1];
        ensure!(diff < -1e-12, "(d) V({j}) - V({}) = {diff:e}", j - 1);
    }
    ensure!(traj.v_series[5] > 0.0, "(d) V(5) not positive");
    for x0 in &initials {
        let sim = simulate(&sys, x0, 20).unwrap();
        ensure!(sim.exit.is_none() && sim.states.len() == 21, "(e) exit {:?}", sim.exit);
        ensure!(sim.states.iter().flatten().all(|v| v.abs() <= 0.5), "(e) left the box");
    }
    Ok(format!("rho(A) = {rho:.12}, V(5) = {:.3e}", traj.v_series[5]))
}

fn c5_sign_variations() -> Outcome {
    let sv = sign_variations(&[1.3, 0.0, 0.0, -std::f64::consts::PI]);
    ensure!(sv.s_minus == 1 && sv.s_plus == 3, "got {sv:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..10_000 {
        let n = rng.random_range(1..=10);
        let x: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.3) { 0.0 } else { rng.random_range(-1.0..1.0) })
            .collect();
        let sv = sign_variations(&x);
        ensure!(sv.s_plus == common::brute_s_plus(&x), "case {case}: {x:?} dp {} brute {}", sv.s_plus, common::brute_s_plus(&x));
        ensure!(sv.s_minus == common::brute_s_minus(&x), "case {case}: s_minus mismatch on {x:?}");
    }
    Ok("10000 vectors agree".into())
}

fn products_of_eigenvalues(eigs: &[(f64, f64)], k: usize) -> Vec<(f64, f64)> {
    lex_index_sets(k, eigs.len())
        .unwrap()
        .iter()
        .map(|kappa| {
            kappa.zero_based().iter().fold((1.0, 0.0), |(re, im), &i| {
                let (a, b) = eigs[i];
                (re * a - im * b, re * b + im * a)
            })
        })
        .collect()
}

fn c6_compound_properties() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = 0usize;
    let mut inverse_checks = 0usize;
    for pair in 0..500 {
        let n = 2 + pair % 5;
        let a = common::uniform_mat(&mut rng, n, n, 1.0);
        let b = common::uniform_mat(&mut rng, n, n, 1.0);

        let inv_ok = common::inf_norm(&a) * inverse(&a).map(|i| common::inf_norm(&i)).unwrap_or(f64::INFINITY) <= 100.0;
        let eigs: Vec<(f64, f64)> = spectral_report(&a).unwrap().eigenvalues.iter().map(|e| (e.re, e.im)).collect();
        let rho = eigs.iter().map(|(r, i)| r.hypot(*i)).fold(0.0, f64::max);
        let schur = a.scaled(rng.random_range(0.1..0.95) / rho);
        let spd = a.transpose().matmul(&a).unwrap().add(&Mat::identity(n).scaled(0.1)).unwrap();
        let diag = Mat::from_diagonal(&a.diagonal());

        for k in 1..=n {
            let ck = |m: &Mat| mult_compound(m, k).unwrap();
            let (ak, bk) = (ck(&a), ck(&b));

            let prod = ak.matmul(&bk).unwrap();
            let err = ck(&a.matmul(&b).unwrap()).max_abs_diff(&prod).unwrap();
            ensure!(err <= 1e-8 * prod.max_abs().max(1.0), "pair {pair} k={k}: multiplicativity {err:e}");

            let err = ck(&a.transpose()).max_abs_diff(&ak.transpose()).unwrap();
            ensure!(err <= 1e-12, "pair {pair} k={k}: transpose {err:e}");

            if inv_ok {
                let id = ck(&inverse(&a).unwrap()).matmul(&ak).unwrap();
                let err = id.max_abs_diff(&Mat::identity(id.n_rows())).unwrap();
                ensure!(err <= 1e-7, "pair {pair} k={k}: inverse {err:e}");
                inverse_checks += 1;
            }

            let dk = ck(&diag);
            ensure!(dk.is_diagonal(), "pair {pair} k={k}: diagonal compound not diagonal");
            for (kappa, got) in lex_index_sets(k, n).unwrap().iter().zip(dk.diagonal()) {
                let want: f64 = kappa.zero_based().iter().map(|&i| a[(i, i)]).product();
                ensure!((got - want).abs() <= 1e-14 * want.abs().max(1.0), "pair {pair} k={k}: diagonal entry");
            }

            if n <= 5 {
                let ceigs = spectral_report(&ak).unwrap().eigenvalues;
                for (re, im) in products_of_eigenvalues(&eigs, k) {
                    let nearest = ceigs.iter().map(|e| (e.re - re).hypot(e.im - im)).fold(f64::INFINITY, f64::min);
                    ensure!(nearest <= 1e-6, "pair {pair} k={k}: eigen product ({re}, {im}) off by {nearest:e}");
                }
            }

            let r = spectral_report(&ck(&schur)).unwrap().spectral_radius;
            ensure!(r < 1.0, "pair {pair} k={k}: compound of Schur has rho {r}");

            let pd = is_positive_definite(&ck(&spd), 1e-10).unwrap();
            ensure!(pd.positive_definite, "pair {pair} k={k}: compound of SPD margin {}", pd.margin);
            checks += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs <= 30.0, "runtime {secs:.1}s");
    Ok(format!("{checks} (pair, k) cases ({inverse_checks} with kappa(A) <= 100 for the inverse law) in {secs:.2}s"))
}

fn c7_compound_dlf() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = f64::INFINITY;
    for case in 0..100 {
        let n = 2 + case % 6;
        let p: Vec<f64> = (0..n).map(|_| common::log_uniform(&mut rng, 0.5, 2.0)).collect();
        let g = common::uniform_mat(&mut rng, n, n, 1.0);
        let g = g.scaled(rng.random_range(0.2..0.95) / common::spectral_norm(&g));
        let ph: Vec<f64> = p.iter().map(|v| v.sqrt()).collect();
        let inv_ph: Vec<f64> = ph.iter().map(|v| 1.0 / v).collect();
        // A = P^{-1/2} G P^{1/2}, so |P^{1/2} A P^{-1/2}| = |G| < 1
        let a = Mat::from_diagonal(&inv_ph).matmul(&g).unwrap().matmul(&Mat::from_diagonal(&ph)).unwrap();
        let p = PositiveDiagonal::new(p).unwrap();
        for k in 1..n {
            let s = stein_holds(&mult_compound(&a, k).unwrap(), &dlf_compound(&p, k).unwrap(), 1e-10).unwrap();
            ensure!(s.holds && s.margin > 1e-10, "case {case} k={k}: margin {:e}", s.margin);
            worst = worst.min(s.margin);
        }
    }
    Ok(format!("smallest margin {worst:.3e}"))
}

fn c8_top_compound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for case in 0..500 {
        let n = rng.random_range(2..=8);
        let d: Vec<f64> = (0..n).map(|_| common::log_uniform(&mut rng, 1e-6, 1e6)).collect();
        let d = PositiveDiagonal::new(d).unwrap();
        let p = solve_top_compound_diagonal(&d).unwrap();
        let back = dlf_compound(&p, n - 1).unwrap();
        for (got, want) in back.entries().iter().zip(d.entries()) {
            let rel = (got - want).abs() / want;
            ensure!(rel <= 1e-10, "case {case}: relative error {rel:e}");
            worst = worst.max(rel);
        }
    }
    Ok(format!("worst relative error {worst:.2e}"))
}

fn c9_cyclic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut certified = 0usize;
    let mut specs = 0usize;
    for n in 2..=7 {
        for ell in 1..n {
            for _ in 0..200 {
                let draw = |rng: &mut ChaCha8Rng, hi: f64| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0..hi) };
                let alphas = (0..n).map(|_| draw(&mut rng, 1.0)).collect();
                let betas = (0..n).map(|_| draw(&mut rng, 1.5)).collect();
                let spec = CyclicSpec { alphas, betas, ell: ell as u32 };
                let a = build_cyclic(&spec).unwrap();
                specs += 1;
                if ell % 2 == 0 {
                    let minors = compound(&a, ell).unwrap();
                    let scale = minors.max_abs().max(1.0);
                    let low = minors.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
                    ensure!(low >= -1e-10 * scale, "n={n} ell={ell}: minor {low:e} in {spec:?}");
                } else {
                    ensure!(a.as_slice().iter().all(|v| *v >= 0.0), "n={n} ell={ell}: negative entry");
                }
                let rho = spectral_report(&mult_compound(&a, ell).unwrap()).unwrap().spectral_radius;
                if rho < 1.0 {
                    let out = certify_k_diag_stability(&a, ell, 1e-9)
                        .map_err(|e| format!("n={n} ell={ell} rho={rho}: {e} in {spec:?}"))?;
                    ensure!(out.certificate().is_some(), "n={n} ell={ell} rho={rho}: {out:?}");
                    certified += 1;
                }
            }
        }
    }
    Ok(format!("{specs} specs, {certified} certified"))
}

fn c10_content() -> Outcome {
    let sys = reference::squared_system();
    let r = check_k_content_preserving(&sys, 2, 5, 0).unwrap();
    ensure!(r.pass, "POWER(2) failed: {:?}", r.counterexample);
    let mut checked = r.tuples_checked;
    let unit = Interval::new(-1.0, 1.0).unwrap();
    for n in [3, 4] {
        let a = reference::cyclic_reference_matrix();
        let a = if n == 3 { a } else { Mat::identity(4).scaled(0.5) };
        let id = NonlinearSystem::new(a, vec![ScalarMap::Identity; n], unit).unwrap();
        for k in 1..=n {
            let r = check_k_content_preserving(&id, k, 5, 0).unwrap();
            ensure!(r.pass, "IDENTITY n={n} k={k}: {:?}", r.counterexample);
            checked += r.tuples_checked;
        }
    }
    let bad = NonlinearSystem::new_unchecked(reference::cyclic_reference_matrix(), vec![ScalarMap::Linear { c: 2.0 }; 3], unit).unwrap();
    let r = check_k_content_preserving(&bad, 1, 5, 0).unwrap();
    ensure!(!r.pass, "LINEAR(2) passed");
    let cx = r.counterexample.ok_or("no counterexample")?;
    ensure!(cx.q_i.abs() > cx.p_i.abs(), "counterexample does not expand: {cx:?}");
    Ok(format!("{checked} tuples; LINEAR(2) fails at {:?} coord {}", cx.tuple, cx.index))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 DT screen counterexample", c1_dt_counterexample),
        ("2 CT screen counterexample", c2_ct),
        ("3 certified 3x3 end-to-end", c3_certified_matrix),
        ("4 squared cyclic system end-to-end", c4_squared_system),
        ("5 sign variations", c5_sign_variations),
        ("6 compound properties", c6_compound_properties),
        ("7 compound DLF property", c7_compound_dlf),
        ("8 top compound round trip", c8_top_compound),
        ("9 cyclic property", c9_cyclic),
        ("10 k-content checks", c10_content),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} [{:.2}s]: {detail}", start.elapsed().as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name} [{:.2}s]: {detail}", start.elapsed().as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
