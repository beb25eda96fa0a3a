//! Persidskii-type maps x(j+1) = A φ(x(j)) and their wedge trajectories.
//!
//! For initial conditions a^1..a^k the wedge y(j) = ∧_i x(j, a^i) obeys
//! y(j+1) = A^(k) ∧_i φ(x(j, a^i)). When φ never enlarges a wedge coordinate
//! and D certifies (A^(k))ᵀ D A^(k) ≺ D, V(y) = yᵀ D y is nonincreasing.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compound::{mult_compound, wedge, WedgeVector};
use crate::error::{Error, Result};
use crate::matcore::{binomial, max_abs, norm2, Mat, PositiveDiagonal, DEFAULT_ZERO_TOL};

/// Componentwise nonlinearity φ_i from a closed catalog.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScalarMap {
    Identity,
    /// s ↦ c·s, valid for 0 < c ≤ 1.
    Linear { c: f64 },
    /// s ↦ s^p, valid for p ≥ 1 on domains inside [−1, 1].
    Power { p: u32 },
    /// Piecewise-linear interpolation through (s, φ(s)) breakpoints sorted by s.
    Table { breakpoints: Vec<(f64, f64)> },
}

impl ScalarMap {
    pub fn apply(&self, s: f64) -> f64 {
        match self {
            ScalarMap::Identity => s,
            ScalarMap::Linear { c } => c * s,
            ScalarMap::Power { p } => s.powi(*p as i32),
            ScalarMap::Table { breakpoints } => interpolate(breakpoints, s),
        }
    }

    /// Checks φ(0) = 0 and 0 < |φ(s)| ≤ |s| for s ≠ 0 on the domain.
    pub fn validate(&self, domain: &Interval) -> Result<()> {
        match self {
            ScalarMap::Identity => Ok(()),
            ScalarMap::Linear { c } => {
                if *c > 0.0 && *c <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::precondition(format!("linear map needs 0 < c <= 1, got {c}")))
                }
            }
            ScalarMap::Power { p } => {
                if *p < 1 {
                    Err(Error::precondition("power map needs p >= 1"))
                } else if *p > 1 && (domain.lo < -1.0 || domain.hi > 1.0) {
                    Err(Error::precondition(format!("power map with p = {p} needs a domain inside [-1, 1]")))
                } else {
                    Ok(())
                }
            }
            ScalarMap::Table { breakpoints } => validate_table(breakpoints, domain),
        }
    }
}

fn interpolate(bp: &[(f64, f64)], s: f64) -> f64 {
    let seg = match bp.iter().position(|(z, _)| *z >= s) {
        Some(0) => 0,
        Some(i) => i - 1,
        None => bp.len() - 2,
    };
    let (z0, f0) = bp[seg];
    let (z1, f1) = bp[seg + 1];
    if s == z0 {
        return f0;
    }
    if s == z1 {
        return f1;
    }
    f0 + (f1 - f0) * (s - z0) / (z1 - z0)
}

fn validate_table(bp: &[(f64, f64)], domain: &Interval) -> Result<()> {
    if bp.len() < 2 {
        return Err(Error::precondition("table map needs at least two breakpoints"));
    }
    if bp.iter().any(|(z, f)| !z.is_finite() || !f.is_finite()) {
        return Err(Error::precondition("table breakpoints must be finite"));
    }
    if bp.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::precondition("table breakpoints must be strictly increasing in s"));
    }
    if bp[0].0 > domain.lo || bp[bp.len() - 1].0 < domain.hi {
        return Err(Error::precondition("table breakpoints must cover the domain"));
    }
    if interpolate(bp, 0.0) != 0.0 {
        return Err(Error::precondition("table map must vanish at 0"));
    }
    let mut probes: Vec<f64> = bp.iter().map(|(z, _)| *z).collect();
    probes.extend(bp.windows(2).map(|w| 0.5 * (w[0].0 + w[1].0)));
    let steps = 256;
    probes.extend((0..=steps).map(|i| domain.lo + (domain.hi - domain.lo) * i as f64 / steps as f64));
    for s in probes.into_iter().filter(|s| *s != 0.0 && domain.contains(*s)) {
        let f = interpolate(bp, s).abs();
        // a slope-one segment may overshoot |s| by an ulp after interpolation
        if !(f > 0.0 && f <= s.abs() * (1.0 + 4.0 * f64::EPSILON)) {
            return Err(Error::precondition(format!("table map violates 0 < |phi(s)| <= |s| at s = {s}")));
        }
    }
    Ok(())
}

/// Closed interval S = [lo, hi] with 0 in its interior.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < 0.0 && 0.0 < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::precondition(format!("domain [{lo}, {hi}] must contain 0 in its interior")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, s: f64) -> bool {
        self.lo <= s && s <= self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonlinearSystem {
    a: Mat,
    maps: Vec<ScalarMap>,
    domain: Interval,
}

impl NonlinearSystem {
    pub fn new(a: Mat, maps: Vec<ScalarMap>, domain: Interval) -> Result<Self> {
        for (i, m) in maps.iter().enumerate() {
            m.validate(&domain).map_err(|e| match e {
                Error::Precondition(msg) => Error::Precondition(format!("phi_{}: {msg}", i + 1)),
                other => other,
            })?;
        }
        Self::new_unchecked(a, maps, domain)
    }

    /// Skips the per-map validation; shapes and the domain are still checked.
    pub fn new_unchecked(a: Mat, maps: Vec<ScalarMap>, domain: Interval) -> Result<Self> {
        a.require_square("nonlinear system")?;
        if maps.len() != a.n_rows() {
            return Err(Error::shape(format!("{} maps for a {}x{} matrix", maps.len(), a.n_rows(), a.n_rows())));
        }
        let domain = Interval::new(domain.lo, domain.hi)?;
        Ok(NonlinearSystem { a, maps, domain })
    }

    pub fn matrix(&self) -> &Mat {
        &self.a
    }

    pub fn maps(&self) -> &[ScalarMap] {
        &self.maps
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.a.n_rows()
    }

    fn check_in_domain(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::shape(format!("state of length {} for n = {}", x.len(), self.dim())));
        }
        match x.iter().position(|v| !self.domain.contains(*v)) {
            Some(i) => Err(Error::domain(format!(
                "coordinate {} = {} outside [{}, {}]",
                i + 1,
                x[i],
                self.domain.lo,
                self.domain.hi
            ))),
            None => Ok(()),
        }
    }

    fn phi_unchecked(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.maps).map(|(v, m)| m.apply(*v)).collect()
    }
}

pub fn eval_phi(sys: &NonlinearSystem, x: &[f64]) -> Result<Vec<f64>> {
    sys.check_in_domain(x)?;
    Ok(sys.phi_unchecked(x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DomainExit {
    /// Index j of the first iterate outside S^n.
    pub step: usize,
    pub state: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Simulation {
    /// x(0), x(1), … up to the last iterate inside S^n.
    pub states: Vec<Vec<f64>>,
    pub exit: Option<DomainExit>,
}

impl Simulation {
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, Vec::len);
        let mut out = String::from("j");
        for i in 1..=n {
            write!(out, ",x{i}").unwrap();
        }
        out.push('\n');
        for (j, x) in self.states.iter().enumerate() {
            write!(out, "{j}").unwrap();
            for v in x {
                write!(out, ",{}", fmt_float(*v)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits, enough to recover the exact double.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Iterates x(j+1) = A φ(x(j)), stopping early if an iterate leaves S^n.
pub fn simulate(sys: &NonlinearSystem, x0: &[f64], steps: usize) -> Result<Simulation> {
    sys.check_in_domain(x0)?;
    let mut states = vec![x0.to_vec()];
    for j in 1..=steps {
        let prev = states.last().unwrap();
        let next = sys.a.mul_vec(&sys.phi_unchecked(prev))?;
        if sys.check_in_domain(&next).is_err() {
            return Ok(Simulation { states, exit: Some(DomainExit { step: j, state: next }) });
        }
        states.push(next);
    }
    Ok(Simulation { states, exit: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strictness {
    /// p_i = 0 ⇒ q_i = 0 and |q_i| ≤ |p_i|; vanishing q_i with p_i ≠ 0 is counted but not fatal.
    UpperBound,
    /// Additionally requires q_i ≠ 0 whenever p_i ≠ 0.
    Definition,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContentCheck {
    pub samples_per_axis: usize,
    pub random_tuples: usize,
    pub seed: u64,
    pub zero_tol: f64,
    pub strictness: Strictness,
}

impl Default for ContentCheck {
    fn default() -> Self {
        ContentCheck {
            samples_per_axis: 5,
            random_tuples: 1000,
            seed: 0,
            zero_tol: DEFAULT_ZERO_TOL,
            strictness: Strictness::UpperBound,
        }
    }
}

/// Grid tuples beyond this count are replaced by the same number of random grid draws.
pub const MAX_GRID_TUPLES: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ContentViolationKind {
    /// p_i = 0 but q_i ≠ 0.
    ZeroNotPreserved,
    /// |q_i| > |p_i|.
    Expands,
    /// p_i ≠ 0 but q_i = 0.
    Vanishes,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContentCounterexample {
    pub tuple: Vec<Vec<f64>>,
    /// One-based wedge coordinate.
    pub index: usize,
    pub p_i: f64,
    pub q_i: f64,
    pub kind: ContentViolationKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContentReport {
    pub pass: bool,
    pub tuples_checked: usize,
    pub counterexample: Option<ContentCounterexample>,
    /// Tuples with some p_i ≠ 0 but q_i = 0 (fatal only under `Strictness::Definition`).
    pub vanishing_tuples: usize,
    pub first_vanishing: Option<ContentCounterexample>,
    pub strictness: Strictness,
}

/// Sampled check that φ is k-content preserving: grid plus seeded random tuples.
pub fn check_k_content_preserving(
    sys: &NonlinearSystem,
    k: usize,
    samples_per_axis: usize,
    seed: u64,
) -> Result<ContentReport> {
    let opts = ContentCheck { samples_per_axis, seed, ..ContentCheck::default() };
    check_k_content_preserving_with(sys, k, &opts)
}

pub fn check_k_content_preserving_with(sys: &NonlinearSystem, k: usize, opts: &ContentCheck) -> Result<ContentReport> {
    let n = sys.dim();
    if k == 0 || k > n {
        return Err(Error::domain(format!("order k = {k} outside [1, {n}]")));
    }
    let dom = sys.domain;
    let m = opts.samples_per_axis;
    let grid: Vec<f64> = match m {
        0 => vec![],
        1 => vec![0.5 * (dom.lo + dom.hi)],
        _ => (0..m).map(|i| dom.lo + (dom.hi - dom.lo) * i as f64 / (m - 1) as f64).collect(),
    };
    let digits = n * k;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut report = ContentReport {
        pass: true,
        tuples_checked: 0,
        counterexample: None,
        vanishing_tuples: 0,
        first_vanishing: None,
        strictness: opts.strictness,
    };
    let mut flat = vec![0.0; digits];

    if !grid.is_empty() {
        let full = (grid.len() as u128).checked_pow(digits as u32).unwrap_or(u128::MAX);
        if full <= MAX_GRID_TUPLES as u128 {
            let mut counter = vec![0usize; digits];
            for _ in 0..full {
                for (slot, c) in flat.iter_mut().zip(&counter) {
                    *slot = grid[*c];
                }
                if inspect_tuple(sys, k, &flat, opts, &mut report)? {
                    return Ok(report);
                }
                for c in counter.iter_mut() {
                    *c += 1;
                    if *c < grid.len() {
                        break;
                    }
                    *c = 0;
                }
            }
        } else {
            for _ in 0..MAX_GRID_TUPLES {
                for slot in flat.iter_mut() {
                    *slot = grid[rng.random_range(0..grid.len())];
                }
                if inspect_tuple(sys, k, &flat, opts, &mut report)? {
                    return Ok(report);
                }
            }
        }
    }
    for _ in 0..opts.random_tuples {
        for slot in flat.iter_mut() {
            *slot = rng.random_range(dom.lo..=dom.hi);
        }
        if inspect_tuple(sys, k, &flat, opts, &mut report)? {
            return Ok(report);
        }
    }
    Ok(report)
}

/// Returns true once a fatal violation has been recorded.
fn inspect_tuple(sys: &NonlinearSystem, k: usize, flat: &[f64], opts: &ContentCheck, report: &mut ContentReport) -> Result<bool> {
    let n = sys.dim();
    let tuple: Vec<Vec<f64>> = flat.chunks(n).map(<[f64]>::to_vec).collect();
    let images: Vec<Vec<f64>> = tuple.iter().map(|a| sys.phi_unchecked(a)).collect();
    let p = wedge(&tuple)?.coords;
    let q = wedge(&images)?.coords;
    debug_assert_eq!(tuple.len(), k);
    report.tuples_checked += 1;
    let zt = opts.zero_tol;
    let mut vanished = None;
    for (i, (pi, qi)) in p.iter().zip(&q).enumerate() {
        let kind = if pi.abs() <= zt {
            (qi.abs() > zt).then_some(ContentViolationKind::ZeroNotPreserved)
        } else if qi.abs() > pi.abs() + zt {
            Some(ContentViolationKind::Expands)
        } else if qi.abs() <= zt {
            Some(ContentViolationKind::Vanishes)
        } else {
            None
        };
        let Some(kind) = kind else { continue };
        let cx = ContentCounterexample { tuple: tuple.clone(), index: i + 1, p_i: *pi, q_i: *qi, kind };
        if kind == ContentViolationKind::Vanishes && opts.strictness == Strictness::UpperBound {
            vanished.get_or_insert(cx);
            continue;
        }
        report.pass = false;
        report.counterexample = Some(cx);
        return Ok(true);
    }
    if let Some(cx) = vanished {
        report.vanishing_tuples += 1;
        report.first_vanishing.get_or_insert(cx);
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WedgeTrajectory {
    pub k: usize,
    pub initials: Vec<Vec<f64>>,
    /// states[i][j] = x(j, a^i).
    pub states: Vec<Vec<Vec<f64>>>,
    pub y_series: Vec<WedgeVector>,
    pub v_series: Vec<f64>,
    pub d_used: PositiveDiagonal,
    /// First step at which some trajectory left S^n; the series stop just before it.
    pub truncated_at: Option<usize>,
    /// Steps j with V(j+1) above V(j) beyond a relative 1e−9.
    pub increasing_steps: Vec<usize>,
}

/// Relative agreement required between the direct wedge and the compound recursion.
pub const RECURSION_TOL: f64 = 1e-9;

/// Evolves k trajectories and tracks y(j) = ∧_i x(j, a^i) and V(y(j)) = yᵀDy.
///
/// Each y(j+1) is formed twice, directly and as A^(k) ∧_i φ(x(j, a^i)); the two must agree
/// to [`RECURSION_TOL`] relative to the Hadamard bound ∏_i |x(j+1, a^i)|.
pub fn wedge_trajectory(
    sys: &NonlinearSystem,
    k: usize,
    initials: &[Vec<f64>],
    d: &PositiveDiagonal,
    steps: usize,
) -> Result<WedgeTrajectory> {
    let n = sys.dim();
    if k == 0 || k > n {
        return Err(Error::domain(format!("order k = {k} outside [1, {n}]")));
    }
    if initials.len() != k {
        return Err(Error::precondition(format!("{} initial conditions for k = {k}", initials.len())));
    }
    let r = binomial(n, k).expect("small binomial") as usize;
    if d.dim() != r {
        return Err(Error::precondition(format!("D is {}x{}, expected C({n},{k}) = {r}", d.dim(), d.dim())));
    }
    let sims = initials.iter().map(|a| simulate(sys, a, steps)).collect::<Result<Vec<_>>>()?;
    let len = sims.iter().map(|s| s.states.len()).min().unwrap();
    let truncated_at = sims.iter().filter_map(|s| s.exit.as_ref().map(|e| e.step)).min();
    let states: Vec<Vec<Vec<f64>>> = sims.into_iter().map(|s| s.states[..len].to_vec()).collect();

    let compound = mult_compound(&sys.a, k)?;
    let mut y_series = Vec::with_capacity(len);
    let mut v_series = Vec::with_capacity(len);
    for j in 0..len {
        let at_j: Vec<&[f64]> = states.iter().map(|s| s[j].as_slice()).collect();
        let y = wedge(&at_j)?;
        if j > 0 {
            let images: Vec<Vec<f64>> = states.iter().map(|s| sys.phi_unchecked(&s[j - 1])).collect();
            let recursed = compound.mul_vec(&wedge(&images)?.coords)?;
            let hadamard: f64 = at_j.iter().map(|x| norm2(x)).product();
            let scale = hadamard.max(max_abs(&y.coords)).max(max_abs(&recursed));
            let diff = y.coords.iter().zip(&recursed).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if diff > RECURSION_TOL * scale {
                return Err(Error::numeric(format!(
                    "wedge recursion disagrees with direct wedge at step {j} (difference {diff:e}, scale {scale:e})"
                )));
            }
        }
        v_series.push(d.quadratic_form(&y.coords)?);
        y_series.push(y);
    }
    let increasing_steps = v_series
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] - w[0] > 1e-9 * w[0].max(f64::MIN_POSITIVE))
        .map(|(j, _)| j)
        .collect();
    Ok(WedgeTrajectory {
        k,
        initials: initials.to_vec(),
        states,
        y_series,
        v_series,
        d_used: d.clone(),
        truncated_at,
        increasing_steps,
    })
}

impl WedgeTrajectory {
    /// CSV with header `j,V`, optionally followed by every state coordinate.
    pub fn to_csv(&self, include_states: bool) -> String {
        let mut out = String::from("j,V");
        if include_states {
            for (i, s) in self.states.iter().enumerate() {
                for m in 1..=s.first().map_or(0, Vec::len) {
                    write!(out, ",a{}_x{m}", i + 1).unwrap();
                }
            }
        }
        out.push('\n');
        for (j, v) in self.v_series.iter().enumerate() {
            write!(out, "{j},{}", fmt_float(*v)).unwrap();
            if include_states {
                for s in &self.states {
                    for x in &s[j] {
                        write!(out, ",{}", fmt_float(*x)).unwrap();
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecrementReport {
    /// Every V(j+1) − V(j) ≤ tol.
    pub monotone: bool,
    /// V(j+1) < V(j) at every step where V(j) > 0.
    pub strictly_decreasing: bool,
    pub worst_increase: f64,
    pub differences: Vec<f64>,
}

pub fn lyapunov_decrement_report(traj: &WedgeTrajectory, tol: f64) -> DecrementReport {
    let differences: Vec<f64> = traj.v_series.windows(2).map(|w| w[1] - w[0]).collect();
    let worst_increase = differences.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let monotone = differences.iter().all(|d| *d <= tol);
    let strictly_decreasing = differences.iter().zip(&traj.v_series).all(|(d, v)| *v == 0.0 || *d < 0.0);
    DecrementReport {
        monotone,
        strictly_decreasing,
        worst_increase: if differences.is_empty() { 0.0 } else { worst_increase },
        differences,
    }
}
