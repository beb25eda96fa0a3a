//! Sign variations, the cones P^k_− and P^k_+, and sign-regularity of matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{determinant, lex_index_sets, lu::minor_zero_based, LexIndexSet, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignVariations {
    /// Sign changes after deleting zero entries.
    pub s_minus: usize,
    /// Largest number of sign changes over all ±1 fillings of the zero entries.
    pub s_plus: usize,
}

/// s^−(x) and s^+(x). Entries are zero only when exactly 0.0.
pub fn sign_variations(x: &[f64]) -> SignVariations {
    let mut s_minus = 0;
    let mut last: Option<bool> = None;
    for v in x.iter().filter(|v| **v != 0.0) {
        let pos = *v > 0.0;
        if last.is_some_and(|l| l != pos) {
            s_minus += 1;
        }
        last = Some(pos);
    }

    // best[s] = most changes in a prefix whose last filled sign is s (0: negative, 1: positive)
    let mut best: [Option<usize>; 2] = [None, None];
    for v in x {
        let allowed = [*v <= 0.0, *v >= 0.0];
        let mut next = [None, None];
        for (s, ok) in allowed.iter().enumerate() {
            if !ok {
                continue;
            }
            next[s] = match (best[s], best[1 - s]) {
                (None, None) => Some(0),
                (same, other) => same.max(other.map(|c| c + 1)),
            };
        }
        best = next;
    }
    let s_plus = best.iter().flatten().copied().max().unwrap_or(0);
    SignVariations { s_minus, s_plus }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeMembership {
    pub in_pk_minus: bool,
    pub in_pk_plus: bool,
}

pub fn cone_membership(x: &[f64], k: usize) -> Result<ConeMembership> {
    if k == 0 || k > x.len() {
        return Err(Error::domain(format!("order k = {k} outside [1, {}]", x.len())));
    }
    let sv = sign_variations(x);
    Ok(ConeMembership { in_pk_minus: sv.s_minus < k, in_pk_plus: sv.s_plus < k })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Every k-minor strictly of one sign.
    Ssr,
    /// Every k-minor weakly of one sign, at least one nonzero.
    Sr,
    /// Every k-minor vanishes.
    AllZero,
    /// Two minors of opposite strict sign exist.
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinorWitness {
    pub rows: LexIndexSet,
    pub cols: LexIndexSet,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignClass {
    pub k: usize,
    pub verdict: Verdict,
    /// ε_k, present for SR and SSR verdicts.
    pub signature: Option<i8>,
    /// Minor of smallest magnitude.
    pub witness_min: MinorWitness,
    /// A positive and a negative minor, present for the NONE verdict.
    pub witness_conflict: Option<(MinorWitness, MinorWitness)>,
    /// Absolute zero band actually applied to the minors.
    pub zero_band: f64,
}

impl SignClass {
    pub fn is_sign_regular(&self) -> bool {
        matches!(self.verdict, Verdict::Sr | Verdict::Ssr)
    }

    pub fn is_strict(&self) -> bool {
        self.verdict == Verdict::Ssr
    }
}

/// Classifies A as SR_k / SSR_k from all of its k-minors.
///
/// A minor m counts as zero when |m| ≤ tol·max(1, max |k-minor|).
pub fn classify_sign_regularity(a: &Mat, k: usize, tol: f64) -> Result<SignClass> {
    let (n, m) = (a.n_rows(), a.n_cols());
    if k == 0 || k > n.min(m) {
        return Err(Error::domain(format!("order k = {k} outside [1, {}]", n.min(m))));
    }
    let row_sets = lex_index_sets(k, n)?;
    let col_sets = lex_index_sets(k, m)?;
    let entries = row_sets.len() as u128 * col_sets.len() as u128;
    if entries > crate::compound::MAX_COMPOUND_ENTRIES as u128 {
        return Err(Error::Capacity {
            what: format!("order-{k} minors of {n}x{m}"),
            required: entries,
            limit: crate::compound::MAX_COMPOUND_ENTRIES as u128,
        });
    }
    let rows0: Vec<Vec<usize>> = row_sets.iter().map(|s| s.zero_based()).collect();
    let cols0: Vec<Vec<usize>> = col_sets.iter().map(|s| s.zero_based()).collect();

    let mut minors = Vec::with_capacity(entries as usize);
    for (i, r) in rows0.iter().enumerate() {
        for (j, c) in cols0.iter().enumerate() {
            minors.push((i, j, minor_zero_based(a, r, c)));
        }
    }
    let scale = minors.iter().fold(1.0f64, |s, (_, _, v)| s.max(v.abs()));
    let band = tol * scale;

    let witness = |(i, j, v): (usize, usize, f64)| MinorWitness {
        rows: row_sets[i].clone(),
        cols: col_sets[j].clone(),
        value: v,
    };
    let min_entry = *minors
        .iter()
        .min_by(|x, y| x.2.abs().total_cmp(&y.2.abs()))
        .expect("at least one minor");
    let first_pos = minors.iter().find(|e| e.2 > band).copied();
    let first_neg = minors.iter().find(|e| e.2 < -band).copied();
    let any_zero = minors.iter().any(|e| e.2.abs() <= band);

    let (verdict, signature, conflict) = match (first_pos, first_neg) {
        (Some(p), Some(q)) => (Verdict::None, None, Some((witness(p), witness(q)))),
        (None, None) => (Verdict::AllZero, None, None),
        (p, _) => {
            let eps = if p.is_some() { 1 } else { -1 };
            let v = if any_zero { Verdict::Sr } else { Verdict::Ssr };
            (v, Some(eps), None)
        }
    };
    Ok(SignClass {
        k,
        verdict,
        signature,
        witness_min: witness(min_entry),
        witness_conflict: conflict,
        zero_band: band,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KPositivity {
    pub k_positive: bool,
    pub strongly_k_positive: bool,
    pub sign_class: SignClass,
}

/// Decides k-positivity of x(j+1) = A x(j) through the SR_k / SSR_k test on A.
pub fn is_k_positive_system(a: &Mat, k: usize, tol: f64) -> Result<KPositivity> {
    require_nonsingular(a, tol)?;
    let sign_class = classify_sign_regularity(a, k, tol)?;
    Ok(KPositivity {
        k_positive: sign_class.is_sign_regular(),
        strongly_k_positive: sign_class.is_strict(),
        sign_class,
    })
}

pub(crate) fn require_nonsingular(a: &Mat, tol: f64) -> Result<()> {
    let det = determinant(a)?;
    let scale = a.max_abs().max(1.0).powi(a.n_rows() as i32);
    if det.abs() <= tol * scale {
        return Err(Error::precondition(format!(
            "matrix is singular (|det| = {:e}); reduce the system to the nonsingular part first",
            det.abs()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeViolation {
    pub x: Vec<f64>,
    pub image: Vec<f64>,
    pub image_variations: SignVariations,
    /// True when only the strong property (image in P^k_+) failed.
    pub strong_only: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeInvarianceReport {
    pub samples_tested: usize,
    /// Whether images were also required to land in P^k_+ (A is SSR_k).
    pub strong: bool,
    pub violations: Vec<ConeViolation>,
    pub pass: bool,
}

/// Draws a vector in P^k_−: Gaussian magnitudes, signs flipped at up to k−1 sorted cut points.
pub fn sample_pk_minus(rng: &mut impl Rng, n: usize, k: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal).abs()).collect();
    let max_changes = (k - 1).min(n - 1);
    let changes = rng.random_range(0..=max_changes);
    let mut cuts = rand::seq::index::sample(rng, n - 1, changes).into_vec();
    cuts.sort_unstable();
    let mut sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let mut next_cut = cuts.iter().peekable();
    for (i, v) in x.iter_mut().enumerate() {
        while next_cut.peek().is_some_and(|&&c| c < i) {
            next_cut.next();
            sign = -sign;
        }
        *v *= sign;
    }
    x
}

/// Spot-checks A·P^k_− ⊆ P^k_− (and A·(P^k_− \ {0}) ⊆ P^k_+ when A is SSR_k) on seeded samples.
pub fn sampled_cone_invariance(a: &Mat, k: usize, num_samples: usize, seed: u64) -> Result<ConeInvarianceReport> {
    a.require_square("cone invariance")?;
    let n = a.n_rows();
    if k == 0 || k > n {
        return Err(Error::domain(format!("order k = {k} outside [1, {n}]")));
    }
    require_nonsingular(a, crate::matcore::DEFAULT_ZERO_TOL)?;
    let strong = classify_sign_regularity(a, k, crate::matcore::DEFAULT_ZERO_TOL)?.is_strict();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut tested = 0;
    for _ in 0..num_samples {
        let x = sample_pk_minus(&mut rng, n, k);
        let sv = sign_variations(&x);
        if sv.s_minus >= k || x.iter().all(|v| *v == 0.0) {
            continue;
        }
        tested += 1;
        let image = a.mul_vec(&x)?;
        let iv = sign_variations(&image);
        let weak_ok = iv.s_minus < k;
        let strong_ok = !strong || iv.s_plus < k;
        if !(weak_ok && strong_ok) {
            violations.push(ConeViolation { x, image, image_variations: iv, strong_only: weak_ok });
        }
    }
    Ok(ConeInvarianceReport { samples_tested: tested, strong, pass: violations.is_empty(), violations })
}
