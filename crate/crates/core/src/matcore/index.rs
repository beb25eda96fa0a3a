use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest number of index sets (and hence compound dimension) any operation will materialize.
pub const CAPACITY_LIMIT: usize = 100_000;

/// One strictly increasing k-subset κ of {1, …, n}, stored one-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexIndexSet {
    n: usize,
    indices: Vec<usize>,
}

impl Serialize for LexIndexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices.serialize(serializer)
    }
}

impl LexIndexSet {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        let k = indices.len();
        if k == 0 || k > n {
            return Err(Error::domain(format!("index set of size {k} in dimension {n}")));
        }
        if indices[0] < 1 || indices[k - 1] > n {
            return Err(Error::domain(format!("indices {indices:?} not within [1, {n}]")));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!("indices {indices:?} not strictly increasing")));
        }
        Ok(LexIndexSet { n, indices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    /// One-based indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i - 1).collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Indices of [1, n] not in the set, increasing.
    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|i| !self.contains(*i)).collect()
    }
}

impl fmt::Debug for LexIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LexIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.indices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// C(n, k), or `None` if it overflows `u128`.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub(crate) fn checked_count(k: usize, n: usize) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::domain(format!("order k = {k} outside [1, {n}]")));
    }
    match binomial(n, k) {
        Some(c) if c <= CAPACITY_LIMIT as u128 => Ok(c as usize),
        other => Err(Error::Capacity {
            what: format!("C({n},{k}) index sets"),
            required: other.unwrap_or(u128::MAX),
            limit: CAPACITY_LIMIT as u128,
        }),
    }
}

/// All k-subsets of {1, …, n} in lexicographic order (Q_{k,n}).
pub fn lex_index_sets(k: usize, n: usize) -> Result<Vec<LexIndexSet>> {
    let count = checked_count(k, n)?;
    let mut out = Vec::with_capacity(count);
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(LexIndexSet { n, indices: cur.clone() });
        // rightmost position that can still advance
        let Some(pos) = (0..k).rev().find(|&i| cur[i] < n - (k - 1 - i)) else {
            break;
        };
        cur[pos] += 1;
        for i in pos + 1..k {
            cur[i] = cur[i - 1] + 1;
        }
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}
