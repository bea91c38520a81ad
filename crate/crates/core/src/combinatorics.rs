//! Binomial coefficients and user subsets.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `C(n, k)` in machine integers. `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Like [`binomial`] but for sizes that are known to fit (construction sizes).
pub(crate) fn binom(n: usize, k: usize) -> usize {
    binomial(n, k).expect("binomial overflow") as usize
}

/// `C(n, k)` with arbitrary precision.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Row `n` of Pascal's triangle, `C(n, 0) ..= C(n, n)`.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut acc = BigUint::from(1u32);
    row.push(acc.clone());
    for i in 0..n {
        acc = acc * (n - i) / (i + 1);
        row.push(acc.clone());
    }
    row
}

/// A set of users, stored sorted and 0-based. Serialized and displayed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subset(members)
    }

    pub fn from_one_based(members: &[usize]) -> Option<Self> {
        if members.contains(&0) {
            return None;
        }
        Some(Subset::new(members.iter().map(|m| m - 1).collect()))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, user: usize) -> bool {
        self.0.binary_search(&user).is_ok()
    }

    /// Members of `0..universe` not in this subset.
    pub fn complement(&self, universe: usize) -> Subset {
        Subset((0..universe).filter(|u| !self.contains(*u)).collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|m| m + 1).collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.one_based().iter().join(","))
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(deserializer)?;
        Subset::from_one_based(&raw).ok_or_else(|| serde::de::Error::custom("subset members are 1-based"))
    }
}

/// All `size`-subsets of `0..universe` in lexicographic order.
pub fn subsets(universe: usize, size: usize) -> impl Iterator<Item = Subset> {
    (0..universe).combinations(size).map(Subset)
}
