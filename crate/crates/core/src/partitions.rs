//! Integer partitions and the small amount of number theory that indexes
//! every basis in the crate (`z_λ`, conjugation, the Möbius function).
//!
//! Partitions are ordered first by weight and then in *decreasing*
//! lexicographic order, so `(3) < (2,1) < (1,1,1)`. This is the canonical
//! order used for enumeration, series keys and reports.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A weakly decreasing finite sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// The empty partition, the unique partition of 0.
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Builds a partition from arbitrary positive parts; parts are sorted
    /// into weakly decreasing order.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, Error> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    /// Builds a partition from parts that are already weakly decreasing and
    /// positive. Panics otherwise; intended for literals.
    pub fn from_parts(parts: &[u32]) -> Self {
        assert!(parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0), "not a partition: {parts:?}");
        Partition(parts.to_vec())
    }

    /// The one-part partition `(n)`, or `∅` for `n = 0`.
    pub fn row(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition(vec![n])
        }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: u32) -> Self {
        Partition(vec![1; n as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `|λ|`, the sum of the parts.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `l(λ)`, the number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicity of the part `i`.
    pub fn multiplicity(&self, i: u32) -> usize {
        self.0.iter().filter(|&&p| p == i).count()
    }

    /// Pairs `(part, multiplicity)` in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Multiset union `λ ∪ μ`, the index of `p_λ · p_μ`.
    pub fn union(&self, other: &Partition) -> Partition {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Partition(out)
    }

    /// Removes the sub-multiset `other`, if contained.
    pub fn difference(&self, other: &Partition) -> Option<Partition> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &p in &self.0 {
            if j < other.0.len() && other.0[j] == p {
                j += 1;
            } else {
                out.push(p);
            }
        }
        (j == other.0.len()).then_some(Partition(out))
    }

    /// `(−1)^{|λ| − l(λ)}`, the sign of a permutation of cycle type `λ`.
    pub fn sign(&self) -> i32 {
        if (self.weight() as usize - self.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Removes the first part, returning it and the remainder.
    pub fn split_first(&self) -> Option<(u32, Partition)> {
        self.0.split_first().map(|(&h, rest)| (h, Partition(rest.to_vec())))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("[]");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `"3,1,1"`, `"[3,1,1]"`, `"[]"` and the empty string.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(s).trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::InvalidPartition(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{s} is not weakly decreasing")));
        }
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(serde::de::Error::custom("partition parts must be weakly decreasing"));
        }
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// A pair of partitions, indexing `s_λ(x) s_μ(y)` and `V_{λ,μ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    pub first: Partition,
    pub second: Partition,
}

impl Bipartition {
    pub fn new(first: Partition, second: Partition) -> Self {
        Bipartition { first, second }
    }
}

/// `z_λ = ∏_i i^{m_i} m_i!`, the order of the centralizer of a permutation
/// of cycle type `λ`.
pub fn z_of(lambda: &Partition) -> BigUint {
    let mut z = BigUint::one();
    for (part, mult) in lambda.multiplicities() {
        for k in 1..=mult {
            z *= part;
            z *= k as u64;
        }
    }
    z
}

/// Conjugate partition: the column lengths of the Young diagram.
pub fn transpose(lambda: &Partition) -> Partition {
    let first = lambda.0.first().copied().unwrap_or(0);
    let cols = (1..=first).map(|j| lambda.0.iter().filter(|&&p| p >= j).count() as u32).collect();
    Partition(cols)
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn go(remaining: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            cur.push(p);
            go(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of weight at most `n`, in canonical order.
pub fn partitions_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(partitions_of).collect()
}

/// The Möbius function.
pub fn mobius(n: u32) -> i32 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Multiplies every part by `n`: the index of `p_n ∘ p_λ = p_{nλ}`.
pub fn stretch(lambda: &Partition, n: u32) -> Partition {
    Partition(lambda.0.iter().map(|&p| p * n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::from_parts(parts)
    }

    #[test]
    fn z_values() {
        assert_eq!(z_of(&Partition::empty()), BigUint::from(1u32));
        assert_eq!(z_of(&p(&[2, 1])), BigUint::from(2u32));
        assert_eq!(z_of(&p(&[3, 1, 1])), BigUint::from(6u32));
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(transpose(&p(&[3])), p(&[1, 1, 1]));
        assert_eq!(transpose(&p(&[2, 1])), p(&[2, 1]));
        assert_eq!(transpose(&p(&[4, 2])), p(&[2, 2, 1, 1]));
        assert_eq!(transpose(&Partition::empty()), Partition::empty());
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(10).len(), 42);
        assert_eq!(partitions_of(3), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        let all = partitions_up_to(6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(mobius(i as u32 + 1), m, "mu({})", i + 1);
        }
    }

    #[test]
    fn stretch_examples() {
        assert_eq!(stretch(&p(&[2, 1]), 2), p(&[4, 2]));
        assert_eq!(stretch(&Partition::empty(), 5), Partition::empty());
        assert_eq!(stretch(&p(&[3]), 3), p(&[9]));
    }

    #[test]
    fn text_form_round_trip() {
        for lam in partitions_up_to(5) {
            let text = lam.to_string();
            assert_eq!(text.parse::<Partition>().unwrap(), lam);
        }
        assert_eq!("[]".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("[3,1,1]".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert!("1,2".parse::<Partition>().is_err());
        assert!("2,x".parse::<Partition>().is_err());
    }

    #[test]
    fn union_and_difference() {
        let a = p(&[3, 1]);
        let b = p(&[2, 1]);
        assert_eq!(a.union(&b), p(&[3, 2, 1, 1]));
        assert_eq!(a.union(&b).difference(&b), Some(a.clone()));
        assert_eq!(a.difference(&p(&[2])), None);
    }
}
