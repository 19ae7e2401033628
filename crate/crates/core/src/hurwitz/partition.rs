use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::factorial;
use crate::error::{Error, Result};

/// Weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|p| *p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn ones(d: u32) -> Self {
        Partition { parts: vec![1; d as usize] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Σ (μ_j − 1), the ramification contributed by this profile.
    pub fn ramification(&self) -> u32 {
        self.parts.iter().map(|p| p - 1).sum()
    }

    pub fn without_ones(&self) -> Self {
        Partition { parts: self.parts.iter().copied().filter(|p| *p > 1).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.iter().all(|p| *p == 1)
    }

    /// Pad with ones up to size `d`.
    pub fn padded(&self, d: u32) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(std::iter::repeat_n(1, d.saturating_sub(self.size()) as usize));
        Partition { parts }
    }

    /// `m[j]` = number of parts equal to `j`, for `j` up to `max`.
    pub fn multiplicities(&self, max: u32) -> Vec<u32> {
        let mut m = vec![0; max as usize + 1];
        for &p in &self.parts {
            m[p as usize] += 1;
        }
        m
    }

    /// Order of the centralizer of a permutation of this cycle type.
    pub fn centralizer(&self) -> BigInt {
        let mut z = BigInt::from(1);
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut m = 0u64;
            while i < self.parts.len() && self.parts[i] == p {
                m += 1;
                i += 1;
            }
            z *= BigInt::from(p).pow(m as u32) * factorial(m);
        }
        z
    }

    pub fn class_size(&self) -> BigInt {
        factorial(self.size() as u64) / self.centralizer()
    }

    /// Parses `(2,1)`, `2,1`, `2 1` or `()`.
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: std::result::Result<Vec<u32>, _> = inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect();
        let parts = parts.map_err(|_| Error::Invalid(format!("bad partition `{s}`")))?;
        Ok(Partition::new(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `d`, in reverse-lexicographic order.
pub fn list_partitions(d: u32) -> Vec<Partition> {
    partitions_bounded(d, d)
}

/// Partitions of `d` with all parts at most `max_part`, reverse-lexicographic.
pub fn partitions_bounded(d: u32, max_part: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, max_part, &mut Vec::new(), &mut out);
    out
}

/// Ramification profiles over the branch points of a degree-`d` cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchData {
    pub profiles: Vec<Partition>,
    pub degree: u32,
}

impl BranchData {
    pub fn new(degree: u32, profiles: Vec<Partition>) -> Result<Self> {
        if let Some(p) = profiles.iter().find(|p| p.size() != degree) {
            return Err(Error::Invalid(format!("profile {p} does not have size {degree}")));
        }
        Ok(BranchData { profiles, degree })
    }

    /// Accepts profiles written as `(2,1);(3)` and pads them to the common degree.
    pub fn parse(degree: u32, s: &str) -> Result<Self> {
        let profiles: Result<Vec<Partition>> = s.split(';').filter(|t| !t.trim().is_empty()).map(|t| Partition::parse(t).map(|p| p.padded(degree))).collect();
        Self::new(degree, profiles?)
    }

    pub fn total_ramification(&self) -> u32 {
        self.profiles.iter().map(Partition::ramification).sum()
    }

    /// Canonical key: ones stripped, trivial profiles dropped, sorted.
    pub fn canonical_profiles(&self) -> Vec<Partition> {
        let mut v: Vec<Partition> = self.profiles.iter().map(Partition::without_ones).filter(|p| !p.is_empty()).collect();
        v.sort_by(|a, b| b.cmp(a));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lists() {
        assert_eq!(list_partitions(0), vec![Partition::empty()]);
        let three: Vec<String> = list_partitions(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(three, vec!["(3)", "(2,1)", "(1,1,1)"]);
        assert_eq!(list_partitions(6).len(), 11);
        assert_eq!(list_partitions(12).len(), 77);
        assert_eq!(partitions_bounded(12, 2).len(), 7);
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for d in 1..8 {
            let total: BigInt = list_partitions(d).iter().map(Partition::class_size).sum();
            assert_eq!(total, factorial(d as u64));
        }
    }

    #[test]
    fn parse_and_pad() {
        let b = BranchData::parse(4, "(2);(2,2);()").unwrap();
        assert_eq!(b.profiles[0], Partition::new(vec![2, 1, 1]));
        assert_eq!(b.profiles[2], Partition::ones(4));
        assert_eq!(b.canonical_profiles(), vec![Partition::new(vec![2, 2]), Partition::new(vec![2])]);
        assert!(BranchData::parse(2, "(3)").is_err());
    }
}
