//! Symmetric-group characters by the Murnaghan–Nakayama rule on beta-sets.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::partition::{list_partitions, Partition};
use crate::algebra::rational::factorial;
use crate::error::{Error, Result};

/// `χ_λ(μ)`.
pub fn character_value(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::Invalid(format!("character of {lambda} at class {mu}: sizes differ")));
    }
    let mut memo = HashMap::new();
    Ok(mn(lambda.parts(), mu.parts(), 0, &mut memo))
}

fn mn(lambda: &[u32], mu: &[u32], idx: usize, memo: &mut HashMap<(Vec<u32>, usize), i64>) -> i64 {
    if idx == mu.len() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    if let Some(v) = memo.get(&(lambda.to_vec(), idx)) {
        return *v;
    }
    let k = mu[idx];
    let n = lambda.len();
    let beta: Vec<u32> = lambda.iter().enumerate().map(|(i, &l)| l + (n - 1 - i) as u32).collect();
    let mut total = 0i64;
    for (bi, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let target = b - k;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb = beta.clone();
        nb[bi] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let lam: Vec<u32> = nb.iter().enumerate().map(|(i, &x)| x - (n - 1 - i) as u32).filter(|p| *p > 0).collect();
        let v = mn(&lam, mu, idx + 1, memo);
        total += if between % 2 == 0 { v } else { -v };
    }
    memo.insert((lambda.to_vec(), idx), total);
    total
}

/// `dim λ` by the hook length formula.
pub fn dimension(lambda: &Partition) -> BigInt {
    let parts = lambda.parts();
    let mut hooks = BigInt::from(1);
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as usize - j - 1;
            let leg = parts[i + 1..].iter().filter(|&&r| r as usize > j).count();
            hooks *= BigInt::from(arm + leg + 1);
        }
    }
    factorial(lambda.size() as u64) / hooks
}

/// Character data of `S_d`, with columns computed on demand.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub degree: u32,
    pub irreps: Vec<Partition>,
    pub dims: Vec<BigInt>,
}

impl CharacterTable {
    pub fn new(d: u32) -> Self {
        let irreps = list_partitions(d);
        let dims = irreps.iter().map(dimension).collect();
        CharacterTable { degree: d, irreps, dims }
    }

    /// `χ_λ(μ)` for every irreducible `λ`, in the order of `irreps`.
    pub fn column(&self, mu: &Partition) -> Vec<i64> {
        let mut memo = HashMap::new();
        self.irreps.iter().map(|l| mn(l.parts(), mu.parts(), 0, &mut memo)).collect()
    }

    /// Full table as rows indexed like `irreps` (λ) and columns like `irreps` (μ).
    pub fn rows(&self) -> Vec<Vec<i64>> {
        let cols: Vec<Vec<i64>> = self.irreps.iter().map(|mu| self.column(mu)).collect();
        (0..self.irreps.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    }

    pub fn class_sizes(&self) -> Vec<BigInt> {
        self.irreps.iter().map(Partition::class_size).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn hand_values() {
        assert_eq!(character_value(&p(&[3]), &p(&[2, 1])).unwrap(), 1);
        assert_eq!(character_value(&p(&[1, 1, 1]), &p(&[3])).unwrap(), 1);
        assert_eq!(character_value(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        assert_eq!(character_value(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap(), -1);
        assert_eq!(character_value(&p(&[2, 2]), &p(&[2, 2])).unwrap(), 2);
        assert!(character_value(&p(&[2]), &p(&[3])).is_err());
    }

    #[test]
    fn dims_match_identity_column() {
        for d in 1..9 {
            let t = CharacterTable::new(d);
            let col = t.column(&Partition::ones(d));
            for (c, dim) in col.iter().zip(&t.dims) {
                assert_eq!(BigInt::from(*c), *dim);
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        for d in 1..=8 {
            let t = CharacterTable::new(d);
            let rows = t.rows();
            let sizes = t.class_sizes();
            let fact = factorial(d as u64);
            let k = t.irreps.len();
            for a in 0..k {
                for b in 0..k {
                    let s: BigInt = (0..k).map(|l| BigInt::from(rows[l][a] * rows[l][b])).sum::<BigInt>() * &sizes[a];
                    let want = if a == b { fact.clone() } else { BigInt::from(0) };
                    assert_eq!(s, want, "d={d} a={a} b={b}");
                }
            }
        }
    }
}
