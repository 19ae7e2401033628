use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cache::HurwitzCache;
use super::characters::CharacterTable;
use super::partition::{BranchData, Partition};
use crate::algebra::rational::{factorial, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HurwitzQuery {
    pub base_genus: u32,
    pub genus: i64,
    pub data: BranchData,
    pub connected: bool,
}

impl HurwitzQuery {
    pub fn new(base_genus: u32, genus: i64, data: BranchData, connected: bool) -> Self {
        HurwitzQuery { base_genus, genus, data, connected }
    }

    /// Genus of the cover forced by Riemann–Hurwitz, if the parity works out.
    pub fn riemann_hurwitz_genus(&self) -> Option<i64> {
        rh_genus(self.base_genus, self.data.degree, self.data.total_ramification())
    }
}

pub(crate) fn rh_genus(base_genus: u32, d: u32, ramification: u32) -> Option<i64> {
    // 2 - 2g = d(2 - 2g') - R
    let two_g = ramification as i64 - d as i64 * (2 - 2 * base_genus as i64) + 2;
    (two_g % 2 == 0).then_some(two_g / 2)
}

/// Canonical monomial: degree plus the non-trivial profiles with ones stripped.
type MonoKey = (u32, u32, Vec<Partition>);

fn mono_key(base_genus: u32, d: u32, profiles: &[Partition]) -> MonoKey {
    let mut v: Vec<Partition> = profiles.iter().map(Partition::without_ones).filter(|p| !p.is_empty()).collect();
    v.sort_by(|a, b| b.cmp(a));
    (base_genus, d, v)
}

/// Character-theoretic Hurwitz numbers with shared tables and memo.
pub struct HurwitzEngine {
    tables: RwLock<HashMap<u32, Arc<CharacterTable>>>,
    columns: RwLock<HashMap<Partition, Arc<Vec<i64>>>>,
    disconnected: RwLock<HashMap<MonoKey, Q>>,
    connected: RwLock<HashMap<MonoKey, Q>>,
    cache: Option<HurwitzCache>,
    max_degree: u32,
}

impl Default for HurwitzEngine {
    fn default() -> Self {
        Self::new(None)
    }
}

impl HurwitzEngine {
    pub const DEFAULT_MAX_DEGREE: u32 = 30;

    pub fn new(cache: Option<HurwitzCache>) -> Self {
        HurwitzEngine {
            tables: RwLock::default(),
            columns: RwLock::default(),
            disconnected: RwLock::default(),
            connected: RwLock::default(),
            cache,
            max_degree: Self::DEFAULT_MAX_DEGREE,
        }
    }

    pub fn with_cache_path(path: impl Into<PathBuf>) -> Self {
        Self::new(Some(HurwitzCache::open(path.into())))
    }

    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    pub fn cache(&self) -> Option<&HurwitzCache> {
        self.cache.as_ref()
    }

    pub fn table(&self, d: u32) -> Arc<CharacterTable> {
        if let Some(t) = self.tables.read().unwrap().get(&d) {
            return t.clone();
        }
        let t = Arc::new(CharacterTable::new(d));
        self.tables.write().unwrap().entry(d).or_insert(t).clone()
    }

    fn column(&self, mu: &Partition) -> Arc<Vec<i64>> {
        if let Some(c) = self.columns.read().unwrap().get(mu) {
            return c.clone();
        }
        let c = Arc::new(self.table(mu.size()).column(mu));
        self.columns.write().unwrap().entry(mu.clone()).or_insert(c).clone()
    }

    pub fn hurwitz_number(&self, q: &HurwitzQuery) -> Result<Q> {
        let d = q.data.degree;
        if d > self.max_degree {
            return Err(Error::Resource(format!("Hurwitz degree {d} exceeds cap {}", self.max_degree)));
        }
        if q.riemann_hurwitz_genus() != Some(q.genus) {
            return Ok(Q::zero());
        }
        if let Some(v) = self.cache.as_ref().and_then(|c| c.get(q)) {
            return Ok(v);
        }
        let v = if q.connected { self.connected_value(q.base_genus, d, &q.data.profiles) } else { self.disconnected_value(q.base_genus, d, &q.data.profiles) };
        if let Some(c) = &self.cache {
            c.insert(q, &v)?;
        }
        Ok(v)
    }

    /// Σ_λ (dim λ/d!)^{2−2g'} ∏_i |C_{μ_i}| χ_λ(μ_i)/dim λ.
    fn disconnected_value(&self, base_genus: u32, d: u32, profiles: &[Partition]) -> Q {
        let key = mono_key(base_genus, d, profiles);
        if let Some(v) = self.disconnected.read().unwrap().get(&key) {
            return v.clone();
        }
        let table = self.table(d);
        let fact = factorial(d as u64);
        let cols: Vec<Arc<Vec<i64>>> = key.2.iter().map(|p| self.column(&p.padded(d))).collect();
        let sizes: Vec<BigInt> = key.2.iter().map(|p| p.padded(d).class_size()).collect();
        let euler = 2 - 2 * base_genus as i32;
        let v: Q = (0..table.irreps.len())
            .into_par_iter()
            .map(|l| {
                let dim = &table.dims[l];
                let mut term = pow_ratio(dim, &fact, euler);
                for (c, s) in cols.iter().zip(&sizes) {
                    if c[l] == 0 {
                        return Q::zero();
                    }
                    term *= Q::new(s * BigInt::from(c[l]), dim.clone());
                }
                term
            })
            .reduce(Q::zero, |a, b| a + b);
        self.disconnected.write().unwrap().insert(key, v.clone());
        v
    }

    /// Log recursion `C(m) = Z(m) − (1/k) Σ k₁ C(m₁) Z(m − m₁)` over balanced sub-monomials.
    fn connected_value(&self, base_genus: u32, d: u32, profiles: &[Partition]) -> Q {
        let key = mono_key(base_genus, d, profiles);
        if let Some(v) = self.connected.read().unwrap().get(&key) {
            return v.clone();
        }
        let points: Vec<Vec<u32>> = key.2.iter().map(|p| p.padded(d).multiplicities(d)).collect();
        let mut v = self.disconnected_value(base_genus, d, &key.2);
        let mut correction = Q::zero();
        for k1 in 1..d {
            for sub in balanced_submultisets(&points, k1) {
                let p1: Vec<Partition> = sub.iter().map(|c| from_mults(c)).collect();
                let p2: Vec<Partition> = sub.iter().zip(&points).map(|(c, t)| from_mults(&diff(t, c))).collect();
                let c1 = self.connected_value(base_genus, k1, &p1);
                if c1.is_zero() {
                    continue;
                }
                let z2 = self.disconnected_value(base_genus, d - k1, &p2);
                correction += c1 * z2 * Q::from_integer(k1.into());
            }
        }
        v -= correction / Q::from_integer(d.into());
        self.connected.write().unwrap().insert(key, v.clone());
        v
    }
}

fn pow_ratio(dim: &BigInt, fact: &BigInt, e: i32) -> Q {
    if e >= 0 {
        Q::new(dim.pow(e as u32), fact.pow(e as u32))
    } else {
        Q::new(fact.pow((-e) as u32), dim.pow((-e) as u32))
    }
}

fn from_mults(m: &[u32]) -> Partition {
    let mut parts = Vec::new();
    for (j, &c) in m.iter().enumerate() {
        parts.extend(std::iter::repeat_n(j as u32, c as usize));
    }
    Partition::new(parts)
}

fn diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Per-point sub-multisets of weight `k`, all combinations.
fn balanced_submultisets(points: &[Vec<u32>], k: u32) -> Vec<Vec<Vec<u32>>> {
    let mut acc: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for m in points {
        let subs = submultisets_of_weight(m, k);
        if subs.is_empty() {
            return Vec::new();
        }
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                subs.iter().map(move |s| {
                    let mut p = prefix.clone();
                    p.push(s.clone());
                    p
                })
            })
            .collect();
    }
    acc
}

fn submultisets_of_weight(m: &[u32], k: u32) -> Vec<Vec<u32>> {
    fn rec(m: &[u32], j: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let max = m[j].min(rem / j as u32);
        for c in 0..=max {
            cur[j] = c;
            rec(m, j - 1, rem - c * j as u32, cur, out);
        }
        cur[j] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; m.len()];
    if m.len() > 1 {
        rec(m, m.len() - 1, k, &mut cur, &mut out);
    } else if k == 0 {
        out.push(cur);
    }
    out
}

fn default_engine() -> &'static HurwitzEngine {
    static ENGINE: OnceLock<HurwitzEngine> = OnceLock::new();
    ENGINE.get_or_init(HurwitzEngine::default)
}

/// Hurwitz number through a process-wide engine without disk cache.
pub fn hurwitz_number(q: &HurwitzQuery) -> Result<Q> {
    default_engine().hurwitz_number(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;

    fn query(gp: u32, g: i64, d: u32, s: &str, connected: bool) -> HurwitzQuery {
        HurwitzQuery::new(gp, g, BranchData::parse(d, s).unwrap(), connected)
    }

    #[test]
    fn small_values() {
        assert_eq!(hurwitz_number(&query(0, 0, 1, "(1);(1);(1)", true)).unwrap(), q(1, 1));
        assert_eq!(hurwitz_number(&query(0, 0, 2, "(2);(2)", true)).unwrap(), q(1, 2));
        assert_eq!(hurwitz_number(&query(0, 1, 3, "(3);(3);(3)", true)).unwrap(), q(1, 3));
        assert_eq!(hurwitz_number(&query(1, 1, 2, "", true)).unwrap(), q(3, 2));
        assert_eq!(hurwitz_number(&query(0, 0, 4, "(2,2);(2,2);(2,2)", true)).unwrap(), q(1, 4));
    }

    #[test]
    fn parity_failure_is_zero() {
        assert_eq!(hurwitz_number(&query(0, 0, 2, "(2)", true)).unwrap(), Q::zero());
        assert_eq!(hurwitz_number(&query(0, 1, 2, "(2);(2)", true)).unwrap(), Q::zero());
    }

    #[test]
    fn disconnected_two_sheets() {
        // two copies of the identity cover, weighted 1/2!
        assert_eq!(hurwitz_number(&query(0, -1, 2, "", false)).unwrap(), q(1, 2));
    }

    #[test]
    fn degree_cap() {
        let e = HurwitzEngine::default().with_max_degree(3);
        assert!(matches!(e.hurwitz_number(&query(0, 0, 4, "(4);(4)", true)), Err(Error::Resource(_))));
    }

    #[test]
    fn submultisets() {
        assert_eq!(submultisets_of_weight(&[0, 2, 1], 2).len(), 2);
        assert_eq!(submultisets_of_weight(&[0, 0, 1], 1).len(), 0);
    }
}
