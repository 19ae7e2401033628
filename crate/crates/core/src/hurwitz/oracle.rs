//! Definition-level count by enumerating permutation tuples.

use num_bigint::BigInt;
use num_traits::Zero;

use super::number::{rh_genus, HurwitzQuery};
use super::partition::{list_partitions, BranchData, Partition};
use crate::algebra::rational::{factorial, Q};
use crate::error::{Error, Result};

type Perm = Vec<u8>;

#[derive(Clone, Copy, Debug)]
pub struct OracleCaps {
    pub base_genus0: u32,
    pub base_genus1: u32,
    pub higher: u32,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { base_genus0: 5, base_genus1: 4, higher: 3 }
    }
}

pub fn hurwitz_bruteforce_oracle(q: &HurwitzQuery) -> Result<Q> {
    hurwitz_bruteforce_with(q, OracleCaps::default())
}

pub fn hurwitz_bruteforce_with(q: &HurwitzQuery, caps: OracleCaps) -> Result<Q> {
    let d = q.data.degree;
    let cap = match q.base_genus {
        0 => caps.base_genus0,
        1 => caps.base_genus1,
        _ => caps.higher,
    };
    if d > cap {
        return Err(Error::Resource(format!("oracle degree {d} exceeds cap {cap} at base genus {}", q.base_genus)));
    }
    if rh_genus(q.base_genus, d, q.data.total_ramification()) != Some(q.genus) {
        return Ok(Q::zero());
    }
    if d == 0 {
        return Ok(if q.connected { Q::zero() } else { Q::from_integer(1.into()) });
    }
    let all = all_perms(d as usize);
    let profiles: Vec<&Partition> = q.data.profiles.iter().collect();
    let classes: Vec<Vec<&Perm>> = profiles.iter().map(|p| all.iter().filter(|s| cycle_type(s) == **p).collect()).collect();
    let mut count = 0u64;
    let mut tuple: Vec<&Perm> = Vec::new();
    let id: Perm = (0..d as u8).collect();
    enumerate(q, &all, &classes, &profiles, &id, &mut tuple, &mut count);
    Ok(Q::new(BigInt::from(count), factorial(d as u64)))
}

/// Fills handles then branch permutations; the last branch permutation is forced.
fn enumerate<'a>(
    q: &HurwitzQuery,
    all: &'a [Perm],
    classes: &[Vec<&'a Perm>],
    profiles: &[&Partition],
    prod: &Perm,
    tuple: &mut Vec<&'a Perm>,
    count: &mut u64,
) {
    let handles = 2 * q.base_genus as usize;
    let pos = tuple.len();
    if pos < handles {
        for p in all {
            tuple.push(p);
            let next = if pos % 2 == 1 { compose(prod, &commutator(tuple[pos - 1], p)) } else { prod.clone() };
            enumerate(q, all, classes, profiles, &next, tuple, count);
            tuple.pop();
        }
        return;
    }
    let j = pos - handles;
    let a = classes.len();
    if a == 0 || j == a - 1 {
        let last = inverse(prod);
        if a > 0 && cycle_type(&last) != *profiles[a - 1] {
            return;
        }
        if a == 0 && last.iter().enumerate().any(|(i, &x)| i as u8 != x) {
            return;
        }
        if !q.connected || transitive(tuple, &last) {
            *count += 1;
        }
        return;
    }
    for p in &classes[j] {
        tuple.push(p);
        enumerate(q, all, classes, profiles, &compose(prod, p), tuple, count);
        tuple.pop();
    }
}

fn all_perms(d: usize) -> Vec<Perm> {
    fn rec(cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Perm>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i as u8);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn inverse(a: &Perm) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

fn commutator(a: &Perm, b: &Perm) -> Perm {
    compose(&compose(a, b), &compose(&inverse(a), &inverse(b)))
}

pub(crate) fn cycle_type(p: &Perm) -> Partition {
    let mut seen = vec![false; p.len()];
    let mut parts = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::new(parts)
}

fn transitive(tuple: &[&Perm], last: &Perm) -> bool {
    let n = last.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for perm in tuple.iter().copied().chain(std::iter::once(last)) {
        for (i, &x) in perm.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, x as usize));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (0..n).all(|i| find(&mut parent, i) == root)
}

/// Every query of degree `1..=max_degree` with up to `max_points` non-trivial
/// profiles (as multisets), at the genus Riemann–Hurwitz allows.
pub fn oracle_grid(base_genus: u32, max_degree: u32, max_points: usize, connected: bool) -> Vec<HurwitzQuery> {
    let mut out = Vec::new();
    for d in 1..=max_degree {
        let parts: Vec<Partition> = list_partitions(d).into_iter().filter(|p| !p.is_trivial()).collect();
        let mut stack: Vec<(usize, Vec<Partition>)> = vec![(0, vec![])];
        while let Some((from, chosen)) = stack.pop() {
            let data = BranchData { degree: d, profiles: chosen.clone() };
            if let Some(g) = rh_genus(base_genus, d, data.total_ramification()) {
                out.push(HurwitzQuery::new(base_genus, g, data, connected));
            }
            if chosen.len() < max_points {
                for (i, p) in parts.iter().enumerate().skip(from) {
                    let mut next = chosen.clone();
                    next.push(p.clone());
                    stack.push((i, next));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;
    use crate::hurwitz::{hurwitz_number, BranchData};

    fn query(gp: u32, g: i64, d: u32, s: &str, connected: bool) -> HurwitzQuery {
        HurwitzQuery::new(gp, g, BranchData::parse(d, s).unwrap(), connected)
    }

    #[test]
    fn examples() {
        assert_eq!(hurwitz_bruteforce_oracle(&query(0, 0, 2, "(2);(2)", true)).unwrap(), q(1, 2));
        assert_eq!(hurwitz_bruteforce_oracle(&query(1, 1, 2, "", true)).unwrap(), q(3, 2));
        assert_eq!(hurwitz_bruteforce_oracle(&query(0, 1, 3, "(3);(3);(3)", true)).unwrap(), q(1, 3));
        let q4 = query(0, 0, 4, "(2,2);(2,2);(2,2)", true);
        assert_eq!(hurwitz_bruteforce_oracle(&q4).unwrap(), hurwitz_number(&q4).unwrap());
    }

    #[test]
    fn cap_enforced() {
        assert!(hurwitz_bruteforce_oracle(&query(1, 1, 5, "", true)).is_err());
    }

    #[test]
    fn disconnected_matches_characters() {
        let qd = query(0, -1, 4, "(2,2);(2,2)", false);
        assert_eq!(hurwitz_bruteforce_oracle(&qd).unwrap(), hurwitz_number(&qd).unwrap());
    }
}
