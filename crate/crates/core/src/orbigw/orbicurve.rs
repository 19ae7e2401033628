use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{q, qi, QMatrix, VarSet, Q};
use crate::error::{Error, Result};
use crate::hurwitz::{partitions_bounded, BranchData, Partition};

/// Genus-`g'` surface with cyclic orbifold points of the given orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orbicurve {
    pub base_genus: u32,
    pub orders: Vec<u32>,
}

impl Orbicurve {
    pub fn new(base_genus: u32, orders: Vec<u32>) -> Result<Self> {
        if let Some(a) = orders.iter().find(|a| **a < 2) {
            return Err(Error::Invalid(format!("orbifold order {a} must be at least 2")));
        }
        Ok(Orbicurve { base_genus, orders })
    }

    pub fn sphere(orders: &[u32]) -> Result<Self> {
        Self::new(0, orders.to_vec())
    }

    /// χ_orb = 2 − 2g' − Σ(1 − 1/α_i).
    pub fn euler_characteristic(&self) -> Q {
        let mut chi = qi(2 - 2 * self.base_genus as i64);
        for &a in &self.orders {
            chi -= Q::one() - q(1, a as i64);
        }
        chi
    }

    pub fn label(&self) -> String {
        let o: Vec<String> = self.orders.iter().map(u32::to_string).collect();
        if self.base_genus == 0 {
            format!("P1_{{{}}}", o.join(","))
        } else {
            format!("S{}_{{{}}}", self.base_genus, o.join(","))
        }
    }
}

pub fn tname(k: u32, i: usize) -> String {
    format!("t[{k},{}]", i + 1)
}

/// Flat coordinates, their gradings, the Euler field and the pairing.
#[derive(Clone, Debug)]
pub struct Grading {
    pub curve: Orbicurve,
    /// `t0`, then `t[k,i]` point by point, then `s`.
    pub flat: Arc<VarSet>,
    /// `flat` followed by `Q` = e^s z.
    pub full: Arc<VarSet>,
    /// Linear Euler coefficients: E = Σ euler[v] v ∂_v + χ ∂_s.
    pub euler: Vec<Q>,
    pub chi: Q,
    pub z_degree: Q,
    pub eta: QMatrix,
    pub eta_inv: QMatrix,
    /// `(point, k)` for each twisted variable, in flat order after `t0`.
    pub twisted: Vec<(usize, u32)>,
}

impl Grading {
    pub fn dim(&self) -> usize {
        self.flat.len()
    }

    pub fn t0(&self) -> usize {
        0
    }

    pub fn s(&self) -> usize {
        self.flat.len() - 1
    }

    pub fn q_index(&self) -> usize {
        self.flat.len()
    }

    pub fn index(&self, k: u32, point: usize) -> Option<usize> {
        self.twisted.iter().position(|&(p, kk)| p == point && kk == k).map(|i| i + 1)
    }

    /// The Euler vector field evaluated at a point of the flat coordinates.
    pub fn euler_vector(&self, point: &[Q]) -> Vec<Q> {
        let mut e: Vec<Q> = self.euler.iter().zip(point).map(|(c, x)| c * x).collect();
        let s = self.s();
        e[s] = self.chi.clone();
        e
    }
}

pub fn grading_and_euler(c: &Orbicurve) -> Grading {
    let chi = c.euler_characteristic();
    let mut vars: Vec<(String, Q)> = vec![("t0".into(), qi(-2))];
    let mut euler = vec![Q::one()];
    let mut twisted = Vec::new();
    for (i, &a) in c.orders.iter().enumerate() {
        for k in 1..a {
            vars.push((tname(k, i), q(2 * k as i64, a as i64) - qi(2)));
            euler.push(Q::one() - q(k as i64, a as i64));
            twisted.push((i, k));
        }
    }
    vars.push(("s".into(), Q::zero()));
    euler.push(Q::zero());
    let n = vars.len();
    let z_degree = -qi(2) * &chi;
    let flat = VarSet::new(vars.clone());
    let full = flat.extended([("Q", z_degree.clone())]);
    let mut eta = QMatrix::zeros(n, n);
    let mut eta_inv = QMatrix::zeros(n, n);
    eta.set(0, n - 1, Q::one());
    eta.set(n - 1, 0, Q::one());
    eta_inv.set(0, n - 1, Q::one());
    eta_inv.set(n - 1, 0, Q::one());
    for (x, &(p, k)) in twisted.iter().enumerate() {
        let a = c.orders[p];
        let y = twisted.iter().position(|&(pp, kk)| pp == p && kk == a - k).unwrap();
        eta.set(x + 1, y + 1, q(1, a as i64));
        eta_inv.set(x + 1, y + 1, qi(a as i64));
    }
    Grading { curve: c.clone(), flat, full, euler, chi, z_degree, eta, eta_inv, twisted }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
    #[serde(rename = "none")]
    NonPolynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub polynomial: bool,
    pub family: Family,
}

/// Which genus-0 P¹-orbifolds have a polynomial potential.
pub fn classify_polynomial(orders: &[u32]) -> Classification {
    let mut o = orders.to_vec();
    o.sort_unstable();
    let family = match o.as_slice() {
        [] | [_] | [_, _] => Family::A,
        [2, 2, _] => Family::D,
        [2, 3, 3] | [2, 3, 4] | [2, 3, 5] => Family::E,
        _ => Family::NonPolynomial,
    };
    Classification { polynomial: family != Family::NonPolynomial, family }
}

/// Branch data of degree `d` over points of the given orders, parts bounded by
/// the orders, satisfying Riemann–Hurwitz for a connected genus-`g` cover of a
/// genus-`base_genus` surface.
pub fn enumerate_profiles_on(base_genus: u32, orders: &[u32], d: u32, g: i64) -> Vec<BranchData> {
    let target = 2 * g - 2 + d as i64 * (2 - 2 * base_genus as i64);
    if target < 0 {
        return Vec::new();
    }
    let options: Vec<Vec<Partition>> = orders.iter().map(|&a| partitions_bounded(d, a)).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Partition> = Vec::new();
    fn rec(options: &[Vec<Partition>], i: usize, rem: i64, cur: &mut Vec<Partition>, d: u32, out: &mut Vec<BranchData>) {
        if i == options.len() {
            if rem == 0 {
                out.push(BranchData { profiles: cur.clone(), degree: d });
            }
            return;
        }
        // each later point contributes at most d − ⌈d/α⌉; prune on the remaining budget
        let max_rest: i64 = options[i..].iter().map(|o| o.iter().map(|p| p.ramification() as i64).max().unwrap_or(0)).sum();
        if rem > max_rest {
            return;
        }
        for p in &options[i] {
            let r = p.ramification() as i64;
            if r <= rem {
                cur.push(p.clone());
                rec(options, i + 1, rem - r, cur, d, out);
                cur.pop();
            }
        }
    }
    rec(&options, 0, target, &mut cur, d, &mut out);
    out
}

/// Genus-0 covers of P¹.
pub fn enumerate_profiles(orders: &[u32], d: u32, g: i64) -> Vec<BranchData> {
    enumerate_profiles_on(0, orders, d, g)
}

/// Largest degree carrying any genus-0 profile, for polynomial spheres.
pub fn max_profile_degree(orders: &[u32]) -> Option<u32> {
    if !classify_polynomial(orders).polynomial {
        return None;
    }
    let chi = Orbicurve { base_genus: 0, orders: orders.to_vec() }.euler_characteristic();
    // deg Q^d = −2χd ≥ −4 for a genus-0 monomial
    let bound = (qi(2) / chi).floor().to_integer();
    let bound: u32 = bound.try_into().unwrap_or(u32::MAX);
    (1..=bound).rev().find(|&d| !enumerate_profiles(orders, d, 0).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_p1_222() {
        let g = grading_and_euler(&Orbicurve::sphere(&[2, 2, 2]).unwrap());
        assert_eq!(g.flat.names(), &["t0", "t[1,1]", "t[1,2]", "t[1,3]", "s"]);
        assert_eq!(g.flat.degree(1), &qi(-1));
        assert_eq!(g.z_degree, qi(-1));
        assert_eq!(g.chi, q(1, 2));
        assert_eq!(g.eta.get(1, 1), &q(1, 2));
        assert_eq!(g.eta.mul(&g.eta_inv), QMatrix::identity(5));
    }

    #[test]
    fn smooth_sphere() {
        let g = grading_and_euler(&Orbicurve::sphere(&[]).unwrap());
        assert_eq!(g.z_degree, qi(-4));
        assert_eq!(g.eta.get(0, 1), &qi(1));
    }

    #[test]
    fn classification() {
        assert_eq!(classify_polynomial(&[2, 3, 5]).family, Family::E);
        assert!(!classify_polynomial(&[2, 3, 6]).polynomial);
        assert_eq!(classify_polynomial(&[7, 11]).family, Family::A);
        assert_eq!(classify_polynomial(&[5, 2, 2]).family, Family::D);
        assert!(!classify_polynomial(&[2, 2, 2, 2]).polynomial);
    }

    #[test]
    fn profiles_222() {
        assert_eq!(enumerate_profiles(&[2, 2, 2], 2, 0).len(), 3);
        assert!(enumerate_profiles(&[2, 2, 2], 3, 0).is_empty());
        let one = enumerate_profiles(&[3, 4, 5], 1, 0);
        assert_eq!(one.len(), 1);
        assert!(one[0].profiles.iter().all(|p| p.parts() == [1]));
        assert_eq!(max_profile_degree(&[2, 2, 2]), Some(4));
        assert_eq!(max_profile_degree(&[2, 3, 3]), Some(12));
        assert_eq!(max_profile_degree(&[2, 2, 4]), Some(8));
        assert_eq!(max_profile_degree(&[2, 3, 6]), None);
    }
}
