use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{q, qi, SparsePoly, VarSet, Q};
use crate::error::{Error, Result};
use crate::orbigw::Family;

/// The space `M_{p,q,r}` of tri-polynomials
/// `F = −xyz + Σ a_k x^k + Σ b_k y^k + Σ c_k (e^{d} z)^k` with `a_p = b_q = c_r = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriPolySpace {
    pub p: u32,
    pub q: u32,
    pub r: u32,
}

impl TriPolySpace {
    /// Accepts `(p,q,1)`, `(2,2,r)` and `(2,3,r)` for `r = 3,4,5`.
    pub fn new(p: u32, q: u32, r: u32) -> Result<Self> {
        if p == 0 || q == 0 || r == 0 {
            return Err(Error::Invalid("tri-polynomial degrees must be positive".into()));
        }
        let s = TriPolySpace { p, q, r };
        if s.family_opt().is_none() {
            return Err(Error::Invalid(format!("({p},{q},{r}) is not one of (p,q,1), (2,2,r), (2,3,3), (2,3,4), (2,3,5)")));
        }
        Ok(s)
    }

    fn family_opt(&self) -> Option<Family> {
        match (self.p, self.q, self.r) {
            (_, _, 1) => Some(Family::A),
            (2, 2, _) => Some(Family::D),
            (2, 3, 3..=5) => Some(Family::E),
            _ => None,
        }
    }

    pub fn family(&self) -> Family {
        self.family_opt().expect("validated on construction")
    }

    pub fn dimension(&self) -> usize {
        (self.p + self.q + self.r - 1) as usize
    }

    /// `κ = −1 + 1/p + 1/q + 1/r`, the Euler coefficient of `∂_d`.
    pub fn kappa(&self) -> Q {
        q(1, self.p as i64) + q(1, self.q as i64) + q(1, self.r as i64) - Q::one()
    }

    pub fn n_a(&self) -> usize {
        self.p as usize - 1
    }

    pub fn n_b(&self) -> usize {
        self.q as usize - 1
    }

    /// Index of `c_0` among the parameters.
    pub fn c_offset(&self) -> usize {
        self.n_a() + self.n_b()
    }

    /// Index of the `d` (or `E = e^d`) slot.
    pub fn d_index(&self) -> usize {
        self.dimension() - 1
    }

    /// `a1.., b1.., c0.., E` with their gradings; `deg E = −2κ`.
    pub fn param_vars(&self) -> Arc<VarSet> {
        let mut v: Vec<(String, Q)> = Vec::new();
        for i in 1..self.p {
            v.push((format!("a{i}"), q(2 * i as i64, self.p as i64) - qi(2)));
        }
        for j in 1..self.q {
            v.push((format!("b{j}"), q(2 * j as i64, self.q as i64) - qi(2)));
        }
        for k in 0..self.r {
            v.push((format!("c{k}"), q(2 * k as i64, self.r as i64) - qi(2)));
        }
        v.push(("E".into(), -qi(2) * self.kappa()));
        VarSet::new(v)
    }

    /// Names of the flat coordinates, in the order matching the orbifold side:
    /// `gamma0`, the `alpha`s, the `beta`s, the remaining `gamma`s, `d`.
    pub fn flat_names(&self) -> Vec<String> {
        let mut n = vec!["gamma0".to_string()];
        n.extend((1..self.p).map(|i| format!("alpha{i}")));
        n.extend((1..self.q).map(|j| format!("beta{j}")));
        n.extend((1..self.r).map(|k| format!("gamma{k}")));
        n.push("d".into());
        n
    }

    /// Parameter index carrying the linear part of each flat coordinate.
    pub fn flat_to_param(&self) -> Vec<usize> {
        let mut m = vec![self.c_offset()];
        m.extend(0..self.n_a());
        m.extend(self.n_a()..self.c_offset());
        m.extend(self.c_offset() + 1..self.d_index());
        m.push(self.d_index());
        m
    }

    /// Grading degree of each parameter (`d` has degree 0).
    pub fn param_degrees(&self) -> Vec<Q> {
        let v = self.param_vars();
        let mut d: Vec<Q> = (0..self.d_index()).map(|i| v.degree(i).clone()).collect();
        d.push(Q::zero());
        d
    }

    /// Linear Euler coefficients `(1 − i/p, …)` of the parameters; the `d` slot holds κ.
    pub fn euler_coefficients(&self) -> Vec<Q> {
        let mut e: Vec<Q> = self.param_degrees().iter().map(|d| -d / qi(2)).collect();
        e[self.d_index()] = self.kappa();
        e
    }

    pub fn label(&self) -> String {
        format!("({},{},{})", self.p, self.q, self.r)
    }
}

/// A point of `M_{p,q,r}` with `e^{d}` specialized to a nonzero rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriPolyPoint {
    #[serde(with = "qvec")]
    pub a: Vec<Q>,
    #[serde(with = "qvec")]
    pub b: Vec<Q>,
    #[serde(with = "qvec")]
    pub c: Vec<Q>,
    /// `e^{d}`.
    #[serde(with = "crate::algebra::rational::serde_q", rename = "exp_dlog")]
    pub e: Q,
}

pub(crate) mod qvec {
    use crate::algebra::rational::{fmt_q, parse_q};
    use crate::algebra::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw: Vec<serde_json::Value> = Vec::deserialize(d)?;
        raw.iter()
            .map(|x| match x {
                serde_json::Value::String(s) => parse_q(s).map_err(serde::de::Error::custom),
                serde_json::Value::Number(n) => parse_q(&n.to_string()).map_err(serde::de::Error::custom),
                _ => Err(serde::de::Error::custom("rational expected")),
            })
            .collect()
    }
}

impl TriPolyPoint {
    pub fn new(space: &TriPolySpace, a: Vec<Q>, b: Vec<Q>, c: Vec<Q>, e: Q) -> Result<Self> {
        let pt = TriPolyPoint { a, b, c, e };
        pt.check(space)?;
        Ok(pt)
    }

    /// All parameters zero, `e^{d} = 1`.
    pub fn origin(space: &TriPolySpace) -> Self {
        TriPolyPoint { a: vec![Q::zero(); space.n_a()], b: vec![Q::zero(); space.n_b()], c: vec![Q::zero(); space.r as usize], e: Q::one() }
    }

    pub fn check(&self, space: &TriPolySpace) -> Result<()> {
        if self.a.len() != space.n_a() || self.b.len() != space.n_b() || self.c.len() != space.r as usize {
            return Err(Error::Invalid(format!("a point of {} needs {} a-, {} b- and {} c-coefficients", space.label(), space.n_a(), space.n_b(), space.r)));
        }
        if self.e.is_zero() {
            return Err(Error::Invalid("e^dlog must be nonzero".into()));
        }
        Ok(())
    }

    /// `(a, b, c, E)` in the order of [`TriPolySpace::param_vars`].
    pub fn values(&self) -> Vec<Q> {
        self.a.iter().chain(&self.b).chain(&self.c).chain([&self.e]).cloned().collect()
    }

    pub fn from_values(space: &TriPolySpace, v: &[Q]) -> Result<Self> {
        if v.len() != space.dimension() {
            return Err(Error::Invalid(format!("{} values given for a {}-dimensional space", v.len(), space.dimension())));
        }
        let (na, nb) = (space.n_a(), space.n_b());
        TriPolyPoint::new(space, v[..na].to_vec(), v[na..na + nb].to_vec(), v[na + nb..space.d_index()].to_vec(), v[space.d_index()].clone())
    }
}

pub fn xyz() -> Arc<VarSet> {
    VarSet::ungraded(&["x", "y", "z"])
}

fn univariate(vars: &Arc<VarSet>, var: usize, coeffs: &[Q], scale: &Q, lead: u32) -> SparsePoly {
    let mut f = SparsePoly::zero(vars);
    let mut s = Q::one();
    for (k, c) in coeffs.iter().enumerate() {
        let mut m = vec![0; 3];
        m[var] = k as u32;
        f.add_term(m, c * &s);
        s *= scale;
    }
    let mut m = vec![0; 3];
    m[var] = lead;
    f.add_term(m, scale_pow(scale, lead));
    f
}

fn scale_pow(s: &Q, k: u32) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc * s)
}

/// The tri-polynomial at a point, over `x, y, z`.
pub fn superpotential(space: &TriPolySpace, pt: &TriPolyPoint) -> SparsePoly {
    let v = xyz();
    let mut f = SparsePoly::monomial(&v, vec![1, 1, 1], -Q::one());
    let mut a = vec![Q::zero()];
    a.extend(pt.a.iter().cloned());
    let mut b = vec![Q::zero()];
    b.extend(pt.b.iter().cloned());
    f.add_assign_ref(&univariate(&v, 0, &a, &Q::one(), space.p));
    f.add_assign_ref(&univariate(&v, 1, &b, &Q::one(), space.q));
    f.add_assign_ref(&univariate(&v, 2, &pt.c, &pt.e, space.r));
    f
}

/// `∂F` along each parameter direction: `x^i`, `y^j`, `(Ez)^k` and `E∂_E F`.
pub fn tangent_vectors(space: &TriPolySpace, pt: &TriPolyPoint) -> Vec<SparsePoly> {
    let v = xyz();
    let mut out = Vec::with_capacity(space.dimension());
    for i in 1..space.p {
        out.push(SparsePoly::monomial(&v, vec![i, 0, 0], Q::one()));
    }
    for j in 1..space.q {
        out.push(SparsePoly::monomial(&v, vec![0, j, 0], Q::one()));
    }
    for k in 0..space.r {
        out.push(SparsePoly::monomial(&v, vec![0, 0, k], scale_pow(&pt.e, k)));
    }
    let mut dlog = SparsePoly::zero(&v);
    for k in 1..=space.r {
        let c = if k == space.r { Q::one() } else { pt.c[k as usize].clone() };
        dlog.add_term(vec![0, 0, k], c * qi(k as i64) * scale_pow(&pt.e, k));
    }
    out.push(dlog);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn families_and_dimensions() {
        assert_eq!(TriPolySpace::new(2, 2, 2).unwrap().family(), Family::D);
        assert_eq!(TriPolySpace::new(3, 3, 1).unwrap().family(), Family::A);
        assert_eq!(TriPolySpace::new(2, 3, 4).unwrap().dimension(), 8);
        assert!(TriPolySpace::new(2, 3, 6).is_err());
        assert!(TriPolySpace::new(3, 3, 3).is_err());
    }

    #[test]
    fn superpotential_shape() {
        let s = TriPolySpace::new(2, 2, 3).unwrap();
        let pt = TriPolyPoint::new(&s, vec![qi(1)], vec![qi(2)], vec![qi(0), qi(-3), qi(0)], qi(2)).unwrap();
        let f = superpotential(&s, &pt);
        assert_eq!(f, parse_poly("-x*y*z + x^2 + x + y^2 + 2*y - 6*z + 8*z^3", &xyz()).unwrap());
        let t = tangent_vectors(&s, &pt);
        assert_eq!(t.len(), 6);
        assert_eq!(t[5], parse_poly("-6*z + 24*z^3", &xyz()).unwrap());
    }

    #[test]
    fn flat_order_matches_parameters() {
        let s = TriPolySpace::new(2, 3, 3).unwrap();
        assert_eq!(s.flat_names(), ["gamma0", "alpha1", "beta1", "beta2", "gamma1", "gamma2", "d"]);
        assert_eq!(s.flat_to_param(), vec![3, 0, 1, 2, 4, 5, 6]);
        assert_eq!(s.param_vars().degree(6), &q(-1, 3));
    }
}
