use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{q, Q};
use crate::error::{Error, Result};
use crate::orbigw::Orbicurve;

/// Seifert S¹-orbibundle over a genus-0 orbicurve with invariants `(c, β₁, …, β_a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertBundle {
    pub orders: Vec<u32>,
    /// First Chern class of the de-singularization.
    pub b: i64,
    pub betas: Vec<i64>,
}

impl SeifertBundle {
    pub fn new(orders: Vec<u32>, b: i64, betas: Vec<i64>) -> Result<Self> {
        Orbicurve::sphere(&orders)?;
        if betas.len() != orders.len() {
            return Err(Error::Invalid(format!("{} betas for {} orbifold points", betas.len(), orders.len())));
        }
        Ok(SeifertBundle { orders, b, betas })
    }

    /// From the orbifold Chern class; fails unless `b = c − Σβ_i/α_i` is an integer.
    pub fn from_chern_class(orders: Vec<u32>, c: &Q, betas: Vec<i64>) -> Result<Self> {
        if betas.len() != orders.len() {
            return Err(Error::Invalid(format!("{} betas for {} orbifold points", betas.len(), orders.len())));
        }
        let mut b = c.clone();
        for (&a, &beta) in orders.iter().zip(&betas) {
            b -= q(beta, a as i64);
        }
        if !b.is_integer() {
            return Err(Error::Invalid(format!("de-singularized Chern class {b} is not an integer")));
        }
        let b: i64 = i64::try_from(b.to_integer()).map_err(|_| Error::Invalid("Chern class out of range".into()))?;
        Self::new(orders, b, betas)
    }

    pub fn base(&self) -> Orbicurve {
        Orbicurve { base_genus: 0, orders: self.orders.clone() }
    }

    /// `c = b + Σβ_i/α_i`.
    pub fn chern_class(&self) -> Q {
        let mut c = Q::from_integer(BigInt::from(self.b));
        for (&a, &beta) in self.orders.iter().zip(&self.betas) {
            c += q(beta, a as i64);
        }
        c
    }

    /// `N = α₁⋯α_a`; the loop variable has period `2πN`.
    pub fn period_multiplier(&self) -> u64 {
        self.orders.iter().map(|&a| a as u64).product()
    }

    /// The same orbibundle with the opposite orientation.
    pub fn reversed(&self) -> Self {
        SeifertBundle { orders: self.orders.clone(), b: -self.b, betas: self.betas.iter().map(|x| -x).collect() }
    }

    pub fn label(&self) -> String {
        let betas: Vec<String> = self.betas.iter().map(i64::to_string).collect();
        format!("{} b={} beta=({})", self.base().label(), self.b, betas.join(","))
    }
}

/// One basis class of the orbifold cohomology and its degree shift.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisClass {
    pub label: String,
    /// 1-based orbifold point and sector index, absent for `1` and `[ω]`.
    pub sector: Option<(usize, u32)>,
    #[serde(with = "crate::algebra::rational::serde_q")]
    pub shift: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeifertInvariants {
    #[serde(with = "crate::algebra::rational::serde_q")]
    pub c1: Q,
    pub n: u64,
    pub basis: Vec<BasisClass>,
}

impl SeifertInvariants {
    pub fn shift(&self, point: usize, l: u32) -> Option<&Q> {
        self.basis.iter().find(|c| c.sector == Some((point, l))).map(|c| &c.shift)
    }
}

/// `Δ₁ = 1`, `Δ₂ = [ω]`, then `Δ_{(i,l)}` with `ι_{(i,l)} = l/α_i`.
pub fn basis_classes(orders: &[u32]) -> Vec<BasisClass> {
    let mut out = vec![BasisClass { label: "1".into(), sector: None, shift: Q::zero() }, BasisClass { label: "omega".into(), sector: None, shift: Q::zero() }];
    for (i, &a) in orders.iter().enumerate() {
        for l in 1..a {
            out.push(BasisClass { label: format!("({},{l})", i + 1), sector: Some((i + 1, l)), shift: q(l as i64, a as i64) });
        }
    }
    out
}

pub fn seifert_invariants(bundle: &SeifertBundle) -> SeifertInvariants {
    SeifertInvariants { c1: bundle.chern_class(), n: bundle.period_multiplier(), basis: basis_classes(&bundle.orders) }
}

/// Whether a meromorphic section with orders `k_i` at points of multiplicity `m_i`
/// exists on a degree-`deg` cover: `Σ k_i/m_i = deg·c₁`.
pub fn section_constraint(k: &[i64], m: &[u32], deg: i64, bundle: &SeifertBundle) -> Result<bool> {
    if k.len() != m.len() {
        return Err(Error::Invalid(format!("{} orders for {} multiplicities", k.len(), m.len())));
    }
    if m.contains(&0) {
        return Err(Error::Invalid("multiplicities must be at least 1".into()));
    }
    let lhs: Q = k.iter().zip(m).map(|(&ki, &mi)| q(ki, mi as i64)).sum();
    Ok(lhs == Q::from_integer(deg.into()) * bundle.chern_class())
}

/// Prequantization of the smooth sphere and the `P¹_{2,2,2}` bundle with `b = 0`, `β = (1,1,1)`.
pub fn shipped_bundles() -> Vec<SeifertBundle> {
    vec![SeifertBundle { orders: vec![], b: 1, betas: vec![] }, SeifertBundle { orders: vec![2, 2, 2], b: 0, betas: vec![1, 1, 1] }]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;
    use num_traits::One;

    #[test]
    fn invariants_of_shipped_bundles() {
        let [smooth, d4] = <[SeifertBundle; 2]>::try_from(shipped_bundles()).unwrap();
        let s = seifert_invariants(&smooth);
        assert_eq!((s.c1.clone(), s.n), (qi(1), 1));
        assert_eq!(s.basis.len(), 2);
        let s = seifert_invariants(&d4);
        assert_eq!((s.c1.clone(), s.n), (q(3, 2), 8));
    }

    #[test]
    fn shifts_237() {
        let b = SeifertBundle::new(vec![2, 3, 7], -1, vec![1, 1, 1]).unwrap();
        let s = seifert_invariants(&b);
        assert_eq!(s.shift(2, 1), Some(&q(1, 3)));
        assert_eq!(s.shift(3, 5), Some(&q(5, 7)));
        assert_eq!(s.basis.len(), 2 + 1 + 2 + 6);
        assert!(s.basis.iter().all(|c| c.shift >= Q::zero() && c.shift < Q::one()));
    }

    #[test]
    fn chern_class_roundtrip() {
        let b = SeifertBundle::from_chern_class(vec![2, 2, 2], &q(3, 2), vec![1, 1, 1]).unwrap();
        assert_eq!(b.b, 0);
        assert!(SeifertBundle::from_chern_class(vec![2, 3], &qi(1), vec![1, 1]).is_err());
        assert!(SeifertBundle::new(vec![2], 0, vec![]).is_err());
    }

    #[test]
    fn sections() {
        let smooth = &shipped_bundles()[0];
        assert!(section_constraint(&[1], &[1], 1, smooth).unwrap());
        assert!(section_constraint(&[1, 1], &[2, 2], 1, smooth).unwrap());
        let half = SeifertBundle::new(vec![2], 0, vec![1]).unwrap();
        assert_eq!(half.chern_class(), q(1, 2));
        assert!(!section_constraint(&[1], &[3], 1, &half).unwrap());
        assert!(section_constraint(&[1], &[0], 1, &half).is_err());
    }
}
