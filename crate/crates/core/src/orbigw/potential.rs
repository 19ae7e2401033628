use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::cap::CapPotential;
use super::orbicurve::{classify_polynomial, enumerate_profiles_on, grading_and_euler, max_profile_degree, Grading, Orbicurve};
use super::wdvv::{wdvv_residuals, Direction, Frame};
use crate::algebra::{q, SparsePoly, Q};
use crate::error::{Error, Result};
use crate::hurwitz::{BranchData, HurwitzEngine, HurwitzQuery};

/// Orbifold GW potential, one genus at a time.
///
/// Polynomials live over the flat variables (`t0`, `t[k,i]`, `s`).
/// `quantum[d]` is the coefficient of `Q^d = e^{ds} z^d`; degree 0 holds the
/// cap terms.
#[derive(Clone, Debug, PartialEq)]
pub struct GWPotential {
    pub curve: Orbicurve,
    pub genus: u32,
    pub classical: SparsePoly,
    pub quantum: BTreeMap<u32, SparsePoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cutoff {
    /// Every degree admitting profiles; polynomial spheres only.
    Exact,
    Degree(u32),
}

impl Cutoff {
    pub const DEFAULT_DEGREE: u32 = 12;
}

impl GWPotential {
    pub fn grading(&self) -> Grading {
        grading_and_euler(&self.curve)
    }

    pub fn max_degree(&self) -> u32 {
        self.quantum.keys().copied().max().unwrap_or(0)
    }

    /// Whole potential over `flat ∪ {Q}`.
    pub fn full(&self) -> SparsePoly {
        let g = self.grading();
        let mut f = self.classical.embed(&g.full).expect("classical over flat variables");
        for (d, p) in &self.quantum {
            let mut qm = vec![0; g.full.len()];
            qm[g.q_index()] = *d;
            f.add_assign_ref(&p.embed(&g.full).expect("flat variables").mul_mono(&qm, &Q::one()));
        }
        f
    }

    pub fn from_full(curve: Orbicurve, genus: u32, f: &SparsePoly) -> Result<Self> {
        let g = grading_and_euler(&curve);
        let f = f.embed(&g.full)?;
        let qi = g.q_index();
        let s = g.s();
        let mut classical = SparsePoly::zero(&g.flat);
        let mut quantum: BTreeMap<u32, SparsePoly> = BTreeMap::new();
        for (m, c) in f.terms() {
            let d = m[qi];
            let flat = m[..qi].to_vec();
            if d == 0 && m[s] > 0 {
                classical.add_term(flat, c.clone());
            } else {
                quantum.entry(d).or_insert_with(|| SparsePoly::zero(&g.flat)).add_term(flat, c.clone());
            }
        }
        quantum.retain(|_, p| !p.is_zero());
        Ok(GWPotential { curve, genus, classical, quantum })
    }

    /// Monomials of the genus-0 potential whose degree is not −4.
    pub fn inhomogeneous_terms(&self) -> Vec<(Vec<u32>, Q)> {
        let target = Q::from_integer((-4 + 4 * self.genus as i64).into());
        self.full().inhomogeneous_terms(&target)
    }

    pub fn frame(&self) -> Frame {
        frame_for(&self.grading())
    }

    pub fn wdvv_residuals(&self) -> Vec<((usize, usize, usize, usize), SparsePoly)> {
        wdvv_residuals(&self.full(), &self.frame())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "orbifold": self.curve.orders,
            "base_genus": self.curve.base_genus,
            "genus": self.genus,
            "classical": self.classical.to_json(),
            "quantum": self.quantum.iter().map(|(d, p)| json!({"d": d, "poly": p.to_json()})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("potential JSON: {what}"));
        let orders: Vec<u32> =
            serde_json::from_value(v.get("orbifold").cloned().ok_or_else(|| bad("missing orbifold"))?).map_err(|_| bad("orbifold must be a list of orders"))?;
        let base_genus = v.get("base_genus").and_then(Value::as_u64).unwrap_or(0) as u32;
        let genus = v.get("genus").and_then(Value::as_u64).ok_or_else(|| bad("missing genus"))? as u32;
        let curve = Orbicurve::new(base_genus, orders)?;
        let g = grading_and_euler(&curve);
        let classical = SparsePoly::from_json(v.get("classical").ok_or_else(|| bad("missing classical"))?, &g.flat)?;
        let mut quantum = BTreeMap::new();
        for t in v.get("quantum").and_then(Value::as_array).ok_or_else(|| bad("missing quantum"))? {
            let d = t.get("d").and_then(Value::as_u64).ok_or_else(|| bad("quantum entry without d"))? as u32;
            let p = SparsePoly::from_json(t.get("poly").ok_or_else(|| bad("quantum entry without poly"))?, &g.flat)?;
            quantum.insert(d, p);
        }
        Ok(GWPotential { curve, genus, classical, quantum })
    }
}

pub fn frame_for(g: &Grading) -> Frame {
    let n = g.dim();
    let mut dirs: Vec<Direction> = (0..n - 1).map(Direction::Partial).collect();
    dirs.push(Direction::Divisor { s: g.s(), q: g.q_index() });
    Frame::new(dirs, &g.eta_inv)
}

/// `B̂` of a cap rewritten into the variables of point `point`.
pub fn cap_series_at(cap: &CapPotential, j: u32, g: &Grading, point: usize) -> SparsePoly {
    let images: Vec<SparsePoly> = (0..cap.alpha)
        .map(|k| match k {
            0 => SparsePoly::var(&g.flat, g.t0()),
            k => SparsePoly::var(&g.flat, g.index(k, point).expect("variable of this point")),
        })
        .collect();
    cap.b_hat(j).compose(&images, &g.flat)
}

fn cap_a_terms_at(cap: &CapPotential, g: &Grading, point: usize) -> SparsePoly {
    let images: Vec<SparsePoly> = (0..cap.alpha)
        .map(|k| match k {
            0 => SparsePoly::var(&g.flat, g.t0()),
            k => SparsePoly::var(&g.flat, g.index(k, point).unwrap()),
        })
        .collect();
    cap.a_terms.compose(&images, &g.flat)
}

/// `∏_r ∏_{parts j of μ_r} B̂^{(r)}_j`.
pub fn profile_product(caps: &[CapPotential], g: &Grading, data: &BranchData) -> SparsePoly {
    let mut p = SparsePoly::one(&g.flat);
    for (r, mu) in data.profiles.iter().enumerate() {
        for &j in mu.parts() {
            p = p.mul_ref(&cap_series_at(&caps[r], j, g, r));
        }
    }
    p
}

/// Resolves the cutoff to a concrete maximal degree.
pub fn degree_bound(curve: &Orbicurve, genus: u32, cutoff: Cutoff) -> Result<u32> {
    match cutoff {
        Cutoff::Degree(d) => Ok(d),
        Cutoff::Exact => {
            if curve.base_genus != 0 || genus != 0 || !classify_polynomial(&curve.orders).polynomial {
                return Err(Error::Invalid(format!("exact mode needs a polynomial genus-0 sphere; {} at genus {genus} is not", curve.label())));
            }
            Ok(max_profile_degree(&curve.orders).unwrap_or(0))
        }
    }
}

/// Closed-form assembly of caps and connected Hurwitz numbers.
pub fn assemble_potential(curve: &Orbicurve, genus: u32, cutoff: Cutoff, caps: &[CapPotential], engine: &HurwitzEngine) -> Result<GWPotential> {
    if caps.len() != curve.orders.len() {
        return Err(Error::Invalid(format!("{} caps supplied for {} orbifold points", caps.len(), curve.orders.len())));
    }
    for (c, &a) in caps.iter().zip(&curve.orders) {
        if c.alpha != a {
            return Err(Error::Invalid(format!("cap of order {} supplied for a point of order {a}", c.alpha)));
        }
    }
    let g = grading_and_euler(curve);
    let dmax = degree_bound(curve, genus, cutoff)?;
    let mut classical = SparsePoly::zero(&g.flat);
    let mut quantum: BTreeMap<u32, SparsePoly> = BTreeMap::new();
    if genus == 0 {
        let mut m = vec![0; g.dim()];
        m[g.t0()] = 2;
        m[g.s()] = 1;
        classical.add_term(m, q(1, 2));
        let mut a = SparsePoly::zero(&g.flat);
        for (r, cap) in caps.iter().enumerate() {
            a.add_assign_ref(&cap_a_terms_at(cap, &g, r));
        }
        if !a.is_zero() {
            quantum.insert(0, a);
        }
    } else if genus == 1 {
        let mut m = vec![0; g.dim()];
        m[g.s()] = 1;
        classical.add_term(m, q(-1, 24));
    }
    let jobs: Vec<(u32, BranchData)> =
        (1..=dmax).flat_map(|d| enumerate_profiles_on(curve.base_genus, &curve.orders, d, genus as i64).into_iter().map(move |b| (d, b))).collect();
    let terms: Result<Vec<(u32, SparsePoly)>> = jobs
        .par_iter()
        .map(|(d, data)| {
            let h = engine.hurwitz_number(&HurwitzQuery::new(curve.base_genus, genus as i64, data.clone(), true))?;
            if h.is_zero() {
                return Ok((*d, SparsePoly::zero(&g.flat)));
            }
            Ok((*d, profile_product(caps, &g, data).scale(&h)))
        })
        .collect();
    for (d, p) in terms? {
        if !p.is_zero() {
            quantum.entry(d).or_insert_with(|| SparsePoly::zero(&g.flat)).add_assign_ref(&p);
        }
    }
    quantum.retain(|_, p| !p.is_zero());
    Ok(GWPotential { curve: curve.clone(), genus, classical, quantum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbigw::cap::{cap_potential, CapMode};

    fn caps(orders: &[u32]) -> Vec<CapPotential> {
        orders.iter().map(|&a| cap_potential(a, CapMode::Fixture).unwrap()).collect()
    }

    #[test]
    fn smooth_sphere_degree_one() {
        let c = Orbicurve::sphere(&[]).unwrap();
        let f = assemble_potential(&c, 0, Cutoff::Degree(1), &[], &HurwitzEngine::default()).unwrap();
        assert_eq!(f.classical.to_string(), "1/2*t0^2*s");
        assert_eq!(f.quantum.len(), 1);
        assert!(f.quantum[&1].is_constant() && f.quantum[&1].constant_term().is_one());
        assert!(f.wdvv_residuals().is_empty());
    }

    #[test]
    fn p1_222_homogeneous_and_associative() {
        let c = Orbicurve::sphere(&[2, 2, 2]).unwrap();
        let f = assemble_potential(&c, 0, Cutoff::Exact, &caps(&[2, 2, 2]), &HurwitzEngine::default()).unwrap();
        assert!(f.inhomogeneous_terms().is_empty());
        assert!(f.wdvv_residuals().is_empty());
        assert_eq!(f.quantum[&4].constant_term(), q(1, 4));
    }

    #[test]
    fn json_roundtrip() {
        let c = Orbicurve::sphere(&[2, 2, 3]).unwrap();
        let f = assemble_potential(&c, 0, Cutoff::Exact, &caps(&[2, 2, 3]), &HurwitzEngine::default()).unwrap();
        assert_eq!(GWPotential::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn exact_mode_rejects_non_polynomial() {
        let c = Orbicurve::sphere(&[2, 3, 6]).unwrap();
        assert!(assemble_potential(&c, 0, Cutoff::Exact, &[], &HurwitzEngine::default()).is_err());
    }
}
