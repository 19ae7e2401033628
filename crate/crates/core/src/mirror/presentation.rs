use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::rational::factorial;
use crate::algebra::{groebner_quotient, qi, MonomialOrder, QuotientAlgebra, SparsePoly, Q};
use crate::error::{Error, Result};
use crate::tripoly::space::xyz;
use crate::tripoly::{flat_chart_polys, jacobian_algebra, TriPolyPoint, TriPolySpace};

/// `(r−k−1)! / (k!(r−2k)!)`.
fn coefficient(r: u32, k: u32) -> Q {
    let num = factorial((r - k - 1) as u64);
    let den: BigInt = factorial(k as u64) * factorial((r - 2 * k) as u64);
    Q::new(num, den)
}

fn qpow(q: &Q, e: u32) -> Q {
    num_traits::pow(q.clone(), e as usize)
}

/// Quantum algebra of `P¹_{2,2,r}` at the point with `t[1,1] = a`, `t[1,2] = b`.
#[derive(Clone, Debug)]
pub struct QuantumPresentation {
    pub r: u32,
    pub a: Q,
    pub b: Q,
    pub q: Q,
    pub relations: Vec<SparsePoly>,
    pub algebra: QuotientAlgebra,
}

/// The three defining relations over `x, y, z`. At `q = 0` they reduce to `xy, xz, yz`.
pub fn presentation_relations(r: u32, a: &Q, b: &Q, q: &Q) -> Result<Vec<SparsePoly>> {
    if r < 2 {
        return Err(Error::Invalid("the presentation needs r ≥ 2".into()));
    }
    let v = xyz();
    let ri = qi(r as i64);
    let mut r1 = SparsePoly::monomial(&v, vec![1, 1, 0], Q::one());
    r1.add_term(vec![0, 0, r - 1], -&ri * q);
    for k in 1..=(r - 1) / 2 {
        let sign = if k % 2 == 1 { Q::one() } else { -Q::one() };
        let c = &ri * sign * qi((r - 2 * k) as i64) * coefficient(r, k) * qpow(q, 2 * k + 1);
        r1.add_term(vec![0, 0, r - 2 * k - 1], c);
    }
    let mut r2 = SparsePoly::monomial(&v, vec![1, 0, 1], Q::one());
    r2.add_term(vec![0, 1, 0], -qi(2) * q);
    r2.add_term(vec![0, 0, 0], -(b * q));
    let mut r3 = SparsePoly::monomial(&v, vec![0, 1, 1], Q::one());
    r3.add_term(vec![1, 0, 0], -qi(2) * q);
    r3.add_term(vec![0, 0, 0], -(a * q));
    Ok(vec![r1, r2, r3])
}

pub fn quantum_presentation(r: u32, a: &Q, b: &Q, q: &Q) -> Result<QuantumPresentation> {
    if q.is_zero() {
        return Err(Error::Invalid("the quantum presentation needs q ≠ 0; use presentation_relations for q = 0".into()));
    }
    let relations = presentation_relations(r, a, b, q)?;
    let algebra = groebner_quotient(&relations, MonomialOrder::DegRevLex)?;
    if algebra.dim() != (r + 3) as usize {
        return Err(Error::Invalid(format!("presentation quotient has dimension {} instead of {}", algebra.dim(), r + 3)));
    }
    Ok(QuantumPresentation { r, a: a.clone(), b: b.clone(), q: q.clone(), relations, algebra })
}

/// The tri-polynomial point mirror to `(a, b, q)` on `P¹_{2,2,r}`.
#[derive(Clone, Debug)]
pub struct MirrorPoint {
    pub r: u32,
    pub a: Q,
    pub b: Q,
    pub q: Q,
    pub space: TriPolySpace,
    /// The flat-chart image of the orbifold point, `e^{d} = q`.
    pub point: TriPolyPoint,
    /// `c₀` of `point` minus the constant of the displayed `F_m`; nonzero only for even `r`.
    pub constant_shift: Q,
}

impl MirrorPoint {
    /// The displayed `F_m`, without the constant that places it at the flat origin.
    pub fn displayed_point(&self) -> TriPolyPoint {
        let mut p = self.point.clone();
        p.c[0] -= &self.constant_shift;
        p
    }
}

/// `c_{r−2k} = (−1)^k r (r−k−1)!/(k!(r−2k)!) q^{2k}` with `e^{d} = q`, which at `q = 1`
/// is the displayed `F_m`. The point is obtained by inverting the flat chart at
/// `γ = 0`, `α₁ = a`, `β₁ = b`.
pub fn mirror_point(r: u32, a: &Q, b: &Q, q: &Q) -> Result<MirrorPoint> {
    if q.is_zero() {
        return Err(Error::Invalid("mirror point needs q ≠ 0".into()));
    }
    let space = TriPolySpace::new(2, 2, r)?;
    let chart = flat_chart_polys(&space)?;
    let mut flat = vec![Q::zero(); space.dimension() - 1];
    flat[1] = a.clone();
    flat[2] = b.clone();
    let point = chart.inverse(&flat, q)?;
    let mut displayed = vec![Q::zero(); r as usize];
    for k in 1..=(r - 1) / 2 {
        let sign = if k % 2 == 1 { -Q::one() } else { Q::one() };
        displayed[(r - 2 * k) as usize] = sign * qi(r as i64) * coefficient(r, k) * qpow(q, 2 * k);
    }
    let constant_shift = &point.c[0] - &displayed[0];
    let mut expect = displayed.clone();
    expect[0] = point.c[0].clone();
    if point.c != expect || point.a != [a.clone()] || point.b != [b.clone()] {
        return Err(Error::Solve(format!("flat origin for r = {r} does not have the displayed form of F_m")));
    }
    Ok(MirrorPoint { r, a: a.clone(), b: b.clone(), q: q.clone(), space, point, constant_shift })
}

/// Result of comparing two quotient algebras along a generator map.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraComparison {
    pub equal: bool,
    pub dim_a: usize,
    pub dim_b: usize,
    /// Relations of the first algebra that do not vanish in the second.
    pub failing_relations: usize,
    pub worst_mismatch: Option<String>,
}

/// Sends the generators of `a`'s ring to `images` in `b`'s ring. When every defining
/// relation of `a` vanishes in `b` and the dimensions agree, the induced map is an
/// isomorphism (the images must generate `b`, which holds for `x, y, λz`, `λ ≠ 0`).
pub fn compare_algebras(a: &QuotientAlgebra, b: &QuotientAlgebra, images: &[SparsePoly]) -> AlgebraComparison {
    let mut failing = 0;
    let mut worst: Option<SparsePoly> = None;
    for g in &a.groebner_basis {
        let img = g.compose(images, &b.vars);
        let nf = b.normal_form(&img);
        if !nf.is_zero() {
            failing += 1;
            if worst.as_ref().is_none_or(|w| nf.len() > w.len()) {
                worst = Some(nf);
            }
        }
    }
    AlgebraComparison {
        equal: failing == 0 && a.dim() == b.dim(),
        dim_a: a.dim(),
        dim_b: b.dim(),
        failing_relations: failing,
        worst_mismatch: worst.map(|p| p.to_string()),
    }
}

/// Quantum presentation against the Jacobian algebra at the mirror point, `z ↦ qz`.
pub fn compare_presentation_with_mirror(r: u32, a: &Q, b: &Q, q: &Q) -> Result<AlgebraComparison> {
    let pres = quantum_presentation(r, a, b, q)?;
    let m = mirror_point(r, a, b, q)?;
    let jac = jacobian_algebra(&m.space, &m.point)?;
    let v = xyz();
    let images = vec![SparsePoly::var(&v, 0), SparsePoly::var(&v, 1), SparsePoly::var(&v, 2).scale(q)];
    Ok(compare_algebras(&pres.algebra, &jac, &images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, q};

    #[test]
    fn relations_r3() {
        let rel = presentation_relations(3, &qi(0), &qi(0), &qi(1)).unwrap();
        let v = xyz();
        assert_eq!(rel[0], parse_poly("x*y - 3*z^2 + 3", &v).unwrap());
        assert_eq!(rel[1], parse_poly("x*z - 2*y", &v).unwrap());
        assert_eq!(rel[2], parse_poly("y*z - 2*x", &v).unwrap());
        assert_eq!(quantum_presentation(3, &qi(0), &qi(0), &qi(1)).unwrap().algebra.dim(), 6);
        assert_eq!(quantum_presentation(2, &qi(0), &qi(0), &qi(1)).unwrap().algebra.dim(), 5);
    }

    #[test]
    fn classical_limit() {
        let rel = presentation_relations(4, &qi(1), &qi(2), &qi(0)).unwrap();
        let v = xyz();
        assert_eq!(rel, vec![parse_poly("x*y", &v).unwrap(), parse_poly("x*z", &v).unwrap(), parse_poly("y*z", &v).unwrap()]);
        assert!(quantum_presentation(4, &qi(1), &qi(2), &qi(0)).is_err());
    }

    #[test]
    fn displayed_mirror_points() {
        let m = mirror_point(3, &qi(0), &qi(0), &qi(1)).unwrap();
        assert_eq!(m.point.c, vec![qi(0), qi(-3), qi(0)]);
        assert!(m.constant_shift.is_zero());
        let m = mirror_point(2, &qi(1), &qi(2), &qi(1)).unwrap();
        assert_eq!(m.displayed_point().c, vec![qi(0), qi(0)]);
        assert_eq!(m.constant_shift, qi(-2));
        let m = mirror_point(4, &qi(0), &qi(0), &qi(1)).unwrap();
        assert_eq!(m.point.c, vec![qi(2), qi(0), qi(-4), qi(0)]);
    }

    #[test]
    fn presentation_equals_jacobian() {
        for (r, a, b) in [(2, qi(1), qi(2)), (5, q(1, 3), qi(-2)), (4, qi(0), qi(0))] {
            let c = compare_presentation_with_mirror(r, &a, &b, &qi(1)).unwrap();
            assert!(c.equal, "r={r}: {c:?}");
        }
        // away from q = 1 the rescaled point still matches
        assert!(compare_presentation_with_mirror(3, &qi(1), &qi(-1), &q(2, 3)).unwrap().equal);
    }

    #[test]
    fn self_comparison() {
        let p = quantum_presentation(3, &qi(1), &qi(1), &qi(1)).unwrap();
        let v = xyz();
        let id: Vec<SparsePoly> = (0..3).map(|i| SparsePoly::var(&v, i)).collect();
        let c = compare_algebras(&p.algebra, &p.algebra, &id);
        assert!(c.equal && c.failing_relations == 0);
    }
}
