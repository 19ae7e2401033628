// tensor code reads best with explicit indices
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::space::{superpotential, tangent_vectors, xyz, TriPolyPoint, TriPolySpace};
use crate::algebra::eigen::{eigenvalues_f64, eigenvector};
use crate::algebra::rational::to_f64;
use crate::algebra::{groebner_quotient, min_gap, MonomialOrder, QMatrix, QuotientAlgebra, SparsePoly, Q};
use crate::error::{Error, Result};

/// Jacobian algebra of `F` at a point with its residue pairing.
#[derive(Clone, Debug)]
pub struct FrobeniusPointData {
    pub space: TriPolySpace,
    pub point: TriPolyPoint,
    pub superpotential: SparsePoly,
    pub algebra: QuotientAlgebra,
    /// `res(h) = residue[k]·coords(h)_k`.
    pub residue: Vec<Q>,
    /// Pairing on the standard-monomial basis.
    pub pairing: QMatrix,
    pub unit: Vec<Q>,
    /// Normal form of `F`.
    pub euler_class: Vec<Q>,
    /// Algebra coordinates of the parameter tangent vectors, one column each.
    pub tangents: QMatrix,
}

/// `C[x,y,z]/(∂_xF, ∂_yF, ∂_zF)`; fails unless its dimension is `p+q+r−1`.
pub fn jacobian_algebra(space: &TriPolySpace, pt: &TriPolyPoint) -> Result<QuotientAlgebra> {
    pt.check(space)?;
    let f = superpotential(space, pt);
    let gens: Vec<SparsePoly> = (0..3).map(|i| f.derivative(i)).collect();
    let alg = groebner_quotient(&gens, MonomialOrder::DegRevLex).map_err(|e| match e {
        Error::PositiveDimensional(v) => Error::Degenerate(format!("Jacobian ideal is not zero-dimensional (no pure power of {v})")),
        other => other,
    })?;
    if alg.dim() != space.dimension() {
        return Err(Error::Degenerate(format!("Jacobian algebra of {} has dimension {} instead of {}", space.label(), alg.dim(), space.dimension())));
    }
    Ok(alg)
}

fn hessian(f: &SparsePoly) -> SparsePoly {
    let h: Vec<Vec<SparsePoly>> = (0..3).map(|i| (0..3).map(|j| f.derivative(i).derivative(j)).collect()).collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| &h[1][a].mul_ref(&h[2][b]) - &h[1][c].mul_ref(&h[2][d]);
    let mut det = h[0][0].mul_ref(&minor(1, 2, 2, 1));
    det.add_scaled(&h[0][1].mul_ref(&minor(0, 2, 2, 0)), &-Q::one());
    det.add_assign_ref(&h[0][2].mul_ref(&minor(0, 1, 1, 0)));
    det
}

impl FrobeniusPointData {
    pub fn new(space: &TriPolySpace, pt: &TriPolyPoint) -> Result<Self> {
        let alg = jacobian_algebra(space, pt)?;
        let f = superpotential(space, pt);
        let mh = alg.mult_matrix(&hessian(&f));
        let mh_inv = mh.inverse().map_err(|_| Error::Degenerate("Hessian is not invertible in the Jacobian algebra".into()))?;
        let n = alg.dim();
        // res(h) = −Tr(M_h M_Hess⁻¹), linear in the coordinates of h
        let residue: Vec<Q> = (0..n).map(|k| -alg.mult_matrix(&alg.basis_poly(k)).mul(&mh_inv).trace()).collect();
        let mut pairing = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let prod = alg.basis_poly(i).mul_ref(&alg.basis_poly(j));
                let v = dot(&residue, &alg.coords(&prod));
                pairing.set(i, j, v.clone());
                pairing.set(j, i, v);
            }
        }
        let unit = alg.coords(&SparsePoly::one(&xyz()));
        let euler_class = alg.coords(&f);
        let tv = tangent_vectors(space, pt);
        let mut tangents = QMatrix::zeros(n, tv.len());
        for (j, t) in tv.iter().enumerate() {
            for (i, c) in alg.coords(t).into_iter().enumerate() {
                tangents.set(i, j, c);
            }
        }
        Ok(FrobeniusPointData { space: *space, point: pt.clone(), superpotential: f, algebra: alg, residue, pairing, unit, euler_class, tangents })
    }

    pub fn residue_of(&self, h: &SparsePoly) -> Q {
        dot(&self.residue, &self.algebra.coords(h))
    }

    /// Exact pairing of the parameter directions `(a, b, c, d)`.
    pub fn parameter_pairing(&self) -> QMatrix {
        self.tangents.transpose().mul(&self.pairing).mul(&self.tangents)
    }

    /// Largest `|g(u∘v, w) − g(u, v∘w)|` over standard-monomial triples.
    pub fn invariance_defect(&self) -> Q {
        let n = self.algebra.dim();
        let mut worst = Q::zero();
        let e = |i: usize| -> Vec<Q> { (0..n).map(|k| if k == i { Q::one() } else { Q::zero() }).collect() };
        for i in 0..n {
            for j in 0..n {
                let uv = self.algebra.product(&e(i), &e(j));
                for k in 0..n {
                    let vw = self.algebra.product(&e(j), &e(k));
                    let lhs = bilinear(&self.pairing, &uv, &e(k));
                    let rhs = bilinear(&self.pairing, &e(i), &vw);
                    let d = (lhs - rhs).abs();
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        worst
    }

    /// Critical points of `F` from the joint eigenvectors of the multiplication matrices.
    pub fn critical_points(&self, tol: f64) -> Result<Vec<CriticalPoint>> {
        let alg = &self.algebra;
        let n = alg.dim();
        let v = xyz();
        // a generic linear form separates the points
        let ell =
            SparsePoly::from_terms(&v, [(vec![1, 0, 0], Q::one()), (vec![0, 1, 0], Q::new(7.into(), 5.into())), (vec![0, 0, 1], Q::new(11.into(), 13.into()))]);
        let mt = alg.mult_matrix(&ell).transpose().to_f64();
        let ev = eigenvalues_f64(&mt, 1e-12)?;
        let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if min_gap(&ev) < tol * scale {
            return Err(Error::Degenerate(format!("critical points are not simple (eigenvalue gap {:.3e}); try a nearby sample point", min_gap(&ev))));
        }
        let unit: Vec<f64> = self.unit.iter().map(to_f64).collect();
        let coords_f = |h: &SparsePoly| -> Vec<f64> { alg.coords(h).iter().map(to_f64).collect() };
        let cx = coords_f(&SparsePoly::var(&v, 0));
        let cy = coords_f(&SparsePoly::var(&v, 1));
        let cz = coords_f(&SparsePoly::var(&v, 2));
        let hess = coords_f(&hessian(&self.superpotential));
        let fval = self.euler_class.iter().map(to_f64).collect::<Vec<_>>();
        let tang: Vec<Vec<f64>> = (0..self.tangents.cols).map(|j| self.tangents.column(j).iter().map(to_f64).collect()).collect();
        let mut out = Vec::with_capacity(n);
        for lam in ev {
            let w = eigenvector(&mt, lam).ok_or_else(|| Error::Degenerate("eigenvector iteration failed".into()))?;
            let norm = cdot(&w, &unit);
            if norm.norm() < 1e-300 {
                return Err(Error::Degenerate("eigenvector orthogonal to the unit".into()));
            }
            let at = |c: &[f64]| cdot(&w, c) / norm;
            out.push(CriticalPoint {
                x: at(&cx),
                y: at(&cy),
                z: at(&cz),
                value: at(&fval),
                hessian: at(&hess),
                tangents: tang.iter().map(|t| at(t)).collect(),
            });
        }
        if let Some(p) = out.iter().find(|p| p.hessian.norm() < tol) {
            return Err(Error::Degenerate(format!("critical point with vanishing Hessian at x = {}", p.x)));
        }
        Ok(out)
    }

    /// Numeric pairing of the parameter directions as a sum over critical points.
    pub fn residue_pairing_numeric(&self, tol: f64) -> Result<Vec<Vec<f64>>> {
        let pts = self.critical_points(tol)?;
        let m = self.tangents.cols;
        let mut g = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                let s: Complex64 = pts.iter().map(|p| p.tangents[i] * p.tangents[j] / p.hessian).sum();
                g[i][j] = -s.re;
            }
        }
        Ok(g)
    }
}

/// A simple critical point of `F`, with the parameter tangent vectors evaluated there.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
    pub value: Complex64,
    pub hessian: Complex64,
    pub tangents: Vec<Complex64>,
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cdot(w: &[Complex64], c: &[f64]) -> Complex64 {
    w.iter().zip(c).map(|(a, b)| a * b).sum()
}

fn bilinear(g: &QMatrix, u: &[Q], v: &[Q]) -> Q {
    dot(u, &g.mul_vec(v))
}

/// Exact residue pairing on the parameter directions.
pub fn residue_pairing(space: &TriPolySpace, pt: &TriPolyPoint) -> Result<QMatrix> {
    Ok(FrobeniusPointData::new(space, pt)?.parameter_pairing())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    fn d_point() -> (TriPolySpace, TriPolyPoint) {
        let s = TriPolySpace::new(2, 2, 2).unwrap();
        let p = TriPolyPoint::new(&s, vec![q(1, 3)], vec![q(2, 5)], vec![q(1, 7), q(-2, 3)], q(3, 2)).unwrap();
        (s, p)
    }

    #[test]
    fn dimensions() {
        let s = TriPolySpace::new(2, 2, 2).unwrap();
        assert_eq!(jacobian_algebra(&s, &TriPolyPoint::origin(&s)).unwrap().dim(), 5);
        let s = TriPolySpace::new(2, 3, 4).unwrap();
        let p = TriPolyPoint::new(&s, vec![qi(1)], vec![q(1, 2), qi(-1)], vec![qi(2), qi(0), q(1, 3), qi(1)], qi(1)).unwrap();
        assert_eq!(jacobian_algebra(&s, &p).unwrap().dim(), 8);
    }

    #[test]
    fn mirror_point_relation() {
        // F = −xyz + x² + y² + z³ − 3z
        let s = TriPolySpace::new(2, 2, 3).unwrap();
        let p = TriPolyPoint::new(&s, vec![qi(0)], vec![qi(0)], vec![qi(0), qi(-3), qi(0)], qi(1)).unwrap();
        let alg = jacobian_algebra(&s, &p).unwrap();
        assert_eq!(alg.dim(), 6);
        // xy = 3z² − 3 holds in the algebra
        let v = xyz();
        let rel = crate::algebra::parse_poly("x*y - 3*z^2 + 3", &v).unwrap();
        assert!(alg.normal_form(&rel).is_zero());
    }

    #[test]
    fn pairing_symmetric_invariant_and_numeric() {
        let (s, p) = d_point();
        let d = FrobeniusPointData::new(&s, &p).unwrap();
        assert!(d.pairing.is_symmetric());
        assert!(d.invariance_defect().is_zero());
        let g = d.parameter_pairing();
        // values from an independent symbolic computation
        assert_eq!(g.get(0, 0), &q(1, 2));
        assert_eq!(g.get(2, 4), &qi(1));
        assert_eq!(g.get(4, 4), &qi(18));
        let num = d.residue_pairing_numeric(1e-9).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((num[i][j] - to_f64(g.get(i, j))).abs() < 1e-9, "{i}{j}");
            }
        }
    }

    #[test]
    fn critical_values_are_f_eigenvalues() {
        let (s, p) = d_point();
        let d = FrobeniusPointData::new(&s, &p).unwrap();
        let mut cv: Vec<Complex64> = d.critical_points(1e-9).unwrap().iter().map(|c| c.value).collect();
        let mut ev = crate::algebra::eigenvalues_numeric(&d.algebra.mult_matrix(&d.superpotential), 1e-12).unwrap();
        let key = |z: &Complex64| (z.re * 1e6).round() as i64 * 1_000_000 + (z.im * 1e6).round() as i64;
        cv.sort_by_key(key);
        ev.sort_by_key(key);
        for (a, b) in cv.iter().zip(&ev) {
            assert!((a - b).norm() < 1e-8);
        }
    }
}
