use num_traits::Zero;

use super::potential::GWPotential;
use super::wdvv::third_derivatives;
use crate::algebra::{QMatrix, Q};
use crate::error::{Error, Result};

/// Quantum product at a point: `mult[i]` is multiplication by `∂_i`, with
/// `mult[i][k][j] = c_{ij}^k`; `u` is multiplication by the Euler field.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumStructure {
    pub c_lower: Vec<Vec<Vec<Q>>>,
    pub mult: Vec<QMatrix>,
    pub u: QMatrix,
}

/// `point` gives all flat coordinates (the `s` entry is ignored; use `q` for e^{s}z).
pub fn quantum_structure(f: &GWPotential, point: &[Q], q: &Q) -> Result<QuantumStructure> {
    let g = f.grading();
    let n = g.dim();
    if point.len() != n {
        return Err(Error::Invalid(format!("point has {} coordinates, expected {n}", point.len())));
    }
    let d3 = third_derivatives(&f.full(), &f.frame());
    let mut x: Vec<Q> = point.to_vec();
    x[g.s()] = Q::zero();
    x.push(q.clone());
    let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
    for (&(i, j, k), p) in &d3 {
        let v = p.eval(&x);
        for (a, b, cc) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            c[a][b][cc] = v.clone();
        }
    }
    let mult: Vec<QMatrix> = (0..n)
        .map(|i| {
            let lower = QMatrix::from_rows(c[i].clone());
            // rows j, columns l: c_{ijl}; raise l with η^{-1}
            let raised = lower.mul(&g.eta_inv);
            raised.transpose()
        })
        .collect();
    let e = g.euler_vector(point);
    let mut u = QMatrix::zeros(n, n);
    for (i, ei) in e.iter().enumerate() {
        if !ei.is_zero() {
            u = u.add(&mult[i].scale(ei));
        }
    }
    Ok(QuantumStructure { c_lower: c, mult, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};
    use crate::orbigw::fixtures::tabulated_potential;

    #[test]
    fn u0_corners() {
        for (orders, r) in [([2, 2, 2], 2i64), ([2, 2, 3], 3), ([2, 2, 4], 4)] {
            let f = tabulated_potential(&orders).unwrap();
            let n = f.grading().dim();
            let s = quantum_structure(&f, &vec![Q::zero(); n], &qi(1)).unwrap();
            assert_eq!(s.u.get(0, n - 1), &qi(4 * r));
            assert_eq!(s.u.get(n - 1, 0), &q(1, r));
        }
    }

    #[test]
    fn unit_acts_as_identity() {
        let f = tabulated_potential(&[2, 3, 3]).unwrap();
        let n = f.grading().dim();
        let pt: Vec<Q> = (0..n).map(|i| q(i as i64 + 1, 7)).collect();
        let s = quantum_structure(&f, &pt, &q(2, 3)).unwrap();
        assert_eq!(s.mult[0], QMatrix::identity(n));
    }
}
