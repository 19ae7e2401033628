// tensor code reads best with explicit indices
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use num_traits::Zero;

use super::flat::{flat_chart_polys, FlatChart};
use super::frobenius::FrobeniusPointData;
use super::space::{TriPolyPoint, TriPolySpace};
use crate::algebra::{eigenvalues_numeric, min_gap, QMatrix, Q};
use crate::error::Result;

/// The Frobenius structure at a point written in the flat basis.
#[derive(Clone, Debug)]
pub struct FlatPointData {
    pub data: FrobeniusPointData,
    pub chart: FlatChart,
    /// Algebra coordinates of `∂/∂t_a`, one column per flat coordinate.
    pub frame: QMatrix,
    pub eta: QMatrix,
    /// `mult[i][k][j] = c_{ij}^k`.
    pub mult: Vec<QMatrix>,
    /// Multiplication by the class of `F`.
    pub u: QMatrix,
}

impl FlatPointData {
    pub fn new(space: &TriPolySpace, pt: &TriPolyPoint) -> Result<Self> {
        let data = FrobeniusPointData::new(space, pt)?;
        let chart = flat_chart_polys(space)?.at(pt)?;
        let ji = chart.jacobian.inverse()?;
        let frame = data.tangents.mul(&ji);
        let frame_inv = frame.inverse()?;
        let eta = frame.transpose().mul(&data.pairing).mul(&frame);
        let alg = &data.algebra;
        let mult = (0..frame.cols)
            .map(|i| {
                let w = alg.from_coords(&frame.column(i));
                frame_inv.mul(&alg.mult_matrix(&w)).mul(&frame)
            })
            .collect();
        let f = alg.from_coords(&data.euler_class);
        let u = frame_inv.mul(&alg.mult_matrix(&f)).mul(&frame);
        Ok(FlatPointData { data, chart, frame, eta, mult, u })
    }

    /// `c_{ijk} = η(∂_i∘∂_j, ∂_k)`.
    pub fn c_lower(&self) -> Vec<Vec<Vec<Q>>> {
        let n = self.mult.len();
        let lowered: Vec<QMatrix> = self.mult.iter().map(|m| self.eta.mul(m)).collect();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| lowered[i].get(k, j).clone()).collect()).collect()).collect()
    }

    /// `Σ_a E^a ∂_a∘` with the Euler field of the space, to compare with `u`.
    pub fn euler_multiplication(&self, space: &TriPolySpace) -> QMatrix {
        let n = self.mult.len();
        let coeff = flat_euler_coefficients(space);
        let mut out = QMatrix::zeros(n, n);
        for a in 0..n {
            let e = if a == n - 1 { coeff[a].clone() } else { &coeff[a] * &self.chart.values[a] };
            if !e.is_zero() {
                out = out.add(&self.mult[a].scale(&e));
            }
        }
        out
    }
}

/// Euler coefficients of the flat coordinates in flat order; the last entry is κ.
pub fn flat_euler_coefficients(space: &TriPolySpace) -> Vec<Q> {
    let e = space.euler_coefficients();
    space.flat_to_param().iter().map(|&p| e[p].clone()).collect()
}

/// `U` in the flat basis with its eigenvalues and their smallest pairwise gap.
#[derive(Clone, Debug)]
pub struct USpectrum {
    pub u: QMatrix,
    pub eigenvalues: Vec<Complex64>,
    pub gap: f64,
}

pub fn u_operator_spectrum(space: &TriPolySpace, pt: &TriPolyPoint) -> Result<USpectrum> {
    let fp = FlatPointData::new(space, pt)?;
    let eigenvalues = eigenvalues_numeric(&fp.u, 1e-12)?;
    let gap = min_gap(&eigenvalues);
    Ok(USpectrum { u: fp.u, eigenvalues, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;
    use crate::tripoly::flat::sample_points;

    #[test]
    fn euler_field_is_multiplication_by_f() {
        for (p, qq, r) in [(2, 2, 3), (2, 3, 3), (3, 2, 1)] {
            let s = TriPolySpace::new(p, qq, r).unwrap();
            for pt in sample_points(&s, 2, 11) {
                let fp = FlatPointData::new(&s, &pt).unwrap();
                assert_eq!(fp.euler_multiplication(&s), fp.u, "{}", s.label());
            }
        }
    }

    #[test]
    fn unit_is_first_flat_direction() {
        let s = TriPolySpace::new(2, 2, 4).unwrap();
        let pt = &sample_points(&s, 1, 2)[0];
        let fp = FlatPointData::new(&s, pt).unwrap();
        assert_eq!(fp.mult[0], QMatrix::identity(s.dimension()));
    }

    #[test]
    fn spectrum_traces_critical_values() {
        let s = TriPolySpace::new(2, 2, 4).unwrap();
        let pt = TriPolyPoint::new(&s, vec![qi(1)], vec![qi(2)], vec![qi(2), qi(0), qi(-4), qi(0)], qi(1)).unwrap();
        let sp = u_operator_spectrum(&s, &pt).unwrap();
        assert!(sp.gap > 1e-6);
        let data = FrobeniusPointData::new(&s, &pt).unwrap();
        let sum: Complex64 = data.critical_points(1e-9).unwrap().iter().map(|c| c.value).sum();
        assert!((sum.re - crate::algebra::rational::to_f64(&sp.u.trace())).abs() < 1e-8);
    }
}
