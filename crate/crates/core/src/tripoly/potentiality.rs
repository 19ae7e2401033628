// tensor code reads best with explicit indices
#![allow(clippy::needless_range_loop)]

use num_traits::{One, Zero};
use serde::Serialize;

use super::space::{TriPolyPoint, TriPolySpace};
use super::spectrum::FlatPointData;
use crate::algebra::rational::to_f64;
use crate::algebra::{QMatrix, Q};
use crate::error::{Error, Result};

/// Outcome of the finite-difference potentiality test over a set of samples.
#[derive(Clone, Debug, Serialize)]
pub struct PotentialityReport {
    pub samples: usize,
    /// Largest `|∂_l c_{ijk} − ∂_i c_{ljk}|`.
    pub max_asymmetry: f64,
    pub worst: (usize, usize, usize, usize),
    /// Largest deviation of `c_{ijk}` from total symmetry at the samples.
    pub max_c_asymmetry: f64,
    /// Largest deviation of the unit's flat components from those at the first sample.
    pub unit_variation: f64,
    /// Largest deviation of the flat pairing from its value at the first sample.
    pub pairing_variation: f64,
    /// Largest `|g(u∘v,w) − g(u,v∘w)|` on standard monomials.
    pub invariance_defect: f64,
}

impl PotentialityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_asymmetry < tol && self.max_c_asymmetry < tol && self.unit_variation < tol && self.pairing_variation < tol && self.invariance_defect < tol
    }
}

fn shifted(space: &TriPolySpace, pt: &TriPolyPoint, dir: &[Q], h: &Q) -> Result<TriPolyPoint> {
    let mut v = pt.values();
    let e = space.d_index();
    for (i, d) in dir.iter().enumerate() {
        if i == e {
            // ∂_d = E∂_E
            let f = &v[e] * d * h;
            v[e] += f;
        } else {
            v[i] += d * h;
        }
    }
    TriPolyPoint::from_values(space, &v)
}

fn max_dev(a: &QMatrix, b: &QMatrix) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..a.rows {
        for j in 0..a.cols {
            m = m.max(to_f64(&(a.get(i, j) - b.get(i, j))).abs());
        }
    }
    m
}

type Derivatives = Vec<Vec<Vec<Vec<Q>>>>;

/// Central differences `∂_l c_{ijk}` with step `h` along each flat direction.
fn central_differences(space: &TriPolySpace, pt: &TriPolyPoint, ji: &QMatrix, h: &Q) -> Result<Derivatives> {
    let n = space.dimension();
    let two_h = Q::from_integer(2.into()) * h;
    let mut dc = vec![vec![vec![vec![Q::zero(); n]; n]; n]; n];
    for (l, slot) in dc.iter_mut().enumerate() {
        let dir = ji.column(l);
        let plus = FlatPointData::new(space, &shifted(space, pt, &dir, h)?)?.c_lower();
        let minus = FlatPointData::new(space, &shifted(space, pt, &dir, &-h)?)?.c_lower();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    slot[i][j][k] = (&plus[i][j][k] - &minus[i][j][k]) / &two_h;
                }
            }
        }
    }
    Ok(dc)
}

/// Checks that the unit is flat, the flat pairing is constant, and that `∂_l c_{ijk}` is
/// totally symmetric, by extrapolated central differences of step `h` in flat coordinates.
pub fn potentiality_check(space: &TriPolySpace, samples: &[TriPolyPoint], h: &Q) -> Result<PotentialityReport> {
    if samples.is_empty() {
        return Err(Error::Invalid("potentiality check needs at least one sample".into()));
    }
    let n = space.dimension();
    let c0 = space.c_offset();
    let mut rep = PotentialityReport {
        samples: samples.len(),
        max_asymmetry: 0.0,
        worst: (0, 0, 0, 0),
        max_c_asymmetry: 0.0,
        unit_variation: 0.0,
        pairing_variation: 0.0,
        invariance_defect: 0.0,
    };
    let mut first: Option<(QMatrix, Vec<Q>)> = None;
    for pt in samples {
        let base = FlatPointData::new(space, pt)?;
        rep.invariance_defect = rep.invariance_defect.max(to_f64(&base.data.invariance_defect()));
        let unit = base.chart.jacobian.column(c0);
        match &first {
            None => first = Some((base.eta.clone(), unit)),
            Some((eta0, u0)) => {
                rep.pairing_variation = rep.pairing_variation.max(max_dev(&base.eta, eta0));
                for (a, b) in unit.iter().zip(u0) {
                    rep.unit_variation = rep.unit_variation.max(to_f64(&(a - b)).abs());
                }
            }
        }
        let c = base.c_lower();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    rep.max_c_asymmetry = rep.max_c_asymmetry.max(to_f64(&(&c[i][j][k] - &c[j][i][k])).abs());
                    rep.max_c_asymmetry = rep.max_c_asymmetry.max(to_f64(&(&c[i][j][k] - &c[i][k][j])).abs());
                }
            }
        }
        let ji = base.chart.jacobian.inverse()?;
        // dc[l][i][j][k] = ∂_l c_{ijk}, Richardson-extrapolated so the h² error cancels
        let half = h / Q::from_integer(2.into());
        let coarse = central_differences(space, pt, &ji, h)?;
        let fine = central_differences(space, pt, &ji, &half)?;
        let (three, four) = (Q::from_integer(3.into()), Q::from_integer(4.into()));
        let mut dc = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        dc[l][i][j][k] = to_f64(&((&four * &fine[l][i][j][k] - &coarse[l][i][j][k]) / &three));
                    }
                }
            }
        }
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let d = (dc[l][i][j][k] - dc[i][l][j][k]).abs();
                        if d > rep.max_asymmetry {
                            rep.max_asymmetry = d;
                            rep.worst = (i, j, k, l);
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Default step `10⁻⁵`.
pub fn default_step() -> Q {
    Q::one() / Q::from_integer(100_000.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tripoly::flat::sample_points;

    #[test]
    fn p222_is_potential() {
        let s = TriPolySpace::new(2, 2, 2).unwrap();
        let rep = potentiality_check(&s, &sample_points(&s, 3, 1), &default_step()).unwrap();
        assert!(rep.passes(1e-6), "{rep:?}");
        assert!(rep.max_c_asymmetry < 1e-10);
        assert!(rep.unit_variation < 1e-9);
    }
}
