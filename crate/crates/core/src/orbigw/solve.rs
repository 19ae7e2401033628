use std::collections::BTreeMap;

use num_traits::One;

use super::cap::CapPotential;
use super::orbicurve::{enumerate_profiles, grading_and_euler, Orbicurve};
use super::potential::{cap_series_at, degree_bound, frame_for, Cutoff, GWPotential};
use super::wdvv::{coefficient_equations, solve_graded, wdvv_residuals, GradedUnknowns};
use crate::algebra::{SparsePoly, Q};
use crate::error::{Error, Result};
use crate::hurwitz::{BranchData, HurwitzEngine, HurwitzQuery};

/// Hurwitz coefficients recovered from associativity alone.
#[derive(Clone, Debug)]
pub struct HurwitzSolution {
    pub entries: Vec<(BranchData, Q)>,
    pub potential: GWPotential,
}

/// Treats every genus-0 Hurwitz coefficient as unknown and fixes them degree by
/// degree through WDVV. Degree 1 is pinned to its assembled value: shifting `s`
/// rescales all degrees at once, so WDVV cannot see it.
pub fn solve_hurwitz_by_wdvv(curve: &Orbicurve, caps: &[CapPotential], engine: &HurwitzEngine) -> Result<HurwitzSolution> {
    let g = grading_and_euler(curve);
    let dmax = degree_bound(curve, 0, Cutoff::Exact)?;
    let jobs: Vec<BranchData> = (1..=dmax).flat_map(|d| enumerate_profiles(&curve.orders, d, 0)).collect();
    let names: Vec<(String, Q)> = (0..jobs.len()).map(|i| (format!("h{i}"), Q::from_integer(0.into()))).collect();
    let vars = g.full.extended(names);
    let base = g.full.len();

    let mut skeleton = GWPotential { curve: curve.clone(), genus: 0, classical: SparsePoly::zero(&g.flat), quantum: BTreeMap::new() };
    let mut m = vec![0; g.dim()];
    m[g.t0()] = 2;
    m[g.s()] = 1;
    skeleton.classical.add_term(m, Q::one() / Q::from_integer(2.into()));
    let known_part = {
        let mut a = SparsePoly::zero(&g.flat);
        for (r, cap) in caps.iter().enumerate() {
            let images: Vec<SparsePoly> =
                (0..cap.alpha).map(|k| if k == 0 { SparsePoly::var(&g.flat, 0) } else { SparsePoly::var(&g.flat, g.index(k, r).unwrap()) }).collect();
            a.add_assign_ref(&cap.a_terms.compose(&images, &g.flat));
        }
        a
    };
    skeleton.quantum.insert(0, known_part);
    let mut f = skeleton.full().embed(&vars)?;
    let mut grades = Vec::new();
    let mut fixed = BTreeMap::new();
    for (i, data) in jobs.iter().enumerate() {
        let mut prod = SparsePoly::one(&g.flat);
        for (r, mu) in data.profiles.iter().enumerate() {
            for &j in mu.parts() {
                prod = prod.mul_ref(&cap_series_at(&caps[r], j, &g, r));
            }
        }
        let mut mono = vec![0; vars.len()];
        mono[g.q_index()] = data.degree;
        mono[base + i] = 1;
        f.add_assign_ref(&prod.embed(&vars)?.mul_mono(&mono, &Q::one()));
        grades.push(data.degree);
        if data.degree == 1 {
            fixed.insert(base + i, engine.hurwitz_number(&HurwitzQuery::new(0, 0, data.clone(), true))?);
        }
    }
    let residuals: Vec<SparsePoly> = wdvv_residuals(&f, &frame_for(&g)).into_iter().map(|(_, r)| r).collect();
    let outer: Vec<usize> = (0..base).collect();
    let eqs = coefficient_equations(&residuals, &outer);
    let unknowns = GradedUnknowns { indices: (base..base + jobs.len()).collect(), grades };
    let sol = solve_graded(&eqs, &unknowns, &fixed).map_err(|e| Error::Solve(format!("{}: {e}", curve.label())))?;
    let values: Vec<(usize, Q)> = sol.iter().map(|(i, v)| (*i, v.clone())).collect();
    let solved = f.partial_eval(&values);
    let kept: Vec<String> = g.full.names().to_vec();
    let solved = SparsePoly::from_terms(&g.full, solved.terms().iter().map(|(m, c)| (m[..kept.len()].to_vec(), c.clone())));
    let potential = GWPotential::from_full(curve.clone(), 0, &solved)?;
    let entries = jobs.into_iter().enumerate().map(|(i, b)| (b, sol[&(base + i)].clone())).collect();
    Ok(HurwitzSolution { entries, potential })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::orbigw::cap::{cap_potential, CapMode};
    use crate::orbigw::fixtures::tabulated_potential;

    #[test]
    fn recovers_222() {
        let c = Orbicurve::sphere(&[2, 2, 2]).unwrap();
        let caps: Vec<_> = (0..3).map(|_| cap_potential(2, CapMode::Fixture).unwrap()).collect();
        let s = solve_hurwitz_by_wdvv(&c, &caps, &HurwitzEngine::default()).unwrap();
        let top = s.entries.iter().find(|(b, _)| b.degree == 4).unwrap();
        assert_eq!(top.1, q(1, 4));
        assert_eq!(s.potential, tabulated_potential(&[2, 2, 2]).unwrap());
    }
}
