use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::bundle::SeifertBundle;
use super::fourier::{zero_mode_of_product, FourierSeriesPoly};
use crate::algebra::rational::to_f64;
use crate::algebra::{qi, SparsePoly, VarSet, Q};
use crate::error::{Error, Result};
use crate::orbigw::{classify_polynomial, grading_and_euler, GWPotential, Grading};

pub const DEFAULT_MODES: u32 = 5;
pub const QUADRATURE_POINTS: usize = 2048;

/// A base class that receives a loop `t_n + u_n(x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopVariable {
    pub name: String,
    /// The flat coordinate of the base it replaces.
    pub flat: String,
    #[serde(with = "crate::algebra::rational::serde_q")]
    pub shift: Q,
    /// Mode `k` oscillates as `e^{±ik·step·x}`; `step = ι`, or 1 on the untwisted sector.
    #[serde(with = "crate::algebra::rational::serde_q")]
    pub step: Q,
}

#[derive(Clone, Debug)]
pub struct SftHamiltonian {
    pub bundle: SeifertBundle,
    pub modes: u32,
    pub vars: Arc<VarSet>,
    pub loops: Vec<LoopVariable>,
    pub hamiltonian: SparsePoly,
    /// Terms containing a mode-`K` variable; these are the first to change when `K` grows.
    pub boundary_terms: usize,
    /// Whether the variable degrees make the Hamiltonian comparable to the slice (needs `c₁ ≠ 0`).
    pub graded: bool,
}

impl SftHamiltonian {
    pub fn t_index(&self, n: usize) -> usize {
        n
    }

    pub fn p_index(&self, k: u32, n: usize) -> usize {
        p_slot(self.loops.len(), self.modes, k, n)
    }

    pub fn q_index(&self, k: u32, n: usize) -> usize {
        self.p_index(k, n) + 1
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bundle": self.bundle,
            "c1": crate::algebra::rational::fmt_q(&self.bundle.chern_class()),
            "K": self.modes,
            "loops": self.loops,
            "hamiltonian": self.hamiltonian.to_json(),
            "boundary_terms": self.boundary_terms,
        })
    }
}

/// Variables are `t[0..L]`, then `p[k,n], q[k,n]` for each `n`, `k = 1..=K`.
fn p_slot(loops: usize, modes: u32, k: u32, n: usize) -> usize {
    loops + 2 * (n * modes as usize + (k as usize - 1))
}

/// The derivative of the potential along `direction` (flat coordinates, `s` last), at `s = 0`.
/// Along `s` it acts as `Q∂_Q`, since `Q = e^{s}z`. Defaults to the `s` direction.
pub fn potential_slice(f: &GWPotential, direction: Option<&[Q]>) -> Result<SparsePoly> {
    if f.curve.base_genus != 0 || f.genus != 0 {
        return Err(Error::Invalid("SFT Hamiltonians need a genus-0 potential of a genus-0 base".into()));
    }
    if !classify_polynomial(&f.curve.orders).polynomial {
        return Err(Error::Invalid(format!("{} has no polynomial potential", f.curve.label())));
    }
    let g = f.grading();
    let n = g.dim();
    let mut dir = vec![Q::zero(); n];
    dir[g.s()] = Q::one();
    if let Some(d) = direction {
        if d.len() != n {
            return Err(Error::Invalid(format!("direction has {} entries, expected {n}", d.len())));
        }
        dir = d.to_vec();
    }
    let full = f.full();
    let mut out = SparsePoly::zero(&g.full);
    for (i, c) in dir.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut d = full.derivative(i);
        if i == g.s() {
            d.add_assign_ref(&full.log_derivative(g.q_index()));
        }
        out.add_scaled(&d, c);
    }
    Ok(out.partial_eval(&[(g.s(), Q::zero())]))
}

fn loop_variables(g: &Grading) -> Vec<LoopVariable> {
    let mut out = vec![LoopVariable { name: "t[0]".into(), flat: g.flat.name(0).to_string(), shift: Q::zero(), step: Q::one() }];
    for (x, &(p, k)) in g.twisted.iter().enumerate() {
        let shift = crate::algebra::q(k as i64, g.curve.orders[p] as i64);
        out.push(LoopVariable { name: format!("t[{}]", x + 1), flat: g.flat.name(x + 1).to_string(), shift: shift.clone(), step: shift });
    }
    out
}

/// `κ = 2χ/c₁`: the degree carried by the phase `e^{iθx}` is `κθ`.
fn phase_degree(g: &Grading, c1: &Q) -> Option<Q> {
    (!c1.is_zero()).then(|| qi(2) * &g.chi / c1)
}

fn hamiltonian_vars(g: &Grading, loops: &[LoopVariable], modes: u32, kappa: Option<&Q>) -> Arc<VarSet> {
    let mut vars: Vec<(String, Q)> = loops.iter().enumerate().map(|(n, _)| (format!("t[{n}]"), g.flat.degree(n).clone())).collect();
    for (n, l) in loops.iter().enumerate() {
        let base = g.flat.degree(n).clone();
        for k in 1..=modes {
            let shift = kappa.map(|kp| kp * qi(k as i64) * &l.step).unwrap_or_else(Q::zero);
            vars.push((format!("p[{k},{n}]"), &base - &shift));
            vars.push((format!("q[{k},{n}]"), &base + &shift));
        }
    }
    VarSet::new(vars)
}

/// Zero mode of the slice after `t_n → t_n + u_n(x)` and `z^d → e^{−ic₁dx}`, with modes `k ≤ K`.
pub fn sft_hamiltonian(bundle: &SeifertBundle, slice: &SparsePoly, modes: u32) -> Result<SftHamiltonian> {
    if modes == 0 {
        return Err(Error::Invalid("at least one Fourier mode is needed".into()));
    }
    let g = grading_and_euler(&bundle.base());
    if slice.vars().names() != g.full.names() {
        return Err(Error::Invalid(format!("slice is not over the flat variables of {}", bundle.base().label())));
    }
    let c1 = bundle.chern_class();
    let n_period = bundle.period_multiplier();
    let kappa = phase_degree(&g, &c1);
    let loops = loop_variables(&g);
    let vars = hamiltonian_vars(&g, &loops, modes, kappa.as_ref());
    let series: Vec<FourierSeriesPoly> = loops
        .iter()
        .enumerate()
        .map(|(n, l)| {
            let mut u = FourierSeriesPoly::constant(SparsePoly::var(&vars, n), n_period);
            for k in 1..=modes {
                let theta = qi(k as i64) * &l.step;
                let pi = p_slot(loops.len(), modes, k, n);
                u.add_assign_ref(&FourierSeriesPoly::mode(&-&theta, SparsePoly::var(&vars, pi + 1), n_period)?);
                u.add_assign_ref(&FourierSeriesPoly::mode(&theta, SparsePoly::var(&vars, pi), n_period)?);
            }
            Ok(u)
        })
        .collect::<Result<_>>()?;
    let s_idx = g.s();
    let q_idx = g.q_index();
    let terms: Vec<(&Vec<u32>, &Q)> = slice.terms().iter().collect();
    let parts: Vec<SparsePoly> = terms
        .par_iter()
        .map(|(m, c)| -> Result<SparsePoly> {
            if m[s_idx] > 0 {
                return Ok(SparsePoly::zero(&vars));
            }
            let mut factors = Vec::new();
            for (n, &e) in m.iter().take(loops.len()).enumerate() {
                factors.extend(std::iter::repeat_n(series[n].clone(), e as usize));
            }
            if m[q_idx] > 0 {
                let theta = -(&c1 * qi(m[q_idx] as i64));
                factors.push(FourierSeriesPoly::mode(&theta, SparsePoly::one(&vars), n_period)?);
            }
            Ok(zero_mode_of_product(&factors, &vars, n_period).scale(c))
        })
        .collect::<Result<_>>()?;
    let mut hamiltonian = SparsePoly::zero(&vars);
    for p in &parts {
        hamiltonian.add_assign_ref(p);
    }
    let boundary: Vec<usize> = (0..loops.len()).map(|n| p_slot(loops.len(), modes, modes, n)).collect();
    let boundary_terms = hamiltonian.terms().keys().filter(|m| boundary.iter().any(|&i| m[i] > 0 || m[i + 1] > 0)).count();
    Ok(SftHamiltonian { bundle: bundle.clone(), modes, vars, loops, hamiltonian, boundary_terms, graded: kappa.is_some() })
}

/// Value of the substituted slice at `x`; `values` follows the Hamiltonian variables.
pub fn substituted_value(h: &SftHamiltonian, slice: &SparsePoly, x: f64, values: &[f64]) -> Complex64 {
    let g = grading_and_euler(&h.bundle.base());
    let mut point = vec![Complex64::zero(); g.full.len()];
    for (n, l) in h.loops.iter().enumerate() {
        let step = to_f64(&l.step);
        let mut v = Complex64::new(values[h.t_index(n)], 0.0);
        for k in 1..=h.modes {
            let ph = k as f64 * step * x;
            v += values[h.q_index(k, n)] * Complex64::from_polar(1.0, -ph) + values[h.p_index(k, n)] * Complex64::from_polar(1.0, ph);
        }
        point[n] = v;
    }
    point[g.q_index()] = Complex64::from_polar(1.0, -to_f64(&h.bundle.chern_class()) * x);
    slice.eval_c64(&point)
}

/// Trapezoidal average of the substituted slice over `[0, 2πN]`.
pub fn quadrature_average(h: &SftHamiltonian, slice: &SparsePoly, values: &[f64], points: usize) -> Complex64 {
    let period = 2.0 * PI * h.bundle.period_multiplier() as f64;
    let sum: Complex64 = (0..points).map(|j| substituted_value(h, slice, period * j as f64 / points as f64, values)).sum();
    sum / points as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadratureReport {
    pub samples: usize,
    pub points: usize,
    pub max_relative_error: f64,
    /// Exact zero mode and quadrature value at the worst sample.
    pub worst: (f64, [f64; 2]),
}

impl QuadratureReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_relative_error < tol
    }
}

/// Values in `[−1, 1]` from a fixed-seed generator.
pub fn random_assignment(h: &SftHamiltonian, seed: u64) -> Vec<f64> {
    let mut state = seed ^ 0x9e37_79b9_7f4a_7c15;
    (0..h.vars.len())
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}

/// Compares the exact zero mode against quadrature. The error is relative to `max(1, |H|)`.
pub fn quadrature_check(h: &SftHamiltonian, slice: &SparsePoly, samples: usize, seed: u64) -> QuadratureReport {
    let mut report = QuadratureReport { samples, points: QUADRATURE_POINTS, max_relative_error: 0.0, worst: (0.0, [0.0; 2]) };
    for i in 0..samples {
        let values = random_assignment(h, seed.wrapping_add(i as u64));
        let exact = h.hamiltonian.eval_f64(&values);
        let numeric = quadrature_average(h, slice, &values, QUADRATURE_POINTS);
        let err = (numeric - Complex64::new(exact, 0.0)).norm() / exact.abs().max(1.0);
        if err >= report.max_relative_error {
            report.max_relative_error = err;
            report.worst = (exact, [numeric.re, numeric.im]);
        }
    }
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationReport {
    pub modes: Vec<u32>,
    pub term_counts: Vec<usize>,
    pub monotone: bool,
}

/// Raising `K` only adds terms: every coefficient of `H_K` reappears unchanged in `H_{K'}`,
/// and `H_{K'}` restricted to modes `≤ K` is `H_K`.
pub fn truncation_monotonicity(bundle: &SeifertBundle, slice: &SparsePoly, modes: &[u32]) -> Result<TruncationReport> {
    let hs = modes.iter().map(|&k| sft_hamiltonian(bundle, slice, k)).collect::<Result<Vec<_>>>()?;
    let mut monotone = true;
    for w in hs.windows(2) {
        let (small, big) = (&w[0], &w[1]);
        let embedded = small.hamiltonian.embed(&big.vars)?;
        let mut restricted = SparsePoly::zero(&big.vars);
        let keep = |m: &Vec<u32>| (0..big.loops.len()).all(|n| (small.modes + 1..=big.modes).all(|k| m[big.p_index(k, n)] == 0 && m[big.q_index(k, n)] == 0));
        let counts: BTreeMap<bool, usize> = big.hamiltonian.terms().keys().fold(BTreeMap::new(), |mut acc, m| {
            *acc.entry(keep(m)).or_default() += 1;
            acc
        });
        for (m, c) in big.hamiltonian.terms() {
            if keep(m) {
                restricted.add_term(m.clone(), c.clone());
            }
        }
        monotone &= restricted == embedded && counts.get(&true).copied().unwrap_or(0) == small.hamiltonian.len();
    }
    Ok(TruncationReport { modes: modes.to_vec(), term_counts: hs.iter().map(|h| h.hamiltonian.len()).collect(), monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::hurwitz::HurwitzEngine;
    use crate::orbigw::{assemble_potential, tabulated_potential, Cutoff, Orbicurve};
    use crate::seifert::shipped_bundles;

    fn smooth_slice() -> SparsePoly {
        let c = Orbicurve::sphere(&[]).unwrap();
        let f = assemble_potential(&c, 0, Cutoff::Degree(1), &[], &HurwitzEngine::default()).unwrap();
        potential_slice(&f, None).unwrap()
    }

    #[test]
    fn smooth_prequantization() {
        let slice = smooth_slice();
        assert_eq!(slice.to_string(), "1/2*t0^2 + Q");
        let h = sft_hamiltonian(&shipped_bundles()[0], &slice, 3).unwrap();
        let want = parse_poly("1/2*t[0]^2 + p[1,0]*q[1,0] + p[2,0]*q[2,0] + p[3,0]*q[3,0]", &h.vars).unwrap();
        assert_eq!(h.hamiltonian, want);
        assert_eq!(h.boundary_terms, 1);
    }

    #[test]
    fn constant_substitution() {
        let f = tabulated_potential(&[2, 2, 2]).unwrap();
        let slice = potential_slice(&f, None).unwrap();
        let h = sft_hamiltonian(&shipped_bundles()[1], &slice, 2).unwrap();
        let pq: Vec<(usize, Q)> = (h.loops.len()..h.vars.len()).map(|i| (i, Q::zero())).collect();
        let zeroed = h.hamiltonian.partial_eval(&pq);
        // c₁ = 3/2 ≠ 0: only the z-free part survives
        let g = f.grading();
        let z_free = slice.partial_eval(&[(g.q_index(), Q::zero())]);
        let images: Vec<SparsePoly> =
            (0..g.full.len()).map(|i| if i < h.loops.len() { SparsePoly::var(&h.vars, i) } else { SparsePoly::zero(&h.vars) }).collect();
        assert_eq!(zeroed, z_free.compose(&images, &h.vars));
    }

    #[test]
    fn quadrature_agrees() {
        let slice = smooth_slice();
        let h = sft_hamiltonian(&shipped_bundles()[0], &slice, 3).unwrap();
        assert!(quadrature_check(&h, &slice, 3, 1).passes(1e-8));
    }
}
