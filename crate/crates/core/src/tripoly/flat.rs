// tensor code reads best with explicit indices
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::frobenius::FrobeniusPointData;
use super::space::{TriPolyPoint, TriPolySpace};
use crate::algebra::linalg::solve_sparse;
use crate::algebra::rational::binom_q;
use crate::algebra::{parse_poly, puiseux_at_infinity, q, qi, FractionalSeries, PowerSeries, QMatrix, SparsePoly, VarSet, Q};
use crate::error::{Error, Result};
use crate::orbigw::Family;

/// Flat coordinates as polynomials in `(a, b, c, E)`, `E = e^{d}`.
///
/// `coords` follows [`TriPolySpace::flat_names`] without the final `d`,
/// which is a flat coordinate by itself.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatChartPolys {
    pub space: TriPolySpace,
    pub vars: Arc<VarSet>,
    pub coords: Vec<SparsePoly>,
}

/// Values of the flat coordinates at a point and their Jacobian.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatChart {
    pub names: Vec<String>,
    pub values: Vec<Q>,
    /// Rows: flat coordinates. Columns: `a, b, c, d`, where `∂_d = E∂_E`.
    pub jacobian: QMatrix,
}

// Literal E₆ display; `a2` in the γ₀ term is read as `c2`.
pub const E6_AS_PRINTED: [&str; 6] = ["c0 + 2*b2*c2*E^2 + 6*a1*E^3 - 18*E^6", "a1 - 8*E^3", "b1 - b2^2/6 + 3*c2*E^2", "b2", "c1 - c2^2/6 + 3*b2*E^2", "b2"];

/// The E₆ chart with the sign of `8E³`, the constant `30E⁶` and `γ₂ = c₂` fixed.
pub const E6_CORRECTED: [&str; 6] = ["c0 + 2*b2*c2*E^2 + 6*a1*E^3 + 30*E^6", "a1 + 8*E^3", "b1 - b2^2/6 + 3*c2*E^2", "b2", "c1 - c2^2/6 + 3*b2*E^2", "c2"];

impl FlatChartPolys {
    pub fn from_strings(space: &TriPolySpace, src: &[&str]) -> Result<Self> {
        let vars = space.param_vars();
        if src.len() != space.dimension() - 1 {
            return Err(Error::Invalid(format!("{} needs {} chart polynomials", space.label(), space.dimension() - 1)));
        }
        let coords = src.iter().map(|s| parse_poly(s, &vars)).collect::<Result<_>>()?;
        Ok(FlatChartPolys { space: *space, vars, coords })
    }

    pub fn at(&self, pt: &TriPolyPoint) -> Result<FlatChart> {
        pt.check(&self.space)?;
        let n = self.space.dimension();
        let x = pt.values();
        let e_idx = self.space.d_index();
        let mut values: Vec<Q> = self.coords.iter().map(|c| c.eval(&x)).collect();
        values.push(Q::zero());
        let mut jacobian = QMatrix::zeros(n, n);
        for (i, c) in self.coords.iter().enumerate() {
            for j in 0..n {
                let mut d = c.derivative(j).eval(&x);
                if j == e_idx {
                    d *= &pt.e;
                }
                jacobian.set(i, j, d);
            }
        }
        jacobian.set(n - 1, e_idx, Q::one());
        Ok(FlatChart { names: self.space.flat_names(), values, jacobian })
    }

    /// The point with the given flat coordinates (without `d`) and `e^{d} = e`.
    pub fn inverse(&self, flat: &[Q], e: &Q) -> Result<TriPolyPoint> {
        let n = self.space.dimension();
        if flat.len() != n - 1 {
            return Err(Error::Invalid(format!("{} flat values given, {} expected", flat.len(), n - 1)));
        }
        let lin = self.space.flat_to_param();
        let lead: Vec<Q> = self
            .coords
            .iter()
            .zip(&lin)
            .map(|(c, &j)| {
                let mut m = vec![0; n];
                m[j] = 1;
                c.coeff(&m)
            })
            .collect();
        if lead.iter().any(Q::is_zero) {
            return Err(Error::Invalid("chart without a linear leading term".into()));
        }
        let mut x = vec![Q::zero(); n];
        x[n - 1] = e.clone();
        // the nonlinear part only involves parameters of smaller degree, so this terminates
        for _ in 0..=n {
            let mut changed = false;
            for i in 0..n - 1 {
                let err = &flat[i] - self.coords[i].eval(&x);
                if !err.is_zero() {
                    x[lin[i]] += err / &lead[i];
                    changed = true;
                }
            }
            if !changed {
                return TriPolyPoint::from_values(&self.space, &x);
            }
        }
        Err(Error::Solve("chart inversion did not terminate".into()))
    }
}

impl FlatChart {
    /// Pairing of the flat directions, `J^{-T} G J^{-1}`.
    pub fn flat_pairing(&self, param_pairing: &QMatrix) -> Result<QMatrix> {
        let ji = self.jacobian.inverse()?;
        Ok(ji.transpose().mul(param_pairing).mul(&ji))
    }
}

/// `(p/(p−i))·[x⁰] (xᵖ + Σ a_k x^k + c₀)^{1 − i/p}`, and its `y` analogue.
/// The prefactor makes the linear term exactly `a_i`.
fn residue_coordinates(space: &TriPolySpace, vars: &Arc<VarSet>, which: char) -> Result<Vec<SparsePoly>> {
    let (deg, offset) = match which {
        'a' => (space.p, 0),
        _ => (space.q, space.n_a()),
    };
    let ext = vars.extended([("u", Q::zero())]);
    let u = ext.len() - 1;
    let mut f = SparsePoly::monomial(&ext, unit_mono(ext.len(), u, deg), Q::one());
    for k in 1..deg {
        let mut m = unit_mono(ext.len(), offset + k as usize - 1, 1);
        m[u] = k;
        f.add_term(m, Q::one());
    }
    f.add_term(unit_mono(ext.len(), space.c_offset(), 1), Q::one());
    let mut out = Vec::new();
    for i in 1..deg {
        let e = Q::one() - q(i as i64, deg as i64);
        let s = puiseux_at_infinity(&f, u, &e, &qi(-1))?;
        let c0 = s.coeff_at(&Q::zero()).unwrap_or_else(|| SparsePoly::zero(&ext));
        out.push(c0.scale(&q(deg as i64, (deg - i) as i64)).embed(vars)?);
    }
    Ok(out)
}

fn unit_mono(n: usize, i: usize, e: u32) -> Vec<u32> {
    let mut m = vec![0; n];
    m[i] = e;
    m
}

/// `γ_k = −r·[s^{r−k}] R(s)` with `R = −log(u/s) + h(E²u²)`, where
/// `s = λ^{−1/r}`, `u = 1/(Ez)`, `λ = F(0,0,z)` and `h(y) = log((1+√(1−4y))/2)`.
pub fn gamma_log_expansion(space: &TriPolySpace, vars: &Arc<VarSet>) -> Result<Vec<SparsePoly>> {
    let r = space.r as usize;
    let prec = r + 2;
    let zero = SparsePoly::zero(vars);
    let one = SparsePoly::one(vars);
    let c = |k: usize| SparsePoly::var(vars, space.c_offset() + k);
    // λ = w^r (1 + Σ_j c_{r−j} u^j), w = Ez = 1/u
    let mut base = vec![one.clone()];
    base.extend((1..=r).map(|j| c(r - j)));
    let base = PowerSeries::new(base, prec, &zero);
    let b = base.pow_q(&q(-1, r as i64))?;
    let mut su = vec![zero.clone()];
    su.extend(b.coeffs[..prec - 1].iter().cloned());
    let su = PowerSeries::new(su, prec, &zero);
    let us = su.revert()?;
    let k1 = PowerSeries::new(us.coeffs[1..].to_vec(), prec - 1, &zero);
    let log_k = k1.log1p()?;
    let hq = h_series(prec)?;
    let h = PowerSeries::new(hq.coeffs.iter().map(|x| SparsePoly::constant(vars, x.clone())).collect(), prec, &zero);
    let e2 = SparsePoly::var(vars, space.d_index()).pow(2);
    let inner = us.mul(&us);
    let inner = PowerSeries::new(inner.coeffs.iter().map(|x| x.mul_ref(&e2)).collect(), prec, &zero);
    let hc = h.compose(&inner)?;
    Ok((0..r)
        .map(|k| {
            let j = r - k;
            let rj = &hc.coeff(j) - &log_k.coeff(j);
            rj.scale(&-qi(r as i64))
        })
        .collect())
}

/// `log((1 + √(1−4y))/2)` as a rational power series.
fn h_series(prec: usize) -> Result<PowerSeries<Q>> {
    let z = Q::zero();
    let sq = PowerSeries::new(vec![qi(1), qi(-4)], prec, &z).pow_q(&q(1, 2))?;
    let half = PowerSeries::new(vec![qi(1)], prec, &z).add(&sq).scale(&q(1, 2));
    half.log1p()
}

/// `γ_k = (r/(r−k))·res_{z=∞} F(0,0,z)^{1−k/r} (z²−4)^{−1/2} dz` for `k ≥ 1`, written in `w = Ez`.
pub fn gamma_residue(space: &TriPolySpace, vars: &Arc<VarSet>, k: u32) -> Result<SparsePoly> {
    let r = space.r;
    if k == 0 || k >= r {
        return Err(Error::Invalid(format!("residue formula needs 1 ≤ k < {r}")));
    }
    let ext = vars.extended([("w", Q::zero())]);
    let w = ext.len() - 1;
    let mut lam = SparsePoly::monomial(&ext, unit_mono(ext.len(), w, r), Q::one());
    for j in 0..r {
        let mut m = unit_mono(ext.len(), space.c_offset() + j as usize, 1);
        m[w] = j;
        lam.add_term(m, Q::one());
    }
    let e = Q::one() - q(k as i64, r as i64);
    let trunc = qi(-2);
    let a = puiseux_at_infinity(&lam, w, &e, &trunc)?;
    // w⁻¹ (1 − 4E²/w²)^{−1/2}; the leading exponent of `a` is r − k
    let len = (r - k + 2) as usize;
    let e2 = SparsePoly::var(&ext, space.d_index()).pow(2);
    let mut coeffs = vec![SparsePoly::zero(&ext); len];
    let mut e2k = SparsePoly::one(&ext);
    for j in 0..len {
        if j % 2 == 0 {
            let m = (j / 2) as u64;
            coeffs[j] = e2k.scale(&(binom_q(&q(-1, 2), m) * num_traits::pow(qi(-4), m as usize)));
            e2k = e2k.mul_ref(&e2);
        }
    }
    let b = FractionalSeries { pivot: "w".into(), leading_exponent: qi(-1), step: Q::one(), coeffs, truncation_order: -qi(len as i64) - qi(1) };
    let prod = a.mul(&b)?;
    let res = prod.coeff_at(&qi(-1)).ok_or_else(|| Error::Solve("residue term beyond the expansion".into()))?;
    res.scale(&q(r as i64, (r - k) as i64)).embed(vars)
}

/// Chart for the A and D families from the residue formulas and the log expansion.
fn residue_chart(space: &TriPolySpace) -> Result<FlatChartPolys> {
    let vars = space.param_vars();
    let alphas = residue_coordinates(space, &vars, 'a')?;
    let betas = residue_coordinates(space, &vars, 'b')?;
    let gammas = gamma_log_expansion(space, &vars)?;
    let mut coords = vec![gammas[0].clone()];
    coords.extend(alphas);
    coords.extend(betas);
    coords.extend(gammas[1..].iter().cloned());
    Ok(FlatChartPolys { space: *space, vars, coords })
}

type ChartCache = Mutex<BTreeMap<(u32, u32, u32), FlatChartPolys>>;

fn chart_cache() -> &'static ChartCache {
    static C: OnceLock<ChartCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Flat coordinates of the space: residue formulas for A and D, the corrected closed
/// forms for E₆ and the ansatz solver for E₇, E₈.
pub fn flat_chart_polys(space: &TriPolySpace) -> Result<FlatChartPolys> {
    let key = (space.p, space.q, space.r);
    if let Some(c) = chart_cache().lock().expect("chart cache").get(&key) {
        return Ok(c.clone());
    }
    let chart = match (space.family(), space.r) {
        (Family::E, 3) => FlatChartPolys::from_strings(space, &E6_CORRECTED)?,
        (Family::E, _) => solve_flat_ansatz(space)?,
        _ => residue_chart(space)?,
    };
    chart_cache().lock().expect("chart cache").insert(key, chart.clone());
    Ok(chart)
}

pub fn flat_coordinates(space: &TriPolySpace, pt: &TriPolyPoint) -> Result<FlatChart> {
    flat_chart_polys(space)?.at(pt)
}

/// Deterministic sample points with small-height rational coordinates.
pub fn sample_points(space: &TriPolySpace, count: usize, seed: u64) -> Vec<TriPolyPoint> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as i64
    };
    let n = space.dimension();
    (0..count)
        .map(|_| {
            let mut v: Vec<Q> = (0..n - 1).map(|_| q(next() % 11 - 5, next() % 4 + 1)).collect();
            v.push(q(next() % 4 + 1, next() % 3 + 1));
            TriPolyPoint::from_values(space, &v).expect("sizes match")
        })
        .collect()
}

/// Christoffel symbols of the residue metric in the parameter coordinates at a point,
/// `gamma[k][μ][ν]`, with `∂_d = E∂_E`.
pub fn christoffel(space: &TriPolySpace, pt: &TriPolyPoint) -> Result<Vec<Vec<Vec<Q>>>> {
    let n = space.dimension();
    let degs = space.param_degrees();
    let g0 = FrobeniusPointData::new(space, pt)?.parameter_pairing();
    let mut dg: Vec<QMatrix> = Vec::with_capacity(n);
    let x = pt.values();
    for i in 0..n - 1 {
        let mut bound = (qi(2) / -&degs[i]).floor().to_integer().try_into().unwrap_or(1usize);
        loop {
            // forward differences along the parameter; the last one must vanish
            let mut samples = vec![g0.clone()];
            for h in 1..=bound + 1 {
                let mut y = x.clone();
                y[i] += qi(h as i64);
                samples.push(FrobeniusPointData::new(space, &TriPolyPoint::from_values(space, &y)?)?.parameter_pairing());
            }
            let mut diffs = vec![samples.clone()];
            for _ in 0..=bound {
                let prev = diffs.last().unwrap();
                diffs.push(prev.windows(2).map(|w| w[1].sub(&w[0])).collect());
            }
            if diffs[bound + 1][0] != QMatrix::zeros(n, n) {
                bound += 1;
                if bound > 8 {
                    return Err(Error::Solve("pairing is not polynomial along a parameter line".into()));
                }
                continue;
            }
            let mut d = QMatrix::zeros(n, n);
            for k in 1..=bound {
                let s = if k % 2 == 1 { q(1, k as i64) } else { q(-1, k as i64) };
                d = d.add(&diffs[k][0].scale(&s));
            }
            dg.push(d);
            break;
        }
    }
    // the E-direction from weighted homogeneity of each entry
    let deg_e = -qi(2) * space.kappa();
    let mut de = QMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut v = (-qi(2) - &degs[a] - &degs[b]) * g0.get(a, b);
            for i in 0..n - 1 {
                v -= &degs[i] * &x[i] * dg[i].get(a, b);
            }
            de.set(a, b, v / &deg_e);
        }
    }
    dg.push(de);
    let gi = g0.inverse()?;
    let mut gam = vec![vec![vec![Q::zero(); n]; n]; n];
    for k in 0..n {
        for mu in 0..n {
            for nu in mu..n {
                let mut s = Q::zero();
                for l in 0..n {
                    let gkl = gi.get(k, l);
                    if gkl.is_zero() {
                        continue;
                    }
                    s += gkl * (dg[mu].get(l, nu) + dg[nu].get(l, mu) - dg[l].get(mu, nu));
                }
                s /= qi(2);
                gam[k][nu][mu] = s.clone();
                gam[k][mu][nu] = s;
            }
        }
    }
    Ok(gam)
}

/// Monomials in all parameters and `E` of the given weighted degree with at least two factors.
fn ansatz_monomials(vars: &VarSet, target: &Q) -> Vec<Vec<u32>> {
    let n = vars.len();
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(vars: &VarSet, i: usize, rem: Q, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == vars.len() {
            if rem.is_zero() && cur.iter().sum::<u32>() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        let d = vars.degree(i).clone();
        let mut e = 0u32;
        let mut r = rem.clone();
        // degrees are negative, so the remaining budget only shrinks toward zero
        while r <= Q::zero() {
            cur[i] = e;
            rec(vars, i + 1, r.clone(), cur, out);
            e += 1;
            r -= &d;
        }
        cur[i] = 0;
    }
    rec(vars, 0, target.clone(), &mut cur, &mut out);
    out
}

/// Polynomial flat coordinates found by imposing `∂_μ∂_ν t = Γ^κ_{μν} ∂_κ t` on a graded
/// ansatz at exact sample points, normalized by the linear term.
pub fn solve_flat_ansatz(space: &TriPolySpace) -> Result<FlatChartPolys> {
    let vars = space.param_vars();
    let n = space.dimension();
    let e_idx = space.d_index();
    // degree classes of the parameters
    let mut classes: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for i in 0..n - 1 {
        classes.entry(vars.degree(i).clone()).or_default().push(i);
    }
    struct Class {
        params: Vec<usize>,
        basis: Vec<SparsePoly>,
        rows: Vec<(Vec<(usize, Q)>, Q)>,
        solution: Option<Vec<Vec<Q>>>,
    }
    let mut work: Vec<Class> = classes
        .into_iter()
        .map(|(d, params)| {
            let mut basis: Vec<SparsePoly> = params.iter().map(|&i| SparsePoly::var(&vars, i)).collect();
            basis.extend(ansatz_monomials(&vars, &d).into_iter().map(|m| SparsePoly::monomial(&vars, m, Q::one())));
            Class { params, basis, rows: Vec::new(), solution: None }
        })
        .collect();
    let pts = sample_points(space, 12, 7 + space.r as u64);
    let mut used = 0;
    for pt in &pts {
        if work.iter().all(|c| c.solution.is_some()) {
            break;
        }
        let gam = match christoffel(space, pt) {
            Ok(g) => g,
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        used += 1;
        let x = pt.values();
        let dd = |f: &SparsePoly, j: usize| -> SparsePoly {
            let d = f.derivative(j);
            if j == e_idx {
                d.mul_mono(&unit_mono(n, e_idx, 1), &Q::one())
            } else {
                d
            }
        };
        for cl in work.iter_mut().filter(|c| c.solution.is_none()) {
            let d1: Vec<Vec<SparsePoly>> = cl.basis.iter().map(|f| (0..n).map(|k| dd(f, k)).collect()).collect();
            for mu in 0..n {
                for nu in mu..n {
                    let mut row = Vec::new();
                    for (fi, f1) in d1.iter().enumerate() {
                        let mut v = dd(&f1[nu], mu).eval(&x);
                        for k in 0..n {
                            let g = &gam[k][mu][nu];
                            if !g.is_zero() {
                                v -= g * f1[k].eval(&x);
                            }
                        }
                        if !v.is_zero() {
                            row.push((fi, v));
                        }
                    }
                    if !row.is_empty() {
                        cl.rows.push((row, Q::zero()));
                    }
                }
            }
            if used < 2 {
                continue;
            }
            let mut sols = Vec::new();
            for (pi, _) in cl.params.iter().enumerate() {
                let mut rows = cl.rows.clone();
                for pj in 0..cl.params.len() {
                    rows.push((vec![(pj, Q::one())], if pi == pj { Q::one() } else { Q::zero() }));
                }
                let s = solve_sparse(&rows, cl.basis.len()).map_err(|e| match e {
                    Error::Inconsistent { row } => Error::Solve(format!("flat-coordinate ansatz for {} inconsistent at row {row}", space.label())),
                    other => other,
                })?;
                if !s.is_unique() {
                    sols.clear();
                    break;
                }
                sols.push(s.particular);
            }
            if !sols.is_empty() {
                cl.solution = Some(sols);
            }
        }
    }
    let mut by_param: BTreeMap<usize, SparsePoly> = BTreeMap::new();
    for cl in &work {
        let sols =
            cl.solution.as_ref().ok_or_else(|| Error::Solve(format!("flat-coordinate ansatz for {} underdetermined after {used} points", space.label())))?;
        for (pi, &p) in cl.params.iter().enumerate() {
            let mut t = SparsePoly::zero(&vars);
            for (f, c) in cl.basis.iter().zip(&sols[pi]) {
                t.add_scaled(f, c);
            }
            by_param.insert(p, t);
        }
    }
    let coords = space.flat_to_param()[..n - 1].iter().map(|p| by_param[p].clone()).collect();
    Ok(FlatChartPolys { space: *space, vars, coords })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart_of(s: &TriPolySpace, names: &[&str]) -> Vec<SparsePoly> {
        let v = s.param_vars();
        names.iter().map(|x| parse_poly(x, &v).unwrap()).collect()
    }

    #[test]
    fn d_family_log_expansion() {
        let s = TriPolySpace::new(2, 2, 4).unwrap();
        let g = gamma_log_expansion(&s, &s.param_vars()).unwrap();
        let want = chart_of(&s, &["6*E^4 + 2*E^2*c2 + c0", "2*E^2*c3 + c1 - c2*c3/4 + 5*c3^3/96", "4*E^2 + c2 - c3^2/4", "c3"]);
        assert_eq!(g, want);
    }

    #[test]
    fn residue_formula_matches_log_expansion() {
        for r in 2..=5 {
            let s = TriPolySpace::new(2, 2, r).unwrap();
            let v = s.param_vars();
            let g = gamma_log_expansion(&s, &v).unwrap();
            for k in 1..r {
                let res = gamma_residue(&s, &v, k).unwrap();
                assert_eq!(res, g[k as usize], "r={r} k={k}");
            }
        }
    }

    #[test]
    fn alpha_of_quadratic() {
        let s = TriPolySpace::new(2, 2, 3).unwrap();
        let c = flat_chart_polys(&s).unwrap();
        assert_eq!(c.coords[1], chart_of(&s, &["a1"])[0]);
        assert_eq!(c.coords[2], chart_of(&s, &["b1"])[0]);
    }

    #[test]
    fn d_family_pairing_is_constant() {
        for r in 2..=4 {
            let s = TriPolySpace::new(2, 2, r).unwrap();
            let polys = flat_chart_polys(&s).unwrap();
            for pt in sample_points(&s, 3, r as u64) {
                let g = FrobeniusPointData::new(&s, &pt).unwrap().parameter_pairing();
                let eta = polys.at(&pt).unwrap().flat_pairing(&g).unwrap();
                let n = s.dimension();
                for i in 0..n {
                    for j in 0..n {
                        let want = match (i, j) {
                            (0, j) if j == n - 1 => qi(1),
                            (i, 0) if i == n - 1 => qi(1),
                            (1, 1) | (2, 2) => q(1, 2),
                            (i, j) if i >= 3 && j >= 3 && i < n - 1 && j < n - 1 && (i - 2) + (j - 2) == r as usize => q(1, r as i64),
                            _ => qi(0),
                        };
                        assert_eq!(eta.get(i, j), &want, "r={r} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn a_family_pairing() {
        let s = TriPolySpace::new(3, 3, 1).unwrap();
        let polys = flat_chart_polys(&s).unwrap();
        for pt in sample_points(&s, 2, 5) {
            let g = FrobeniusPointData::new(&s, &pt).unwrap().parameter_pairing();
            let eta = polys.at(&pt).unwrap().flat_pairing(&g).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    let want = match (i, j) {
                        (0, 5) | (5, 0) => qi(1),
                        (1, 2) | (2, 1) | (3, 4) | (4, 3) => q(1, 3),
                        _ => qi(0),
                    };
                    assert_eq!(eta.get(i, j), &want);
                }
            }
        }
    }

    #[test]
    fn chart_inverse_roundtrip() {
        let s = TriPolySpace::new(2, 3, 3).unwrap();
        let polys = flat_chart_polys(&s).unwrap();
        let pt = &sample_points(&s, 1, 3)[0];
        let fc = polys.at(pt).unwrap();
        let back = polys.inverse(&fc.values[..6], &pt.e).unwrap();
        assert_eq!(&back, pt);
    }

    #[test]
    fn e7_e8_ansatz_flattens_pairing() {
        for r in [4, 5] {
            let s = TriPolySpace::new(2, 3, r).unwrap();
            let polys = flat_chart_polys(&s).unwrap();
            let mut first: Option<QMatrix> = None;
            for pt in sample_points(&s, 3, 100 + r as u64) {
                let g = FrobeniusPointData::new(&s, &pt).unwrap().parameter_pairing();
                let eta = polys.at(&pt).unwrap().flat_pairing(&g).unwrap();
                match &first {
                    None => first = Some(eta),
                    Some(e) => assert_eq!(&eta, e, "r={r}"),
                }
            }
            let e = first.unwrap();
            let n = s.dimension();
            assert_eq!(e.get(0, n - 1), &qi(1));
            assert_eq!(e.get(1, 1), &q(1, 2));
            assert_eq!(e.get(2, 3), &q(1, 3));
        }
    }

    #[test]
    fn e6_ansatz_matches_corrected_chart() {
        let s = TriPolySpace::new(2, 3, 3).unwrap();
        let solved = solve_flat_ansatz(&s).unwrap();
        assert_eq!(solved, FlatChartPolys::from_strings(&s, &E6_CORRECTED).unwrap());
    }
}
