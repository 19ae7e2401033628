use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::presentation::{compare_presentation_with_mirror, mirror_point};
use crate::algebra::rational::to_f64;
use crate::algebra::{eigenvalues_numeric, min_gap, q, qi, QMatrix, Q};
use crate::error::{Error, Result};
use crate::hurwitz::HurwitzEngine;
use crate::orbigw::{assemble_potential, cap_potential, quantum_structure, CapMode, Cutoff, Family, GWPotential, Orbicurve};
use crate::tripoly::{flat_chart_polys, flat_euler_coefficients, FlatPointData, TriPolyPoint, TriPolySpace};

pub const SPECTRUM_TOL: f64 = 1e-7;
pub const GAP_TOL: f64 = 1e-6;

/// A point on both sides: flat coordinates without `s`, and `Q = e^{d}`.
#[derive(Clone, Debug, Serialize)]
pub struct MirrorSample {
    pub label: String,
    #[serde(with = "crate::tripoly::space::qvec")]
    pub flat: Vec<Q>,
    #[serde(with = "crate::algebra::rational::serde_q")]
    pub q: Q,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Largest entrywise deviation seen; 0 for exact agreement.
    pub worst: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSample {
    pub label: String,
    pub orbifold: Vec<[f64; 2]>,
    pub tripoly: Vec<[f64; 2]>,
    /// Largest eigenvalue difference, relative to `max(1, |λ|)`.
    pub max_difference: f64,
    pub gap: f64,
}

/// U₀ and the perturbation `V = U(a, b) − U₀` for `P¹_{2,2,r}` at `q = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct PerturbationReport {
    #[serde(with = "crate::algebra::rational::serde_q")]
    pub a: Q,
    #[serde(with = "crate::algebra::rational::serde_q")]
    pub b: Q,
    pub u0: Vec<Vec<String>>,
    pub v: Vec<Vec<String>>,
    pub u0_pattern: bool,
    pub v_diagonal: bool,
    /// `V[0][n−1]`.
    pub corner: String,
    /// `2r·(r/2)·(a²+b²)` and `2r^{r/2}·(a²+b²)`; only defined for even `r`.
    pub corner_readings: Option<[String; 2]>,
    /// The last column of V on the twisted rows of the third point.
    pub gamma_column: Vec<String>,
    pub gap_slope: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MirrorReport {
    pub space: String,
    pub orders: Vec<u32>,
    pub samples: Vec<MirrorSample>,
    pub stages: Vec<StageReport>,
    pub spectra: Vec<SpectrumSample>,
    /// Set for the D family: smallest gap at `a = b = 0`.
    pub origin_gap: Option<f64>,
    pub perturbation: Option<PerturbationReport>,
}

impl MirrorReport {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.passed)
    }

    pub fn stage(&self, n: u8) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.stage == n)
    }

    pub fn failed_stages(&self) -> Vec<u8> {
        self.stages.iter().filter(|s| !s.passed).map(|s| s.stage).collect()
    }
}

/// Orders of the orbifold sphere mirror to the tri-polynomials of shape `(p, q, r)`.
pub fn mirror_orders(space: &TriPolySpace) -> Vec<u32> {
    if space.r == 1 {
        vec![space.p, space.q]
    } else {
        vec![space.p, space.q, space.r]
    }
}

/// Genus-0 potential of the mirror sphere, assembled exactly from caps and Hurwitz numbers.
pub fn orbifold_potential(space: &TriPolySpace, engine: &HurwitzEngine) -> Result<GWPotential> {
    let orders = mirror_orders(space);
    let curve = Orbicurve::sphere(&orders)?;
    let caps = orders.iter().map(|&a| cap_potential(a, CapMode::Fixture)).collect::<Result<Vec<_>>>()?;
    assemble_potential(&curve, 0, Cutoff::Exact, &caps, engine)
}

fn d_samples() -> Vec<(Q, Q)> {
    vec![(qi(1), qi(2)), (q(1, 3), qi(-2)), (q(-3, 2), q(1, 2))]
}

fn generic_samples(n: usize, count: usize, seed: u64) -> Vec<MirrorSample> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as i64
    };
    (0..count)
        .map(|i| {
            let flat = (0..n - 1).map(|_| q(next() % 9 - 4, next() % 4 + 1)).collect();
            let qq = q(next() % 3 + 1, next() % 2 + 1);
            MirrorSample { label: format!("generic #{i}"), flat, q: qq }
        })
        .collect()
}

fn d_point(n: usize, a: &Q, b: &Q, qq: &Q) -> MirrorSample {
    let mut flat = vec![Q::zero(); n - 1];
    flat[1] = a.clone();
    flat[2] = b.clone();
    MirrorSample { label: format!("a={a}, b={b}, q={qq}"), flat, q: qq.clone() }
}

fn max_diff(a: &QMatrix, b: &QMatrix) -> f64 {
    let mut worst = 0f64;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let d = to_f64(&(a.get(i, j) - b.get(i, j))).abs();
            worst = worst.max(d);
        }
    }
    worst
}

fn sorted(mut ev: Vec<Complex64>) -> Vec<Complex64> {
    ev.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
    ev
}

fn pairs(ev: &[Complex64]) -> Vec<[f64; 2]> {
    ev.iter().map(|z| [z.re, z.im]).collect()
}

/// Both sides evaluated at one sample.
struct SidePair {
    a_mult: Vec<QMatrix>,
    a_u: QMatrix,
    b: FlatPointData,
    /// Multiplication by `F` in the monomial basis of the Jacobian algebra.
    b_f_mult: QMatrix,
}

fn evaluate(f: &GWPotential, space: &TriPolySpace, s: &MirrorSample) -> Result<SidePair> {
    let chart = flat_chart_polys(space)?;
    let pt: TriPolyPoint = chart.inverse(&s.flat, &s.q)?;
    let b = FlatPointData::new(space, &pt)?;
    let mut point = s.flat.clone();
    point.push(Q::zero());
    let a = quantum_structure(f, &point, &s.q)?;
    let alg = &b.data.algebra;
    let b_f_mult = alg.mult_matrix(&alg.from_coords(&b.data.euler_class));
    Ok(SidePair { a_mult: a.mult, a_u: a.u, b, b_f_mult })
}

fn spectrum_sample(label: &str, pair: &SidePair) -> Result<SpectrumSample> {
    let ea = sorted(eigenvalues_numeric(&pair.a_u, 1e-12)?);
    let eb = sorted(eigenvalues_numeric(&pair.b_f_mult, 1e-12)?);
    // relative to max(1, |λ|): E₇ and E₈ spectra reach 10⁵
    let max_difference =
        if ea.len() == eb.len() { ea.iter().zip(&eb).map(|(x, y)| (x - y).norm() / x.norm().max(1.0)).fold(0.0, f64::max) } else { f64::INFINITY };
    Ok(SpectrumSample { label: label.to_string(), orbifold: pairs(&ea), tripoly: pairs(&eb), max_difference, gap: min_gap(&ea) })
}

fn stage(stage: u8, name: &'static str, passed: bool, worst: f64, detail: String) -> StageReport {
    StageReport { stage, name, passed, worst, detail }
}

/// Runs every stage for the tri-polynomials of shape `(p, q, r)` against the assembled
/// potential of the mirror orbifold sphere.
pub fn mirror_check_full(p: u32, qq: u32, r: u32, engine: &HurwitzEngine) -> Result<MirrorReport> {
    let space = TriPolySpace::new(p, qq, r)?;
    let f = orbifold_potential(&space, engine)?;
    mirror_check_with(&space, &f)
}

pub fn mirror_check_with(space: &TriPolySpace, f: &GWPotential) -> Result<MirrorReport> {
    let orders = mirror_orders(space);
    // flat coordinates follow the order of the points, so the lists must agree exactly
    if f.curve.orders != orders || f.curve.base_genus != 0 || f.genus != 0 {
        return Err(Error::Invalid(format!("potential of {} at genus {} does not belong to {}", f.curve.label(), f.genus, space.label())));
    }
    let g = f.grading();
    let n = g.dim();
    if n != space.dimension() {
        return Err(Error::Invalid(format!("dimension {} on the orbifold side, {} on the tri-polynomial side", n, space.dimension())));
    }
    let d_family = space.family() == Family::D;
    let mut samples: Vec<MirrorSample> = Vec::new();
    if d_family {
        samples.extend(d_samples().iter().map(|(a, b)| d_point(n, a, b, &Q::one())));
    }
    samples.extend(generic_samples(n, if d_family { 1 } else { 3 }, 17 + space.r as u64));
    let pairs: Vec<SidePair> = samples.par_iter().map(|s| evaluate(f, space, s)).collect::<Result<_>>()?;

    let mut stages = Vec::new();

    // 1. algebras
    let mut worst = 0f64;
    let mut bad = Vec::new();
    for (s, pr) in samples.iter().zip(&pairs) {
        for (i, (ma, mb)) in pr.a_mult.iter().zip(&pr.b.mult).enumerate() {
            if ma != mb {
                worst = worst.max(max_diff(ma, mb));
                bad.push(format!("{}: ∂_{i}", s.label));
            }
        }
    }
    let mut presentation = String::new();
    if d_family {
        for (a, b) in d_samples() {
            let c = compare_presentation_with_mirror(space.r, &a, &b, &Q::one())?;
            if !c.equal {
                bad.push(format!("presentation at a={a}, b={b}: {} relations fail", c.failing_relations));
            }
            mirror_point(space.r, &a, &b, &Q::one())?;
        }
        presentation = format!(", presentation matched at {} points", d_samples().len());
    }
    stages.push(stage(
        1,
        "algebra",
        bad.is_empty(),
        worst,
        if bad.is_empty() { format!("structure constants equal at {} samples{presentation}", samples.len()) } else { bad.join("; ") },
    ));

    // 2. pairing
    let mut worst = 0f64;
    for pr in &pairs {
        worst = worst.max(max_diff(&pr.b.eta, &g.eta));
    }
    let ok = pairs.iter().all(|pr| pr.b.eta == g.eta);
    stages.push(stage(2, "pairing", ok, worst, if ok { "flat pairing equals the orbifold Poincaré pairing".into() } else { "flat pairing differs".into() }));

    // 3. Euler field
    let mut a_euler = g.euler.clone();
    a_euler[g.s()] = g.chi.clone();
    let b_euler = flat_euler_coefficients(space);
    let mut worst = 0f64;
    for pr in &pairs {
        worst = worst.max(max_diff(&pr.a_u, &pr.b.u));
        worst = worst.max(max_diff(&pr.b.euler_multiplication(space), &pr.b.u));
    }
    let ok = a_euler == b_euler && pairs.iter().all(|pr| pr.a_u == pr.b.u && pr.b.euler_multiplication(space) == pr.b.u);
    stages.push(stage(
        3,
        "euler",
        ok,
        worst,
        if a_euler == b_euler { "coefficients agree; U equals multiplication by F".into() } else { "Euler coefficients differ".into() },
    ));

    // 4. spectra
    let mut spectra = samples.iter().zip(&pairs).map(|(s, pr)| spectrum_sample(&s.label, pr)).collect::<Result<Vec<_>>>()?;
    let generic_gap = spectra[0].gap;
    let mut origin_gap = None;
    if d_family {
        let pr = evaluate(f, space, &d_point(n, &Q::zero(), &Q::zero(), &Q::one()))?;
        let sp = spectrum_sample("a=0, b=0, q=1", &pr)?;
        origin_gap = Some(sp.gap);
        spectra.push(sp);
    }
    let worst = spectra.iter().map(|s| s.max_difference).fold(0.0, f64::max);
    let ok = worst < SPECTRUM_TOL && generic_gap > GAP_TOL && origin_gap.is_none_or(|gp| gp < GAP_TOL);
    let mut detail = format!("max eigenvalue difference {worst:.3e}; gap {generic_gap:.6} at {}", spectra[0].label);
    if let Some(gp) = origin_gap {
        detail.push_str(&format!("; gap {gp:.3e} at a=b=0 (degenerate, expected)"));
    }
    stages.push(stage(4, "spectrum", ok, worst, detail));

    // 5. U₀ and V
    let mut perturbation = None;
    if d_family {
        let (a, b) = d_samples().swap_remove(0);
        let rep = perturbation_report(space, f, &a, &b)?;
        let ok = rep.u0_pattern && rep.v_diagonal && (rep.gap_slope - 1.0).abs() < 0.1;
        let detail = format!("U₀ pattern {}, V diagonal {}, corner {}, gap slope {:.4}", rep.u0_pattern, rep.v_diagonal, rep.corner, rep.gap_slope);
        stages.push(stage(5, "perturbation", ok, (rep.gap_slope - 1.0).abs(), detail));
        perturbation = Some(rep);
    }

    Ok(MirrorReport { space: space.label(), orders, samples, stages, spectra, origin_gap, perturbation })
}

/// The expected U₀ of `P¹_{2,2,r}` at `q = 1` in flat order.
pub fn expected_u0(r: u32) -> QMatrix {
    let n = r as usize + 3;
    let mut u = QMatrix::zeros(n, n);
    u.set(0, n - 1, qi(4 * r as i64));
    u.set(n - 1, 0, q(1, r as i64));
    if r.is_multiple_of(2) {
        u.set(1, 1, qi(2));
        u.set(2, 2, qi(2));
    } else {
        u.set(1, 2, qi(2));
        u.set(2, 1, qi(2));
    }
    for k in 1..r as usize {
        u.set(2 + k, 2 + r as usize - k, qi(2));
    }
    u
}

fn strings(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect()
}

fn gap_of(u0: &[Vec<f64>], v: &[Vec<f64>], eps: f64) -> Result<f64> {
    let m: Vec<Vec<f64>> = u0.iter().zip(v).map(|(r0, r1)| r0.iter().zip(r1).map(|(x, y)| x + eps * y).collect()).collect();
    Ok(min_gap(&crate::algebra::eigen::eigenvalues_f64(&m, 1e-13)?))
}

pub fn perturbation_report(space: &TriPolySpace, f: &GWPotential, a: &Q, b: &Q) -> Result<PerturbationReport> {
    if space.family() != Family::D {
        return Err(Error::Invalid("U₀ and V are defined for the (2,2,r) family".into()));
    }
    let r = space.r;
    let n = f.grading().dim();
    let u0 = quantum_structure(f, &vec![Q::zero(); n], &Q::one())?.u;
    let mut pt = vec![Q::zero(); n];
    pt[1] = a.clone();
    pt[2] = b.clone();
    let v = quantum_structure(f, &pt, &Q::one())?.u.sub(&u0);
    let quarter = q(-1, 4);
    let v_diagonal = v.get(1, 1) == &(a * a * &quarter) && v.get(2, 2) == &(b * b * &quarter);
    let sq = a * a + b * b;
    let corner_readings = r.is_multiple_of(2).then(|| {
        let rr = qi(r as i64);
        let first = qi(2) * &rr * q(r as i64, 2) * &sq;
        let second = qi(2) * num_traits::pow(rr, r as usize / 2) * &sq;
        [first.to_string(), second.to_string()]
    });
    let (u0f, vf) = (u0.to_f64(), v.to_f64());
    let (lo, hi) = (1e-4, 1e-2);
    let gap_slope = (gap_of(&u0f, &vf, hi)?.ln() - gap_of(&u0f, &vf, lo)?.ln()) / (hi / lo).ln();
    Ok(PerturbationReport {
        a: a.clone(),
        b: b.clone(),
        u0_pattern: u0 == expected_u0(r),
        u0: strings(&u0),
        v_diagonal,
        corner: v.get(0, n - 1).to_string(),
        corner_readings,
        gamma_column: (3..n - 1).map(|i| v.get(i, n - 1).to_string()).collect(),
        v: strings(&v),
        gap_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_u0_shape() {
        let u = expected_u0(3);
        assert_eq!(u.get(0, 5), &qi(12));
        assert_eq!(u.get(1, 2), &qi(2));
        assert_eq!(u.get(3, 4), &qi(2));
        assert_eq!(u.trace(), Q::zero());
    }

    #[test]
    fn d_family_all_stages() {
        for r in [2, 3] {
            let rep = mirror_check_full(2, 2, r, &HurwitzEngine::default()).unwrap();
            assert!(rep.passed(), "r={r}: {:?}", rep.stages);
            assert_eq!(rep.stages.len(), 5);
            assert!(rep.origin_gap.unwrap() < GAP_TOL);
        }
    }

    #[test]
    fn a_family_smoke() {
        let rep = mirror_check_full(3, 2, 1, &HurwitzEngine::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.stages);
        assert_eq!(rep.orders, vec![3, 2]);
        assert_eq!(rep.stages.len(), 4);
    }

    #[test]
    fn wrong_potential_is_rejected() {
        let s = TriPolySpace::new(2, 2, 3).unwrap();
        let f = crate::orbigw::tabulated_potential(&[2, 2, 2]).unwrap();
        assert!(mirror_check_with(&s, &f).is_err());
    }
}
