//! One function per verb. Each returns the JSON to print and whether its checks passed.

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Value};

use super::{Context, Outcome};
use crate::algebra::eigen::min_gap;
use crate::algebra::rational::fmt_q;
use crate::algebra::{eigenvalues_numeric, parse_q, QMatrix, Q};
use crate::error::{Error, Result};
use crate::hurwitz::{hurwitz_bruteforce_oracle, BranchData, HurwitzEngine, HurwitzQuery};
use crate::mirror::mirror_check_full;
use crate::orbigw::fixtures::{potential_from_source, FIXTURE_222_AS_PRINTED};
use crate::orbigw::{
    assemble_potential, cap_potential, classify_polynomial, quantum_structure, solve_hurwitz_by_wdvv, tabulated_potential, CapMode, CapPotential, Cutoff,
    GWPotential, Orbicurve, FIXTURE_ORDERS,
};
use crate::seifert::{potential_slice, quadrature_check, sft_hamiltonian, truncation_monotonicity, SeifertBundle, DEFAULT_MODES, QUADRATURE_POINTS};
use crate::tripoly::{u_operator_spectrum, FlatPointData, TriPolyPoint, TriPolySpace};

/// Relative tolerance of the quadrature check.
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Numeric outputs carry this many significant digits.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Cone orders of the sphere.
    pub orders: Vec<u32>,
}

#[derive(Debug, Args)]
pub struct HurwitzArgs {
    #[arg(long, default_value_t = 0)]
    pub base_genus: u32,
    /// Genus of the cover.
    #[arg(long, allow_negative_numbers = true)]
    pub genus: i64,
    #[arg(short, long)]
    pub degree: u32,
    /// Branch profiles separated by `;`, e.g. "(2,1);(3)".
    #[arg(long, default_value = "")]
    pub profiles: String,
    /// Count possibly disconnected covers.
    #[arg(long)]
    pub disconnected: bool,
    /// Also enumerate permutations and compare.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CapSource {
    Fixture,
    Solve,
}

impl From<CapSource> for CapMode {
    fn from(s: CapSource) -> Self {
        match s {
            CapSource::Fixture => CapMode::Fixture,
            CapSource::Solve => CapMode::Solve,
        }
    }
}

#[derive(Debug, Args)]
pub struct CapArgs {
    #[arg(long)]
    pub alpha: u32,
    #[arg(long, value_enum, default_value_t = CapSource::Fixture)]
    pub mode: CapSource,
}

#[derive(Debug, Args)]
pub struct GwPotentialArgs {
    /// Comma-separated cone orders.
    #[arg(long, default_value = "")]
    pub orbifold: String,
    #[arg(long, default_value_t = 0)]
    pub base_genus: u32,
    #[arg(long, default_value_t = 0)]
    pub genus: u32,
    /// Largest degree kept. Polynomial spheres default to every degree.
    #[arg(long)]
    pub max_q_degree: Option<u32>,
    #[arg(long, value_enum, default_value_t = CapSource::Fixture)]
    pub caps: CapSource,
    /// Treat the Hurwitz coefficients as unknowns fixed by WDVV.
    #[arg(long)]
    pub hurwitz_by_wdvv: bool,
}

#[derive(Debug, Args)]
pub struct WdvvArgs {
    #[arg(long, default_value = "")]
    pub orbifold: String,
    /// Potential JSON to check instead.
    #[arg(long, conflicts_with_all = ["orbifold", "as_printed"])]
    pub input: Option<std::path::PathBuf>,
    /// The (2,2,2) potential exactly as tabulated, before the sign fix.
    #[arg(long)]
    pub as_printed: bool,
    /// How many nonzero residuals to print.
    #[arg(long, default_value_t = 10)]
    pub show: usize,
}

#[derive(Debug, Args)]
pub struct TripolyArgs {
    /// Degrees p,q,r.
    #[arg(long)]
    pub space: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Value of e^dlog.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub e: String,
}

#[derive(Debug, Args)]
pub struct MirrorArgs {
    /// Degrees p,q,r of the tri-polynomial family.
    #[arg(long)]
    pub family: String,
}

#[derive(Debug, Args)]
pub struct USpectrumArgs {
    #[arg(long)]
    pub orbifold: String,
    /// Flat coordinates, `s` last (ignored). Defaults to the origin.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Value of e^s z.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub q: String,
}

#[derive(Debug, Args)]
pub struct SeifertArgs {
    /// Cone orders of the base.
    #[arg(long, default_value = "")]
    pub orders: String,
    /// Chern class of the de-singularization.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "c")]
    pub b: Option<i64>,
    /// Orbifold Chern class instead of `--b`.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub betas: String,
    /// Fourier modes per loop variable.
    #[arg(short = 'K', long, default_value_t = DEFAULT_MODES)]
    pub modes: u32,
    /// Flat direction of the slice; defaults to `s`.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<String>,
    /// Compare against quadrature and check truncation in K = 3..6.
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| x.parse().map_err(|_| Error::Invalid(format!("bad {what} `{x}`")))).collect()
}

pub fn parse_qlist(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(parse_q).collect()
}

fn parse_space(s: &str) -> Result<TriPolySpace> {
    match parse_list::<u32>(s, "degree")?.as_slice() {
        [p, q, r] => TriPolySpace::new(*p, *q, *r),
        _ => Err(Error::Invalid(format!("expected p,q,r, got `{s}`"))),
    }
}

pub fn matrix_json(m: &QMatrix) -> Value {
    Value::Array((0..m.rows).map(|i| Value::Array((0..m.cols).map(|j| Value::String(fmt_q(m.get(i, j)))).collect())).collect())
}

pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Eigenvalues rounded and sorted by real then imaginary part, so output is reproducible.
pub fn spectrum_json(ev: &[Complex64]) -> Value {
    let mut v: Vec<(f64, f64)> = ev.iter().map(|z| (round_sig(z.re), round_sig(z.im))).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Value::Array(v.into_iter().map(|(re, im)| json!({"re": re, "im": im})).collect())
}

fn fixture_caps(orders: &[u32], mode: CapMode) -> Result<Vec<CapPotential>> {
    orders.iter().map(|&a| cap_potential(a, mode)).collect()
}

/// Smooth spheres need only degree 1; other polynomial spheres have a finite exact potential.
pub fn default_cutoff(curve: &Orbicurve) -> Cutoff {
    if curve.base_genus == 0 && curve.orders.is_empty() {
        Cutoff::Degree(1)
    } else if curve.base_genus == 0 && classify_polynomial(&curve.orders).polynomial {
        Cutoff::Exact
    } else {
        Cutoff::Degree(Cutoff::DEFAULT_DEGREE)
    }
}

pub fn assembled_potential(curve: &Orbicurve, genus: u32, cutoff: Cutoff, mode: CapMode, engine: &HurwitzEngine) -> Result<GWPotential> {
    let caps = fixture_caps(&curve.orders, mode)?;
    assemble_potential(curve, genus, cutoff, &caps, engine)
}

fn is_fixture(orders: &[u32]) -> bool {
    FIXTURE_ORDERS.iter().any(|o| o.as_slice() == orders)
}

pub fn classify(a: &ClassifyArgs) -> Result<Outcome> {
    let c = classify_polynomial(&a.orders);
    Ok(Outcome::ok(serde_json::to_value(c).expect("classification serializes")))
}

pub fn hurwitz(ctx: &Context, a: &HurwitzArgs) -> Result<Outcome> {
    let data = BranchData::parse(a.degree, &a.profiles)?;
    let query = HurwitzQuery::new(a.base_genus, a.genus, data, !a.disconnected);
    let value = ctx.engine.hurwitz_number(&query)?;
    if !a.oracle {
        return Ok(Outcome::ok(json!({"value": fmt_q(&value)})));
    }
    let oracle = hurwitz_bruteforce_oracle(&query)?;
    let agree = oracle == value;
    Ok(Outcome::check(json!({"value": fmt_q(&value), "oracle": fmt_q(&oracle), "agree": agree}), agree))
}

fn cap_json(c: &CapPotential) -> Value {
    json!({
        "alpha": c.alpha,
        "a_terms": c.a_terms.to_json(),
        "b_hat": c.b_hat.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        "homogeneous": c.is_homogeneous(),
    })
}

pub fn cap(a: &CapArgs) -> Result<Outcome> {
    let c = cap_potential(a.alpha, a.mode.into())?;
    let mut out = cap_json(&c);
    let mut ok = c.is_homogeneous();
    if matches!(a.mode, CapSource::Solve) {
        if let Ok(f) = cap_potential(a.alpha, CapMode::Fixture) {
            let m = f == c;
            out["matches_fixture"] = json!(m);
            ok &= m;
        }
    }
    Ok(Outcome::check(out, ok))
}

pub fn gw_potential(ctx: &Context, a: &GwPotentialArgs) -> Result<Outcome> {
    let orders: Vec<u32> = parse_list(&a.orbifold, "order")?;
    let curve = Orbicurve::new(a.base_genus, orders.clone())?;
    let cutoff = a.max_q_degree.map(Cutoff::Degree).unwrap_or_else(|| default_cutoff(&curve));
    let f = if a.hurwitz_by_wdvv {
        if a.genus != 0 || a.base_genus != 0 {
            return Err(Error::Invalid("--hurwitz-by-wdvv needs genus 0 over a sphere".into()));
        }
        solve_hurwitz_by_wdvv(&curve, &fixture_caps(&orders, a.caps.into())?, &ctx.engine)?.potential
    } else {
        assembled_potential(&curve, a.genus, cutoff, a.caps.into(), &ctx.engine)?
    };
    let mut out = f.to_json();
    let mut ok = true;
    if a.genus == 0 && a.base_genus == 0 && cutoff == Cutoff::Exact && is_fixture(&orders) {
        let m = f == tabulated_potential(&orders)?;
        out["matches_fixture"] = json!(m);
        ok = m;
    }
    Ok(Outcome::check(out, ok))
}

pub fn wdvv_check(ctx: &Context, a: &WdvvArgs) -> Result<Outcome> {
    let (f, source) = if let Some(path) = &a.input {
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        (GWPotential::from_json(&v)?, "input")
    } else {
        let orders: Vec<u32> = parse_list(&a.orbifold, "order")?;
        if a.as_printed {
            if orders != [2, 2, 2] {
                return Err(Error::Invalid("--as-printed exists only for 2,2,2".into()));
            }
            (potential_from_source(&orders, FIXTURE_222_AS_PRINTED)?, "as-printed")
        } else if is_fixture(&orders) {
            (tabulated_potential(&orders)?, "fixture")
        } else {
            let curve = Orbicurve::sphere(&orders)?;
            (assembled_potential(&curve, 0, default_cutoff(&curve), CapMode::Fixture, &ctx.engine)?, "assembled")
        }
    };
    let res = f.wdvv_residuals();
    let shown: Vec<Value> = res.iter().take(a.show).map(|((i, j, k, l), p)| json!({"indices": [i, j, k, l], "residual": p.to_json()})).collect();
    let ok = res.is_empty();
    Ok(Outcome::check(json!({"orbifold": f.curve.orders, "source": source, "nonzero_residuals": res.len(), "residuals": shown, "passed": ok}), ok))
}

pub fn tripoly(a: &TripolyArgs) -> Result<Outcome> {
    let space = parse_space(&a.space)?;
    let origin = TriPolyPoint::origin(&space);
    let pick = |s: &Option<String>, default: Vec<Q>| s.as_deref().map(parse_qlist).unwrap_or(Ok(default));
    let pt = TriPolyPoint::new(&space, pick(&a.a, origin.a.clone())?, pick(&a.b, origin.b.clone())?, pick(&a.c, origin.c.clone())?, parse_q(&a.e)?)?;
    let fp = FlatPointData::new(&space, &pt)?;
    let spec = u_operator_spectrum(&space, &pt)?;
    Ok(Outcome::ok(json!({
        "space": [space.p, space.q, space.r],
        "point": serde_json::to_value(&pt).expect("points serialize"),
        "flat_names": space.flat_names(),
        "pairing_flat": matrix_json(&fp.eta),
        "u_spectrum": spectrum_json(&spec.eigenvalues),
        "gap": round_sig(spec.gap),
    })))
}

pub fn mirror_check(ctx: &Context, a: &MirrorArgs) -> Result<Outcome> {
    let s = parse_space(&a.family)?;
    let report = mirror_check_full(s.p, s.q, s.r, &ctx.engine)?;
    let ok = report.passed();
    let mut v = serde_json::to_value(&report).expect("reports serialize");
    v["passed"] = json!(ok);
    Ok(Outcome::check(v, ok))
}

pub fn u_spectrum(ctx: &Context, a: &USpectrumArgs) -> Result<Outcome> {
    let orders: Vec<u32> = parse_list(&a.orbifold, "order")?;
    let curve = Orbicurve::sphere(&orders)?;
    let f = assembled_potential(&curve, 0, default_cutoff(&curve), CapMode::Fixture, &ctx.engine)?;
    let n = f.grading().dim();
    let point = match &a.point {
        Some(s) => parse_qlist(s)?,
        None => vec![Q::zero(); n],
    };
    let qv = parse_q(&a.q)?;
    let qs = quantum_structure(&f, &point, &qv)?;
    let ev = eigenvalues_numeric(&qs.u, 1e-12)?;
    Ok(Outcome::ok(json!({
        "orbifold": orders,
        "point": point.iter().map(fmt_q).collect::<Vec<_>>(),
        "q": fmt_q(&qv),
        "u": matrix_json(&qs.u),
        "eigenvalues": spectrum_json(&ev),
        "gap": round_sig(min_gap(&ev)),
    })))
}

pub fn seifert(ctx: &Context, a: &SeifertArgs) -> Result<Outcome> {
    let orders: Vec<u32> = parse_list(&a.orders, "order")?;
    let betas: Vec<i64> = parse_list(&a.betas, "beta")?;
    let bundle = match (&a.c, a.b) {
        (Some(c), _) => SeifertBundle::from_chern_class(orders, &parse_q(c)?, betas)?,
        (None, Some(b)) => SeifertBundle::new(orders, b, betas)?,
        (None, None) => return Err(Error::Invalid("give --b or --c".into())),
    };
    let curve = bundle.base();
    let f = assembled_potential(&curve, 0, default_cutoff(&curve), CapMode::Fixture, &ctx.engine)?;
    let direction = a.direction.as_deref().map(parse_qlist).transpose()?;
    let slice = potential_slice(&f, direction.as_deref())?;
    let h = sft_hamiltonian(&bundle, &slice, a.modes)?;
    let mut out = h.to_json();
    out["slice"] = slice.to_json();
    let mut ok = true;
    if a.check {
        let quad = quadrature_check(&h, &slice, 10, a.seed);
        let trunc = truncation_monotonicity(&bundle, &slice, &[3, 4, 5, 6])?;
        ok = quad.passes(QUADRATURE_TOL) && trunc.monotone;
        out["check"] = json!({
            "quadrature_points": QUADRATURE_POINTS,
            "quadrature": quad,
            "truncation": trunc,
            "passed": ok,
        });
    }
    Ok(Outcome::check(out, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list::<u32>("2, 3,5", "order").unwrap(), vec![2, 3, 5]);
        assert!(parse_list::<u32>("", "order").unwrap().is_empty());
        assert!(parse_list::<u32>("2,x", "order").is_err());
        assert_eq!(parse_qlist("1/2,-3").unwrap(), vec![crate::algebra::q(1, 2), crate::algebra::qi(-3)]);
    }

    #[test]
    fn rounding_and_order() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(-1e-20), -1e-20);
        let v = spectrum_json(&[Complex64::new(1.0, 0.0), Complex64::new(-2.0, 1.0), Complex64::new(-2.0, -1.0)]);
        assert_eq!(v[0]["im"], json!(-1.0));
        assert_eq!(v[2]["re"], json!(1.0));
    }

    #[test]
    fn cutoffs() {
        assert_eq!(default_cutoff(&Orbicurve::sphere(&[]).unwrap()), Cutoff::Degree(1));
        assert_eq!(default_cutoff(&Orbicurve::sphere(&[2, 3, 5]).unwrap()), Cutoff::Exact);
        assert_eq!(default_cutoff(&Orbicurve::sphere(&[3, 3, 3]).unwrap()), Cutoff::Degree(Cutoff::DEFAULT_DEGREE));
    }
}
