use std::fmt::Debug;

use num_traits::{One, ToPrimitive, Zero};

use super::poly::SparsePoly;
use super::rational::{binom_q, qi, Q};
use crate::error::{Error, Result};

/// Coefficient ring for the truncated series: rationals or polynomials in parameters.
pub trait Coeff: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_c(&self) -> bool;
    fn add_c(&self, o: &Self) -> Self;
    fn mul_c(&self, o: &Self) -> Self;
    fn scale_c(&self, q: &Q) -> Self;
}

impl Coeff for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_c(&self, o: &Self) -> Self {
        self * o
    }
    fn scale_c(&self, q: &Q) -> Self {
        self * q
    }
}

impl Coeff for SparsePoly {
    fn zero_like(&self) -> Self {
        SparsePoly::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        SparsePoly::one(self.vars())
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_c(&self, o: &Self) -> Self {
        self * o
    }
    fn scale_c(&self, q: &Q) -> Self {
        self.scale(q)
    }
}

/// Truncated power series `Σ_{k<prec} c_k s^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<C: Coeff> {
    pub coeffs: Vec<C>,
}

impl<C: Coeff> PowerSeries<C> {
    pub fn new(mut coeffs: Vec<C>, prec: usize, zero: &C) -> Self {
        coeffs.resize(prec, zero.zero_like());
        PowerSeries { coeffs }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    fn zero_c(&self) -> C {
        self.coeffs[0].zero_like()
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.zero_c())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.prec().min(o.prec());
        PowerSeries { coeffs: (0..n).map(|k| self.coeffs[k].add_c(&o.coeffs[k])).collect() }
    }

    pub fn scale(&self, q: &Q) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| c.scale_c(q)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.prec().min(o.prec());
        let mut out = vec![self.zero_c(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero_c() {
                continue;
            }
            for j in 0..n - i {
                if !o.coeffs[j].is_zero_c() {
                    out[i + j] = out[i + j].add_c(&self.coeffs[i].mul_c(&o.coeffs[j]));
                }
            }
        }
        PowerSeries { coeffs: out }
    }

    fn one(&self) -> Self {
        let mut c = vec![self.zero_c(); self.prec()];
        c[0] = c[0].one_like();
        PowerSeries { coeffs: c }
    }

    fn without_constant(&self) -> Self {
        let mut g = self.clone();
        g.coeffs[0] = self.zero_c();
        g
    }

    fn require_unit_constant(&self) -> Result<()> {
        if self.coeffs[0] != self.coeffs[0].one_like() {
            return Err(Error::Invalid("series must start with constant term 1".into()));
        }
        Ok(())
    }

    /// `Σ_k c_k g^k` for `g` without constant term.
    fn sum_powers(&self, weights: impl Fn(usize) -> Q) -> Self {
        let g = self.without_constant();
        let mut acc = PowerSeries { coeffs: vec![self.zero_c(); self.prec()] };
        let mut gk = self.one();
        for k in 0..self.prec() {
            let w = weights(k);
            if !w.is_zero() {
                acc = acc.add(&gk.scale(&w));
            }
            gk = gk.mul(&g);
        }
        acc
    }

    /// `(1 + g)^e` for rational `e`.
    pub fn pow_q(&self, e: &Q) -> Result<Self> {
        self.require_unit_constant()?;
        Ok(self.sum_powers(|k| binom_q(e, k as u64)))
    }

    /// `log(1 + g)`.
    pub fn log1p(&self) -> Result<Self> {
        self.require_unit_constant()?;
        Ok(self.sum_powers(|k| {
            if k == 0 {
                Q::zero()
            } else {
                let s = if k % 2 == 1 { 1 } else { -1 };
                Q::new(s.into(), (k as i64).into())
            }
        }))
    }

    /// `self(inner)` with `inner` lacking a constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero_c() {
            return Err(Error::Invalid("inner series must vanish at 0".into()));
        }
        let n = self.prec().min(inner.prec());
        let mut acc = PowerSeries { coeffs: vec![self.zero_c(); n] };
        let mut p = PowerSeries { coeffs: inner.coeffs[..n].to_vec() }.one();
        let inner = PowerSeries { coeffs: inner.coeffs[..n].to_vec() };
        for k in 0..n {
            if !self.coeffs[k].is_zero_c() {
                let term = PowerSeries { coeffs: p.coeffs.iter().map(|c| c.mul_c(&self.coeffs[k])).collect() };
                acc = acc.add(&term);
            }
            p = p.mul(&inner);
        }
        Ok(acc)
    }

    /// Compositional inverse of `s + f₂s² + …`.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero_c() || self.prec() < 2 || self.coeffs[1] != self.coeffs[1].one_like() {
            return Err(Error::Invalid("reversion needs a series s + O(s²)".into()));
        }
        let n = self.prec();
        let mut s = vec![self.zero_c(); n];
        s[1] = s[1].one_like();
        let s = PowerSeries { coeffs: s };
        let mut higher = self.clone();
        higher.coeffs[1] = self.zero_c();
        // u = s − Σ_{k≥2} f_k u^k gains one correct order per pass
        let mut u = s.clone();
        for _ in 0..n {
            u = s.add(&higher.compose(&u)?.scale(&-Q::one()));
        }
        Ok(u)
    }
}

/// Series in descending powers `v^{ℓ}, v^{ℓ−δ}, v^{ℓ−2δ}, …` of an expansion variable,
/// known for exponents strictly above `trunc`.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalSeries<C: Coeff = Q> {
    pub pivot: String,
    pub leading_exponent: Q,
    pub step: Q,
    pub coeffs: Vec<C>,
    pub truncation_order: Q,
}

impl<C: Coeff> FractionalSeries<C> {
    pub fn exponent(&self, j: usize) -> Q {
        &self.leading_exponent - &self.step * qi(j as i64)
    }

    /// Coefficient of `v^e`; `None` when `e` is at or below the truncation order.
    pub fn coeff_at(&self, e: &Q) -> Option<C> {
        if e <= &self.truncation_order {
            return None;
        }
        let zero = self.coeffs.first()?.zero_like();
        let j = (&self.leading_exponent - e) / &self.step;
        if !j.is_integer() || j < Q::zero() {
            return Some(zero);
        }
        let j = j.to_integer().to_usize()?;
        Some(self.coeffs.get(j).cloned().unwrap_or(zero))
    }

    /// Product; the result is truncated to what both operands determine.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.step != o.step {
            return Err(Error::Invalid("series with different steps".into()));
        }
        let lead = &self.leading_exponent + &o.leading_exponent;
        let trunc = std::cmp::min(&self.truncation_order + &o.leading_exponent, &o.truncation_order + &self.leading_exponent);
        let count = terms_above(&lead, &self.step, &trunc);
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; count];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j < count {
                    out[i + j] = out[i + j].add_c(&a.mul_c(b));
                }
            }
        }
        Ok(FractionalSeries { pivot: self.pivot.clone(), leading_exponent: lead, step: self.step.clone(), coeffs: out, truncation_order: trunc })
    }
}

fn terms_above(lead: &Q, step: &Q, trunc: &Q) -> usize {
    // number of j ≥ 0 with lead − j·step > trunc
    let span = (lead - trunc) / step;
    if span <= Q::zero() {
        return 0;
    }
    let c = span.ceil().to_integer();
    c.to_usize().unwrap_or(0)
}

/// Expansion of `f(v)^e` at `v = ∞` for `f` monic in `v`; the other variables of `f`
/// are treated as coefficients. Terms with exponent above `trunc` are returned.
pub fn puiseux_at_infinity(f: &SparsePoly, var: usize, e: &Q, trunc: &Q) -> Result<FractionalSeries<SparsePoly>> {
    let n = f.degree_in(var);
    let vars = f.vars().clone();
    let mut by_power = vec![SparsePoly::zero(&vars); n as usize + 1];
    for (m, c) in f.terms() {
        let mut m2 = m.clone();
        let k = m2[var];
        m2[var] = 0;
        by_power[k as usize].add_term(m2, c.clone());
    }
    if by_power[n as usize] != SparsePoly::one(&vars) || n == 0 {
        return Err(Error::Invalid("puiseux expansion needs a monic polynomial of positive degree".into()));
    }
    let lead = qi(n as i64) * e;
    let count = terms_above(&lead, &Q::one(), trunc);
    let zero = SparsePoly::zero(&vars);
    let mut coeffs = vec![zero.clone(); count.max(1)];
    coeffs[0] = SparsePoly::one(&vars);
    for j in 1..count.min(n as usize + 1) {
        coeffs[j] = by_power[n as usize - j].clone();
    }
    let base = PowerSeries::new(coeffs, count.max(1), &zero);
    let pw = base.pow_q(e)?;
    let mut out = pw.coeffs;
    out.truncate(count);
    Ok(FractionalSeries { pivot: vars.name(var).to_string(), leading_exponent: lead, step: Q::one(), coeffs: out, truncation_order: trunc.clone() })
}

/// Rational version for univariate input.
pub fn puiseux_univariate(f: &SparsePoly, e: &Q, trunc: &Q) -> Result<FractionalSeries<Q>> {
    if f.vars().len() != 1 {
        return Err(Error::Invalid("univariate polynomial expected".into()));
    }
    let s = puiseux_at_infinity(f, 0, e, trunc)?;
    Ok(FractionalSeries {
        pivot: s.pivot,
        leading_exponent: s.leading_exponent,
        step: s.step,
        coeffs: s.coeffs.iter().map(|c| c.constant_term()).collect(),
        truncation_order: s.truncation_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::VarSet;
    use crate::algebra::rational::q;

    #[test]
    fn exact_root() {
        let v = VarSet::ungraded(&["x"]);
        let f = SparsePoly::var(&v, 0).pow(2);
        let s = puiseux_univariate(&f, &q(1, 2), &qi(-3)).unwrap();
        assert_eq!(s.leading_exponent, qi(1));
        assert_eq!(s.coeffs, vec![qi(1), qi(0), qi(0), qi(0)]);
    }

    #[test]
    fn sqrt_with_parameter() {
        let v = VarSet::ungraded(&["x", "a1"]);
        let x = SparsePoly::var(&v, 0);
        let a = SparsePoly::var(&v, 1);
        let f = &x.pow(2) + &(&a * &x);
        let s = puiseux_at_infinity(&f, 0, &q(1, 2), &qi(-2)).unwrap();
        assert_eq!(s.coeffs.len(), 3);
        assert_eq!(s.coeffs[0], SparsePoly::one(&v));
        assert_eq!(s.coeffs[1], a.scale(&q(1, 2)));
        assert_eq!(s.coeffs[2], a.pow(2).scale(&q(-1, 8)));
        // squaring recovers f up to the truncation
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.coeff_at(&qi(2)).unwrap(), SparsePoly::one(&v));
        assert_eq!(sq.coeff_at(&qi(1)).unwrap(), a);
        assert_eq!(sq.coeff_at(&qi(0)).unwrap(), SparsePoly::zero(&v));
        assert!(sq.coeff_at(&qi(-1)).is_none());
    }

    #[test]
    fn cube_root_of_chebyshev_type() {
        let v = VarSet::ungraded(&["z"]);
        let z = SparsePoly::var(&v, 0);
        let f = &z.pow(3) - &z.scale(&qi(3));
        let s = puiseux_univariate(&f, &q(1, 3), &qi(-3)).unwrap();
        assert_eq!(s.coeff_at(&qi(1)), Some(qi(1)));
        assert_eq!(s.coeff_at(&qi(0)), Some(qi(0)));
        assert_eq!(s.coeff_at(&qi(-1)), Some(qi(-1)));
        assert_eq!(s.coeff_at(&qi(-2)), Some(qi(0)));
    }

    #[test]
    fn non_monic_rejected() {
        let v = VarSet::ungraded(&["x"]);
        let f = SparsePoly::var(&v, 0).pow(2).scale(&qi(2));
        assert!(puiseux_univariate(&f, &q(1, 2), &qi(-2)).is_err());
    }

    #[test]
    fn log_exp_and_reversion() {
        let z = Q::zero();
        // log(1+s) then reverting s − s²/2 + … gives back the series of e^s − 1
        let one_plus_s = PowerSeries::new(vec![qi(1), qi(1)], 6, &z);
        let l = one_plus_s.log1p().unwrap();
        assert_eq!(l.coeffs, vec![qi(0), qi(1), q(-1, 2), q(1, 3), q(-1, 4), q(1, 5)]);
        let inv = l.revert().unwrap();
        assert_eq!(inv.coeffs, vec![qi(0), qi(1), q(1, 2), q(1, 6), q(1, 24), q(1, 120)]);
        let back = l.compose(&inv).unwrap();
        assert_eq!(back.coeffs, vec![qi(0), qi(1), qi(0), qi(0), qi(0), qi(0)]);
    }

    #[test]
    fn rational_powers_multiply() {
        let z = Q::zero();
        let g = PowerSeries::new(vec![qi(1), qi(2), qi(-1), q(1, 3)], 6, &z);
        let a = g.pow_q(&q(1, 3)).unwrap();
        let cube = a.mul(&a).mul(&a);
        assert_eq!(cube, g);
    }
}
