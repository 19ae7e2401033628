use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::rational::{fmt_q, parse_q, to_f64, Q};
use crate::error::{Error, Result};

pub type Mono = Vec<u32>;

/// Ordered, named indeterminates, each carrying a rational grading degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
    degrees: Vec<Q>,
}

impl VarSet {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, Q)>) -> Arc<Self> {
        let (names, degrees) = vars.into_iter().map(|(n, d)| (n.into(), d)).unzip();
        Arc::new(VarSet { names, degrees })
    }

    pub fn ungraded(names: &[&str]) -> Arc<Self> {
        Self::new(names.iter().map(|n| (*n, Q::zero())))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> &Q {
        &self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn mono_degree(&self, m: &[u32]) -> Q {
        m.iter().zip(&self.degrees).filter(|(e, _)| **e > 0).fold(Q::zero(), |acc, (e, d)| acc + d * Q::from_integer((*e).into()))
    }

    /// A new set with `more` appended.
    pub fn extended<S: Into<String>>(&self, more: impl IntoIterator<Item = (S, Q)>) -> Arc<Self> {
        let mut names = self.names.clone();
        let mut degrees = self.degrees.clone();
        for (n, d) in more {
            names.push(n.into());
            degrees.push(d);
        }
        Arc::new(VarSet { names, degrees })
    }
}

fn same(a: &Arc<VarSet>, b: &Arc<VarSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct SparsePoly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Mono, Q>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        same(&self.vars, &other.vars) && self.terms == other.terms
    }
}

/// Right-hand side of a substitution.
#[derive(Clone, Debug)]
pub enum Binding {
    Poly(SparsePoly),
    Value(Q),
}

impl SparsePoly {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        SparsePoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<VarSet>, c: Q) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, Q::one())
    }

    pub fn var(vars: &Arc<VarSet>, i: usize) -> Self {
        let mut m = vec![0; vars.len()];
        m[i] = 1;
        Self::monomial(vars, m, Q::one())
    }

    pub fn var_named(vars: &Arc<VarSet>, name: &str) -> Result<Self> {
        Ok(Self::var(vars, vars.require(name)?))
    }

    pub fn monomial(vars: &Arc<VarSet>, m: Mono, c: Q) -> Self {
        assert_eq!(m.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(vars: &Arc<VarSet>, terms: impl IntoIterator<Item = (Mono, Q)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Q> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Mono, Q> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|e| *e == 0))
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.len(), self.vars.len());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) {
        assert!(same(&self.vars, &other.vars), "polynomials over different variable lists");
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        self.check_same(other);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        self.check_same(other);
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        SparsePoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &[u32], c: &Q) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, d)| (k.iter().zip(m).map(|(a, b)| a + b).collect(), d * c)).filter(|(_, d): &(Mono, Q)| !d.is_zero()).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut m2 = m.clone();
                m2[i] -= 1;
                out.add_term(m2, c * Q::from_integer(m[i].into()));
            }
        }
        out
    }

    /// `x_i ∂/∂x_i`, the Euler operator in one variable.
    pub fn log_derivative(&self, i: usize) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| m[i] > 0).map(|(m, c)| (m.clone(), c * Q::from_integer(m[i].into()))).collect(),
        }
    }

    pub fn derivative_named(&self, name: &str) -> Result<Self> {
        Ok(self.derivative(self.vars.require(name)?))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    /// The common weighted degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<Q> {
        let mut it = self.terms.keys().map(|m| self.vars.mono_degree(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Terms whose weighted degree differs from `d`.
    pub fn inhomogeneous_terms(&self, d: &Q) -> Vec<(Mono, Q)> {
        self.terms.iter().filter(|(m, _)| &self.vars.mono_degree(m) != d).map(|(m, c)| (m.clone(), c.clone())).collect()
    }

    /// Replace every variable by a polynomial over `target`.
    pub fn compose(&self, images: &[SparsePoly], target: &Arc<VarSet>) -> Self {
        assert_eq!(images.len(), self.vars.len());
        let mut cache: Vec<Vec<SparsePoly>> = images.iter().map(|p| vec![SparsePoly::one(target), p.clone()]).collect();
        let mut out = SparsePoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = SparsePoly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul_ref(&images[i]);
                    cache[i].push(next);
                }
                term = term.mul_ref(&cache[i][e as usize]);
                if term.is_zero() {
                    break;
                }
            }
            out.add_assign_ref(&term);
        }
        out
    }

    /// Simultaneous substitution; unbound variables are left untouched.
    pub fn substitute(&self, bindings: &[(&str, Binding)]) -> Result<Self> {
        let mut images: Vec<SparsePoly> = (0..self.vars.len()).map(|i| Self::var(&self.vars, i)).collect();
        for (name, b) in bindings {
            let i = self.vars.require(name)?;
            images[i] = match b {
                Binding::Value(v) => Self::constant(&self.vars, v.clone()),
                Binding::Poly(p) => {
                    if !same(p.vars(), &self.vars) {
                        return Err(Error::Invalid(format!("binding for `{name}` lives over a different variable list")));
                    }
                    p.clone()
                }
            };
        }
        Ok(self.compose(&images, &self.vars))
    }

    /// Substitute rational values for some variables (by index), keeping the variable list.
    pub fn partial_eval(&self, values: &[(usize, Q)]) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut c2 = c.clone();
            for (i, v) in values {
                let e = m2[*i];
                if e > 0 {
                    c2 *= num_traits::pow(v.clone(), e as usize);
                    m2[*i] = 0;
                }
            }
            out.add_term(m2, c2);
        }
        out
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        assert_eq!(x.len(), self.vars.len());
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m) {
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| to_f64(c) * m.iter().zip(x).map(|(&e, xi)| xi.powi(e as i32)).product::<f64>()).sum()
    }

    pub fn eval_c64(&self, x: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|(m, c)| m.iter().zip(x).fold(Complex64::new(to_f64(c), 0.0), |acc, (&e, xi)| acc * xi.powi(e as i32))).sum()
    }

    /// Rewrite over a different variable list, matching variables by name.
    pub fn embed(&self, target: &Arc<VarSet>) -> Result<Self> {
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index_of(n)).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; target.len()];
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => m2[j] += e,
                    None => return Err(Error::UnknownVariable(self.vars.name(i).to_string())),
                }
            }
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Group terms by their exponents in `outer`; each group's coefficient is a polynomial
    /// in the remaining variables `inner`, written over `inner_vars`.
    pub fn split(&self, outer: &[usize], inner: &[usize], inner_vars: &Arc<VarSet>) -> BTreeMap<Mono, SparsePoly> {
        let mut out: BTreeMap<Mono, SparsePoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Mono = outer.iter().map(|&i| m[i]).collect();
            let im: Mono = inner.iter().map(|&i| m[i]).collect();
            out.entry(key).or_insert_with(|| SparsePoly::zero(inner_vars)).add_term(im, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(super::rational::bits).max().unwrap_or(0)
    }

    /// `[{"coeff": "n/d", "exps": {"var": e}}]`, zero exponents omitted.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let exps: serde_json::Map<String, Value> =
                        m.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (self.vars.name(i).to_string(), json!(e))).collect();
                    json!({"coeff": fmt_q(c), "exps": exps})
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, vars: &Arc<VarSet>) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Invalid("polynomial must be a JSON array".into()))?;
        let mut p = Self::zero(vars);
        for t in arr {
            let c = t.get("coeff").and_then(Value::as_str).ok_or_else(|| Error::Invalid("term without string coeff".into())).and_then(parse_q)?;
            let mut m = vec![0; vars.len()];
            if let Some(exps) = t.get("exps").and_then(Value::as_object) {
                for (name, e) in exps {
                    let i = vars.require(name)?;
                    m[i] = e.as_u64().ok_or_else(|| Error::Invalid(format!("bad exponent for {name}")))? as u32;
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.iter().sum::<u32>().cmp(&a.0.iter().sum::<u32>()).then(b.0.cmp(a.0)));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if k > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { self.vars.name(i).to_string() } else { format!("{}^{}", self.vars.name(i), e) })
                .collect();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", a, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.mul_ref(rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-Q::one())
    }
}

impl Add for SparsePoly {
    type Output = SparsePoly;
    fn add(mut self, rhs: SparsePoly) -> SparsePoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for SparsePoly {
    type Output = SparsePoly;
    fn sub(mut self, rhs: SparsePoly) -> SparsePoly {
        self.add_scaled(&rhs, &-Q::one());
        self
    }
}

impl Mul for SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: SparsePoly) -> SparsePoly {
        self.mul_ref(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};

    fn xyz() -> Arc<VarSet> {
        VarSet::ungraded(&["x", "y", "z"])
    }

    #[test]
    fn substitute_constant_binding() {
        let v = VarSet::ungraded(&["x", "y"]);
        let x = SparsePoly::var(&v, 0);
        let y = SparsePoly::var(&v, 1);
        let p = &x.pow(2) + &y;
        let r = p.substitute(&[("y", Binding::Value(qi(1)))]).unwrap();
        assert_eq!(r, &x.pow(2) + &SparsePoly::one(&v));
    }

    #[test]
    fn substitute_identity() {
        let v = VarSet::ungraded(&["x", "y"]);
        let x = SparsePoly::var(&v, 0);
        let y = SparsePoly::var(&v, 1);
        let p = &x * &y;
        let r = p.substitute(&[("x", Binding::Poly(x.clone())), ("y", Binding::Poly(y.clone()))]).unwrap();
        assert_eq!(r, p);
    }

    #[test]
    fn substitute_restriction_to_z_axis() {
        let v = xyz();
        let (x, y, z) = (SparsePoly::var(&v, 0), SparsePoly::var(&v, 1), SparsePoly::var(&v, 2));
        let f = &(&(&-&(&(&x * &y) * &z) + &x.pow(2)) + &z.pow(3)) - &z.scale(&qi(3));
        let r = f.substitute(&[("x", Binding::Value(qi(0))), ("y", Binding::Value(qi(0)))]).unwrap();
        assert_eq!(r, &z.pow(3) - &z.scale(&qi(3)));
    }

    #[test]
    fn substitute_unknown_variable() {
        let v = xyz();
        let err = SparsePoly::var(&v, 0).substitute(&[("w", Binding::Value(qi(0)))]).unwrap_err();
        assert_eq!(err, Error::UnknownVariable("w".into()));
    }

    #[test]
    fn derivative_and_degree() {
        let v = VarSet::new([("t0", qi(-2)), ("t1", qi(-1))]);
        let p = SparsePoly::from_terms(&v, [(vec![1, 2], q(1, 4)), (vec![0, 4], q(-1, 96))]);
        assert_eq!(p.homogeneous_degree(), Some(qi(-4)));
        let d = p.derivative(1);
        assert_eq!(d.coeff(&[1, 1]), q(1, 2));
        assert_eq!(d.coeff(&[0, 3]), q(-1, 24));
    }

    #[test]
    fn json_roundtrip() {
        let v = xyz();
        let p = SparsePoly::from_terms(&v, [(vec![1, 0, 2], q(-3, 7)), (vec![0, 0, 0], qi(2))]);
        let j = p.to_json();
        assert_eq!(SparsePoly::from_json(&j, &v).unwrap(), p);
    }

    #[test]
    fn display_is_readable() {
        let v = xyz();
        let p = SparsePoly::from_terms(&v, [(vec![2, 0, 0], qi(1)), (vec![0, 1, 0], q(-1, 2))]);
        assert_eq!(p.to_string(), "x^2 - 1/2*y");
    }

    #[test]
    fn split_groups_outer_monomials() {
        let v = VarSet::ungraded(&["t", "u"]);
        let inner = VarSet::ungraded(&["u"]);
        let p = SparsePoly::from_terms(&v, [(vec![1, 1], qi(2)), (vec![1, 0], qi(3)), (vec![0, 2], qi(1))]);
        let s = p.split(&[0], &[1], &inner);
        assert_eq!(s.len(), 2);
        assert_eq!(s[&vec![1]], SparsePoly::from_terms(&inner, [(vec![1], qi(2)), (vec![0], qi(3))]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
            prop::collection::vec((prop::collection::vec(0u32..3, 3), -5i64..6, 1i64..4), 0..5)
        }

        fn build(v: &Arc<VarSet>, t: &[(Vec<u32>, i64, i64)]) -> SparsePoly {
            SparsePoly::from_terms(v, t.iter().map(|(m, n, d)| (m.clone(), q(*n, *d))))
        }

        proptest! {
            #[test]
            fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
                let v = xyz();
                let (a, b, c) = (build(&v, &a), build(&v, &b), build(&v, &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert!((&a - &a).is_zero());
            }

            #[test]
            fn leibniz(a in arb_poly(), b in arb_poly()) {
                let v = xyz();
                let (a, b) = (build(&v, &a), build(&v, &b));
                prop_assert_eq!((&a * &b).derivative(1), &(&a.derivative(1) * &b) + &(&a * &b.derivative(1)));
            }
        }
    }
}
