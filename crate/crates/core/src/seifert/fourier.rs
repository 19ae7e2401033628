use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{SparsePoly, VarSet, Q};
use crate::error::{Error, Result};

/// Finite sum `Σ_m P_m(vars) e^{i m x / N}`: exponents are stored as numerators over `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeriesPoly {
    pub n: u64,
    vars: Arc<VarSet>,
    terms: BTreeMap<i64, SparsePoly>,
}

impl FourierSeriesPoly {
    pub fn zero(vars: &Arc<VarSet>, n: u64) -> Self {
        FourierSeriesPoly { n, vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(p: SparsePoly, n: u64) -> Self {
        let mut out = Self::zero(p.vars(), n);
        out.add_mode(0, p);
        out
    }

    /// `p · e^{iθx}`; `θ` must lie in `(1/N)ℤ`.
    pub fn mode(theta: &Q, p: SparsePoly, n: u64) -> Result<Self> {
        let m = numerator_over(theta, n)?;
        let mut out = Self::zero(p.vars(), n);
        out.add_mode(m, p);
        Ok(out)
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<i64, SparsePoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest and largest exponent numerator.
    pub fn range(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn add_mode(&mut self, m: i64, p: SparsePoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(q) => {
                q.add_assign_ref(&p);
                if q.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, p);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        for (m, p) in &other.terms {
            self.add_mode(*m, p.clone());
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.mul_within(other, i64::MIN, i64::MAX)
    }

    /// Product keeping only exponents in `lo..=hi`.
    pub fn mul_within(&self, other: &Self, lo: i64, hi: i64) -> Self {
        let mut out = Self::zero(&self.vars, self.n);
        for (m1, p1) in &self.terms {
            for (m2, p2) in &other.terms {
                let m = m1 + m2;
                if m >= lo && m <= hi {
                    out.add_mode(m, p1.mul_ref(p2));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(SparsePoly::one(&self.vars), self.n);
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// The average over one period `[0, 2πN]`.
    pub fn zero_mode(&self) -> SparsePoly {
        self.terms.get(&0).cloned().unwrap_or_else(|| SparsePoly::zero(&self.vars))
    }

    /// Negates every exponent.
    pub fn conjugate(&self) -> Self {
        FourierSeriesPoly { n: self.n, vars: self.vars.clone(), terms: self.terms.iter().map(|(m, p)| (-m, p.clone())).collect() }
    }

    pub fn eval(&self, x: f64, values: &[f64]) -> Complex64 {
        let vals: Vec<Complex64> = values.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        self.terms.iter().map(|(m, p)| p.eval_c64(&vals) * Complex64::from_polar(1.0, *m as f64 * x / self.n as f64)).sum()
    }
}

/// `θ·N` as an integer.
pub fn numerator_over(theta: &Q, n: u64) -> Result<i64> {
    let scaled = theta * Q::from_integer((n as i64).into());
    if !scaled.is_integer() {
        return Err(Error::Invalid(format!("exponent {theta} is not in (1/{n})Z")));
    }
    i64::try_from(scaled.to_integer()).map_err(|_| Error::Invalid(format!("exponent {theta} out of range")))
}

/// Product of factors, pruning exponents that the remaining factors can no longer cancel.
pub fn zero_mode_of_product(factors: &[FourierSeriesPoly], vars: &Arc<VarSet>, n: u64) -> SparsePoly {
    let ranges: Vec<(i64, i64)> = match factors.iter().map(|f| f.range()).collect::<Option<Vec<_>>>() {
        Some(r) => r,
        None => return SparsePoly::zero(vars),
    };
    // suffix sums of the reachable exponent interval
    let mut rest = vec![(0i64, 0i64); factors.len() + 1];
    for i in (0..factors.len()).rev() {
        rest[i] = (rest[i + 1].0 + ranges[i].0, rest[i + 1].1 + ranges[i].1);
    }
    let mut acc = FourierSeriesPoly::constant(SparsePoly::one(vars), n);
    for (i, f) in factors.iter().enumerate() {
        let (lo, hi) = rest[i + 1];
        acc = acc.mul_within(f, -hi, -lo);
        if acc.is_zero() {
            return SparsePoly::zero(vars);
        }
    }
    acc.zero_mode()
}

impl std::ops::Add for FourierSeriesPoly {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_assign_ref(&rhs);
        self
    }
}
