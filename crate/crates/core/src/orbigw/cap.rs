use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::wdvv::{coefficient_equations, solve_graded, wdvv_residuals, Direction, Frame, GradedUnknowns};
use crate::algebra::rational::factorial;
use crate::algebra::{parse_poly, q, qi, QMatrix, SparsePoly, VarSet, Q};
use crate::error::{Error, Result};

/// Genus-0 potential of the orbifold cap C/Z_α.
///
/// `a_terms` are the closed terms; `b_hat[j-1]` is `j` times the coefficient
/// of `p_j`, both over `t0, t1, …, t_{α−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CapPotential {
    pub alpha: u32,
    pub vars: Arc<VarSet>,
    pub a_terms: SparsePoly,
    pub b_hat: Vec<SparsePoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapMode {
    Fixture,
    Solve,
}

pub fn cap_vars(alpha: u32) -> Arc<VarSet> {
    VarSet::new((0..alpha).map(|k| (format!("t{k}"), q(2 * k as i64, alpha as i64) - qi(2))))
}

const F2: &str = "1/4*t0*t1^2 - 1/96*t1^4 + t1*p1 + 1/2*p2";
// the printed t3^6 is read as t2^6: the cap has no t3
const F3: &str = "1/3*t0*t1*t2 + 1/18*t1^3 - 1/36*t1^2*t2^2 + 1/648*t1*t2^4 - 1/19440*t2^6 \
                  + (t1 + 1/6*t2^2)*p1 + 1/2*t2*p2 + 1/3*p3";
const F4: &str = "-t3^8/4128768 + t2*t3^6/73728 - t1*t3^5/30720 - t2^2*t3^4/3072 + 1/384*t1*t2*t3^3 \
                  + 1/384*t2^3*t3^2 - 1/64*t1^2*t3^2 - 1/32*t1*t2^2*t3 + 1/4*t0*t1*t3 - t2^4/192 \
                  + 1/8*t0*t2^2 + 1/8*t1^2*t2 + (t3^3/96 + 1/4*t2*t3 + t1)*p1 + (t3^2/8 + t2/2)*p2 \
                  + 1/3*t3*p3 + 1/4*p4";
const F5: &str = "-7*t4^10/8100000000 + 7*t3*t4^8/90000000 - t2*t4^7/3150000 - 13*t3^2*t4^6/4500000 \
                  + t1*t4^6/2250000 + t3^5/3000 + 11*t2*t3*t4^5/375000 + 7*t3^3*t4^4/150000 \
                  - t2^2*t4^4/7500 - t1*t3*t4^4/15000 - 1/150*t1*t3^3 - t2*t3^2*t4^3/1500 \
                  + 1/750*t1*t2*t4^3 + 1/10*t1*t2^2 - 1/50*t2^2*t3^2 - 3*t3^4*t4^2/10000 \
                  - 1/100*t1^2*t4^2 + 1/500*t1*t3^2*t4^2 + 1/250*t2^2*t3*t4^2 + 1/10*t1^2*t3 \
                  + 1/5*t0*t2*t3 - 1/150*t2^3*t4 + 1/250*t2*t3^3*t4 + 1/5*t0*t1*t4 - 1/25*t1*t2*t3*t4 \
                  + (t4^4/3000 + 1/50*t3*t4^2 + t2*t4/5 + t3^2/10 + t1)*p1 \
                  + (t4^3/75 + t3*t4/5 + t2/2)*p2 + (t4^2/10 + t3/3)*p3 + 1/4*t4*p4 + 1/5*p5";

/// The raw cap expression in `t0..t_{α−1}, p1..p_α`, as tabulated.
pub fn cap_fixture_source(alpha: u32) -> Option<&'static str> {
    match alpha {
        2 => Some(F2),
        3 => Some(F3),
        4 => Some(F4),
        5 => Some(F5),
        _ => None,
    }
}

impl CapPotential {
    /// Splits a cap expression into closed terms and `B̂_j = j·[p_j]`.
    pub fn from_expression(alpha: u32, expr: &str) -> Result<Self> {
        let vars = cap_vars(alpha);
        let ext = vars.extended((1..=alpha).map(|j| (format!("p{j}"), Q::zero())));
        let f = parse_poly(expr, &ext)?;
        let n = vars.len();
        let mut a_terms = SparsePoly::zero(&vars);
        let mut b_hat = vec![SparsePoly::zero(&vars); alpha as usize];
        for (m, c) in f.terms() {
            let pdeg: u32 = m[n..].iter().sum();
            match pdeg {
                0 => a_terms.add_term(m[..n].to_vec(), c.clone()),
                1 => {
                    let j = m[n..].iter().position(|e| *e == 1).unwrap() + 1;
                    b_hat[j - 1].add_term(m[..n].to_vec(), c * qi(j as i64));
                }
                _ => return Err(Error::Invalid("cap expression is not linear in p".into())),
            }
        }
        Ok(CapPotential { alpha, vars, a_terms, b_hat })
    }

    pub fn b_hat(&self, j: u32) -> &SparsePoly {
        &self.b_hat[j as usize - 1]
    }

    /// Every stored monomial has weighted degree −4 once `p_j` (deg −2j/α − 2) is restored.
    pub fn is_homogeneous(&self) -> bool {
        let a_ok = self.a_terms.homogeneous_degree().is_none_or(|d| d == qi(-4));
        let b_ok = self.b_hat.iter().enumerate().all(|(j, b)| {
            let pj = -q(2 * (j as i64 + 1), self.alpha as i64) - qi(2);
            b.homogeneous_degree().is_none_or(|d| d + &pj == qi(-4))
        });
        a_ok && b_ok
    }
}

pub fn cap_potential(alpha: u32, mode: CapMode) -> Result<CapPotential> {
    if alpha < 2 {
        return Err(Error::Invalid("cap order must be at least 2".into()));
    }
    match mode {
        CapMode::Fixture => {
            let src = cap_fixture_source(alpha).ok_or_else(|| Error::Invalid(format!("no tabulated cap for order {alpha}")))?;
            CapPotential::from_expression(alpha, src)
        }
        CapMode::Solve => solve_cap(alpha),
    }
}

/// Exponent vectors over `t1..t_{α−1}` with Σ(α−k)e_k = `weight`.
fn weighted_monomials(alpha: u32, weight: u32) -> Vec<Vec<u32>> {
    fn rec(alpha: u32, k: u32, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == alpha {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = alpha - k;
        for e in 0..=rem / w {
            cur.push(e);
            rec(alpha, k + 1, rem - e * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(alpha, 1, weight, &mut Vec::new(), &mut out);
    out
}

/// Classical cup-product coefficient (1/α)/∏ e_k! of a cubic monomial.
fn cubic_coefficient(alpha: u32, e: &[u32]) -> Q {
    let mut c = q(1, alpha as i64);
    for &x in e {
        c /= Q::from_integer(factorial(x as u64));
    }
    c
}

enum Slot {
    Known(Q),
    Unknown(usize),
}

/// Glues two caps into P¹_{α,α}, imposes WDVV on the result and solves for
/// the unknown cap coefficients grade by grade.
pub fn solve_cap(alpha: u32) -> Result<CapPotential> {
    let a = alpha as usize;
    // ansatz slots
    let mut a_slots: Vec<(Vec<u32>, Slot)> = Vec::new();
    let mut names: Vec<(String, Q)> = Vec::new();
    let mut grades: Vec<u32> = Vec::new();
    for e in weighted_monomials(alpha, 2 * alpha) {
        let n: u32 = e.iter().sum();
        if n == 3 {
            let c = cubic_coefficient(alpha, &e);
            a_slots.push((e, Slot::Known(c)));
        } else if n > 3 {
            names.push((format!("A{}", names.len()), Q::zero()));
            grades.push(n);
            a_slots.push((e, Slot::Unknown(names.len() - 1)));
        }
    }
    let mut b_slots: Vec<Vec<(Vec<u32>, Slot)>> = Vec::new();
    for d in 1..=alpha {
        let mut v = Vec::new();
        for e in weighted_monomials(alpha, alpha - d) {
            let n: u32 = e.iter().sum();
            if n <= 1 {
                v.push((e, Slot::Known(Q::one())));
            } else {
                names.push((format!("B{d}_{}", names.len()), Q::zero()));
                grades.push(n + 1);
                v.push((e, Slot::Unknown(names.len() - 1)));
            }
        }
        b_slots.push(v);
    }

    // variables: t0, a1.., b1.., s, Q, unknowns
    let mut geo: Vec<(String, Q)> = vec![("t0".into(), qi(-2))];
    for side in ["a", "b"] {
        for k in 1..alpha {
            geo.push((format!("{side}{k}"), q(2 * k as i64, alpha as i64) - qi(2)));
        }
    }
    geo.push(("s".into(), Q::zero()));
    geo.push(("Q".into(), -q(4, alpha as i64)));
    let ngeo = geo.len();
    let s_idx = ngeo - 2;
    let q_idx = ngeo - 1;
    let vars = VarSet::new(geo.into_iter().chain(names.iter().cloned()));
    let unknown_index = |u: usize| ngeo + u;

    let side_mono = |e: &[u32], off: usize| -> Vec<u32> {
        let mut m = vec![0; vars.len()];
        for (k, &x) in e.iter().enumerate() {
            m[off + k] = x;
        }
        m
    };
    let eval_slots = |slots: &[(Vec<u32>, Slot)], off: usize| -> SparsePoly {
        let mut p = SparsePoly::zero(&vars);
        for (e, slot) in slots {
            let mut m = side_mono(e, off);
            match slot {
                Slot::Known(c) => p.add_term(m, c.clone()),
                Slot::Unknown(u) => {
                    m[unknown_index(*u)] += 1;
                    p.add_term(m, Q::one());
                }
            }
        }
        p
    };

    let mut f = SparsePoly::zero(&vars);
    let mut m = vec![0; vars.len()];
    m[0] = 2;
    m[s_idx] = 1;
    f.add_term(m, q(1, 2));
    for off in [1, a] {
        for k in 1..a {
            let j = a - k;
            if k > j {
                continue;
            }
            let mut m = vec![0; vars.len()];
            m[0] = 1;
            m[off + k - 1] += 1;
            m[off + j - 1] += 1;
            let c = if k == j { q(1, 2 * alpha as i64) } else { q(1, alpha as i64) };
            f.add_term(m, c);
        }
        f.add_assign_ref(&eval_slots(&a_slots, off));
    }
    for d in 1..=alpha {
        let left = eval_slots(&b_slots[d as usize - 1], 1);
        let right = eval_slots(&b_slots[d as usize - 1], a);
        let mut qm = vec![0; vars.len()];
        qm[q_idx] = d;
        f.add_assign_ref(&left.mul_ref(&right).mul_mono(&qm, &q(1, d as i64)));
    }

    let n = 2 * a;
    let mut dirs: Vec<Direction> = (0..n - 1).map(Direction::Partial).collect();
    dirs.push(Direction::Divisor { s: s_idx, q: q_idx });
    let mut eta_inv = QMatrix::zeros(n, n);
    eta_inv.set(0, n - 1, Q::one());
    eta_inv.set(n - 1, 0, Q::one());
    for off in [1, a] {
        for k in 1..a {
            eta_inv.set(off + k - 1, off + (a - k) - 1, qi(alpha as i64));
        }
    }
    let frame = Frame::new(dirs, &eta_inv);
    let residuals: Vec<SparsePoly> = wdvv_residuals(&f, &frame).into_iter().map(|(_, r)| r).collect();
    let outer: Vec<usize> = (0..ngeo).collect();
    let eqs = coefficient_equations(&residuals, &outer);
    let unknowns = GradedUnknowns { indices: (0..names.len()).map(unknown_index).collect(), grades };
    let sol = solve_graded(&eqs, &unknowns, &BTreeMap::new()).map_err(|e| Error::Solve(format!("cap of order {alpha}: {e}")))?;

    let cv = cap_vars(alpha);
    let lift = |e: &[u32]| -> Vec<u32> { std::iter::once(0).chain(e.iter().copied()).collect() };
    let value = |slot: &Slot| -> Q {
        match slot {
            Slot::Known(c) => c.clone(),
            Slot::Unknown(u) => sol[&unknown_index(*u)].clone(),
        }
    };
    let mut a_terms = SparsePoly::zero(&cv);
    for k in 1..alpha {
        let j = alpha - k;
        if k > j {
            continue;
        }
        let mut m = vec![0; a];
        m[0] = 1;
        m[k as usize] += 1;
        m[j as usize] += 1;
        a_terms.add_term(m, if k == j { q(1, 2 * alpha as i64) } else { q(1, alpha as i64) });
    }
    for (e, slot) in &a_slots {
        a_terms.add_term(lift(e), value(slot));
    }
    let b_hat = b_slots
        .iter()
        .map(|slots| {
            let mut p = SparsePoly::zero(&cv);
            for (e, slot) in slots {
                p.add_term(lift(e), value(slot));
            }
            p
        })
        .collect();
    Ok(CapPotential { alpha, vars: cv, a_terms, b_hat })
}
