use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::linalg::solve_sparse;
use crate::algebra::{QMatrix, SparsePoly, Q};
use crate::error::{Error, Result};

/// A derivation acting on potentials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Partial(usize),
    /// `∂_s + Q∂_Q`: the divisor variable acting on e^{ds}.
    Divisor {
        s: usize,
        q: usize,
    },
}

impl Direction {
    pub fn apply(&self, f: &SparsePoly) -> SparsePoly {
        match *self {
            Direction::Partial(i) => f.derivative(i),
            Direction::Divisor { s, q } => &f.derivative(s) + &f.log_derivative(q),
        }
    }
}

/// Flat directions together with the inverse pairing.
#[derive(Clone, Debug)]
pub struct Frame {
    pub directions: Vec<Direction>,
    pub eta_inv: Vec<(usize, usize, Q)>,
}

impl Frame {
    pub fn new(directions: Vec<Direction>, eta_inv: &QMatrix) -> Self {
        let mut e = Vec::new();
        for i in 0..eta_inv.rows {
            for j in 0..eta_inv.cols {
                if !eta_inv.get(i, j).is_zero() {
                    e.push((i, j, eta_inv.get(i, j).clone()));
                }
            }
        }
        Frame { directions, eta_inv: e }
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }
}

/// All third derivatives `f_{ijk}`, keyed by sorted index triples.
pub fn third_derivatives(f: &SparsePoly, frame: &Frame) -> HashMap<(usize, usize, usize), SparsePoly> {
    let n = frame.dim();
    let first: Vec<SparsePoly> = frame.directions.iter().map(|d| d.apply(f)).collect();
    let triples: Vec<(usize, usize, usize)> = (0..n).flat_map(|i| (i..n).flat_map(move |j| (j..n).map(move |k| (i, j, k)))).collect();
    triples
        .into_par_iter()
        .map(|(i, j, k)| {
            let p = frame.directions[k].apply(&frame.directions[j].apply(&first[i]));
            ((i, j, k), p)
        })
        .collect()
}

fn key(i: usize, j: usize, k: usize) -> (usize, usize, usize) {
    let mut v = [i, j, k];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

/// `Σ_{m,n} f_{ijm} η^{mn} f_{nkl}`.
fn contraction(d3: &HashMap<(usize, usize, usize), SparsePoly>, frame: &Frame, i: usize, j: usize, k: usize, l: usize, zero: &SparsePoly) -> SparsePoly {
    let mut acc = zero.clone();
    for (m, n, c) in &frame.eta_inv {
        let a = &d3[&key(i, j, *m)];
        let b = &d3[&key(*n, k, l)];
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc.add_scaled(&a.mul_ref(b), c);
    }
    acc
}

/// One residual per independent associativity relation. For each sorted
/// quadruple the three pairings must agree, which gives two relations.
pub fn wdvv_residuals(f: &SparsePoly, frame: &Frame) -> Vec<((usize, usize, usize, usize), SparsePoly)> {
    let n = frame.dim();
    let d3 = third_derivatives(f, frame);
    let zero = SparsePoly::zero(f.vars());
    let quads: Vec<(usize, usize, usize, usize)> =
        (0..n).flat_map(|a| (a..n).flat_map(move |b| (b..n).flat_map(move |c| (c..n).map(move |d| (a, b, c, d))))).collect();
    quads
        .into_par_iter()
        .flat_map_iter(|(a, b, c, d)| {
            let p1 = contraction(&d3, frame, a, b, c, d, &zero);
            let p2 = contraction(&d3, frame, a, c, b, d, &zero);
            let p3 = contraction(&d3, frame, a, d, b, c, &zero);
            let r1 = &p1 - &p2;
            let r2 = &p1 - &p3;
            [((a, b, c, d), r1), ((a, b, c, d), r2)].into_iter().filter(|(_, r)| !r.is_zero())
        })
        .collect()
}

/// Unknown coefficients in an ansatz, solved grade by grade.
#[derive(Clone, Debug)]
pub struct GradedUnknowns {
    /// Indices of the unknowns inside the polynomial's variable list.
    pub indices: Vec<usize>,
    pub grades: Vec<u32>,
}

/// Solves polynomial equations in the unknowns grade by grade. At each grade
/// only equations whose unknowns all have grade ≤ the current one and which
/// are linear in the current unknowns are used. `known` seeds fixed values.
pub fn solve_graded(equations: &[SparsePoly], unknowns: &GradedUnknowns, known: &BTreeMap<usize, Q>) -> Result<BTreeMap<usize, Q>> {
    let mut known = known.clone();
    let grade_of: HashMap<usize, u32> = unknowns.indices.iter().copied().zip(unknowns.grades.iter().copied()).collect();
    let mut grades: Vec<u32> = unknowns.grades.clone();
    grades.sort_unstable();
    grades.dedup();
    let mut pending: Vec<SparsePoly> = equations.to_vec();
    for g in grades {
        let cur: Vec<usize> = unknowns.indices.iter().copied().filter(|i| grade_of[i] == g && !known.contains_key(i)).collect();
        let subst: Vec<(usize, Q)> = known.iter().map(|(i, v)| (*i, v.clone())).collect();
        pending = pending.par_iter().map(|e| e.partial_eval(&subst)).filter(|e| !e.is_zero()).collect();
        if let Some(bad) = pending.iter().find(|e| e.is_constant()) {
            return Err(Error::Solve(format!("inconsistent relation {bad} before grade {g}")));
        }
        if cur.is_empty() {
            continue;
        }
        let col: HashMap<usize, usize> = cur.iter().enumerate().map(|(c, &i)| (i, c)).collect();
        let mut rows = Vec::new();
        'eq: for e in &pending {
            let mut row: Vec<(usize, Q)> = Vec::new();
            let mut rhs = Q::zero();
            for (m, c) in e.terms() {
                let mut lin = None;
                for (i, &x) in m.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    match grade_of.get(&i) {
                        Some(&gi) if gi > g => continue 'eq,
                        Some(_) if x == 1 && lin.is_none() => lin = Some(i),
                        Some(_) => continue 'eq,
                        None => return Err(Error::Solve("equation still depends on a non-unknown variable".into())),
                    }
                }
                match lin {
                    Some(i) => row.push((col[&i], c.clone())),
                    None => rhs -= c,
                }
            }
            rows.push((row, rhs));
        }
        let sol = solve_sparse(&rows, cur.len()).map_err(|e| match e {
            Error::Inconsistent { row } => Error::Solve(format!("inconsistent linear system at grade {g}, row {row}")),
            other => other,
        })?;
        if !sol.is_unique() {
            let names: Vec<String> = match equations.first() {
                Some(e) => sol.free_vars.iter().map(|&c| e.vars().name(cur[c]).to_string()).collect(),
                None => Vec::new(),
            };
            return Err(Error::Solve(format!("underdetermined at grade {g}: free {}", names.join(", "))));
        }
        for (c, v) in sol.particular.into_iter().enumerate() {
            known.insert(cur[c], v);
        }
    }
    let subst: Vec<(usize, Q)> = known.iter().map(|(i, v)| (*i, v.clone())).collect();
    if let Some(bad) = pending.iter().map(|e| e.partial_eval(&subst)).find(|e| !e.is_zero()) {
        return Err(Error::Solve(format!("relation {bad} fails after solving")));
    }
    Ok(known)
}

/// Coefficients of every residual with respect to the `outer` variables.
/// Each coefficient stays over the residual's variable list with the outer
/// exponents cleared, so unknown indices are preserved.
pub fn coefficient_equations(residuals: &[SparsePoly], outer: &[usize]) -> Vec<SparsePoly> {
    let mut out: Vec<SparsePoly> = residuals
        .par_iter()
        .flat_map_iter(|r| {
            let mut groups: BTreeMap<Vec<u32>, SparsePoly> = BTreeMap::new();
            for (m, c) in r.terms() {
                let k: Vec<u32> = outer.iter().map(|&i| m[i]).collect();
                let mut m2 = m.clone();
                for &i in outer {
                    m2[i] = 0;
                }
                groups.entry(k).or_insert_with(|| SparsePoly::zero(r.vars())).add_term(m2, c.clone());
            }
            groups.into_values().filter(|p| !p.is_zero()).collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.terms().cmp(b.terms())));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, qi, VarSet};

    fn p1_frame() -> (std::sync::Arc<VarSet>, Frame) {
        let v = VarSet::ungraded(&["t0", "s", "Q"]);
        let mut eta = QMatrix::zeros(2, 2);
        eta.set(0, 1, qi(1));
        eta.set(1, 0, qi(1));
        (v, Frame::new(vec![Direction::Partial(0), Direction::Divisor { s: 1, q: 2 }], &eta))
    }

    #[test]
    fn two_dimensional_is_trivially_associative() {
        let (v, fr) = p1_frame();
        let f = parse_poly("1/2*t0^2*s + Q", &v).unwrap();
        assert!(wdvv_residuals(&f, &fr).is_empty());
    }

    #[test]
    fn divisor_derivation() {
        let v = VarSet::ungraded(&["t0", "s", "Q"]);
        let f = parse_poly("t0^2*s + Q^3", &v).unwrap();
        let d = Direction::Divisor { s: 1, q: 2 }.apply(&f);
        assert_eq!(d, parse_poly("t0^2 + 3*Q^3", &v).unwrap());
    }

    #[test]
    fn graded_solver_linear_chain() {
        // a = 2, then b*a = 6
        let v = VarSet::ungraded(&["a", "b"]);
        let eqs = vec![parse_poly("a - 2", &v).unwrap(), parse_poly("a*b - 6", &v).unwrap()];
        let u = GradedUnknowns { indices: vec![0, 1], grades: vec![1, 2] };
        let s = solve_graded(&eqs, &u, &BTreeMap::new()).unwrap();
        assert_eq!(s[&1], qi(3));
        let under = solve_graded(&eqs[1..], &u, &BTreeMap::new());
        assert!(under.is_err());
    }
}
