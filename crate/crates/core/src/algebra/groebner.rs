use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::linalg::QMatrix;
use super::poly::{Mono, SparsePoly, VarSet};
use super::rational::{bits, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// Degree reverse lexicographic with the variable list order `x > y > z > …`.
    #[default]
    DegRevLex,
}

#[derive(Clone, Debug)]
pub struct GroebnerCaps {
    pub max_coeff_bits: u64,
    pub max_basis_len: usize,
}

impl Default for GroebnerCaps {
    fn default() -> Self {
        GroebnerCaps { max_coeff_bits: 1_000_000, max_basis_len: 5000 }
    }
}

pub fn cmp_degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // smaller exponent in the last differing variable wins
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// Terms sorted ascending, so the leading term is last.
type GPoly = Vec<(Mono, Q)>;

fn to_g(p: &SparsePoly) -> GPoly {
    let mut v: GPoly = p.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    v.sort_by(|a, b| cmp_degrevlex(&a.0, &b.0));
    v
}

fn lm(g: &GPoly) -> &Mono {
    &g.last().unwrap().0
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn make_monic(g: &mut GPoly) {
    let inv = Q::one() / &g.last().unwrap().1;
    if inv.is_one() {
        return;
    }
    for t in g.iter_mut() {
        t.1 *= &inv;
    }
}

/// `a − c·m·b`, merged in ascending order.
fn sub_mul(a: &GPoly, c: &Q, m: &[u32], b: &GPoly) -> GPoly {
    let shifted: Vec<(Mono, Q)> = b.iter().map(|(k, d)| (k.iter().zip(m).map(|(x, y)| x + y).collect(), d * c)).collect();
    let mut out = Vec::with_capacity(a.len() + shifted.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < shifted.len() {
        if j == shifted.len() {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() {
            out.push((shifted[j].0.clone(), -shifted[j].1.clone()));
            j += 1;
        } else {
            match cmp_degrevlex(&a[i].0, &shifted[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((shifted[j].0.clone(), -shifted[j].1.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &a[i].1 - &shifted[j].1;
                    if !v.is_zero() {
                        out.push((a[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    out
}

fn reduce(f: &GPoly, basis: &[GPoly]) -> GPoly {
    let mut p = f.clone();
    let mut rem: GPoly = Vec::new();
    while let Some((m, c)) = p.last().cloned() {
        match basis.iter().find(|g| divides(lm(g), &m)) {
            Some(g) => {
                let q: Mono = m.iter().zip(lm(g)).map(|(a, b)| a - b).collect();
                let coef = &c / &g.last().unwrap().1;
                p = sub_mul(&p, &coef, &q, g);
            }
            None => {
                p.pop();
                rem.push((m, c));
            }
        }
    }
    rem.reverse();
    rem
}

fn spoly(f: &GPoly, g: &GPoly) -> GPoly {
    let l = lcm(lm(f), lm(g));
    let mf: Mono = l.iter().zip(lm(f)).map(|(a, b)| a - b).collect();
    let mg: Mono = l.iter().zip(lm(g)).map(|(a, b)| a - b).collect();
    let cf = Q::one() / &f.last().unwrap().1;
    let cg = Q::one() / &g.last().unwrap().1;
    let a: GPoly = f.iter().map(|(k, d)| (k.iter().zip(&mf).map(|(x, y)| x + y).collect(), d * &cf)).collect();
    sub_mul(&a, &cg, &mg, g)
}

fn check_bits(g: &GPoly, caps: &GroebnerCaps) -> Result<()> {
    if let Some(b) = g.iter().map(|(_, c)| bits(c)).max() {
        if b > caps.max_coeff_bits {
            return Err(Error::Resource(format!("Gröbner coefficient of {b} bits exceeds cap {}", caps.max_coeff_bits)));
        }
    }
    Ok(())
}

/// Reduced Gröbner basis, each element monic, sorted by leading monomial.
pub fn groebner_basis(gens: &[SparsePoly], caps: &GroebnerCaps) -> Result<Vec<SparsePoly>> {
    let vars = gens.first().map(|g| g.vars().clone()).ok_or_else(|| Error::Invalid("no generators".into()))?;
    let mut g: Vec<GPoly> = Vec::new();
    for p in gens {
        let mut h = reduce(&to_g(p), &g);
        if !h.is_empty() {
            make_monic(&mut h);
            g.push(h);
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let (best, _) =
            pairs.iter().enumerate().min_by(|(_, a), (_, b)| cmp_degrevlex(&lcm(lm(&g[a.0]), lm(&g[a.1])), &lcm(lm(&g[b.0]), lm(&g[b.1])))).unwrap();
        let (i, j) = pairs.swap_remove(best);
        let l = lcm(lm(&g[i]), lm(&g[j]));
        let coprime = lm(&g[i]).iter().zip(lm(&g[j])).all(|(a, b)| *a == 0 || *b == 0);
        if coprime {
            continue;
        }
        let chain = (0..g.len())
            .any(|k| k != i && k != j && divides(lm(&g[k]), &l) && !pairs.contains(&(i.min(k), i.max(k))) && !pairs.contains(&(j.min(k), j.max(k))));
        if chain {
            continue;
        }
        let mut h = reduce(&spoly(&g[i], &g[j]), &g);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        check_bits(&h, caps)?;
        if g.len() >= caps.max_basis_len {
            return Err(Error::Resource(format!("Gröbner basis exceeded {} elements", caps.max_basis_len)));
        }
        let n = g.len();
        g.push(h);
        for k in 0..n {
            pairs.push((k, n));
        }
    }
    // minimize, then interreduce
    let mut keep: Vec<GPoly> = Vec::new();
    for (idx, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(k, q)| k != idx && divides(lm(q), lm(p)) && (lm(q) != lm(p) || k < idx));
        if !redundant {
            keep.push(p.clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for idx in 0..keep.len() {
        let others: Vec<GPoly> = keep.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, q)| q.clone()).collect();
        let lead = keep[idx].last().unwrap().clone();
        let tail: GPoly = keep[idx][..keep[idx].len() - 1].to_vec();
        let mut r = reduce(&tail, &others);
        r.push(lead);
        r.sort_by(|a, b| cmp_degrevlex(&a.0, &b.0));
        reduced.push(r);
    }
    reduced.sort_by(|a, b| cmp_degrevlex(lm(a), lm(b)));
    Ok(reduced.into_iter().map(|r| SparsePoly::from_terms(&vars, r)).collect())
}

/// `C[vars]/I` for a zero-dimensional ideal `I`.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub vars: Arc<VarSet>,
    pub ideal_generators: Vec<SparsePoly>,
    pub groebner_basis: Vec<SparsePoly>,
    /// Standard monomials, ascending in the monomial order (so `1` comes first).
    pub monomial_basis: Vec<Mono>,
    /// Multiplication by each ring variable; column `j` holds the coordinates of `x_i·m_j`.
    pub mult_matrices: Vec<QMatrix>,
    gb: Vec<GPoly>,
    index: HashMap<Mono, usize>,
}

pub fn groebner_quotient(gens: &[SparsePoly], order: MonomialOrder) -> Result<QuotientAlgebra> {
    groebner_quotient_with(gens, order, &GroebnerCaps::default())
}

pub fn groebner_quotient_with(gens: &[SparsePoly], _order: MonomialOrder, caps: &GroebnerCaps) -> Result<QuotientAlgebra> {
    let basis = groebner_basis(gens, caps)?;
    let vars = basis[0].vars().clone();
    let gb: Vec<GPoly> = basis.iter().map(to_g).collect();
    if gb.iter().any(|g| lm(g).iter().all(|e| *e == 0)) {
        // the ideal is the whole ring
        return Ok(QuotientAlgebra {
            vars,
            ideal_generators: gens.to_vec(),
            groebner_basis: basis,
            monomial_basis: Vec::new(),
            mult_matrices: Vec::new(),
            gb,
            index: HashMap::new(),
        });
    }
    let n = vars.len();
    let mut bounds = vec![0u32; n];
    for (i, b) in bounds.iter_mut().enumerate() {
        let pure = gb.iter().map(lm).filter(|m| m.iter().enumerate().all(|(k, e)| k == i || *e == 0)).map(|m| m[i]).min();
        *b = pure.ok_or_else(|| Error::PositiveDimensional(vars.name(i).to_string()))?;
    }
    let total: u64 = bounds.iter().map(|b| *b as u64).product();
    if total > caps.max_basis_len as u64 * 64 {
        return Err(Error::Resource(format!("standard-monomial search space {total} too large")));
    }
    let mut monos: Vec<Mono> = Vec::new();
    let mut cur = vec![0u32; n];
    'outer: loop {
        if !gb.iter().any(|g| divides(lm(g), &cur)) {
            monos.push(cur.clone());
        }
        for i in 0..n {
            cur[i] += 1;
            if cur[i] < bounds[i] {
                continue 'outer;
            }
            cur[i] = 0;
        }
        break;
    }
    monos.sort_by(|a, b| cmp_degrevlex(a, b));
    let index: HashMap<Mono, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut alg = QuotientAlgebra { vars, ideal_generators: gens.to_vec(), groebner_basis: basis, monomial_basis: monos, mult_matrices: Vec::new(), gb, index };
    alg.mult_matrices = (0..n).map(|i| alg.mult_matrix(&SparsePoly::var(&alg.vars, i))).collect();
    Ok(alg)
}

impl QuotientAlgebra {
    pub fn dim(&self) -> usize {
        self.monomial_basis.len()
    }

    pub fn normal_form(&self, p: &SparsePoly) -> SparsePoly {
        SparsePoly::from_terms(&self.vars, reduce(&to_g(p), &self.gb))
    }

    pub fn coords(&self, p: &SparsePoly) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for (m, c) in reduce(&to_g(p), &self.gb) {
            v[self.index[&m]] = c;
        }
        v
    }

    pub fn from_coords(&self, v: &[Q]) -> SparsePoly {
        SparsePoly::from_terms(&self.vars, self.monomial_basis.iter().cloned().zip(v.iter().cloned()))
    }

    pub fn basis_poly(&self, j: usize) -> SparsePoly {
        SparsePoly::monomial(&self.vars, self.monomial_basis[j].clone(), Q::one())
    }

    /// Matrix of multiplication by `p` in the standard-monomial basis.
    pub fn mult_matrix(&self, p: &SparsePoly) -> QMatrix {
        let nf = self.normal_form(p);
        let d = self.dim();
        let mut m = QMatrix::zeros(d, d);
        for j in 0..d {
            let col = self.coords(&nf.mul_mono(&self.monomial_basis[j], &Q::one()));
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    /// Product of two elements given in coordinates.
    pub fn product(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        self.coords(&(&self.from_coords(a) * &self.from_coords(b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qi;

    fn v3() -> Arc<VarSet> {
        VarSet::ungraded(&["x", "y", "z"])
    }

    fn p(vars: &Arc<VarSet>, t: &[(&[u32], i64)]) -> SparsePoly {
        SparsePoly::from_terms(vars, t.iter().map(|(m, c)| (m.to_vec(), qi(*c))))
    }

    #[test]
    fn order_is_degrevlex() {
        assert_eq!(cmp_degrevlex(&[1, 0, 0], &[0, 1, 0]), Ordering::Greater);
        assert_eq!(cmp_degrevlex(&[0, 1, 0], &[0, 0, 1]), Ordering::Greater);
        // x z vs y²: same degree, z has smaller exponent in y² so y² is larger
        assert_eq!(cmp_degrevlex(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
    }

    #[test]
    fn monomial_ideal() {
        let v = VarSet::ungraded(&["x", "y"]);
        let q = groebner_quotient(&[p(&v, &[(&[2, 0], 1)]), p(&v, &[(&[0, 2], 1)])], MonomialOrder::DegRevLex).unwrap();
        assert_eq!(q.dim(), 4);
        assert_eq!(q.monomial_basis, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn a_point() {
        let v = v3();
        let gens = [p(&v, &[(&[1, 0, 0], 1), (&[0, 0, 0], -1)]), p(&v, &[(&[0, 1, 0], 1), (&[0, 0, 0], -2)]), p(&v, &[(&[0, 0, 1], 1), (&[0, 0, 0], -3)])];
        let q = groebner_quotient(&gens, MonomialOrder::DegRevLex).unwrap();
        assert_eq!(q.dim(), 1);
        for (i, want) in [1, 2, 3].iter().enumerate() {
            assert_eq!(q.mult_matrices[i], QMatrix::from_rows(vec![vec![qi(*want)]]));
        }
    }

    #[test]
    fn d4_jacobian_dimension() {
        // F = -xyz + x² + y² + z²
        let v = v3();
        let gens = [p(&v, &[(&[0, 1, 1], -1), (&[1, 0, 0], 2)]), p(&v, &[(&[1, 0, 1], -1), (&[0, 1, 0], 2)]), p(&v, &[(&[1, 1, 0], -1), (&[0, 0, 1], 2)])];
        let q = groebner_quotient(&gens, MonomialOrder::DegRevLex).unwrap();
        assert_eq!(q.dim(), 5);
        for g in &gens {
            assert!(q.normal_form(g).is_zero());
        }
        let (mx, my, mz) = (&q.mult_matrices[0], &q.mult_matrices[1], &q.mult_matrices[2]);
        assert_eq!(mx.mul(my), my.mul(mx));
        assert_eq!(mx.mul(mz), mz.mul(mx));
    }

    #[test]
    fn positive_dimensional_rejected() {
        let v = VarSet::ungraded(&["x", "y"]);
        let e = groebner_quotient(&[p(&v, &[(&[1, 1], 1)])], MonomialOrder::DegRevLex).unwrap_err();
        assert!(matches!(e, Error::PositiveDimensional(_)));
    }

    #[test]
    fn coefficient_cap_fires() {
        let v = v3();
        let gens = [
            p(&v, &[(&[0, 1, 1], -1), (&[1, 0, 0], 2), (&[0, 0, 0], 7)]),
            p(&v, &[(&[1, 0, 1], -1), (&[0, 1, 0], 2), (&[0, 0, 0], 5)]),
            p(&v, &[(&[1, 1, 0], -1), (&[0, 0, 1], 3), (&[0, 0, 2], 11)]),
        ];
        let caps = GroebnerCaps { max_coeff_bits: 8, ..Default::default() };
        assert!(matches!(groebner_quotient_with(&gens, MonomialOrder::DegRevLex, &caps), Err(Error::Resource(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn mult_matrices_match_products(a in -3i64..4, b in -3i64..4, c in 1i64..4,
                                            g in prop::collection::vec(-2i64..3, 4), h in prop::collection::vec(-2i64..3, 4)) {
                let v = v3();
                let gens = [
                    p(&v, &[(&[0, 1, 1], -1), (&[1, 0, 0], 2), (&[0, 0, 0], a)]),
                    p(&v, &[(&[1, 0, 1], -1), (&[0, 1, 0], 2), (&[0, 0, 0], b)]),
                    p(&v, &[(&[1, 1, 0], -1), (&[0, 0, 2], 3), (&[0, 0, 1], c)]),
                ];
                let q = groebner_quotient(&gens, MonomialOrder::DegRevLex).unwrap();
                let mk = |w: &[i64]| p(&v, &[(&[0, 0, 0], w[0]), (&[1, 0, 0], w[1]), (&[0, 1, 1], w[2]), (&[0, 0, 2], w[3])]);
                let (gp, hp) = (mk(&g), mk(&h));
                let direct = q.coords(&(&gp * &hp));
                let via = q.mult_matrix(&gp).mul_vec(&q.coords(&hp));
                prop_assert_eq!(direct, via);
            }
        }
    }
}
