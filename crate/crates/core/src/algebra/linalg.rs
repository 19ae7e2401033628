use num_traits::{One, Zero};

use super::rational::{to_f64, Q};
use crate::error::{Error, Result};

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(to_f64).collect()).collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or_else(|| Error::Degenerate("singular matrix".into()))?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j) / &p;
                a.set(col, j, v);
                let w = inv.get(col, j) / &p;
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                    let w = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, w);
                }
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Q {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Q::zero();
            };
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det *= &p;
            for r in col + 1..n {
                let f = a.get(r, col) / &p;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                }
            }
        }
        det
    }
}

/// Exact solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    /// One solution, with every free variable set to zero.
    pub particular: Vec<Q>,
    /// Basis of the solution space of `A x = 0`.
    pub nullspace: Vec<Vec<Q>>,
    pub free_vars: Vec<usize>,
    pub pivots: Vec<usize>,
}

impl LinearSolution {
    pub fn is_unique(&self) -> bool {
        self.free_vars.is_empty()
    }
}

/// Reduced row echelon form of the augmented system.
pub fn solve_linear_exact(a: &QMatrix, b: &[Q]) -> Result<LinearSolution> {
    assert_eq!(a.rows, b.len(), "row count mismatch");
    let rows: Vec<(Vec<Q>, Q)> = (0..a.rows).map(|i| (a.row(i).to_vec(), b[i].clone())).collect();
    solve_rows(rows, a.cols)
}

/// Same as [`solve_linear_exact`] with the system given as sparse rows `(coefficients, rhs)`.
pub fn solve_sparse(rows: &[(Vec<(usize, Q)>, Q)], ncols: usize) -> Result<LinearSolution> {
    let dense = rows
        .iter()
        .map(|(r, rhs)| {
            let mut v = vec![Q::zero(); ncols];
            for (j, c) in r {
                v[*j] += c;
            }
            (v, rhs.clone())
        })
        .collect();
    solve_rows(dense, ncols)
}

fn solve_rows(mut rows: Vec<(Vec<Q>, Q)>, ncols: usize) -> Result<LinearSolution> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r].0[col];
        for v in rows[r].0.iter_mut().skip(col) {
            *v *= &inv;
        }
        rows[r].1 *= &inv;
        let (pivot_row, pivot_rhs) = rows[r].clone();
        for (i, (row, rhs)) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for j in col..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
            *rhs -= &f * &pivot_rhs;
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if let Some(bad) = (r..rows.len()).find(|&i| !rows[i].1.is_zero()) {
        return Err(Error::Inconsistent { row: bad });
    }
    let free_vars: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut particular = vec![Q::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i].1.clone();
    }
    let nullspace = free_vars
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -rows[i].0[f].clone();
            }
            v
        })
        .collect();
    Ok(LinearSolution { particular, nullspace, free_vars, pivots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    #[test]
    fn identity_system() {
        let s = solve_linear_exact(&QMatrix::identity(3), &[qi(1), q(1, 2), qi(0)]).unwrap();
        assert_eq!(s.particular, vec![qi(1), q(1, 2), qi(0)]);
        assert!(s.is_unique());
    }

    #[test]
    fn rank_one_family() {
        let s = solve_linear_exact(&m(&[&[1, 1], &[2, 2]]), &[qi(1), qi(2)]).unwrap();
        assert_eq!(s.free_vars, vec![1]);
        assert_eq!(s.nullspace, vec![vec![qi(-1), qi(1)]]);
        assert_eq!(s.particular, vec![qi(1), qi(0)]);
    }

    #[test]
    fn two_by_two() {
        let s = solve_linear_exact(&m(&[&[1, 1], &[1, -1]]), &[qi(3), qi(1)]).unwrap();
        assert_eq!(s.particular, vec![qi(2), qi(1)]);
    }

    #[test]
    fn inconsistent_reports_row() {
        let e = solve_linear_exact(&m(&[&[1, 1], &[1, 1]]), &[qi(1), qi(2)]).unwrap_err();
        assert!(matches!(e, Error::Inconsistent { .. }));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.determinant(), qi(18));
        assert_eq!(a.mul(&a.inverse().unwrap()), QMatrix::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn solutions_satisfy_system(entries in prop::collection::vec(-3i64..4, 12), rhs in prop::collection::vec(-3i64..4, 3)) {
                let a = QMatrix::from_rows(entries.chunks(4).map(|r| r.iter().map(|&x| qi(x)).collect()).collect());
                let b: Vec<Q> = rhs.iter().map(|&x| qi(x)).collect();
                if let Ok(s) = solve_linear_exact(&a, &b) {
                    prop_assert_eq!(a.mul_vec(&s.particular), b.clone());
                    for n in &s.nullspace {
                        prop_assert!(a.mul_vec(n).iter().all(|x| x.is_zero()));
                    }
                }
            }
        }
    }
}
