//! Dense nonsymmetric eigenvalues: balancing, Hessenberg reduction, shifted QR.

// tensor code reads best with explicit indices
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use super::linalg::QMatrix;
use crate::error::{Error, Result};

const MAX_ITS: usize = 60;

/// All eigenvalues with multiplicity, sorted by real part then imaginary part.
///
/// Imaginary parts below `tol·‖A‖` are snapped to zero so that the ordering is stable.
pub fn eigenvalues_numeric(a: &QMatrix, tol: f64) -> Result<Vec<Complex64>> {
    eigenvalues_f64(&a.to_f64(), tol)
}

pub fn eigenvalues_f64(a: &[Vec<f64>], tol: f64) -> Result<Vec<Complex64>> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    // 1-based working copy mirrors the classical formulation
    let mut h = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..n {
        assert_eq!(a[i].len(), n, "square matrix expected");
        for j in 0..n {
            h[i + 1][j + 1] = a[i][j];
        }
    }
    let norm = frobenius(a);
    balance(&mut h, n);
    hessenberg(&mut h, n);
    let mut ev = hqr(&mut h, n)?;
    let snap = tol * norm.max(1.0);
    for z in ev.iter_mut() {
        if z.im.abs() <= snap {
            z.im = 0.0;
        }
    }
    ev.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(ev)
}

fn frobenius(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Smallest pairwise distance among the eigenvalues.
pub fn min_gap(ev: &[Complex64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..ev.len() {
        for j in 0..i {
            g = g.min((ev[i] - ev[j]).norm());
        }
    }
    g
}

fn balance(a: &mut [Vec<f64>], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[i][j] *= g;
                    }
                    for j in 1..=n {
                        a[j][i] *= f;
                    }
                }
            }
        }
    }
}

/// Reduction to upper Hessenberg form by stabilized elementary similarity transforms.
fn hessenberg(a: &mut [Vec<f64>], n: usize) {
    for m in 2..n {
        let mut x = 0.0f64;
        let mut i = m;
        for j in m..=n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..=n {
                let t = a[i][j];
                a[i][j] = a[m][j];
                a[m][j] = t;
            }
            for row in a.iter_mut().take(n + 1).skip(1) {
                row.swap(i, m);
            }
        }
        if x != 0.0 {
            for i in (m + 1)..=n {
                let mut y = a[i][m - 1];
                if y != 0.0 {
                    y /= x;
                    a[i][m - 1] = y;
                    for j in m..=n {
                        a[i][j] -= y * a[m][j];
                    }
                    for j in 1..=n {
                        a[j][m] += y * a[j][i];
                    }
                }
            }
        }
    }
    for i in 3..=n {
        for j in 1..(i - 1) {
            a[i][j] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (1-based indices).
#[allow(clippy::many_single_char_names, unused_assignments)]
fn hqr(a: &mut [Vec<f64>], n: usize) -> Result<Vec<Complex64>> {
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n as isize;
    let mut t = 0.0;
    let (mut p, mut q, mut r) = (0.0f64, 0.0f64, 0.0f64);
    while nn >= 1 {
        let mut its = 0;
        let mut l;
        loop {
            let nu = nn as usize;
            l = nu;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
            } else {
                let mut y = a[nu - 1][nu - 1];
                let mut w = a[nu][nu - 1] * a[nu - 1][nu];
                if l == nu - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nu - 1] = x + z;
                        wr[nu] = x + z;
                        if z != 0.0 {
                            wr[nu] = x - w / z;
                        }
                        wi[nu - 1] = 0.0;
                        wi[nu] = 0.0;
                    } else {
                        wr[nu - 1] = x + p;
                        wr[nu] = x + p;
                        wi[nu - 1] = -z;
                        wi[nu] = z;
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITS {
                        return Err(Error::NoConvergence { residual: a[nu][nu - 1].abs() });
                    }
                    if its % 10 == 0 && its > 0 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nu {
                            a[i][i] -= x;
                        }
                        let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nu - 2;
                    let mut z;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nu {
                        a[i][i - 2] = 0.0;
                        if i != m + 2 {
                            a[i][i - 3] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nu {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if k != nu - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nu {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nu - 1 {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            let mmin = if nu < k + 3 { nu } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nu - 1 {
                                    p += z * a[i][k + 2];
                                    a[i][k + 2] -= p * r;
                                }
                                a[i][k + 1] -= p * q;
                                a[i][k] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 1 || l + 1 >= nn as usize {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

/// Solve `A x = b` over the complex numbers by partial pivoting.
pub fn complex_solve(a: &[Vec<Complex64>], b: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.iter().zip(b).map(|(r, bi)| r.iter().copied().chain([*bi]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))?;
        if m[piv][col].norm() == 0.0 {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..=n {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = m[i][n];
        for j in i + 1..n {
            s -= m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    Some(x)
}

/// Eigenvector for an approximate simple eigenvalue by inverse iteration.
pub fn eigenvector(a: &[Vec<f64>], lambda: Complex64) -> Option<Vec<Complex64>> {
    let n = a.len();
    let scale = frobenius(a).max(1.0);
    let shift = lambda + Complex64::new(1e-10 * scale, 1e-10 * scale);
    let m: Vec<Vec<Complex64>> =
        (0..n).map(|i| (0..n).map(|j| Complex64::new(a[i][j], 0.0) - if i == j { shift } else { Complex64::new(0.0, 0.0) }).collect()).collect();
    let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * i as f64)).collect();
    for _ in 0..3 {
        v = complex_solve(&m, &v)?;
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !nrm.is_finite() || nrm == 0.0 {
            return None;
        }
        for z in v.iter_mut() {
            *z /= nrm;
        }
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn corner_block() {
        let a = QMatrix::from_rows(vec![vec![qi(0), qi(8)], vec![q(1, 2), qi(0)]]);
        let ev = eigenvalues_numeric(&a, 1e-9).unwrap();
        assert!(close(ev[0], Complex64::new(-2.0, 0.0)));
        assert!(close(ev[1], Complex64::new(2.0, 0.0)));
    }

    #[test]
    fn identity_and_scalar() {
        let ev = eigenvalues_numeric(&QMatrix::identity(4), 1e-9).unwrap();
        assert!(ev.iter().all(|z| close(*z, Complex64::new(1.0, 0.0))));
        let ev = eigenvalues_numeric(&QMatrix::identity(5).scale(&qi(2)), 1e-9).unwrap();
        assert_eq!(ev.len(), 5);
        assert!(ev.iter().all(|z| close(*z, Complex64::new(2.0, 0.0))));
    }

    #[test]
    fn rotation_has_complex_pair() {
        let a = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        let ev = eigenvalues_f64(&a, 1e-12).unwrap();
        assert!(close(ev[0], Complex64::new(0.0, -1.0)));
        assert!(close(ev[1], Complex64::new(0.0, 1.0)));
    }

    #[test]
    fn companion_matrix_roots() {
        // x^4 - 10x^3 + 35x^2 - 50x + 24 = (x-1)(x-2)(x-3)(x-4)
        let a = vec![vec![10.0, -35.0, 50.0, -24.0], vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0]];
        let ev = eigenvalues_f64(&a, 1e-12).unwrap();
        for (k, z) in ev.iter().enumerate() {
            assert!((z.re - (k + 1) as f64).abs() < 1e-9, "{z}");
        }
    }

    #[test]
    fn agrees_with_schur_on_random_matrices() {
        let mut seed = 12345u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        for n in [3usize, 5, 8, 11] {
            let a: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rnd() * 10.0).collect()).collect();
            let ours = eigenvalues_f64(&a, 1e-12).unwrap();
            let m = nalgebra::DMatrix::from_fn(n, n, |i, j| a[i][j]);
            let mut theirs: Vec<Complex64> = m.complex_eigenvalues().iter().map(|z| Complex64::new(z.re, if z.im.abs() < 1e-9 { 0.0 } else { z.im })).collect();
            theirs.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
            for (x, y) in ours.iter().zip(&theirs) {
                assert!((x - y).norm() < 1e-8 * (1.0 + y.norm()), "n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn characteristic_polynomial_vanishes() {
        // eigenvalues of an exact rational matrix annihilate its characteristic polynomial
        let a = QMatrix::from_rows(vec![vec![qi(1), q(1, 2), qi(0)], vec![qi(-2), qi(3), qi(1)], vec![q(1, 3), qi(0), qi(-1)]]);
        let f = a.to_f64();
        let tr = f[0][0] + f[1][1] + f[2][2];
        let minors = f[0][0] * f[1][1] - f[0][1] * f[1][0] + f[0][0] * f[2][2] - f[0][2] * f[2][0] + f[1][1] * f[2][2] - f[1][2] * f[2][1];
        let det = crate::algebra::rational::to_f64(&a.determinant());
        for z in eigenvalues_numeric(&a, 1e-9).unwrap() {
            let p = z * z * z - z * z * tr + z * minors - det;
            assert!(p.norm() < 1e-9 * 27.0, "{p}");
        }
    }

    #[test]
    fn inverse_iteration_finds_eigenvector() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let v = eigenvector(&a, Complex64::new(3.0, 0.0)).unwrap();
        assert!((v[0] / v[1] - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }
}
