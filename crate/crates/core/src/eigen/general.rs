use super::{EigenResult, Method};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Largest dimension accepted by the dense solvers.
pub const DENSE_CEILING: usize = 5000;

/// Eigenvalues of a real square matrix: balancing, Householder reduction to
/// Hessenberg form, then Francis double-shift QR. Real parts are returned;
/// the largest imaginary part is recorded and flagged when it exceeds
/// `1e-8 · max(1, spectral radius)`.
pub fn eig_dense_general(m: &DenseMatrix) -> Result<EigenResult> {
    let n = m.dim();
    if n > DENSE_CEILING {
        return Err(Error::TooLarge(n, DENSE_CEILING));
    }
    let mut a = m.clone();
    balance(&mut a);
    hessenberg(&mut a);
    let (wr, wi) = hqr(&a)?;
    let max_imag = wi.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let radius = wr.iter().zip(&wi).fold(0.0f64, |acc, (r, i)| acc.max(r.hypot(*i)));
    let mut res = EigenResult::real(wr, Method::DenseGeneralQr);
    res.max_imag = max_imag;
    res.flagged = max_imag > 1e-8 * radius.max(1.0);
    Ok(res)
}

/// Diagonal similarity by powers of two so row and column norms match.
fn balance(a: &mut DenseMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.dim();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
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
                a.row_mut(i).iter_mut().for_each(|v| *v *= g);
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form, in place.
fn hessenberg(a: &mut DenseMatrix) {
    let n = a.dim();
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[(i, k)] * a[(i, k)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = -norm.copysign(a[(k + 1, k)]);
        v[k + 1..n].iter_mut().zip(k + 1..n).for_each(|(vi, i)| *vi = a[(i, k)]);
        v[k + 1] -= alpha;
        let vn2: f64 = v[k + 1..n].iter().map(|x| x * x).sum();
        if vn2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vn2;
        // left: A[k+1.., k..] -= β v (vᵀ A)
        w[k..n].iter_mut().for_each(|x| *x = 0.0);
        for i in k + 1..n {
            let vi = v[i];
            let row = a.row(i);
            for j in k..n {
                w[j] += vi * row[j];
            }
        }
        for i in k + 1..n {
            let s = beta * v[i];
            let row = a.row_mut(i);
            for j in k..n {
                row[j] -= s * w[j];
            }
        }
        // right: A[.., k+1..] -= β (A v) vᵀ
        for i in 0..n {
            let row = a.row_mut(i);
            let mut s = 0.0;
            for j in k + 1..n {
                s += row[j] * v[j];
            }
            s *= beta;
            for j in k + 1..n {
                row[j] -= s * v[j];
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; returns
/// `(real parts, imaginary parts)`.
fn hqr(h: &DenseMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = h.dim();
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    // 1-based working copy keeps the index arithmetic of the classical
    // algorithm readable
    let w = n + 1;
    let mut a = vec![0.0; w * w];
    for i in 0..n {
        for j in 0..n {
            a[(i + 1) * w + j + 1] = h[(i, j)];
        }
    }
    let idx = |i: usize, j: usize| i * w + j;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[idx(i, j)].abs();
        }
    }
    const MAX_ITS: usize = 60;
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r, mut s, mut x, mut y, mut z, mut ww);
    while nn >= 1 {
        let mut its = 0;
        loop {
            // look for a single small subdiagonal element
            let mut l = nn;
            while l >= 2 {
                s = a[idx(l - 1, l - 1)].abs() + a[idx(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[idx(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[idx(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[idx(nn, nn)];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            y = a[idx(nn - 1, nn - 1)];
            ww = a[idx(nn, nn - 1)] * a[idx(nn - 1, nn)];
            if l == nn - 1 {
                p = 0.5 * (y - x);
                q = p * p + ww;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - ww / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn = nn.saturating_sub(2);
                break;
            }
            if its == MAX_ITS {
                return Err(Error::NoConvergence(MAX_ITS));
            }
            if its % 10 == 0 && its > 0 {
                // exceptional shift
                t += x;
                for i in 1..=nn {
                    a[idx(i, i)] -= x;
                }
                s = a[idx(nn, nn - 1)].abs() + a[idx(nn - 1, nn - 2)].abs();
                x = 0.75 * s;
                y = x;
                ww = -0.4375 * s * s;
            }
            its += 1;
            // look for two consecutive small subdiagonal elements
            let mut m = nn - 2;
            loop {
                z = a[idx(m, m)];
                r = x - z;
                s = y - z;
                p = (r * s - ww) / a[idx(m + 1, m)] + a[idx(m, m + 1)];
                q = a[idx(m + 1, m + 1)] - z - r - s;
                r = a[idx(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[idx(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[idx(m - 1, m - 1)].abs() + z.abs() + a[idx(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a[idx(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[idx(i, i - 3)] = 0.0;
                }
            }
            // double QR step on rows l..nn, columns m..nn
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[idx(k, k - 1)];
                    q = a[idx(k + 1, k - 1)];
                    r = if k != nn - 1 { a[idx(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[idx(k, k - 1)] = -a[idx(k, k - 1)];
                        }
                    } else {
                        a[idx(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        p = a[idx(k, j)] + q * a[idx(k + 1, j)];
                        if k != nn - 1 {
                            p += r * a[idx(k + 2, j)];
                            a[idx(k + 2, j)] -= p * z;
                        }
                        a[idx(k + 1, j)] -= p * y;
                        a[idx(k, j)] -= p * x;
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        p = x * a[idx(i, k)] + y * a[idx(i, k + 1)];
                        if k != nn - 1 {
                            p += z * a[idx(i, k + 2)];
                            a[idx(i, k + 2)] -= p * r;
                        }
                        a[idx(i, k + 1)] -= p * q;
                        a[idx(i, k)] -= p;
                    }
                }
                k += 1;
            }
            if l >= nn.saturating_sub(1) {
                break;
            }
        }
    }
    wr.remove(0);
    wi.remove(0);
    Ok((wr, wi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{eig_dense_sym, eig_sym_tridiag};

    fn lcg_matrix(n: usize, seed: u64, symmetric: bool) -> DenseMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if !symmetric || j <= i {
                    m[(i, j)] = next();
                }
            }
        }
        if symmetric {
            for i in 0..n {
                for j in i + 1..n {
                    m[(i, j)] = m[(j, i)];
                }
            }
        }
        m
    }

    #[test]
    fn symmetric_input_matches_symmetric_solver() {
        for n in [1usize, 2, 3, 10, 60] {
            let m = lcg_matrix(n, 42 + n as u64, true);
            let g = eig_dense_general(&m).unwrap();
            let s = eig_dense_sym(&m).unwrap();
            assert!(!g.flagged);
            let scale = s.spectral_radius().max(1.0);
            for (a, b) in g.values.iter().zip(&s.values) {
                assert!((a - b).abs() < 1e-9 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn nonsymmetric_matches_nalgebra() {
        for n in [4usize, 17, 50] {
            let m = lcg_matrix(n, 7 * n as u64, false);
            let g = eig_dense_general(&m).unwrap();
            let na = nalgebra::DMatrix::from_row_slice(n, n, m.as_slice());
            let ev = na.complex_eigenvalues();
            let mut re: Vec<f64> = ev.iter().map(|c| c.re).collect();
            re.sort_by(f64::total_cmp);
            let mi = ev.iter().fold(0.0f64, |a, c| a.max(c.im.abs()));
            for (a, b) in g.values.iter().zip(&re) {
                assert!((a - b).abs() < 1e-9, "n={n}: {a} vs {b}");
            }
            assert!((g.max_imag - mi).abs() < 1e-9);
        }
    }

    #[test]
    fn tridiagonal_cross_check() {
        let n = 200;
        let d: Vec<f64> = (0..n).map(|i| 2.0 + (i as f64 * 0.37).sin()).collect();
        let e: Vec<f64> = (0..n - 1).map(|i| -1.0 + 0.1 * (i as f64).cos()).collect();
        let t = eig_sym_tridiag(&d, &e).unwrap();
        let m = DenseMatrix::from_fn(n, |i, j| {
            if i == j {
                d[i]
            } else if i + 1 == j {
                e[i]
            } else if j + 1 == i {
                e[j]
            } else {
                0.0
            }
        });
        let g = eig_dense_general(&m).unwrap();
        for (a, b) in g.values.iter().zip(&t.values) {
            assert!((a / b - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ceiling_enforced() {
        let m = DenseMatrix::zeros(DENSE_CEILING + 1);
        assert!(matches!(eig_dense_general(&m), Err(Error::TooLarge(..))));
    }
}
