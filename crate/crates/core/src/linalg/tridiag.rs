use crate::error::{Error, Result};
use crate::real::Real;

/// Symmetric tridiagonal matrix; `off[i]` couples `i` and `i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

/// Implicit-shift QL; `z` (row-major `n×n`, optional) accumulates the rotations.
fn implicit_ql<T: Real>(d: &mut [T], off: &[T], mut z: Option<&mut [T]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let mut e = vec![T::zero(); n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    // each eigenvalue needs only a handful of sweeps; 30 per index is far beyond that
    let max_iter = 30;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > max_iter {
                return Err(Error::NoConvergence(format!("QL iteration stalled at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (T::lit(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::lit(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// All eigenvalues, ascending.
pub fn tridiagonal_eigenvalues<T: Real>(t: &Tridiagonal<T>) -> Result<Vec<T>> {
    let mut d = t.diag.clone();
    implicit_ql(&mut d, &t.off, None)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// All eigenpairs, ascending; vectors are orthonormal.
pub fn tridiagonal_eigen<T: Real>(t: &Tridiagonal<T>) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = t.diag.len();
    let mut d = t.diag.clone();
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }
    implicit_ql(&mut d, &t.off, Some(&mut z))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|a, b| d[*a].partial_cmp(&d[*b]).unwrap());
    let values = idx.iter().map(|i| d[*i]).collect();
    let vectors = idx.iter().map(|j| (0..n).map(|k| z[k * n + j]).collect()).collect();
    Ok((values, vectors))
}

/// Eigenvector of `t` for the eigenvalue estimate `lambda`, orthogonal to `against`.
pub(crate) fn inverse_iteration<T: Real>(t: &Tridiagonal<T>, lambda: T, against: &[&Vec<T>], seed: usize) -> Vec<T> {
    let n = t.diag.len();
    let scale = t.diag.iter().chain(&t.off).fold(T::zero(), |m, v| m.max(v.abs())).max(T::min_positive_value());
    let shift = lambda + T::epsilon() * scale * T::lit(4.0);
    // deterministic start vector
    let mut x: Vec<T> = (0..n).map(|i| T::one() + T::of((i * 7919 + seed * 104_729) % 1000) / T::lit(1000.0)).collect();
    for _ in 0..4 {
        orthogonalize(&mut x, against);
        solve_shifted(t, shift, scale, &mut x);
        orthogonalize(&mut x, against);
        let nrm = x.iter().fold(T::zero(), |s, v| s.hypot(*v));
        for v in x.iter_mut() {
            *v = *v / nrm;
        }
    }
    x
}

fn orthogonalize<T: Real>(x: &mut [T], against: &[&Vec<T>]) {
    for y in against {
        let dot = x.iter().zip(y.iter()).fold(T::zero(), |s, (a, b)| s + *a * *b);
        for (a, b) in x.iter_mut().zip(y.iter()) {
            *a = *a - dot * *b;
        }
    }
}

/// Solves `(T − shift·I) x = b` in place by LU with partial pivoting.
fn solve_shifted<T: Real>(t: &Tridiagonal<T>, shift: T, scale: T, b: &mut [T]) {
    let n = t.diag.len();
    let tiny = T::epsilon() * scale;
    // row i of U has entries (u0, u1, u2) at columns i, i+1, i+2
    let mut u0 = vec![T::zero(); n];
    let mut u1 = vec![T::zero(); n];
    let mut u2 = vec![T::zero(); n];
    let mut mult = vec![T::zero(); n];
    let mut swapped = vec![false; n];
    let mut cur = [t.diag[0] - shift, if n > 1 { t.off[0] } else { T::zero() }, T::zero()];
    for i in 0..n {
        if i + 1 < n {
            let below = [t.off[i], t.diag[i + 1] - shift, if i + 2 < n { t.off[i + 1] } else { T::zero() }];
            if below[0].abs() > cur[0].abs() {
                swapped[i] = true;
                u0[i] = below[0];
                u1[i] = below[1];
                u2[i] = below[2];
                let m = cur[0] / below[0];
                mult[i] = m;
                cur = [cur[1] - m * below[1], cur[2] - m * below[2], T::zero()];
            } else {
                let piv = if cur[0] == T::zero() { tiny } else { cur[0] };
                u0[i] = piv;
                u1[i] = cur[1];
                u2[i] = cur[2];
                let m = below[0] / piv;
                mult[i] = m;
                cur = [below[1] - m * cur[1], below[2] - m * cur[2], T::zero()];
            }
        } else {
            u0[i] = if cur[0] == T::zero() { tiny } else { cur[0] };
        }
    }
    // forward elimination on b
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            b.swap(i, i + 1);
        }
        b[i + 1] = b[i + 1] - mult[i] * b[i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s = s - u1[i] * b[i + 1];
        }
        if i + 2 < n {
            s = s - u2[i] * b[i + 2];
        }
        b[i] = s / u0[i];
    }
}
