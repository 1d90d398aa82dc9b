use super::banded::{reverse_cuthill_mckee, BandedCholesky};
use super::sparse::CsrMatrix;
use super::EigenPairs;
use crate::error::{Error, Result};
use crate::real::Real;

/// Cyclic Jacobi eigen-decomposition of a small dense symmetric matrix (row-major);
/// ascending values with orthonormal vectors.
pub fn jacobi_eigen<T: Real>(a: &[T], n: usize) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let mut a = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    for _sweep in 0..100 {
        let off: T = (0..n).flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j))).fold(T::zero(), |s, (i, j)| s + a[i * n + j] * a[i * n + j]);
        let diag: T = (0..n).fold(T::zero(), |s, i| s + a[i * n + i] * a[i * n + i]);
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|x, y| a[*x * n + *x].partial_cmp(&a[*y * n + *y]).unwrap());
            let values = idx.iter().map(|i| a[*i * n + *i]).collect();
            let vectors = idx.iter().map(|j| (0..n).map(|k| v[k * n + j]).collect()).collect();
            return Ok((values, vectors));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let t = if theta == T::zero() { T::one() } else { t };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::NoConvergence("Jacobi sweeps did not converge".into()))
}

fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |s, (a, b)| s + *a * *b)
}

/// M-orthonormalizes the columns in place (modified Gram–Schmidt, two passes).
fn m_orthonormalize<T: Real>(m: &CsrMatrix<T>, q: &mut [Vec<T>]) -> Result<()> {
    for j in 0..q.len() {
        for _ in 0..2 {
            let mq = m.matvec(&q[j]);
            for i in 0..j {
                let c = dot(&q[i], &mq);
                let (head, tail) = q.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                    *x = *x - c * *y;
                }
            }
        }
        let nrm = m.bilinear(&q[j], &q[j]).sqrt();
        if !(nrm > T::zero()) {
            return Err(Error::NoConvergence("subspace basis lost rank".into()));
        }
        for x in q[j].iter_mut() {
            *x = *x / nrm;
        }
    }
    Ok(())
}

/// The `count` smallest eigenpairs of `A v = λ M v` by shift-invert block subspace iteration
/// with a banded Cholesky factor of `A − τM` (after reverse Cuthill–McKee reordering).
pub fn generalized_eigen_subspace<T: Real>(a: &CsrMatrix<T>, m: &CsrMatrix<T>, count: usize) -> Result<EigenPairs<T>> {
    let n = a.n;
    if count > n {
        return Err(Error::InvalidArgument(format!("requested {count} eigenpairs of a {n}×{n} problem")));
    }
    let perm = reverse_cuthill_mckee(a);
    let (ap, mp) = (a.permuted(&perm), m.permuted(&perm));
    let (ap, mp, perm) = if ap.bandwidth() < a.bandwidth() { (ap, mp, perm) } else { (a.clone(), m.clone(), (0..n).collect()) };
    // shift below the spectrum: the first τ for which A − τM is positive definite
    let mut tau = -T::one();
    let factor = loop {
        match BandedCholesky::factor(&ap.add_scaled(&mp, -tau)) {
            Ok(f) => break f,
            Err(Error::NotPositiveDefinite { .. }) if tau > T::lit(-1e12) => tau = tau * T::lit(4.0),
            Err(e) => return Err(e),
        }
    };
    let p = (count + count.max(10)).min(n);
    let mut q: Vec<Vec<T>> = (0..p).map(|j| (0..n).map(|i| T::one() + T::of((i * 7919 + j * 104_729 + i * j) % 1009) / T::lit(1009.0)).collect()).collect();
    m_orthonormalize(&mp, &mut q)?;
    let mut previous: Option<Vec<T>> = None;
    for _iter in 0..500 {
        for col in q.iter_mut() {
            let mut y = mp.matvec(col);
            factor.solve(&mut y);
            *col = y;
        }
        m_orthonormalize(&mp, &mut q)?;
        // Rayleigh–Ritz with the M-orthonormal basis
        let aq: Vec<Vec<T>> = q.iter().map(|x| ap.matvec(x)).collect();
        let mut small = vec![T::zero(); p * p];
        for i in 0..p {
            for j in 0..p {
                small[i * p + j] = T::lit(0.5) * (dot(&q[i], &aq[j]) + dot(&q[j], &aq[i]));
            }
        }
        let (vals, vecs) = jacobi_eigen(&small, p)?;
        q = vecs.iter().map(|s| (0..n).map(|r| (0..p).fold(T::zero(), |acc, c| acc + s[c] * q[c][r])).collect()).collect();
        // residual test on the wanted pairs
        let converged = (0..count).all(|k| {
            let x = &q[k];
            let ax = ap.matvec(x);
            let mx = mp.matvec(x);
            let res = ax.iter().zip(&mx).fold(T::zero(), |s, (u, v)| s.hypot(*u - vals[k] * *v));
            let xn = x.iter().fold(T::zero(), |s, v| s.hypot(*v));
            res <= T::lit(1e-10) * xn * (T::one() + vals[k].abs())
        });
        let stalled = previous.as_ref().is_some_and(|pv| pv.iter().zip(&vals).take(count).all(|(a, b)| (*a - *b).abs() <= T::epsilon() * T::lit(8.0) * (T::one() + b.abs())));
        if converged || stalled {
            let mut vectors = Vec::with_capacity(count);
            for x in q.iter().take(count) {
                let mut out = vec![T::zero(); n];
                for (new, old) in perm.iter().enumerate() {
                    out[*old] = x[new];
                }
                vectors.push(out);
            }
            return Ok(EigenPairs { values: vals[..count].to_vec(), vectors });
        }
        previous = Some(vals);
    }
    Err(Error::NoConvergence("subspace iteration did not converge".into()))
}
