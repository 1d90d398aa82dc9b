use super::sparse::CsrMatrix;
use super::tridiag::{inverse_iteration, tridiagonal_eigenvalues, Tridiagonal};
use super::EigenPairs;
use crate::error::{Error, Result};
use crate::real::Real;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn from_csr(a: &CsrMatrix<T>) -> Self {
        let mut m = Self::zeros(a.n);
        for (i, j, v) in a.triplets() {
            m.data[i * a.n + j] = v;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// In-place Cholesky `A = L Lᵀ`; returns `L` (lower triangle, zeros above).
pub fn cholesky<T: Real>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let n = a.n;
    let mut l = DenseMatrix::zeros(n);
    for j in 0..n {
        let mut d = a.at(j, j);
        {
            let lj = &l.data[j * n..j * n + j];
            for v in lj {
                d = d - *v * *v;
            }
        }
        if !(d > T::zero()) {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let d = d.sqrt();
        l.set(j, j, d);
        for i in j + 1..n {
            let mut s = a.at(i, j);
            let (ri, rj) = (i * n, j * n);
            for k in 0..j {
                s = s - l.data[ri + k] * l.data[rj + k];
            }
            l.data[ri + j] = s / d;
        }
    }
    Ok(l)
}

/// Solves `L x = b` in place.
fn forward<T: Real>(l: &DenseMatrix<T>, b: &mut [T]) {
    let n = l.n;
    for i in 0..n {
        let row = &l.data[i * n..i * n + i];
        let mut s = b[i];
        for (k, v) in row.iter().enumerate() {
            s = s - *v * b[k];
        }
        b[i] = s / l.data[i * n + i];
    }
}

/// Solves `Lᵀ x = b` in place.
fn backward_transposed<T: Real>(l: &DenseMatrix<T>, b: &mut [T]) {
    let n = l.n;
    for i in (0..n).rev() {
        let xi = b[i] / l.data[i * n + i];
        b[i] = xi;
        let row = &l.data[i * n..i * n + i];
        for (k, v) in row.iter().enumerate() {
            b[k] = b[k] - *v * xi;
        }
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns the tridiagonal and the Householder vectors (`v_k` acts on indices `k+1..n`).
fn householder_tridiagonalize<T: Real>(mut a: DenseMatrix<T>) -> (Tridiagonal<T>, Vec<Vec<T>>) {
    let n = a.n;
    let mut diag = vec![T::zero(); n];
    let mut off = vec![T::zero(); n.saturating_sub(1)];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let mut v: Vec<T> = (0..m).map(|i| a.at(k + 1 + i, k)).collect();
        let norm = v.iter().fold(T::zero(), |s, x| s.hypot(*x));
        diag[k] = a.at(k, k);
        if m == 1 || norm == T::zero() {
            off[k] = v[0];
            if m > 1 {
                reflectors.push(vec![T::zero(); m]);
            }
            continue;
        }
        let alpha = if v[0] > T::zero() { -norm } else { norm };
        v[0] = v[0] - alpha;
        let vn = v.iter().fold(T::zero(), |s, x| s.hypot(*x));
        for x in v.iter_mut() {
            *x = *x / vn;
        }
        off[k] = alpha;
        // p = 2 A_sub v, q = p − (vᵀp) v, A_sub ← A_sub − v qᵀ − q vᵀ
        let base = k + 1;
        let mut p = vec![T::zero(); m];
        for i in 0..m {
            let row = &a.data[(base + i) * n + base..(base + i) * n + n];
            let mut s = T::zero();
            for (r, vj) in row.iter().zip(&v) {
                s = s + *r * *vj;
            }
            p[i] = T::lit(2.0) * s;
        }
        let vp = v.iter().zip(&p).fold(T::zero(), |s, (x, y)| s + *x * *y);
        let q: Vec<T> = p.iter().zip(&v).map(|(pi, vi)| *pi - vp * *vi).collect();
        for i in 0..m {
            let (vi, qi) = (v[i], q[i]);
            let row = &mut a.data[(base + i) * n + base..(base + i) * n + n];
            for j in 0..m {
                row[j] = row[j] - vi * q[j] - qi * v[j];
            }
        }
        reflectors.push(v);
    }
    if n > 0 {
        diag[n - 1] = a.at(n - 1, n - 1);
    }
    (Tridiagonal { diag, off }, reflectors)
}

/// The `count` smallest eigenpairs of `A v = λ M v` with dense factorizations.
pub fn generalized_eigen_dense<T: Real>(a: &CsrMatrix<T>, m: &CsrMatrix<T>, count: usize) -> Result<EigenPairs<T>> {
    let n = a.n;
    if count > n {
        return Err(Error::InvalidArgument(format!("requested {count} eigenpairs of a {n}×{n} problem")));
    }
    let l = cholesky(&DenseMatrix::from_csr(m))?;
    // X = L⁻¹ A (column by column), C = L⁻¹ Xᵀ = L⁻¹ A L⁻ᵀ
    let ad = DenseMatrix::from_csr(a);
    let mut xt = DenseMatrix::zeros(n);
    let mut col = vec![T::zero(); n];
    for j in 0..n {
        for i in 0..n {
            col[i] = ad.at(i, j);
        }
        forward(&l, &mut col);
        xt.data[j * n..(j + 1) * n].copy_from_slice(&col);
    }
    let mut c = DenseMatrix::zeros(n);
    for i in 0..n {
        // row i of X = column i of Xᵀ
        for j in 0..n {
            col[j] = xt.at(j, i);
        }
        forward(&l, &mut col);
        c.data[i * n..(i + 1) * n].copy_from_slice(&col);
    }
    // symmetrize against round-off
    for i in 0..n {
        for j in 0..i {
            let s = T::lit(0.5) * (c.at(i, j) + c.at(j, i));
            c.set(i, j, s);
            c.set(j, i, s);
        }
    }
    let (tri, reflectors) = householder_tridiagonalize(c);
    let mut values = tridiagonal_eigenvalues(&tri)?;
    values.truncate(count);
    let mut vectors = Vec::with_capacity(count);
    let mut previous: Vec<Vec<T>> = Vec::new();
    for (idx, lam) in values.iter().enumerate() {
        // vectors of a cluster are orthogonalized against earlier members
        let cluster: Vec<&Vec<T>> = previous
            .iter()
            .zip(&values[..idx])
            .filter(|(_, v)| (**v - *lam).abs() <= T::lit(1e-8) * (T::one() + lam.abs()))
            .map(|(y, _)| y)
            .collect();
        let y = inverse_iteration(&tri, *lam, &cluster, idx);
        previous.push(y.clone());
        // back-transform z = H_0 … H_{n-3} y, then x = L⁻ᵀ z
        let mut z = y;
        for (k, v) in reflectors.iter().enumerate().rev() {
            let seg = &mut z[k + 1..];
            let dot = seg.iter().zip(v).fold(T::zero(), |s, (a, b)| s + *a * *b);
            for (s, vi) in seg.iter_mut().zip(v) {
                *s = *s - T::lit(2.0) * dot * *vi;
            }
        }
        backward_transposed(&l, &mut z);
        vectors.push(z);
    }
    Ok(EigenPairs { values, vectors })
}
