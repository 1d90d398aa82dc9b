use std::collections::VecDeque;

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::real::Real;

/// Cholesky factor of a symmetric positive definite banded matrix.
#[derive(Debug, Clone)]
pub struct BandedCholesky<T> {
    n: usize,
    w: usize,
    /// row `i` holds columns `i−w ..= i` at offsets `0 ..= w`
    band: Vec<T>,
}

impl<T: Real> BandedCholesky<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let n = a.n;
        let w = a.bandwidth();
        let stride = w + 1;
        let mut band = vec![T::zero(); n * stride];
        for (i, j, v) in a.triplets() {
            if j <= i {
                band[i * stride + (j + w - i)] = v;
            }
        }
        for i in 0..n {
            let lo = i.saturating_sub(w);
            for j in lo..=i {
                let klo = lo.max(j.saturating_sub(w));
                let mut s = band[i * stride + (j + w - i)];
                for k in klo..j {
                    s = s - band[i * stride + (k + w - i)] * band[j * stride + (k + w - j)];
                }
                if j == i {
                    if !(s > T::zero()) {
                        return Err(Error::NotPositiveDefinite { pivot: i });
                    }
                    band[i * stride + w] = s.sqrt();
                } else {
                    band[i * stride + (j + w - i)] = s / band[j * stride + w];
                }
            }
        }
        Ok(Self { n, w, band })
    }

    /// Solves `A x = b` in place.
    pub fn solve(&self, b: &mut [T]) {
        let (n, w, stride) = (self.n, self.w, self.w + 1);
        for i in 0..n {
            let lo = i.saturating_sub(w);
            let mut s = b[i];
            for k in lo..i {
                s = s - self.band[i * stride + (k + w - i)] * b[k];
            }
            b[i] = s / self.band[i * stride + w];
        }
        for i in (0..n).rev() {
            let xi = b[i] / self.band[i * stride + w];
            b[i] = xi;
            let lo = i.saturating_sub(w);
            for k in lo..i {
                b[k] = b[k] - self.band[i * stride + (k + w - i)] * xi;
            }
        }
    }
}

/// Reverse Cuthill–McKee ordering of the sparsity graph; `perm[new] = old`.
pub fn reverse_cuthill_mckee<T: Real>(a: &CsrMatrix<T>) -> Vec<usize> {
    let n = a.n;
    let adj: Vec<Vec<usize>> = (0..n).map(|i| a.row(i).map(|(j, _)| j).filter(|j| *j != i).collect()).collect();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let bfs = |start: usize, seen: &mut Vec<bool>, order: &mut Vec<usize>| -> usize {
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut last = start;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            last = v;
            let mut nb: Vec<usize> = adj[v].iter().copied().filter(|u| !seen[*u]).collect();
            nb.sort_by_key(|u| (degree[*u], *u));
            for u in nb {
                seen[u] = true;
                queue.push_back(u);
            }
        }
        last
    };
    while order.len() < n {
        let start = (0..n).filter(|v| !seen[*v]).min_by_key(|v| (degree[*v], *v)).unwrap();
        // pseudo-peripheral start: the last vertex reached from a minimum-degree vertex
        let mut probe_seen = seen.clone();
        let mut probe = Vec::new();
        let far = bfs(start, &mut probe_seen, &mut probe);
        bfs(far, &mut seen, &mut order);
    }
    order.reverse();
    order
}
