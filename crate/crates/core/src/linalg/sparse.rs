use std::collections::BTreeMap;

use crate::real::Real;

/// Accumulates `(i, j, value)` contributions in a deterministic order.
#[derive(Debug, Clone, Default)]
pub struct TripletBuilder<T> {
    n: usize,
    entries: BTreeMap<(usize, usize), T>,
}

impl<T: Real> TripletBuilder<T> {
    pub fn new(n: usize) -> Self {
        Self { n, entries: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let e = self.entries.entry((i, j)).or_insert_with(T::zero);
        *e = *e + v;
    }

    pub fn build(self) -> CsrMatrix<T> {
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut cols = Vec::with_capacity(self.entries.len());
        let mut vals = Vec::with_capacity(self.entries.len());
        for ((i, j), v) in self.entries {
            row_ptr[i + 1] += 1;
            cols.push(j);
            vals.push(v);
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { n: self.n, row_ptr, cols, vals }
    }
}

/// Square compressed-sparse-row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, row_ptr: vec![0; n + 1], cols: Vec::new(), vals: Vec::new() }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.row(i).find(|(c, _)| *c == j).map(|(_, v)| v).unwrap_or_else(T::zero)
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        (0..self.n).map(|i| self.row(i).fold(T::zero(), |acc, (j, v)| acc + v * x[j])).collect()
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        let ay = self.matvec(y);
        crate::real::ksum(x.iter().zip(&ay).map(|(a, b)| *a * *b))
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &CsrMatrix<T>, s: T) -> CsrMatrix<T> {
        let mut b = TripletBuilder::new(self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                b.add(i, j, v);
            }
            for (j, v) in other.row(i) {
                b.add(i, j, s * v);
            }
        }
        b.build()
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Half bandwidth `max |i − j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.n).flat_map(|i| self.row(i).map(move |(j, _)| i.abs_diff(j))).max().unwrap_or(0)
    }

    /// `P A Pᵀ` where `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> CsrMatrix<T> {
        let mut inv = vec![0; perm.len()];
        for (new, old) in perm.iter().enumerate() {
            inv[*old] = new;
        }
        let mut b = TripletBuilder::new(self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                b.add(inv[i], inv[j], v);
            }
        }
        b.build()
    }

    /// Rows of `i,j,value`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }
}
