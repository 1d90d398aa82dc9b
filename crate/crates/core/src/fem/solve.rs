use super::assemble::DiscreteOperator;
use crate::error::{Error, Result};
use crate::linalg::{generalized_eigen_dense, generalized_eigen_subspace, EigenPairs};
use crate::model_spectra::{Provenance, Spectrum};
use crate::real::Real;

/// Largest problem solved with dense factorizations; bigger ones use banded subspace iteration.
pub const DENSE_LIMIT: usize = 3000;

/// FEM eigenvalues with their vectors and residuals.
#[derive(Debug, Clone)]
pub struct FemSolution<T> {
    pub spectrum: Spectrum<T>,
    pub pairs: EigenPairs<T>,
    /// `‖(K+B)v − λMv‖ / (‖v‖(1+|λ|))` per pair
    pub residuals: Vec<T>,
}

/// The `count` smallest eigenvalues of `(K + B_σ) v = λ M v`.
///
/// The returned spectrum is flagged `discretized` and certified complete only below the
/// `count`-th value of the discrete problem.
pub fn solve_eigen<T: Real>(op: &DiscreteOperator<T>, count: usize) -> Result<FemSolution<T>> {
    let n = op.size();
    if count == 0 || count > n {
        return Err(Error::InvalidArgument(format!("requested {count} eigenvalues from {n} unknowns")));
    }
    let a = op.operator();
    let pairs = if n <= DENSE_LIMIT { generalized_eigen_dense(&a, &op.mass, count)? } else { generalized_eigen_subspace(&a, &op.mass, count)? };
    let mut residuals = Vec::with_capacity(count);
    for (lam, v) in pairs.values.iter().zip(&pairs.vectors) {
        let av = a.matvec(v);
        let mv = op.mass.matvec(v);
        let res = av.iter().zip(&mv).fold(T::zero(), |s, (x, y)| s.hypot(*x - *lam * *y));
        let vn = v.iter().fold(T::zero(), |s, x| s.hypot(*x));
        let rel = res / (vn * (T::one() + lam.abs()));
        if !(rel <= T::lit(1e-8)) {
            return Err(Error::NoConvergence(format!("FEM eigenpair λ = {lam} has residual {rel}")));
        }
        residuals.push(rel);
    }
    let top = *pairs.values.last().unwrap();
    let provenance = Provenance { domain: format!("mesh({n})"), sigma: String::new(), solver: if n <= DENSE_LIMIT { "fem-p1-dense".into() } else { "fem-p1-subspace".into() } };
    let mut spectrum = Spectrum::from_values(pairs.values.clone(), top, top, provenance, 2)?;
    spectrum.discretized = true;
    Ok(FemSolution { spectrum, pairs, residuals })
}
