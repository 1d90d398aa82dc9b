use crate::domains::{BoundaryData, Domain};
use crate::error::{Error, Result};
use crate::model_spectra::{ground_state, separable_factors};
use crate::real::{KahanSum, Real};

/// `ρ(μ, x) = Σ_{λ_n < μ} φ_n(x)²` on a tensor-product domain, tabulated up to a cutoff.
///
/// Stores the product energies `μ_m + ν_n` with weights `φ_m(x₁)² ψ_n(x₂)²`, sorted.
#[derive(Debug, Clone)]
pub struct SpectralFunction<T> {
    pub point: Vec<T>,
    pub dim: usize,
    pub cutoff: T,
    energies: Vec<T>,
    prefix: Vec<T>,
}

impl<T: Real> SpectralFunction<T> {
    pub fn new(domain: &Domain<T>, sigma: &BoundaryData<T>, x: &[T], cutoff: T) -> Result<Self> {
        let factors = separable_factors(domain, sigma)?;
        if x.len() != factors.len() {
            return Err(Error::InvalidArgument(format!("point has {} coordinates, domain needs {}", x.len(), factors.len())));
        }
        let grounds: Vec<T> = factors.iter().map(ground_state).collect::<Result<_>>()?;
        let lowest_total: T = grounds.iter().copied().sum();
        let mut terms: Vec<(T, T)> = vec![(T::zero(), T::one())];
        for (i, p) in factors.iter().enumerate() {
            // headroom for the other factors' ground states
            let others = lowest_total - grounds[i];
            let local_cut = cutoff - others;
            let pairs = if local_cut >= grounds[i] { p.eigenpairs(local_cut)? } else { Vec::new() };
            let vals: Vec<(T, T)> = pairs.iter().map(|e| e.eval(x[i]).map(|v| (e.eigenvalue, v * v))).collect::<Result<_>>()?;
            let mut next = Vec::with_capacity(terms.len() * vals.len().max(1));
            for (e, w) in &terms {
                for (ev, wv) in &vals {
                    if *e + *ev < cutoff {
                        next.push((*e + *ev, *w * *wv));
                    }
                }
            }
            terms = next;
        }
        terms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut acc = KahanSum::new();
        let prefix = terms
            .iter()
            .map(|(_, w)| {
                acc.add(*w);
                acc.value()
            })
            .collect();
        Ok(Self { point: x.to_vec(), dim: factors.len(), cutoff, energies: terms.into_iter().map(|t| t.0).collect(), prefix })
    }

    /// `ρ(μ, x)`; requires `μ ≤ cutoff`.
    pub fn value(&self, mu: T) -> Result<T> {
        self.check(mu)?;
        let k = self.energies.partition_point(|e| *e < mu);
        Ok(if k == 0 { T::zero() } else { self.prefix[k - 1] })
    }

    /// `(1/λ) ∫_λ^{2λ} μ^{−d/2} ρ(μ, x) dμ`, evaluated exactly for the step function `ρ`.
    pub fn smoothed(&self, lambda: T) -> Result<T> {
        if !(lambda > T::zero()) {
            return Err(Error::InvalidArgument(format!("smoothing needs λ > 0, got {lambda}")));
        }
        let top = lambda + lambda;
        self.check(top)?;
        let antiderivative = |m: T| if self.dim == 1 { T::lit(2.0) * m.sqrt() } else { m.ln() };
        let end = antiderivative(top);
        let mut acc = KahanSum::new();
        let mut prev = T::zero();
        for (e, p) in self.energies.iter().zip(&self.prefix) {
            if *e >= top {
                break;
            }
            let w = *p - prev;
            prev = *p;
            acc.add(w * (end - antiderivative(e.max(lambda))));
        }
        Ok(acc.value() / lambda)
    }

    fn check(&self, mu: T) -> Result<()> {
        if mu > self.cutoff {
            Err(Error::Certificate { requested: mu.to_f64_lossy(), complete_below: self.cutoff.to_f64_lossy() })
        } else {
            Ok(())
        }
    }
}

/// `ρ(λ, x) = Σ_{λ_n < λ} φ_n(x)²` on an interval or rectangle.
pub fn spectral_function<T: Real>(domain: &Domain<T>, sigma: &BoundaryData<T>, lambda: T, x: &[T]) -> Result<T> {
    SpectralFunction::new(domain, sigma, x, lambda)?.value(lambda)
}

/// Cesàro-smoothed `λ^{−d/2} ρ`: `(1/λ) ∫_λ^{2λ} μ^{−d/2} ρ(μ, x) dμ`.
pub fn smoothed_spectral_density<T: Real>(domain: &Domain<T>, sigma: &BoundaryData<T>, lambda: T, x: &[T]) -> Result<T> {
    SpectralFunction::new(domain, sigma, x, lambda + lambda)?.smoothed(lambda)
}
