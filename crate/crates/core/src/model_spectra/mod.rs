//! Exact spectra of separable model domains and the [`Spectrum`] container.

mod bessel;
mod cache;
mod disk;
mod rectangle;

pub use bessel::{bessel_i, bessel_j, bessel_j_prime, bessel_j_pair, BesselEvaluator};
pub use cache::{read_spectrum_csv, write_spectrum_csv};
pub use disk::disk_spectrum;
pub use rectangle::{ground_state, interval_spectrum, rectangle_factors, rectangle_spectrum, separable_factors};

use crate::domains::{BoundaryData, Domain};
use crate::error::{Error, Result};
use crate::real::Real;

/// One distinct eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level<T> {
    pub value: T,
    pub multiplicity: usize,
}

/// Where a spectrum came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub domain: String,
    pub sigma: String,
    pub solver: String,
}

/// Sorted eigenvalues with multiplicities and a completeness certificate.
///
/// Every eigenvalue `< complete_below` of the operator is present. `cutoff ≥ complete_below`
/// bounds the stored values. Spectra from a discretization set `discretized`, meaning the
/// certificate refers to the discrete operator only.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    levels: Vec<Level<T>>,
    pub cutoff: T,
    pub complete_below: T,
    pub provenance: Provenance,
    pub dim: usize,
    pub discretized: bool,
}

/// How [`merge_spectra`] combines its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeMode {
    /// `{μ + ν}` (separation of variables)
    TensorSum,
    /// concatenation
    Union,
}

fn same_level<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(1e-9) * (T::one() + a.abs().max(b.abs()))
}

impl<T: Real> Spectrum<T> {
    /// Builds a spectrum from raw values, sorting and merging values within `1e-9(1+|λ|)`.
    pub fn from_values(mut values: Vec<T>, cutoff: T, complete_below: T, provenance: Provenance, dim: usize) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NoConvergence("non-finite eigenvalue".into()));
        }
        values.retain(|v| *v <= cutoff);
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self::from_levels(values.into_iter().map(|value| Level { value, multiplicity: 1 }).collect(), cutoff, complete_below, provenance, dim))
    }

    /// Builds from levels already sorted ascending; adjacent equal levels are merged.
    pub fn from_levels(raw: Vec<Level<T>>, cutoff: T, complete_below: T, provenance: Provenance, dim: usize) -> Self {
        let mut levels: Vec<Level<T>> = Vec::with_capacity(raw.len());
        for l in raw {
            match levels.last_mut() {
                Some(last) if same_level(last.value, l.value) => last.multiplicity += l.multiplicity,
                _ => levels.push(l),
            }
        }
        Self { levels, cutoff, complete_below: complete_below.min(cutoff), provenance, dim, discretized: false }
    }

    pub fn levels(&self) -> &[Level<T>] {
        &self.levels
    }

    /// Total count with multiplicity.
    pub fn len(&self) -> usize {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Eigenvalues repeated by multiplicity.
    pub fn expanded(&self) -> Vec<T> {
        self.levels.iter().flat_map(|l| std::iter::repeat_n(l.value, l.multiplicity)).collect()
    }

    pub fn lowest(&self) -> Option<T> {
        self.levels.first().map(|l| l.value)
    }

    /// Number of eigenvalues (with multiplicity) certified complete: those `< complete_below`.
    pub fn complete_count(&self) -> usize {
        self.levels.iter().filter(|l| l.value < self.complete_below).map(|l| l.multiplicity).sum()
    }

    /// Restricts to values `≤ cutoff`.
    pub fn truncated(&self, cutoff: T) -> Self {
        let levels = self.levels.iter().copied().filter(|l| l.value <= cutoff).collect();
        Self { levels, cutoff: cutoff.min(self.cutoff), complete_below: self.complete_below.min(cutoff), provenance: self.provenance.clone(), dim: self.dim, discretized: self.discretized }
    }

    /// Errors when `lambda` lies above the completeness certificate.
    pub fn require_complete(&self, lambda: T) -> Result<()> {
        if lambda > self.complete_below {
            Err(Error::Certificate { requested: lambda.to_f64_lossy(), complete_below: self.complete_below.to_f64_lossy() })
        } else {
            Ok(())
        }
    }
}

/// Tensor-sum or union of two spectra.
///
/// For the tensor sum the result is complete below `min(Λ_a + μ₁(b), Λ_b + μ₁(a))`, where `Λ`
/// are the input certificates and `μ₁` the lowest eigenvalues; larger sums are discarded.
pub fn merge_spectra<T: Real>(a: &Spectrum<T>, b: &Spectrum<T>, mode: MergeMode) -> Result<Spectrum<T>> {
    let provenance = Provenance {
        domain: format!("{}*{}", a.provenance.domain, b.provenance.domain),
        sigma: format!("{}*{}", a.provenance.sigma, b.provenance.sigma),
        solver: format!("{}+{}", a.provenance.solver, b.provenance.solver),
    };
    match mode {
        MergeMode::TensorSum => {
            let (Some(a1), Some(b1)) = (a.lowest(), b.lowest()) else {
                return Err(Error::InvalidArgument("tensor sum of an empty spectrum".into()));
            };
            let cb = (a.complete_below + b1).min(b.complete_below + a1);
            if !cb.is_finite() {
                return Err(Error::InvalidArgument("tensor sum needs finite certificates".into()));
            }
            let mut raw = Vec::new();
            for la in &a.levels {
                for lb in &b.levels {
                    let v = la.value + lb.value;
                    if v <= cb {
                        raw.push(Level { value: v, multiplicity: la.multiplicity * lb.multiplicity });
                    }
                }
            }
            raw.sort_by(|x, y| x.value.partial_cmp(&y.value).unwrap());
            let mut s = Spectrum::from_levels(raw, cb, cb, provenance, a.dim + b.dim);
            s.discretized = a.discretized || b.discretized;
            Ok(s)
        }
        MergeMode::Union => {
            if a.dim != b.dim {
                return Err(Error::InvalidArgument("union of spectra of different dimension".into()));
            }
            let mut raw: Vec<Level<T>> = a.levels.iter().chain(&b.levels).copied().collect();
            raw.sort_by(|x, y| x.value.partial_cmp(&y.value).unwrap());
            let mut s = Spectrum::from_levels(raw, a.cutoff.min(b.cutoff), a.complete_below.min(b.complete_below), provenance, a.dim);
            s.discretized = a.discretized || b.discretized;
            Ok(s)
        }
    }
}


/// Exact spectrum of an interval, rectangle or disk up to `cutoff`, complete below `cutoff`.
///
/// The disk needs constant σ; polygons have no closed-form spectrum (use the FEM solver).
pub fn model_spectrum<T: Real>(domain: &Domain<T>, sigma: &BoundaryData<T>, cutoff: T) -> Result<Spectrum<T>> {
    match domain {
        Domain::Interval { .. } => interval_spectrum(&separable_factors(domain, sigma)?[0], cutoff),
        Domain::Rectangle { width, height } => rectangle_spectrum(*width, *height, sigma, cutoff),
        Domain::Disk { radius } => {
            let c = sigma.as_constant().ok_or_else(|| Error::InvalidBoundary("disk spectra need constant σ".into()))?;
            disk_spectrum(*radius, c, cutoff)
        }
        Domain::Polygon { .. } => Err(Error::Unsupported("polygon spectra come from the FEM solver".into())),
    }
}
