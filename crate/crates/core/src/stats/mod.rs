//! Spectral statistics: counting function, Riesz means, heat traces, gap averages,
//! the local spectral function and monotone Riesz-mean differences.

mod density;
mod table;

#[cfg(test)]
mod tests;

pub use density::{smoothed_spectral_density, spectral_function, SpectralFunction};
pub use table::{read_stat_table, write_stat_table, StatRow};

use crate::error::{Error, Result};
use crate::model_spectra::Spectrum;
use crate::quadrature::tanh_sinh;
use crate::real::{KahanSum, Real};
use crate::special::{beta, gamma, upper_incomplete_gamma};

/// `N(λ) = #{n : λ_n < λ}` with multiplicity.
pub fn counting<T: Real>(spec: &Spectrum<T>, lambda: T) -> Result<usize> {
    spec.require_complete(lambda)?;
    Ok(spec.levels().iter().take_while(|l| l.value < lambda).map(|l| l.multiplicity).sum())
}

/// `Σ mult_n (λ − λ_n)_+^γ`; `γ = 0` gives the counting function.
pub fn riesz_mean<T: Real>(spec: &Spectrum<T>, gamma_order: T, lambda: T) -> Result<T> {
    if gamma_order < T::zero() {
        return Err(Error::InvalidArgument(format!("Riesz order must be ≥ 0, got {gamma_order}")));
    }
    if gamma_order == T::zero() {
        return counting(spec, lambda).map(T::of);
    }
    spec.require_complete(lambda)?;
    let mut acc = KahanSum::new();
    for l in spec.levels().iter().take_while(|l| l.value < lambda) {
        acc.add(T::of(l.multiplicity) * (lambda - l.value).powf(gamma_order));
    }
    Ok(acc.value())
}

/// A Riesz mean together with the data it was evaluated from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszMean<T> {
    pub order: T,
    pub lambda: T,
    pub value: T,
    pub complete_below: T,
}

impl<T: Real> RieszMean<T> {
    pub fn evaluate(spec: &Spectrum<T>, order: T, lambda: T) -> Result<Self> {
        Ok(Self { order, lambda, value: riesz_mean(spec, order, lambda)?, complete_below: spec.complete_below })
    }
}

fn lift_prefactor<T: Real>(gamma_order: T, delta: T) -> T {
    gamma(gamma_order + delta + T::one()) / (gamma(gamma_order + T::one()) * gamma(delta))
}

/// `R_{γ+δ}(λ)` through the integration identity
/// `R_{γ+δ}(λ) = Γ(γ+δ+1)/(Γ(γ+1)Γ(δ)) ∫_0^∞ s^{δ-1} R_γ(λ−s) ds`.
///
/// Each eigenvalue contributes `∫_0^{λ−λ_n} s^{δ−1}(λ−λ_n−s)^γ ds = (λ−λ_n)^{γ+δ} B(δ, γ+1)`.
pub fn aizenman_lieb_lift<T: Real>(spec: &Spectrum<T>, gamma_order: T, delta: T, lambda: T) -> Result<T> {
    check_lift_args(gamma_order, delta)?;
    spec.require_complete(lambda)?;
    let b = beta(delta, gamma_order + T::one());
    let mut acc = KahanSum::new();
    for l in spec.levels().iter().take_while(|l| l.value < lambda) {
        acc.add(T::of(l.multiplicity) * (lambda - l.value).powf(gamma_order + delta));
    }
    Ok(lift_prefactor(gamma_order, delta) * b * acc.value())
}

/// The same identity evaluated by tanh-sinh quadrature of `s^{δ−1} R_γ(λ−s)` on every interval
/// between consecutive breakpoints `λ − λ_n`; an independent route to [`aizenman_lieb_lift`].
pub fn aizenman_lieb_quadrature<T: Real>(spec: &Spectrum<T>, gamma_order: T, delta: T, lambda: T) -> Result<T> {
    check_lift_args(gamma_order, delta)?;
    spec.require_complete(lambda)?;
    // breakpoints b_n = λ − λ_n > 0, descending
    let breaks: Vec<(T, T)> = spec.levels().iter().take_while(|l| l.value < lambda).map(|l| (lambda - l.value, T::of(l.multiplicity))).collect();
    let tol = (T::epsilon() * T::lit(1e3)).max(T::lit(1e-14));
    let mut total = KahanSum::new();
    let mut hi_idx = breaks.len();
    let mut lo = T::zero();
    // walk from s = 0 upward through ascending breakpoints
    while hi_idx > 0 {
        let k = hi_idx - 1;
        let hi = breaks[k].0;
        if hi > lo {
            // active terms: breakpoints ≥ hi, i.e. indices 0..=k
            let active = &breaks[..=k];
            let r_gamma = |db: T| {
                let mut r = KahanSum::new();
                for (bn, m) in active {
                    r.add(*m * ((*bn - hi) + db).powf(gamma_order));
                }
                r.value()
            };
            let part = if lo == T::zero() {
                // s = u^{1/δ} removes the s^{δ−1} singularity: ∫_0^b s^{δ−1} g = (1/δ)∫_0^{b^δ} g(u^{1/δ}) du
                let top = hi.powf(delta);
                tanh_sinh(T::zero(), top, tol, |_u, _du, dv| {
                    let db = -hi * ((-dv / top).ln_1p() / delta).exp_m1();
                    r_gamma(db)
                })? / delta
            } else {
                tanh_sinh(lo, hi, tol, |_x, da, db| (lo + da).powf(delta - T::one()) * r_gamma(db))?
            };
            total.add(part);
        }
        lo = hi;
        hi_idx = k;
    }
    Ok(lift_prefactor(gamma_order, delta) * total.value())
}

fn check_lift_args<T: Real>(gamma_order: T, delta: T) -> Result<()> {
    if gamma_order < T::zero() || delta <= T::zero() {
        return Err(Error::InvalidArgument(format!("lift needs γ ≥ 0 and δ > 0, got γ = {gamma_order}, δ = {delta}")));
    }
    Ok(())
}

/// Heat trace value with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatTrace<T> {
    pub t: T,
    pub value: T,
    pub tail_bound: T,
}

/// Safety factor on the Weyl majorant constant of the tail bound.
pub const TAIL_SAFETY: f64 = 1.2;

/// `Σ mult_n e^{−tλ_n}` over the certified part of the spectrum.
///
/// The omitted part is bounded by `C t^{−d/2} Γ(d/2+1, tΛ)` where `Λ` is the certificate and
/// `N(λ) ≤ C λ^{d/2}` with `C = 1.2·max N(λ)/λ^{d/2}` over the computed spectrum.
pub fn heat_trace<T: Real>(spec: &Spectrum<T>, t: T) -> Result<HeatTrace<T>> {
    if !(t > T::zero()) {
        return Err(Error::InvalidArgument(format!("heat trace needs t > 0, got {t}")));
    }
    let need = T::lit(40.0) / t;
    if spec.complete_below < need {
        return Err(Error::Certificate { requested: need.to_f64_lossy(), complete_below: spec.complete_below.to_f64_lossy() });
    }
    let lam = spec.complete_below;
    let half_d = T::of(spec.dim) / T::lit(2.0);
    let mut acc = KahanSum::new();
    let mut n = 0usize;
    let mut c_weyl = T::zero();
    for l in spec.levels().iter().take_while(|l| l.value < lam) {
        acc.add(T::of(l.multiplicity) * (-t * l.value).exp());
        n += l.multiplicity;
        // N jumps just above λ_n; the sup of N(λ)/λ^{d/2} over (λ_n, λ_{n+1}] is at λ_n⁺
        if l.value > T::zero() {
            c_weyl = c_weyl.max(T::of(n) / l.value.powf(half_d));
        }
    }
    let c = T::lit(TAIL_SAFETY) * c_weyl.max(T::of(n) / lam.powf(half_d));
    let tail_bound = c * t.powf(-half_d) * upper_incomplete_gamma(half_d + T::one(), t * lam);
    let value = acc.value();
    if tail_bound > T::lit(1e-12) * value {
        return Err(Error::Certificate { requested: need.to_f64_lossy(), complete_below: lam.to_f64_lossy() });
    }
    Ok(HeatTrace { t, value, tail_bound })
}

/// Gaps `λ_n(σ) − λ_n(0)` paired by sorted index with multiplicity, and their running means.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSequence<T> {
    pub gaps: Vec<T>,
    pub running_means: Vec<T>,
}

impl<T: Real> GapSequence<T> {
    pub fn new(spec_sigma: &Spectrum<T>, spec_neumann: &Spectrum<T>) -> Self {
        let n = spec_sigma.complete_count().min(spec_neumann.complete_count());
        let a = spec_sigma.expanded();
        let b = spec_neumann.expanded();
        let gaps: Vec<T> = a.iter().zip(&b).take(n).map(|(x, y)| *x - *y).collect();
        let mut acc = KahanSum::new();
        let running_means = gaps
            .iter()
            .enumerate()
            .map(|(i, g)| {
                acc.add(*g);
                acc.value() / T::of(i + 1)
            })
            .collect();
        Self { gaps, running_means }
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }
}

/// `(1/N) Σ_{n ≤ N} (λ_n(σ) − λ_n(0))`.
pub fn gap_average<T: Real>(spec_sigma: &Spectrum<T>, spec_neumann: &Spectrum<T>, count: usize) -> Result<T> {
    if count == 0 {
        return Err(Error::InvalidArgument("gap average needs N ≥ 1".into()));
    }
    let have = spec_sigma.complete_count().min(spec_neumann.complete_count());
    if have < count {
        return Err(Error::InvalidArgument(format!("gap average needs {count} certified eigenvalues, only {have} available")));
    }
    let a = spec_sigma.expanded();
    let b = spec_neumann.expanded();
    let mut acc = KahanSum::new();
    for i in 0..count {
        acc.add(a[i] - b[i]);
    }
    Ok(acc.value() / T::of(count))
}

/// `f(λ) = R_γ(a; λ) − R_γ(b; λ)` on a grid, with decreases flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneTable<T> {
    pub lambda: Vec<T>,
    pub values: Vec<T>,
    /// grid indices `i` with `f(λ_i) < f(λ_{i−1}) − 1e−10·scale`
    pub violations: Vec<usize>,
    pub scale: T,
}

impl<T: Real> MonotoneTable<T> {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Tabulates the Riesz-mean difference of two spectra of the same domain.
///
/// `spec_a` should carry the smaller Robin coefficient (its eigenvalues are lower), so that
/// `f` is nondecreasing for `γ ≥ 1`. Decreases are flagged, never raised.
pub fn monotone_difference<T: Real>(spec_a: &Spectrum<T>, spec_b: &Spectrum<T>, gamma_order: T, grid: &[T]) -> Result<MonotoneTable<T>> {
    if gamma_order < T::one() {
        return Err(Error::InvalidArgument(format!("monotone difference needs γ ≥ 1, got {gamma_order}")));
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut scale = T::zero();
    for &l in grid {
        let ra = riesz_mean(spec_a, gamma_order, l)?;
        let rb = riesz_mean(spec_b, gamma_order, l)?;
        scale = scale.max(ra.abs()).max(rb.abs());
        values.push(ra - rb);
    }
    let floor = T::lit(1e-10) * scale;
    let violations = (1..values.len()).filter(|&i| values[i] < values[i - 1] - floor).collect();
    Ok(MonotoneTable { lambda: grid.to_vec(), values, violations, scale })
}
