//! Semiclassical predictions for Riesz means and heat traces, remainder extraction and fits,
//! and the empirical probes of the eigenvalue-sum bounds and the Tauberian equivalence.

mod probes;

#[cfg(test)]
mod tests;

pub use probes::{
    lt_scaling_probe, tauberian_equivalence_harness, weyl_counting_input, LtScalingProbe, SyntheticSequence, TauberianReport, WeylCountingCheck,
};

use serde::Serialize;

use crate::domains::{BoundaryData, Domain};
use crate::error::{Error, Result};
use crate::fit::{linear_fit, LinearFit};
use crate::real::{KahanSum, Real};
use crate::special::gamma;

/// `L_{γ,d} = (4π)^{−d/2} Γ(γ+1)/Γ(γ+d/2+1)`.
///
/// `d` may be zero or negative because the difference laws use the shifted index `d − 2`;
/// at `d = 0` the value is exactly 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalConstant<T> {
    pub gamma_order: T,
    pub dim: i32,
    pub value: T,
}

impl<T: Real> SemiclassicalConstant<T> {
    pub fn new(gamma_order: T, dim: i32) -> Result<Self> {
        if !(gamma_order >= T::zero()) {
            return Err(Error::InvalidArgument(format!("semiclassical order must be ≥ 0, got {gamma_order}")));
        }
        let half_d = T::lit(dim as f64 / 2.0);
        if !(gamma_order + half_d + T::one() > T::zero()) {
            return Err(Error::InvalidArgument(format!("Γ(γ + d/2 + 1) undefined for γ = {gamma_order}, d = {dim}")));
        }
        let value = if dim == 0 {
            T::one()
        } else {
            (T::lit(4.0) * T::PI()).powf(-half_d) * gamma(gamma_order + T::one()) / gamma(gamma_order + half_d + T::one())
        };
        Ok(Self { gamma_order, dim, value })
    }

    /// `L_{γ+1,d} = L_{γ,d}(γ+1)/(γ+d/2+1)`.
    pub fn raised(&self) -> Self {
        let g = self.gamma_order;
        let factor = (g + T::one()) / (g + T::lit(self.dim as f64 / 2.0) + T::one());
        Self { gamma_order: g + T::one(), dim: self.dim, value: self.value * factor }
    }
}

/// `L_{γ,d}` as a bare number.
pub fn semiclassical<T: Real>(gamma_order: T, dim: i32) -> Result<T> {
    SemiclassicalConstant::new(gamma_order, dim).map(|c| c.value)
}

/// `L_{1,d−2}/(2π L_{0,d})`, equal to 2 in every dimension `d ≥ 2`.
pub fn gap_ratio<T: Real>(dim: i32) -> Result<T> {
    Ok(semiclassical(T::one(), dim - 2)? / (T::TAU() * semiclassical(T::zero(), dim)?))
}

/// Limit of the gap average: `(2/|Ω|)∫σ`.
pub fn gap_constant<T: Real>(domain: &Domain<T>, sigma: &BoundaryData<T>) -> T {
    T::lit(2.0) * sigma.integral() / domain.volume()
}

/// Volume and boundary terms of a two-term law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoTerm<T> {
    pub volume: T,
    pub boundary: T,
}

impl<T: Real> TwoTerm<T> {
    pub fn total(&self) -> T {
        self.volume + self.boundary
    }
}

/// `L_{γ,d}|Ω|λ^{γ+d/2} + ¼L_{γ,d−1}|∂Ω|λ^{γ+(d−1)/2}`; zero for `λ ≤ 0`.
pub fn weyl_two_term<T: Real>(domain: &Domain<T>, gamma_order: T, lambda: T) -> Result<TwoTerm<T>> {
    let d = domain.dim() as i32;
    let lv = semiclassical(gamma_order, d)?;
    let lb = semiclassical(gamma_order, d - 1)?;
    if lambda <= T::zero() {
        return Ok(TwoTerm { volume: T::zero(), boundary: T::zero() });
    }
    let half = T::lit(0.5);
    Ok(TwoTerm {
        volume: lv * domain.volume() * lambda.powf(gamma_order + half * T::of(d as usize)),
        boundary: T::lit(0.25) * lb * domain.boundary_measure() * lambda.powf(gamma_order + half * T::of(d as usize - 1)),
    })
}

/// `(4πt)^{−d/2}(|Ω| + ½√(πt)|∂Ω|)`.
pub fn heat_two_term<T: Real>(domain: &Domain<T>, t: T) -> Result<TwoTerm<T>> {
    if !(t > T::zero()) {
        return Err(Error::InvalidArgument(format!("heat time must be positive, got {t}")));
    }
    let pre = (T::lit(4.0) * T::PI() * t).powf(-T::lit(domain.dim() as f64 / 2.0));
    Ok(TwoTerm { volume: pre * domain.volume(), boundary: pre * T::lit(0.5) * (T::PI() * t).sqrt() * domain.boundary_measure() })
}

/// `(L_{γ,d−2}/2π)∫σ λ^{γ+(d−2)/2}`, the leading term of `R_γ[Neumann](λ) − R_γ[σ](λ)`.
pub fn riesz_difference_prediction<T: Real>(domain: &Domain<T>, sigma: &BoundaryData<T>, gamma_order: T, lambda: T) -> Result<T> {
    if gamma_order < T::one() {
        return Err(Error::InvalidArgument(format!("difference law needs γ ≥ 1, got {gamma_order}")));
    }
    let d = domain.dim() as i32;
    if lambda <= T::zero() {
        return Ok(T::zero());
    }
    let c = semiclassical(gamma_order, d - 2)? / T::TAU();
    Ok(c * sigma.integral() * lambda.powf(gamma_order + T::lit((d - 2) as f64 / 2.0)))
}

/// How [`remainder_fit`] treats the remainders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FitMode {
    /// every `|R|` enters the fit
    Raw,
    /// the max of `|R|` over each of `bins_per_decade` logarithmic bins per decade
    Envelope { bins_per_decade: usize },
}

/// Envelope bins per decade used by the verification runs.
pub const ENVELOPE_BINS: usize = 4;
/// Remainders below this fraction of the statistic's scale are at the noise floor.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Result of [`remainder_fit`]: `fit` is `None` when every remainder sits at the noise floor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemainderFit {
    pub fit: Option<LinearFit>,
    /// two standard errors of the slope
    pub slope_band: f64,
    pub points_used: usize,
    pub noise_floor: bool,
}

/// Least-squares slope of `log|R|` against `log x`.
///
/// Needs ≥ 8 points over ≥ 2 decades. `scale` is the size of the statistic; when every
/// `|R| < 1e−12·scale` the fit is skipped and the result reports the noise floor.
pub fn remainder_fit(grid: &[f64], remainder: &[f64], scale: f64, mode: FitMode) -> Result<RemainderFit> {
    if grid.len() != remainder.len() {
        return Err(Error::InvalidArgument("grid and remainders differ in length".into()));
    }
    if grid.len() < 8 {
        return Err(Error::InvalidArgument(format!("remainder fit needs ≥ 8 points, got {}", grid.len())));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || !(grid[0] > 0.0) {
        return Err(Error::InvalidArgument("remainder grid must be positive and strictly increasing".into()));
    }
    if grid[grid.len() - 1] / grid[0] < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument("remainder grid must span ≥ 2 decades".into()));
    }
    let floor = NOISE_FLOOR * scale.abs();
    let kept: Vec<(f64, f64)> = grid.iter().zip(remainder).filter(|(_, r)| r.abs() > floor).map(|(x, r)| (*x, r.abs())).collect();
    if kept.len() < 2 {
        return Ok(RemainderFit { fit: None, slope_band: 0.0, points_used: kept.len(), noise_floor: true });
    }
    let pts = match mode {
        FitMode::Raw => kept,
        FitMode::Envelope { bins_per_decade } => {
            let per = bins_per_decade.max(1) as f64;
            let origin = grid[0].log10();
            let mut env: Vec<(i64, f64, f64)> = Vec::new();
            for (x, r) in kept {
                let bin = ((x.log10() - origin) * per + 1e-9).floor() as i64;
                match env.last_mut() {
                    Some(last) if last.0 == bin => {
                        if r > last.2 {
                            *last = (bin, x, r);
                        }
                    }
                    _ => env.push((bin, x, r)),
                }
            }
            env.into_iter().map(|(_, x, r)| (x, r)).collect()
        }
    };
    if pts.len() < 2 {
        return Err(Error::InvalidArgument("fewer than two envelope points above the noise floor".into()));
    }
    let lx: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let fit = linear_fit(&lx, &ly)?;
    let n = lx.len() as f64;
    let slope_band = if lx.len() > 2 {
        let mx = lx.iter().sum::<f64>() / n;
        let sxx: f64 = lx.iter().map(|v| (v - mx) * (v - mx)).sum();
        let sse: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - fit.slope * x - fit.intercept).powi(2)).sum();
        2.0 * (sse / (n - 2.0) / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(RemainderFit { fit: Some(fit), slope_band, points_used: pts.len(), noise_floor: false })
}

/// Acceptance rule on a fitted remainder slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SlopeBound {
    Below(f64),
    Above(f64),
}

impl SlopeBound {
    pub fn accepts(&self, slope: f64) -> bool {
        match *self {
            SlopeBound::Below(b) => slope < b,
            SlopeBound::Above(b) => slope > b,
        }
    }
}

/// Computed statistic, its predicted main terms and the remainder `computed − predicted`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub statistic: String,
    pub grid: Vec<f64>,
    pub computed: Vec<f64>,
    pub predicted: Vec<f64>,
    pub remainder: Vec<f64>,
    pub fit: Option<LinearFit>,
    pub slope_band: f64,
    pub bound: SlopeBound,
    pub noise_floor: bool,
    pub pass: bool,
}

impl AsymptoticReport {
    /// Fits the remainders and judges the slope against `bound`; a noise-floor remainder passes.
    pub fn new(statistic: &str, grid: Vec<f64>, computed: Vec<f64>, predicted: Vec<f64>, mode: FitMode, bound: SlopeBound) -> Result<Self> {
        if computed.len() != grid.len() || predicted.len() != grid.len() {
            return Err(Error::InvalidArgument("report columns differ in length".into()));
        }
        let remainder: Vec<f64> = computed.iter().zip(&predicted).map(|(c, p)| c - p).collect();
        let scale = computed.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let rf = remainder_fit(&grid, &remainder, scale, mode)?;
        let pass = rf.noise_floor || rf.fit.is_some_and(|f| bound.accepts(f.slope));
        Ok(Self { statistic: statistic.into(), grid, computed, predicted, remainder, fit: rf.fit, slope_band: rf.slope_band, bound, noise_floor: rf.noise_floor, pass })
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `n` points from `start` to `stop`, geometric when `log` is set.
pub fn grid(start: f64, stop: f64, n: usize, log: bool) -> Result<Vec<f64>> {
    if n < 2 || !(stop > start) || (log && !(start > 0.0)) {
        return Err(Error::InvalidArgument(format!("bad grid {start}:{stop}:{n}")));
    }
    Ok((0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if log {
                start * (stop / start).powf(f)
            } else {
                start + (stop - start) * f
            }
        })
        .collect())
}

/// Riesz-mean remainder against the two-term Weyl law; the slope must stay below `γ + (d−1)/2`.
pub fn riesz_report(spec: &crate::model_spectra::Spectrum<f64>, domain: &Domain<f64>, gamma_order: f64, lambdas: &[f64]) -> Result<AsymptoticReport> {
    let mut computed = Vec::with_capacity(lambdas.len());
    let mut predicted = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        computed.push(crate::stats::riesz_mean(spec, gamma_order, l)?);
        predicted.push(weyl_two_term(domain, gamma_order, l)?.total());
    }
    let bound = SlopeBound::Below(gamma_order + (domain.dim() as f64 - 1.0) / 2.0);
    AsymptoticReport::new("riesz_mean", lambdas.to_vec(), computed, predicted, FitMode::Envelope { bins_per_decade: ENVELOPE_BINS }, bound)
}

/// Heat-trace remainder against the two-term expansion; the slope in `t` must exceed `−(d−1)/2`.
pub fn heat_report(spec: &crate::model_spectra::Spectrum<f64>, domain: &Domain<f64>, times: &[f64]) -> Result<AsymptoticReport> {
    let mut computed = Vec::with_capacity(times.len());
    let mut predicted = Vec::with_capacity(times.len());
    for &t in times {
        computed.push(crate::stats::heat_trace(spec, t)?.value);
        predicted.push(heat_two_term(domain, t)?.total());
    }
    let bound = SlopeBound::Above(-(domain.dim() as f64 - 1.0) / 2.0);
    AsymptoticReport::new("heat_trace", times.to_vec(), computed, predicted, FitMode::Raw, bound)
}

/// Remainder of `R_γ[Neumann] − R_γ[σ]` against its leading term; slope below `γ + (d−2)/2`.
pub fn riesz_difference_report(
    neumann: &crate::model_spectra::Spectrum<f64>,
    robin: &crate::model_spectra::Spectrum<f64>,
    domain: &Domain<f64>,
    sigma: &BoundaryData<f64>,
    gamma_order: f64,
    lambdas: &[f64],
) -> Result<AsymptoticReport> {
    let mut computed = Vec::with_capacity(lambdas.len());
    let mut predicted = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let mut acc = KahanSum::new();
        acc.add(crate::stats::riesz_mean(neumann, gamma_order, l)?);
        acc.add(-crate::stats::riesz_mean(robin, gamma_order, l)?);
        computed.push(acc.value());
        predicted.push(riesz_difference_prediction(domain, sigma, gamma_order, l)?);
    }
    let bound = SlopeBound::Below(gamma_order + (domain.dim() as f64 - 2.0) / 2.0);
    AsymptoticReport::new("riesz_difference", lambdas.to_vec(), computed, predicted, FitMode::Envelope { bins_per_decade: ENVELOPE_BINS }, bound)
}
