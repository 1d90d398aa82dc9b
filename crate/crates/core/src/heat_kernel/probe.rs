use serde::Serialize;

use super::duhamel::dyadic_breaks;
use super::{HeatKernelEvaluator, KernelMethod};
use crate::domains::{BoundaryData, Domain};
use crate::error::{Error, Result};
use crate::fit::{log_log_fit, LinearFit};
use crate::model_spectra::separable_factors;
use crate::quadrature::GaussLegendre;
use crate::real::KahanSum;

/// Differences `|k^σ − K_j|` below this are treated as underflow and left out of fits.
pub const ERROR_FLOOR: f64 = 1e-13;
/// Differences within this multiple of the exact kernel's error bound are left out as well.
pub const BOUND_MULTIPLE: f64 = 100.0;

/// Measured decay of the Duhamel error `|k^σ − K_j|` in `t` at fixed `(x, x′)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub j: usize,
    pub fit: LinearFit,
    /// `−(d − j)/2` when `x = x′` lies on the boundary
    pub predicted: Option<f64>,
    pub times: Vec<f64>,
    pub errors: Vec<f64>,
    /// grid times whose error fell below [`ERROR_FLOOR`] or [`BOUND_MULTIPLE`] error bounds
    pub excluded: Vec<f64>,
}

fn on_boundary(lengths: &[f64], x: &[f64]) -> bool {
    x.iter().zip(lengths).any(|(c, l)| c.abs() <= 1e-12 * l || (c - l).abs() <= 1e-12 * l)
}

/// Fits the slope of `log|k^σ − K_j|` against `log t` over `times`.
pub fn duhamel_error_decay(domain: &Domain<f64>, sigma: &BoundaryData<f64>, j: usize, x: &[f64], xp: &[f64], times: &[f64]) -> Result<DecayReport> {
    let t_min = times.iter().copied().fold(f64::INFINITY, f64::min);
    let exact = HeatKernelEvaluator::new(domain, sigma, KernelMethod::EigenExpansion, t_min)?;
    let approx = HeatKernelEvaluator::new(domain, sigma, KernelMethod::Duhamel(j), t_min)?;
    let mut used = Vec::new();
    let mut errors = Vec::new();
    let mut excluded = Vec::new();
    for &t in times {
        let (k, bound) = exact.eval_with_bound(t, x, xp)?;
        let e = (k - approx.eval(t, x, xp)?).abs();
        if e < ERROR_FLOOR.max(BOUND_MULTIPLE * bound) {
            excluded.push(t);
        } else {
            used.push(t);
            errors.push(e);
        }
    }
    if used.len() < 2 {
        return Err(Error::NoConvergence(format!("Duhamel error unresolved at all but {} grid times", used.len())));
    }
    let fit = log_log_fit(&used, &errors)?;
    let d = exact.dim();
    let predicted = (x == xp && on_boundary(exact.domain_lengths(), x)).then(|| -((d as f64) - j as f64) / 2.0);
    Ok(DecayReport { j, fit, predicted, times: used, errors, excluded })
}

/// Sample grid of a Gaussian-bound probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeGrid {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl ProbeGrid {
    /// Log-spaced times on `[10⁻⁴, 10]` and points stratified between the interior, edges and corners.
    pub fn stratified(domain: &Domain<f64>, n_times: usize) -> Result<Self> {
        let n = n_times.max(2);
        let times = (0..n).map(|i| 10f64.powf(-4.0 + 5.0 * i as f64 / (n - 1) as f64)).collect();
        let points = match domain {
            Domain::Interval { length } => [0.0, 0.05, 0.2, 0.5, 0.8, 1.0].iter().map(|f| vec![f * length]).collect(),
            Domain::Rectangle { width, height } => [[0.5, 0.0], [0.0, 0.5], [0.0, 0.0], [0.25, 0.25], [0.5, 0.5], [1.0, 0.7], [0.1, 0.9]]
                .iter()
                .map(|p| vec![p[0] * width, p[1] * height])
                .collect(),
            _ => return Err(Error::Unsupported("probe grids exist for intervals and rectangles".into())),
        };
        Ok(Self { times, points })
    }
}

/// Fitted constants of `k(t,x,x′) ≤ M max{1,(t/t₀)^{d/2}} t^{−d/2} exp(−|x−x′|²/(Ct) + Λt)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianBoundProbe {
    pub m_hat: f64,
    pub c_hat: f64,
    pub lambda_hat: f64,
    pub t0: f64,
    /// `ln(max k(t_last)/max k(t_prev))/(t_last − t_prev)`
    pub growth_rate: f64,
    /// smallest relative slack `(bound − k)/bound` over the full grid
    pub margin: f64,
    /// M needed on the full grid when Λ is forced to 0
    pub m_without_growth: f64,
    pub holds: bool,
    pub samples: usize,
    /// grid samples skipped because the expansion error exceeded `1e−6` of the value
    pub unresolved: usize,
}

/// Gaussian widths tried by the probe; the first is `4 + ε`.
pub const WIDTH_CANDIDATES: [f64; 8] = [4.004, 4.5, 5.0, 6.0, 8.0, 12.0, 16.0, 32.0];
/// Growth rates below this count as zero.
pub const GROWTH_FLOOR: f64 = 1e-8;
/// Samples whose expansion error exceeds this fraction of the value are skipped.
pub const UNRESOLVED: f64 = 1e-6;
/// Safety factor applied to the fitted M before verification.
pub const M_SAFETY: f64 = 1.1;

/// Fits the Gaussian upper bound on every other grid time and verifies it on the full grid.
///
/// `Λ̂` is the large-time growth rate of `max k` (zero when not positive), `Ĉ` the smallest
/// candidate width whose required `M` is within a factor 1.5 of the widest one, and `M̂` the
/// required `M` times 1.1. The reference time is `t₀ = 1`.
pub fn gaussian_bound_probe(domain: &Domain<f64>, sigma: &BoundaryData<f64>, grid: &ProbeGrid) -> Result<GaussianBoundProbe> {
    let t_min = grid.times.iter().copied().fold(f64::INFINITY, f64::min);
    let ev = HeatKernelEvaluator::new(domain, sigma, KernelMethod::EigenExpansion, t_min)?;
    let d = ev.dim() as f64;
    let t0 = 1.0;
    let mut samples = Vec::new();
    let mut unresolved = 0;
    for (ti, &t) in grid.times.iter().enumerate() {
        for (a, x) in grid.points.iter().enumerate() {
            for xp in &grid.points[a..] {
                let (k, err) = ev.eval_with_bound(t, x, xp)?;
                if err > UNRESOLVED * k.abs() {
                    unresolved += 1;
                    continue;
                }
                let r2: f64 = x.iter().zip(xp).map(|(u, v)| (u - v) * (u - v)).sum();
                samples.push((ti, t, r2, k));
            }
        }
    }
    let nt = grid.times.len();
    if nt < 2 {
        return Err(Error::InvalidArgument("probe needs at least two times".into()));
    }
    let max_at = |ti: usize| samples.iter().filter(|s| s.0 == ti).map(|s| s.3).fold(f64::NEG_INFINITY, f64::max);
    let growth_rate = (max_at(nt - 1) / max_at(nt - 2)).ln() / (grid.times[nt - 1] - grid.times[nt - 2]);
    let lambda_hat = if growth_rate > GROWTH_FLOOR { growth_rate } else { 0.0 };
    let needed = |c: f64, lam: f64, pick: &dyn Fn(usize) -> bool| {
        samples
            .iter()
            .filter(|s| pick(s.0))
            .map(|&(_, t, r2, k)| k * t.powf(d / 2.0) * (r2 / (c * t) - lam * t).exp() / (t / t0).powf(d / 2.0).max(1.0))
            .fold(0.0f64, f64::max)
    };
    let fit_pick = |ti: usize| ti % 2 == 0 || ti == nt - 1;
    let widest = needed(*WIDTH_CANDIDATES.last().unwrap(), lambda_hat, &fit_pick);
    let c_hat = WIDTH_CANDIDATES.iter().copied().find(|c| needed(*c, lambda_hat, &fit_pick) <= 1.5 * widest).unwrap();
    let m_hat = M_SAFETY * needed(c_hat, lambda_hat, &fit_pick);
    if !m_hat.is_finite() {
        return Err(Error::NoConvergence("no finite Gaussian bound fits the probe grid".into()));
    }
    let mut margin = f64::INFINITY;
    for &(_, t, r2, k) in &samples {
        let bound = m_hat * (t / t0).powf(d / 2.0).max(1.0) * t.powf(-d / 2.0) * (-r2 / (c_hat * t) + lambda_hat * t).exp();
        margin = margin.min((bound - k) / bound);
    }
    let m_without_growth = needed(c_hat, 0.0, &|_| true);
    Ok(GaussianBoundProbe { m_hat, c_hat, lambda_hat, t0, growth_rate, margin, m_without_growth, holds: margin >= 0.0, samples: samples.len(), unresolved })
}

/// The leading Duhamel term of the heat-trace difference next to the exact difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceDifference {
    pub t: f64,
    /// `t ∫_{∂Ω} k⁰(t, y, y) σ(y) dy`
    pub kernel_formula: f64,
    /// `Z_0(t) − Z_σ(t)` from the spectra
    pub exact_difference: f64,
}

/// `t ∫_{∂Ω} k⁰(t,y,y)σ(y) dy` by edge quadrature, and `Z_0(t) − Z_σ(t)`.
pub fn trace_difference_via_kernel(domain: &Domain<f64>, sigma: &BoundaryData<f64>, t: f64) -> Result<TraceDifference> {
    let ev = HeatKernelEvaluator::new(domain, &BoundaryData::neumann(domain), KernelMethod::Images, t)?;
    let integral = match domain {
        Domain::Interval { length } => sigma.value_at(0, 0.0) * ev.neumann(t, &[0.0], &[0.0])? + sigma.value_at(1, 0.0) * ev.neumann(t, &[*length], &[*length])?,
        _ => {
            let rule = GaussLegendre::new(16);
            let mut acc = KahanSum::new();
            let mut offset = 0.0;
            for (piece, (p, q)) in domain.edges().into_iter().enumerate() {
                let len = (q[0] - p[0]).hypot(q[1] - p[1]);
                let breaks = dyadic_breaks(len, &[0.0, len], 0.5 * t.sqrt());
                let mut err = None;
                for w in breaks.windows(2) {
                    acc.add(rule.integrate(w[0], w[1], |u| {
                        let y = [p[0] + (q[0] - p[0]) * u / len, p[1] + (q[1] - p[1]) * u / len];
                        match ev.neumann(t, &y, &y) {
                            Ok(k) => sigma.value_at(piece, offset + u) * k,
                            Err(e) => {
                                err.get_or_insert(e);
                                0.0
                            }
                        }
                    }));
                }
                if let Some(e) = err {
                    return Err(e);
                }
                offset += len;
            }
            acc.value()
        }
    };
    let robin = separable_factors(domain, sigma)?;
    let neumann = separable_factors(domain, &BoundaryData::neumann(domain))?;
    let mut z_sigma = 1.0;
    let mut z_zero = 1.0;
    for (r, n) in robin.iter().zip(&neumann) {
        z_sigma *= r.heat_trace(t)?;
        z_zero *= n.heat_trace(t)?;
    }
    Ok(TraceDifference { t, kernel_formula: t * integral, exact_difference: z_zero - z_sigma })
}
