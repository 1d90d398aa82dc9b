//! The acceptance suite: one runner per criterion, each returning pass/fail with a detail line.
//!
//! Tolerances are pinned as constants next to their runners.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{
    gap_ratio, grid, lt_scaling_probe, riesz_report, tauberian_equivalence_harness, SemiclassicalConstant, SyntheticSequence,
};
use crate::domains::{BoundaryData, Domain};
use crate::error::Result;
use crate::fem::{assemble, solve_eigen, structured_mesh};
use crate::heat_kernel::{duhamel_error_decay, gaussian_bound_probe, HeatKernelEvaluator, KernelMethod, ProbeGrid};
use crate::model_spectra::{interval_spectrum, model_spectrum, rectangle_spectrum, separable_factors};
use crate::quadrature::GaussLegendre;
use crate::secular::{shooting_eigenvalues, RobinInterval1D};
use crate::stats::{aizenman_lieb_quadrature, gap_average, monotone_difference, riesz_mean, SpectralFunction};

/// Which `verify` suite a criterion belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Quick,
    Full,
}

impl Tier {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "quick" => Some(Tier::Quick),
            "full" => Some(Tier::Full),
            _ => None,
        }
    }
}

/// One acceptance criterion.
#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub tier: Tier,
    pub run: fn() -> Result<Outcome>,
}

/// Pass flag and a one-line summary of the measured numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

/// What a criterion produced, with its wall time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub tier: Tier,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!("[{}] {:>2} {:<28} {:>7.2}s  {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.name, self.seconds, self.detail)
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "secular-vs-shooting", tier: Tier::Quick, run: secular_vs_shooting },
        Criterion { id: 2, name: "fem-convergence", tier: Tier::Quick, run: fem_convergence },
        Criterion { id: 3, name: "riesz-two-term", tier: Tier::Full, run: riesz_two_term },
        Criterion { id: 4, name: "heat-trace-two-term", tier: Tier::Quick, run: heat_trace_two_term },
        Criterion { id: 5, name: "heat-trace-difference", tier: Tier::Quick, run: heat_trace_difference },
        Criterion { id: 6, name: "gap-average", tier: Tier::Full, run: gap_average_limit },
        Criterion { id: 7, name: "density-doubling", tier: Tier::Quick, run: density_doubling },
        Criterion { id: 8, name: "duhamel-decay", tier: Tier::Quick, run: duhamel_decay },
        Criterion { id: 9, name: "gaussian-bound", tier: Tier::Quick, run: gaussian_bound },
        Criterion { id: 10, name: "tauberian-equivalence", tier: Tier::Quick, run: tauberian_equivalence },
        Criterion { id: 11, name: "identities", tier: Tier::Quick, run: identities },
        Criterion { id: 12, name: "eigenvalue-sum-scaling", tier: Tier::Full, run: eigenvalue_sum_scaling },
    ]
}

/// Runs one criterion; an error counts as a failure and its message becomes the detail.
pub fn run_criterion(c: &Criterion) -> CriterionReport {
    let start = Instant::now();
    let (pass, detail) = match (c.run)() {
        Ok(o) => (o.pass, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport { id: c.id, name: c.name.into(), tier: c.tier, pass, detail, seconds: start.elapsed().as_secs_f64() }
}

/// The quick suite runs the quick criteria; the full suite runs all of them.
pub fn selected(tier: Tier) -> Vec<Criterion> {
    criteria().into_iter().filter(|c| tier == Tier::Full || c.tier == Tier::Quick).collect()
}

pub const ORACLE_CASES: usize = 50;
pub const ORACLE_CUTOFF: f64 = 200.0;
pub const ORACLE_REL_TOL: f64 = 1e-9;

fn secular_vs_shooting() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec);
    let mut worst = 0.0f64;
    let mut count_mismatch = 0;
    let mut total = 0;
    for _ in 0..ORACLE_CASES {
        let p = RobinInterval1D::<f64>::new(rng.random_range(0.5..2.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0))?;
        let a = p.eigenvalues(ORACLE_CUTOFF)?;
        let b = shooting_eigenvalues(&p, ORACLE_CUTOFF)?;
        if a.len() != b.len() {
            count_mismatch += 1;
            continue;
        }
        total += a.len();
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    outcome(
        count_mismatch == 0 && worst <= ORACLE_REL_TOL,
        format!("{ORACLE_CASES} problems, {total} eigenvalues, count mismatches {count_mismatch}, worst rel diff {worst:.2e} (tol {ORACLE_REL_TOL:e})"),
    )
}

pub const FEM_SLOPE_RANGE: (f64, f64) = (1.8, 2.2);
pub const FEM_ROBIN_TOL: f64 = 0.01;

fn fem_convergence() -> Result<Outcome> {
    let sq: Domain<f64> = Domain::unit_square();
    let neumann = BoundaryData::neumann(&sq);
    let mut h = Vec::new();
    let mut err = Vec::new();
    for n in [8usize, 16, 32, 64] {
        let sol = solve_eigen(&assemble(&structured_mesh(&sq, n)?, &neumann)?, 3)?;
        h.push(1.0 / n as f64);
        err.push((sol.spectrum.expanded()[1] - PI * PI).abs());
    }
    let slope = crate::fit::log_log_fit(&h, &err)?.slope;
    let one = BoundaryData::constant(&sq, 1.0)?;
    let fem = solve_eigen(&assemble(&structured_mesh(&sq, 32)?, &one)?, 4)?.spectrum.expanded();
    let exact = rectangle_spectrum(1.0, 1.0, &one, 60.0)?.expanded();
    let worst = fem.iter().zip(&exact).map(|(a, b)| ((a - b) / b).abs()).fold(0.0, f64::max);
    outcome(
        slope >= FEM_SLOPE_RANGE.0 && slope <= FEM_SLOPE_RANGE.1 && worst <= FEM_ROBIN_TOL && exact.len() >= 4,
        format!("Neumann λ₂ error slope {slope:.3} in [{}, {}]; Robin σ=1 n=32 worst rel error {worst:.2e} (tol {FEM_ROBIN_TOL})", FEM_SLOPE_RANGE.0, FEM_SLOPE_RANGE.1),
    )
}

pub const RIESZ_SLOPE_BOUND: f64 = 1.5;
pub const RIESZ_BOUNDARY_FRACTION: f64 = 0.1;

fn riesz_two_term() -> Result<Outcome> {
    let sq: Domain<f64> = Domain::unit_square();
    let one = BoundaryData::constant(&sq, 1.0)?;
    let top = 1e5;
    let spec = rectangle_spectrum(1.0, 1.0, &one, top)?;
    let report = riesz_report(&spec, &sq, 1.0, &grid(1e3, top, 61, true)?)?;
    let slope = report.slope().unwrap_or(f64::NEG_INFINITY);
    let last = report.remainder.last().copied().unwrap_or(f64::NAN).abs() / top.powf(1.5);
    let coeff = 2.0 / (3.0 * PI);
    outcome(
        slope < RIESZ_SLOPE_BOUND && last < RIESZ_BOUNDARY_FRACTION * coeff,
        format!("envelope slope {slope:.3} (< {RIESZ_SLOPE_BOUND}); |R(1e5)|/λ^1.5 = {last:.3e} (< {:.3e})", RIESZ_BOUNDARY_FRACTION * coeff),
    )
}

fn product_heat_trace(domain: &Domain<f64>, sigma: &BoundaryData<f64>, t: f64) -> Result<f64> {
    let mut z = 1.0;
    for f in separable_factors(domain, sigma)? {
        z *= f.heat_trace(t)?;
    }
    Ok(z)
}

pub const HEAT_DEVIATION_FACTOR: f64 = 0.2;

fn heat_trace_two_term() -> Result<Outcome> {
    let sq: Domain<f64> = Domain::unit_square();
    let one = BoundaryData::constant(&sq, 1.0)?;
    let mut devs = Vec::new();
    let mut within = true;
    let mut parts = Vec::new();
    for t in [1e-2, 3e-3, 1e-3] {
        let z = product_heat_trace(&sq, &one, t)?;
        let dev = (4.0 * PI * t * z - 1.0 - 0.5 * (PI * t).sqrt() * 4.0).abs();
        let allowed = HEAT_DEVIATION_FACTOR * t.sqrt();
        within &= dev <= allowed;
        parts.push(format!("t={t:e}: dev {dev:.3e} vs {allowed:.3e}"));
        devs.push(dev);
    }
    let shrinking = devs.windows(2).all(|w| w[1] < w[0]);
    outcome(within && shrinking, format!("{}; shrinking {shrinking}", parts.join(", ")))
}

pub const TRACE_DIFFERENCE_TOL: f64 = 0.03;

fn heat_trace_difference() -> Result<Outcome> {
    let sq: Domain<f64> = Domain::unit_square();
    let one = BoundaryData::constant(&sq, 1.0)?;
    let t = 1e-3;
    let diff = 2.0 * PI * (product_heat_trace(&sq, &BoundaryData::neumann(&sq), t)? - product_heat_trace(&sq, &one, t)?);
    let target = one.integral();
    let rel = (diff - target).abs() / target;
    outcome(rel <= TRACE_DIFFERENCE_TOL, format!("2π(Z₀ − Z_σ)(1e-3) = {diff:.5}, ∫σ = {target}, rel dev {rel:.4} (tol {TRACE_DIFFERENCE_TOL})"))
}

pub const GAP_TOL: f64 = 0.05;

fn gap_average_limit() -> Result<Outcome> {
    let sq: Domain<f64> = Domain::unit_square();
    let one = BoundaryData::constant(&sq, 1.0)?;
    let cutoff = 1.4e5;
    let rob = rectangle_spectrum(1.0, 1.0, &one, cutoff)?;
    let neu = rectangle_spectrum(1.0, 1.0, &BoundaryData::neumann(&sq), cutoff)?;
    let target = crate::asymptotics::gap_constant(&sq, &one);
    let mut devs = Vec::new();
    let mut parts = Vec::new();
    for n in [100usize, 1_000, 10_000] {
        let g = gap_average(&rob, &neu, n)?;
        devs.push((g - target).abs());
        parts.push(format!("N={n}: {g:.4}"));
    }
    let rel = devs[2] / target;
    let shrinking = devs.windows(2).all(|w| w[1] < w[0]);
    outcome(rel <= GAP_TOL && shrinking, format!("{}; target {target}, rel dev {rel:.4} (tol {GAP_TOL}); shrinking {shrinking}", parts.join(", ")))
}

pub const DOUBLING_RANGE: (f64, f64) = (1.8, 2.2);

fn density_doubling() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    let iv = Domain::interval(1.0)?;
    let sq: Domain<f64> = Domain::unit_square();
    let cases: [(&Domain<f64>, f64, Vec<f64>, Vec<f64>); 2] = [(&iv, 1e6, vec![0.0], vec![0.37]), (&sq, 1e5, vec![0.37, 0.0], vec![0.37, 0.41])];
    for (domain, lambda, edge, interior) in cases {
        for (label, sigma) in [("Neumann", BoundaryData::neumann(domain)), ("σ=1", BoundaryData::constant(domain, 1.0)?)] {
            let b = SpectralFunction::new(domain, &sigma, &edge, 2.0 * lambda)?.smoothed(lambda)?;
            let i = SpectralFunction::new(domain, &sigma, &interior, 2.0 * lambda)?.smoothed(lambda)?;
            let ratio = b / i;
            pass &= ratio >= DOUBLING_RANGE.0 && ratio <= DOUBLING_RANGE.1;
            parts.push(format!("{} {label} λ={lambda:e}: {ratio:.4}", domain.kind_name()));
        }
    }
    outcome(pass, format!("edge/interior ratios {} in [{}, {}]", parts.join(", "), DOUBLING_RANGE.0, DOUBLING_RANGE.1))
}

pub const DUHAMEL_SLOPE_GAIN: f64 = 0.4;
pub const INTERIOR_SLOPE: f64 = 5.0;

fn duhamel_decay() -> Result<Outcome> {
    let sq: Domain<f64> = Domain::unit_square();
    let one = BoundaryData::constant(&sq, 1.0)?;
    let edge = [0.5, 0.0];
    let times = grid(1e-3, 1e-1, 7, true)?;
    let e1 = duhamel_error_decay(&sq, &one, 1, &edge, &edge, &times)?;
    let e2 = duhamel_error_decay(&sq, &one, 2, &edge, &edge, &times)?;
    let inner = [0.5, 0.25];
    let ei = duhamel_error_decay(&sq, &one, 1, &inner, &inner, &grid(1e-3, 1e-2, 7, true)?)?;
    let (s1, s2, si) = (e1.fit.slope, e2.fit.slope, ei.fit.slope);
    outcome(
        s2 >= s1 + DUHAMEL_SLOPE_GAIN && si > INTERIOR_SLOPE,
        format!(
            "edge midpoint slopes j=1 {s1:.3}, j=2 {s2:.3} (gain ≥ {DUHAMEL_SLOPE_GAIN}); interior slope {si:.2} (> {INTERIOR_SLOPE}, {} of 7 times resolved)",
            ei.times.len()
        ),
    )
}

/// Log-spaced probe times over `[10⁻⁴, 10]`; the fit uses every other one.
pub const PROBE_TIMES: usize = 21;

fn gaussian_bound() -> Result<Outcome> {
    let sq: Domain<f64> = Domain::unit_square();
    let a = gaussian_bound_probe(&sq, &BoundaryData::constant(&sq, 1.0)?, &ProbeGrid::stratified(&sq, PROBE_TIMES)?)?;
    let iv = Domain::interval(1.0)?;
    let b = gaussian_bound_probe(&iv, &BoundaryData::constant(&iv, -1.0)?, &ProbeGrid::stratified(&iv, PROBE_TIMES)?)?;
    outcome(
        a.holds && a.lambda_hat == 0.0 && b.holds && b.lambda_hat > 0.0,
        format!(
            "square σ=1: Λ̂ {:.3e}, Ĉ {}, M̂ {:.3} holds {}; interval σ=−1: Λ̂ {:.4}, Ĉ {}, M̂ {:.3} holds {}",
            a.lambda_hat, a.c_hat, a.m_hat, a.holds, b.lambda_hat, b.c_hat, b.m_hat, b.holds
        ),
    )
}

pub const TAUBERIAN_N: usize = 100_000;
pub const TAUBERIAN_TOL: f64 = 0.02;

fn tauberian_equivalence() -> Result<Outcome> {
    let a = SyntheticSequence::power(1.0, 2.0);
    let families = [("shift", a.shifted(5.0), 5.0), ("equal", a, 0.0), ("perturbed", a.shifted(5.0).perturbed(10.0, 0.25), 5.0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, b, d) in families {
        let r = tauberian_equivalence_harness(&a, &b, 2.0, 1.0, d, TAUBERIAN_N, TAUBERIAN_TOL)?;
        pass &= r.consistent;
        parts.push(format!("{label}: riesz {:.4} gap {:.4} (limit {})", r.riesz_coefficient, r.gap_average, r.expected_gap));
    }
    outcome(pass, format!("{} within {TAUBERIAN_TOL} at N={TAUBERIAN_N}", parts.join("; ")))
}

pub const LIFT_TOL: f64 = 1e-8;
pub const CONSTANT_TOL: f64 = 1e-14;
pub const SEMIGROUP_TOL: f64 = 1e-7;

fn identities() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11f7);
    let mut lift_worst = 0.0f64;
    for _ in 0..20 {
        let p = RobinInterval1D::<f64>::new(rng.random_range(0.5..2.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))?;
        let spec = interval_spectrum(&p, 2000.0)?;
        let (g, d, l): (f64, f64, f64) = (rng.random_range(0.0..3.0), rng.random_range(0.1..3.0), rng.random_range(10.0..1500.0));
        let lifted = aizenman_lieb_quadrature(&spec, g, d, l)?;
        let direct = riesz_mean(&spec, g + d, l)?;
        lift_worst = lift_worst.max((lifted - direct).abs() / direct.abs());
    }

    let mut const_worst = 0.0f64;
    for d in 2..=6 {
        for g in [0.0, 0.5, 1.0, 2.0] {
            let c = SemiclassicalConstant::<f64>::new(g, d)?;
            let up = SemiclassicalConstant::<f64>::new(g + 1.0, d)?;
            const_worst = const_worst.max((c.raised().value - up.value).abs() / up.value);
        }
        const_worst = const_worst.max((gap_ratio::<f64>(d)? - 2.0).abs() / 2.0);
    }

    let iv = Domain::interval(1.0)?;
    let sigma = BoundaryData::per_piece(&iv, vec![1.5, -0.5])?;
    let ev = HeatKernelEvaluator::new(&iv, &sigma, KernelMethod::EigenExpansion, 0.01)?;
    let rule = GaussLegendre::new(64);
    let mut semi_worst = 0.0f64;
    for (t, s, x, xp) in [(0.01, 0.02, 0.3, 0.6), (0.05, 0.03, 0.0, 0.9), (0.2, 0.1, 1.0, 1.0)] {
        let mut err = None;
        let mut integral = 0.0;
        for k in 0..8 {
            let (lo, hi) = (k as f64 / 8.0, (k + 1) as f64 / 8.0);
            integral += rule.integrate(lo, hi, |y| match (ev.eval(t, &[x], &[y]), ev.eval(s, &[y], &[xp])) {
                (Ok(a), Ok(b)) => a * b,
                (Err(e), _) | (_, Err(e)) => {
                    err.get_or_insert(e);
                    0.0
                }
            });
        }
        if let Some(e) = err {
            return Err(e);
        }
        let direct = ev.eval(t + s, &[x], &[xp])?;
        semi_worst = semi_worst.max((integral - direct).abs() / direct.abs());
    }

    let sq: Domain<f64> = Domain::unit_square();
    let levels = [-1.0, 0.0, 1.0, 2.0];
    let spectra: Vec<crate::model_spectra::Spectrum<f64>> = levels.iter().map(|&c| model_spectrum(&sq, &BoundaryData::constant(&sq, c)?, 3000.0)).collect::<Result<_>>()?;
    let mut order_violations = 0;
    let mut monotone_failures = 0;
    let lambdas = grid(1.0, 2500.0, 200, false)?;
    for i in 0..spectra.len() {
        for j in i + 1..spectra.len() {
            let (lo, hi) = (spectra[i].expanded(), spectra[j].expanded());
            let n = spectra[i].complete_count().min(spectra[j].complete_count());
            order_violations += (0..n).filter(|&k| lo[k] > hi[k] + 1e-9 * (1.0 + hi[k].abs())).count();
            if !monotone_difference(&spectra[i], &spectra[j], 1.0, &lambdas)?.is_monotone() {
                monotone_failures += 1;
            }
        }
    }
    outcome(
        lift_worst <= LIFT_TOL && const_worst <= CONSTANT_TOL && semi_worst <= SEMIGROUP_TOL && order_violations == 0 && monotone_failures == 0,
        format!(
            "lift {lift_worst:.1e} (≤ {LIFT_TOL:e}); constants {const_worst:.1e} (≤ {CONSTANT_TOL:e}); semigroup {semi_worst:.1e} (≤ {SEMIGROUP_TOL:e}); σ-order violations {order_violations}; nonmonotone differences {monotone_failures}"
        ),
    )
}

pub const SCALING_MARGIN: f64 = 0.1;

fn eigenvalue_sum_scaling() -> Result<Outcome> {
    let sq: Domain<f64> = Domain::unit_square();
    let p = lt_scaling_probe(&sq, &BoundaryData::constant(&sq, -1.0)?, 1.0, &[1.0, 2.0, 4.0, 8.0, 16.0], SCALING_MARGIN)?;
    let slope = p.fit.map(|f| f.slope).unwrap_or(f64::NAN);
    outcome(p.pass, format!("growth exponent {slope:.3} (≤ {} + {SCALING_MARGIN}); traces {:?}", p.bound, p.traces.iter().map(|v| format!("{v:.4e}")).collect::<Vec<_>>()))
}
