use serde::Serialize;

use super::semiclassical;
use crate::domains::{BoundaryData, Domain};
use crate::error::{Error, Result};
use crate::fit::{log_log_fit, LinearFit};
use crate::model_spectra::{model_spectrum, Spectrum};
use crate::real::KahanSum;

/// Growth of `Tr(−Δ^{(sσ)})₋^γ` in the coupling `s` for `σ ≤ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LtScalingProbe {
    pub gamma_order: f64,
    pub scales: Vec<f64>,
    pub traces: Vec<f64>,
    /// scales without negative spectrum, left out of the fit
    pub skipped: Vec<f64>,
    pub fit: Option<LinearFit>,
    /// `2γ + d − 1`
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Sums `|λ_n|^γ` over the negative eigenvalues of `sσ` for each scale and fits the exponent in `s`.
///
/// Passes when the fitted exponent is at most `2γ + d − 1 + margin`, or trivially when no scale
/// has negative spectrum.
pub fn lt_scaling_probe(domain: &Domain<f64>, sigma: &BoundaryData<f64>, gamma_order: f64, scales: &[f64], margin: f64) -> Result<LtScalingProbe> {
    if !(gamma_order > 0.0) {
        return Err(Error::InvalidArgument(format!("probe order must be positive, got {gamma_order}")));
    }
    if sigma.integral_pos() > 0.0 {
        return Err(Error::InvalidBoundary("scaling probe needs σ ≤ 0".into()));
    }
    if scales.iter().any(|s| !(*s > 0.0)) || scales.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("scales must be positive and increasing".into()));
    }
    let mut used = Vec::new();
    let mut traces = Vec::new();
    let mut skipped = Vec::new();
    for &s in scales {
        let spec = model_spectrum(domain, &sigma.scaled(s), 1.0)?;
        let mut acc = KahanSum::new();
        let mut any = false;
        for l in spec.levels().iter().take_while(|l| l.value < 0.0) {
            acc.add(l.multiplicity as f64 * (-l.value).powf(gamma_order));
            any = true;
        }
        if any {
            used.push(s);
            traces.push(acc.value());
        } else {
            skipped.push(s);
        }
    }
    let bound = 2.0 * gamma_order + domain.dim() as f64 - 1.0;
    let fit = if used.len() >= 2 { Some(log_log_fit(&used, &traces)?) } else { None };
    let pass = match fit {
        Some(f) => f.slope <= bound + margin,
        None => used.is_empty(),
    };
    Ok(LtScalingProbe { gamma_order, scales: used, traces, skipped, fit, bound, margin, pass })
}

/// `a_n = C n^α + offset + perturbation·n^{−decay}` for `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyntheticSequence {
    pub coefficient: f64,
    pub exponent: f64,
    pub offset: f64,
    pub perturbation: f64,
    pub decay: f64,
}

impl SyntheticSequence {
    pub fn power(coefficient: f64, exponent: f64) -> Self {
        Self { coefficient, exponent, offset: 0.0, perturbation: 0.0, decay: 0.0 }
    }

    pub fn shifted(self, offset: f64) -> Self {
        Self { offset, ..self }
    }

    pub fn perturbed(self, perturbation: f64, decay: f64) -> Self {
        Self { perturbation, decay, ..self }
    }

    pub fn term(&self, n: usize) -> f64 {
        let x = n as f64;
        self.coefficient * x.powf(self.exponent) + self.offset + self.perturbation * x.powf(-self.decay)
    }
}

/// Both sides of the equivalence between a Riesz-mean difference law and a gap-average limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauberianReport {
    pub n: usize,
    pub lambda: f64,
    /// `(Σ(λ − a_n)_+ − Σ(λ − b_n)_+)/λ^{1/α}`
    pub riesz_coefficient: f64,
    /// `(1/N)Σ_{n≤N}(b_n − a_n)`
    pub gap_average: f64,
    pub expected_coefficient: f64,
    /// `C^{1/α} D`
    pub expected_gap: f64,
    /// `|gap − C^{1/α}·riesz| / |gap|`
    pub forward_error: f64,
    /// `|riesz − gap/C^{1/α}| / |riesz|`
    pub backward_error: f64,
    pub tolerance: f64,
    pub consistent: bool,
}

fn relative(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// Evaluates both sides at `N = n` and `λ = a_N` and checks that each implies the other.
///
/// `a_n ~ C n^α`; `expected_coefficient` is the `D` of the difference law. Both relative errors
/// must stay within `tolerance` (absolute when both sides vanish).
pub fn tauberian_equivalence_harness(a: &SyntheticSequence, b: &SyntheticSequence, alpha: f64, c: f64, expected_coefficient: f64, n: usize, tolerance: f64) -> Result<TauberianReport> {
    if n < 2 || !(alpha > 0.0) || !(c > 0.0) {
        return Err(Error::InvalidArgument("harness needs N ≥ 2, α > 0, C > 0".into()));
    }
    let lambda = a.term(n);
    let mut riesz = KahanSum::new();
    let mut gaps = KahanSum::new();
    let (mut pa, mut pb) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut k = 1usize;
    loop {
        let (x, y) = (a.term(k), b.term(k));
        if x < pa || y < pb {
            return Err(Error::InvalidArgument(format!("sequences must be nondecreasing (index {k})")));
        }
        (pa, pb) = (x, y);
        if k <= n {
            gaps.add(y - x);
        }
        if x >= lambda && y >= lambda && k >= n {
            break;
        }
        if x < lambda {
            riesz.add(lambda - x);
        }
        if y < lambda {
            riesz.add(-(lambda - y));
        }
        k += 1;
    }
    let riesz_coefficient = riesz.value() / lambda.powf(1.0 / alpha);
    let gap_average = gaps.value() / n as f64;
    let c_root = c.powf(1.0 / alpha);
    let forward_error = relative(c_root * riesz_coefficient, gap_average);
    let backward_error = relative(gap_average / c_root, riesz_coefficient);
    let both_zero = riesz_coefficient.abs() <= tolerance && gap_average.abs() <= tolerance;
    let consistent = both_zero || (forward_error <= tolerance && backward_error <= tolerance);
    Ok(TauberianReport {
        n,
        lambda,
        riesz_coefficient,
        gap_average,
        expected_coefficient,
        expected_gap: c_root * expected_coefficient,
        forward_error,
        backward_error,
        tolerance,
        consistent,
    })
}

/// `λ_n (L_{0,d}|Ω|)^{2/d} / n^{2/d}` at one index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylCountingCheck {
    pub index: usize,
    pub eigenvalue: f64,
    pub predicted: f64,
    pub ratio: f64,
}

/// Compares the `n`-th eigenvalue (1-based, with multiplicity) with the Weyl-law inversion.
pub fn weyl_counting_input(spec: &Spectrum<f64>, domain: &Domain<f64>, index: usize) -> Result<WeylCountingCheck> {
    if index == 0 {
        return Err(Error::InvalidArgument("eigenvalue indices start at 1".into()));
    }
    if spec.complete_count() < index {
        return Err(Error::InvalidArgument(format!("spectrum is complete only to index {}, asked for {index}", spec.complete_count())));
    }
    let mut seen = 0;
    let mut eigenvalue = f64::NAN;
    for l in spec.levels() {
        seen += l.multiplicity;
        if seen >= index {
            eigenvalue = l.value;
            break;
        }
    }
    let d = domain.dim() as f64;
    let predicted = (index as f64 / (semiclassical(0.0, domain.dim() as i32)? * domain.volume())).powf(2.0 / d);
    Ok(WeylCountingCheck { index, eigenvalue, predicted, ratio: eigenvalue / predicted })
}
