use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::domains::{BoundaryData, Domain};
use crate::model_spectra::{model_spectrum, rectangle_spectrum};
use crate::special::beta;

#[test]
fn semiclassical_values() {
    assert_relative_eq!(semiclassical(1.0, 2).unwrap(), 1.0 / (8.0 * PI), max_relative = 1e-15);
    assert_relative_eq!(semiclassical(1.0, 1).unwrap(), 2.0 / (3.0 * PI), max_relative = 1e-15);
    assert_relative_eq!(semiclassical(0.0, 2).unwrap(), 1.0 / (4.0 * PI), max_relative = 1e-15);
    assert_relative_eq!(semiclassical(0.0, 1).unwrap(), 1.0 / PI, max_relative = 1e-15);
    // mpmath
    assert_relative_eq!(semiclassical(0.5, 3).unwrap(), 0.009947183943243458, max_relative = 1e-14);
    assert_relative_eq!(semiclassical(2.0, 5).unwrap(), 6.825721573163913e-5, max_relative = 1e-14);
    assert_relative_eq!(semiclassical(0.5, -1).unwrap(), PI, max_relative = 1e-14);
    assert_eq!(semiclassical(0.7, 0).unwrap(), 1.0);
    assert!(semiclassical(-0.5, 2).is_err());
    assert!(semiclassical(0.0, -2).is_err());
}

#[test]
fn recurrence_and_gap_ratio() {
    for d in 2..=6 {
        for g in [0.0, 0.5, 1.0, 2.0] {
            let c = SemiclassicalConstant::new(g, d).unwrap();
            let up = SemiclassicalConstant::new(g + 1.0, d).unwrap();
            assert_relative_eq!(c.raised().value, up.value, max_relative = 1e-14);
        }
        assert_relative_eq!(gap_ratio::<f64>(d).unwrap(), 2.0, max_relative = 1e-14);
    }
}

#[test]
fn two_term_examples() {
    let sq = Domain::unit_square();
    let l = 1e4;
    let w = weyl_two_term(&sq, 1.0, l).unwrap();
    assert_relative_eq!(w.volume, l * l / (8.0 * PI), max_relative = 1e-14);
    assert_relative_eq!(w.boundary, 2.0 / (3.0 * PI) * l.powf(1.5), max_relative = 1e-14);
    assert_eq!(weyl_two_term(&sq, 1.0, 0.0).unwrap().total(), 0.0);
    let disk = Domain::disk(1.0).unwrap();
    assert_relative_eq!(weyl_two_term(&disk, 1.0, l).unwrap().total(), l * l / 8.0 + l.powf(1.5) / 3.0, max_relative = 1e-14);

    let t = 1e-3;
    assert_relative_eq!(heat_two_term(&sq, t).unwrap().total(), 88.49809212671152, max_relative = 1e-14);
    let iv = Domain::interval(1.7).unwrap();
    assert_relative_eq!(heat_two_term(&iv, t).unwrap().total(), 1.7 / (4.0 * PI * t).sqrt() + 0.5, max_relative = 1e-14);
    assert!(heat_two_term(&sq, 1e20).unwrap().total() < 1e-10);
    assert!(heat_two_term(&sq, 0.0).is_err());
}

#[test]
fn difference_prediction_examples() {
    let sq = Domain::unit_square();
    let one = BoundaryData::constant(&sq, 1.0).unwrap();
    assert_relative_eq!(riesz_difference_prediction(&sq, &one, 1.0, 500.0).unwrap(), 2.0 * 500.0 / PI, max_relative = 1e-14);
    let balanced = BoundaryData::per_piece(&sq, vec![1.0, -1.0, 2.0, -2.0]).unwrap();
    assert_eq!(riesz_difference_prediction(&sq, &balanced, 1.0, 500.0).unwrap(), 0.0);
    assert!(riesz_difference_prediction(&sq, &one, 0.5, 500.0).is_err());
    // d = 1: (L_{1,−1}/2π)∫σ √λ = (2/π)∫σ √λ
    let iv = Domain::interval(1.0).unwrap();
    let s = BoundaryData::per_piece(&iv, vec![1.0, 2.0]).unwrap();
    assert_relative_eq!(riesz_difference_prediction(&iv, &s, 1.0, 400.0).unwrap(), 120.0 / PI, max_relative = 1e-14);
    // the prediction's coefficient over the Weyl density reproduces the gap constant
    let coeff = riesz_difference_prediction(&sq, &one, 1.0, 1.0).unwrap();
    let density = semiclassical(0.0, 2).unwrap() * sq.volume();
    assert_relative_eq!(coeff / density, gap_constant(&sq, &one), max_relative = 1e-14);
}

#[test]
fn fits_on_synthetic_remainders() {
    let x = grid(1e2, 1e5, 40, true).unwrap();
    let r: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(1.25)).collect();
    for mode in [FitMode::Raw, FitMode::Envelope { bins_per_decade: 4 }] {
        let f = remainder_fit(&x, &r, 1e9, mode).unwrap();
        assert!((f.fit.unwrap().slope - 1.25).abs() < 1e-2);
    }
    let alt: Vec<f64> = x.iter().enumerate().map(|(i, v)| v.powf(0.75) * (1.0 + 0.5 * (i as f64 * 2.3).cos()) * if i % 3 == 0 { -1.0 } else { 1.0 }).collect();
    let env = remainder_fit(&x, &alt, 1e9, FitMode::Envelope { bins_per_decade: 4 }).unwrap();
    assert!((env.fit.unwrap().slope - 0.75).abs() < 0.05, "{:?}", env);

    let tiny = vec![1e-20; 40];
    let nf = remainder_fit(&x, &tiny, 1.0, FitMode::Raw).unwrap();
    assert!(nf.noise_floor && nf.fit.is_none());
    assert!(remainder_fit(&x[..7], &r[..7], 1.0, FitMode::Raw).is_err());
    let narrow = grid(1.0, 50.0, 10, true).unwrap();
    assert!(remainder_fit(&narrow, &narrow, 1.0, FitMode::Raw).is_err());
}

#[test]
fn neumann_square_riesz_remainder() {
    let sq = Domain::unit_square();
    let spec = model_spectrum(&sq, &BoundaryData::neumann(&sq), 2e4).unwrap();
    let report = riesz_report(&spec, &sq, 1.0, &grid(1e2, 2e4, 30, true).unwrap()).unwrap();
    assert!(report.pass, "{:?}", report.slope());
    for i in 0..report.grid.len() {
        assert_eq!(report.remainder[i], report.computed[i] - report.predicted[i]);
    }
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    for key in ["statistic", "grid", "computed", "predicted", "remainder", "fit", "pass"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert!(json["fit"]["slope"].is_number() && json["fit"]["r2"].is_number());
}

#[test]
fn heat_and_difference_reports() {
    let sq = Domain::unit_square();
    let one = BoundaryData::constant(&sq, 1.0).unwrap();
    let neu = rectangle_spectrum(1.0, 1.0, &BoundaryData::neumann(&sq), 4e4).unwrap();
    let rob = rectangle_spectrum(1.0, 1.0, &one, 4e4).unwrap();
    let h = heat_report(&neu, &sq, &grid(1e-3, 1e-1, 12, true).unwrap()).unwrap();
    // Neumann square: remainder is the corner term πt·(4πt)^{-1} = 1/4
    assert!(h.pass && (h.slope().unwrap()).abs() < 0.05, "{:?}", h.slope());
    let d = riesz_difference_report(&neu, &rob, &sq, &one, 1.0, &grid(1e2, 3e4, 20, true).unwrap()).unwrap();
    assert!(d.pass, "{:?}", d.slope());
}

#[test]
fn scaling_probe() {
    let iv = Domain::interval(1.0).unwrap();
    let p = lt_scaling_probe(&iv, &BoundaryData::constant(&iv, -1.0).unwrap(), 1.0, &[1.0, 2.0, 4.0, 8.0, 16.0], 0.1).unwrap();
    // two boundary states near −s² dominate at large s
    assert!((p.fit.unwrap().slope - 2.0).abs() < 0.25, "{:?}", p.fit);
    let sq = Domain::unit_square();
    let q = lt_scaling_probe(&sq, &BoundaryData::constant(&sq, -1.0).unwrap(), 1.0, &[1.0, 2.0, 4.0, 8.0], 0.1).unwrap();
    assert!(q.pass && q.bound == 3.0, "{:?}", q.fit);
    let z = lt_scaling_probe(&sq, &BoundaryData::neumann(&sq), 1.0, &[1.0, 2.0], 0.1).unwrap();
    assert!(z.pass && z.fit.is_none() && z.skipped.len() == 2);
    assert!(lt_scaling_probe(&sq, &BoundaryData::constant(&sq, 1.0).unwrap(), 1.0, &[1.0, 2.0], 0.1).is_err());
}

#[test]
fn tauberian_families() {
    let a = SyntheticSequence::power(1.0, 2.0);
    let shifted = a.shifted(5.0);
    let r = tauberian_equivalence_harness(&a, &shifted, 2.0, 1.0, 5.0, 100_000, 0.02).unwrap();
    assert!(r.consistent && (r.gap_average - 5.0).abs() < 1e-9 && (r.riesz_coefficient - 5.0).abs() < 1e-3, "{r:?}");
    let same = tauberian_equivalence_harness(&a, &a, 2.0, 1.0, 0.0, 1000, 0.02).unwrap();
    assert!(same.consistent && same.gap_average == 0.0 && same.riesz_coefficient == 0.0);
    let pert = shifted.perturbed(10.0, 0.25);
    let r3 = tauberian_equivalence_harness(&a, &pert, 2.0, 1.0, 5.0, 100_000, 0.02).unwrap();
    assert!(r3.consistent, "{r3:?}");
    // Cesàro mean of 10 n^{-1/4} ≈ (40/3) N^{-1/4}
    assert!((r3.gap_average - 5.0 - 40.0 / 3.0 * 1e5f64.powf(-0.25)).abs() < 0.01, "{r3:?}");
    let scaled = SyntheticSequence::power(4.0, 2.0);
    let r4 = tauberian_equivalence_harness(&scaled, &scaled.shifted(6.0), 2.0, 4.0, 3.0, 10_000, 0.02).unwrap();
    assert!(r4.consistent && (r4.expected_gap - 6.0).abs() < 1e-12 && (r4.riesz_coefficient - 3.0).abs() < 1e-2, "{r4:?}");
    let bad = SyntheticSequence::power(1.0, 2.0).perturbed(-100.0, -1.5);
    assert!(tauberian_equivalence_harness(&a, &bad, 2.0, 1.0, 0.0, 100, 0.02).is_err());
}

#[test]
fn weyl_counting_examples() {
    let sq = Domain::unit_square();
    let spec = model_spectrum(&sq, &BoundaryData::neumann(&sq), 1.4e5).unwrap();
    let c = weyl_counting_input(&spec, &sq, 10_000).unwrap();
    assert!((c.ratio - 1.0).abs() < 0.03, "{c:?}");
    let disk = Domain::disk(1.0).unwrap();
    let ds = model_spectrum(&disk, &BoundaryData::neumann(&disk), 9000.0).unwrap();
    let cd = weyl_counting_input(&ds, &disk, 2000).unwrap();
    assert!((cd.ratio - 1.0).abs() < 0.03, "{cd:?}");
    let iv = Domain::interval(2.0).unwrap();
    let is = model_spectrum(&iv, &BoundaryData::neumann(&iv), 1e6).unwrap();
    let ci = weyl_counting_input(&is, &iv, 500).unwrap();
    // λ_500 = (499π/2)², prediction (500π/2)²
    assert_relative_eq!(ci.ratio, (499.0f64 / 500.0).powi(2), max_relative = 1e-10);
    assert!(weyl_counting_input(&is, &iv, 10_000_000).is_err());
}

proptest! {
    #[test]
    fn lift_reproduces_main_coefficient(g in 0.0f64..4.0, delta in 0.05f64..4.0, d in 1i32..7) {
        let p = g + d as f64 / 2.0;
        let pref = crate::special::gamma(g + delta + 1.0) / (crate::special::gamma(g + 1.0) * crate::special::gamma(delta));
        let lifted = semiclassical(g, d).unwrap() * beta(delta, p + 1.0) * pref;
        let direct = semiclassical(g + delta, d).unwrap();
        prop_assert!((lifted - direct).abs() <= 1e-12 * direct, "{} {}", lifted, direct);
    }

    #[test]
    fn envelope_fit_recovers_power(p in -2.0f64..3.0, c in 0.1f64..10.0) {
        let x = grid(1.0, 1e4, 25, true).unwrap();
        let r: Vec<f64> = x.iter().map(|v| c * v.powf(p)).collect();
        let scale = r.iter().fold(0.0f64, |m, v| m.max(*v));
        let f = remainder_fit(&x, &r, scale, FitMode::Envelope { bins_per_decade: 4 }).unwrap();
        prop_assert!((f.fit.unwrap().slope - p).abs() < 1e-2);
    }
}
