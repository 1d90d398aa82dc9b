use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::domains::{BoundaryData, Domain};
use crate::model_spectra::{interval_spectrum, rectangle_spectrum, Provenance};
use crate::secular::RobinInterval1D;

fn spec(values: &[f64], cutoff: f64, dim: usize) -> Spectrum<f64> {
    Spectrum::from_values(values.to_vec(), cutoff, cutoff, Provenance::default(), dim).unwrap()
}

fn neumann_square(cutoff: f64) -> Spectrum<f64> {
    let d = Domain::unit_square();
    rectangle_spectrum(1.0, 1.0, &BoundaryData::neumann(&d), cutoff).unwrap()
}

fn robin_square(sigma: f64, cutoff: f64) -> Spectrum<f64> {
    let d = Domain::unit_square();
    rectangle_spectrum(1.0, 1.0, &BoundaryData::constant(&d, sigma).unwrap(), cutoff).unwrap()
}

fn neumann_interval(cutoff: f64) -> Spectrum<f64> {
    interval_spectrum(&RobinInterval1D::neumann(1.0).unwrap(), cutoff).unwrap()
}

#[test]
fn counting_examples() {
    let sq = neumann_square(1.1e4);
    assert_eq!(counting(&sq, 1.0).unwrap(), 1);
    // lattice oracle: π²(m² + n²) < 10⁴
    let mut lattice = 0;
    for m in 0..40 {
        for n in 0..40 {
            if PI * PI * ((m * m + n * n) as f64) < 1e4 {
                lattice += 1;
            }
        }
    }
    assert_eq!(counting(&sq, 1e4).unwrap(), lattice);
    assert_eq!(counting(&spec(&[], 10.0, 2), 5.0).unwrap(), 0);
    assert!(matches!(counting(&sq, 2e4), Err(Error::Certificate { .. })));
    // strict inequality at an eigenvalue
    assert_eq!(counting(&spec(&[0.0, 1.0], 5.0, 1), 1.0).unwrap(), 1);
}

#[test]
fn riesz_mean_examples() {
    assert_eq!(riesz_mean(&spec(&[0.0], 10.0, 1), 1.0, 3.0).unwrap(), 3.0);
    let s = spec(&[0.0, PI * PI, PI * PI], 20.0, 2);
    let r = riesz_mean(&s, 1.0, 10.0).unwrap();
    assert!((r - (10.0 + 2.0 * (10.0 - PI * PI))).abs() < 1e-12);
    assert!((r - 10.2608).abs() < 1e-4);
    let sq = neumann_square(1.1e3);
    let direct = riesz_mean(&sq, 1.0, 1e3).unwrap();
    let lifted = aizenman_lieb_quadrature(&sq, 0.0, 1.0, 1e3).unwrap();
    assert!(((direct - lifted) / direct).abs() < 1e-8, "{direct} {lifted}");
}

#[test]
fn lift_examples() {
    let s0 = spec(&[0.0], 10.0, 1);
    assert!((aizenman_lieb_lift(&s0, 0.0, 1.0, 3.0).unwrap() - 3.0).abs() < 1e-13);
    assert!((aizenman_lieb_quadrature(&s0, 0.0, 1.0, 3.0).unwrap() - 3.0).abs() < 1e-12);
    let s01 = spec(&[0.0, 1.0], 10.0, 1);
    assert!((aizenman_lieb_lift(&s01, 1.0, 1.0, 2.0).unwrap() - 5.0).abs() < 1e-12);
    assert!((aizenman_lieb_quadrature(&s01, 1.0, 1.0, 2.0).unwrap() - 5.0).abs() < 1e-11);
    let ni = neumann_interval(200.0);
    let direct = riesz_mean(&ni, 1.0, 100.0).unwrap();
    for lift in [aizenman_lieb_lift(&ni, 0.5, 0.5, 100.0).unwrap(), aizenman_lieb_quadrature(&ni, 0.5, 0.5, 100.0).unwrap()] {
        assert!(((lift - direct) / direct).abs() < 1e-8, "{lift} vs {direct}");
    }
}

#[test]
fn heat_trace_examples() {
    let h = heat_trace(&spec(&[0.0], 100.0, 1), 1.0).unwrap();
    assert_eq!(h.value, 1.0);
    // direct theta sum with 10⁴ terms
    let t = 0.01;
    let theta: f64 = (0..10_000).map(|n| (-t * PI * PI * (n * n) as f64).exp()).sum();
    let h = heat_trace(&neumann_interval(40.0 / t + 1.0), t).unwrap();
    assert!((h.value - theta).abs() < 1e-13 * theta);
    assert!(h.tail_bound < 1e-12 * h.value);
    assert!(heat_trace(&neumann_interval(100.0), t).is_err());
    // tensor identity Z_square = Z_1d²
    let t = 0.02;
    let z1 = RobinInterval1D::new(1.0, 1.0, 1.0).unwrap().heat_trace(t).unwrap();
    let z2 = heat_trace(&robin_square(1.0, 40.0 / t + 10.0), t).unwrap().value;
    assert!(((z2 - z1 * z1) / z2).abs() < 1e-12, "{z2} {}", z1 * z1);
}

#[test]
fn heat_trace_decreasing_and_log_convex() {
    let s = robin_square(1.0, 4e3);
    let ts: Vec<f64> = (0..30).map(|i| 0.01 * 1.15f64.powi(i)).collect();
    let z: Vec<f64> = ts.iter().map(|t| heat_trace(&s, *t).unwrap().value.ln()).collect();
    for i in 1..z.len() {
        assert!(z[i] < z[i - 1]);
    }
    // on a geometric grid convexity in t means the slopes (z_{i+1}-z_i)/(t_{i+1}-t_i) increase
    let slopes: Vec<f64> = (1..z.len()).map(|i| (z[i] - z[i - 1]) / (ts[i] - ts[i - 1])).collect();
    for i in 1..slopes.len() {
        assert!(slopes[i] >= slopes[i - 1] - 1e-9);
    }
}

#[test]
fn gap_examples() {
    let n0 = neumann_square(3e3);
    assert_eq!(gap_average(&n0, &n0, 100).unwrap(), 0.0);
    let s1 = robin_square(1.0, 3e3);
    let g = GapSequence::new(&s1, &n0);
    assert!(g.len() > 200);
    assert!(g.running_means.iter().all(|m| *m >= 0.0));
    assert!(g.gaps.iter().all(|m| *m >= 0.0));
    let avg = gap_average(&s1, &n0, 200).unwrap();
    assert!((avg - g.running_means[199]).abs() < 1e-12);
    assert!(gap_average(&s1, &n0, 100_000).is_err());
}

#[test]
fn monotone_difference_examples() {
    let a = spec(&[1.0], 10.0, 1);
    let b = spec(&[2.0], 10.0, 1);
    let grid: Vec<f64> = (0..50).map(|i| 0.1 * i as f64).collect();
    let tab = monotone_difference(&a, &b, 1.0, &grid).unwrap();
    assert!(tab.is_monotone());
    assert!((tab.values.last().unwrap() - 1.0).abs() < 1e-12);
    let same = monotone_difference(&a, &a, 1.0, &grid).unwrap();
    assert!(same.values.iter().all(|v| *v == 0.0));
    // reversed order decreases and is flagged
    assert!(!monotone_difference(&b, &a, 1.0, &grid).unwrap().is_monotone());
    let grid: Vec<f64> = (0..400).map(|i| 1.0 + i as f64 * 25.0).collect();
    let tab = monotone_difference(&neumann_square(1.01e4), &robin_square(1.0, 1.01e4), 1.0, &grid).unwrap();
    assert!(tab.is_monotone(), "{:?}", tab.violations);
}

#[test]
fn spectral_function_limits() {
    let d1 = Domain::interval(1.0).unwrap();
    let n1 = BoundaryData::neumann(&d1);
    assert_eq!(spectral_function(&d1, &n1, -1.0, &[0.3]).unwrap(), 0.0);
    // Neumann interval: constant mode only below π²
    let rho: f64 = spectral_function(&d1, &n1, 5.0, &[0.3]).unwrap();
    assert!((rho - 1.0).abs() < 1e-12);
    let lam = 1e5;
    let bulk = smoothed_spectral_density(&d1, &n1, lam, &[0.37]).unwrap();
    let edge = smoothed_spectral_density(&d1, &n1, lam, &[0.0]).unwrap();
    assert!((bulk - 1.0 / PI).abs() < 5e-3, "{bulk}");
    assert!((edge / bulk - 2.0).abs() < 0.02, "{}", edge / bulk);

    let sq = Domain::unit_square();
    let ns = BoundaryData::neumann(&sq);
    let f = SpectralFunction::new(&sq, &ns, &[0.0, 0.0], 2e4).unwrap();
    let g = SpectralFunction::new(&sq, &ns, &[0.37, 0.41], 2e4).unwrap();
    let corner: f64 = f.smoothed(1e4).unwrap() / g.smoothed(1e4).unwrap();
    assert!((corner - 4.0).abs() < 0.2, "{corner}");
    assert!((g.smoothed(1e4).unwrap() - 1.0 / (4.0 * PI)).abs() < 0.01 / (4.0 * PI));
    assert!(f.smoothed(1.5e4).is_err());
    assert!(spectral_function(&Domain::disk(1.0).unwrap(), &BoundaryData::neumann(&Domain::disk(1.0).unwrap()), 10.0, &[0.0, 0.0]).is_err());
}

#[test]
fn stat_table_round_trip() {
    let rows: Vec<StatRow> = vec![StatRow { x: 1e3, value: PI, prediction: 1.0 / 3.0, remainder: -1e-300 }];
    let mut buf = Vec::new();
    write_stat_table(&mut buf, "t", "two-term check", &rows).unwrap();
    let (var, back) = read_stat_table(&buf[..]).unwrap();
    assert_eq!(var, "t");
    assert_eq!(back, rows);
}

fn reference_spectra() -> Vec<Spectrum<f64>> {
    vec![
        neumann_interval(400.0),
        robin_square(1.0, 400.0),
        interval_spectrum(&RobinInterval1D::new(1.3, -2.0, 0.5).unwrap(), 400.0).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn lift_matches_direct(which in 0usize..3, g in 0.0f64..2.0, d in 0.1f64..2.0, lam in 5.0f64..300.0) {
        let s = &reference_spectra()[which];
        let direct = riesz_mean(s, g + d, lam).unwrap();
        let quad = aizenman_lieb_quadrature(s, g, d, lam).unwrap();
        let exact = aizenman_lieb_lift(s, g, d, lam).unwrap();
        prop_assert!(((quad - direct) / direct).abs() < 1e-8, "{} {}", quad, direct);
        prop_assert!(((exact - direct) / direct).abs() < 1e-10);
    }

    #[test]
    fn riesz_derivative_relation(which in 0usize..3, g in 0.5f64..2.0, lam in 5.0f64..300.0) {
        let s = &reference_spectra()[which];
        let near = s.levels().iter().any(|l| (l.value - lam).abs() < 0.05);
        prop_assume!(!near);
        let h = 1e-4;
        let fd = (riesz_mean(s, g + 1.0, lam + h).unwrap() - riesz_mean(s, g + 1.0, lam - h).unwrap()) / (2.0 * h);
        let exact = (g + 1.0) * riesz_mean(s, g, lam).unwrap();
        prop_assert!(((fd - exact) / exact).abs() < 1e-6);
    }

    #[test]
    fn small_order_approaches_counting(which in 0usize..3, lam in 5.0f64..300.0) {
        let s = &reference_spectra()[which];
        let near = s.levels().iter().any(|l| (l.value - lam).abs() < 0.01);
        prop_assume!(!near);
        let n = counting(s, lam).unwrap() as f64;
        let r = riesz_mean(s, 1e-6, lam).unwrap();
        prop_assert!((r - n).abs() <= 1e-4 * n);
    }

    #[test]
    fn riesz_nonnegative_monotone_convex(which in 0usize..3, lam in 1.0f64..300.0, dl in 0.01f64..50.0) {
        let s = &reference_spectra()[which];
        let lam2 = (lam + dl).min(400.0);
        let mid = 0.5 * (lam + lam2);
        for g in [0.5, 1.0, 2.0] {
            let (a, b, m) = (riesz_mean(s, g, lam).unwrap(), riesz_mean(s, g, lam2).unwrap(), riesz_mean(s, g, mid).unwrap());
            prop_assert!(a >= 0.0 && b >= a);
            if g >= 1.0 {
                prop_assert!(m <= 0.5 * (a + b) * (1.0 + 1e-12) + 1e-12);
            }
        }
    }
}
