use super::*;
use approx::assert_relative_eq;
use proptest::prelude::*;
use std::f64::consts::PI;

fn p(l: f64, a: f64, b: f64) -> RobinInterval1D<f64> {
    RobinInterval1D::new(l, a, b).unwrap()
}

#[test]
fn neumann_residual_and_spectrum() {
    assert!(p(PI, 0.0, 0.0).secular_residual(1.0).abs() < 1e-15);
    let e = p(1.0, 0.0, 0.0).eigenvalues(100.0).unwrap();
    assert_eq!(e.len(), 4);
    for (n, v) in e.iter().enumerate() {
        assert!((v - (n as f64 * PI).powi(2)).abs() < 1e-10, "{n} {v}");
    }
}

#[test]
fn residual_changes_sign_for_unit_robin() {
    let q = p(1.0, 1.0, 1.0);
    let f = |k: f64| q.secular_residual(k * k);
    // the first root sits at k ≈ 1.3066, below π/2; the second lies above π
    assert!(f(0.1) * f(PI / 2.0) < 0.0);
    assert!(f(PI / 2.0) * f(PI) > 0.0);
}

#[test]
fn residual_is_continuous_at_zero() {
    let q = p(1.3, -0.7, 2.1);
    let f0 = q.secular_residual(0.0);
    assert_relative_eq!(f0, -0.7 + 2.1 - 0.7 * 2.1 * 1.3, max_relative = 1e-15);
    assert_relative_eq!(q.secular_residual(1e-12), f0, max_relative = 1e-9);
    assert_relative_eq!(q.secular_residual(-1e-12), f0, max_relative = 1e-9);
}

#[test]
fn unit_robin_ground_state_fixture() {
    // bisection on tan k = 2k/(k²-1) over a 10⁶-point scan, frozen
    let e = p(1.0, 1.0, 1.0).eigenvalues(50.0).unwrap();
    assert_relative_eq!(e[0], 1.707_052_975_550_922, max_relative = 1e-10);
}

#[test]
fn dirichlet_limit() {
    let e = p(1.0, 1e6, 1e6).eigenvalues(12.0).unwrap();
    assert_eq!(e.len(), 1);
    assert!((e[0] / (PI * PI) - 1.0).abs() < 1e-3);
}

#[test]
fn negative_eigenvalues_match_shooting() {
    for (a, b) in [(-1.0, -1.0), (-1.0, -8.0), (-5.0, 3.0), (-5.0, -5.0), (0.0, -0.3)] {
        let q = p(1.0, a, b);
        let e = q.eigenvalues(200.0).unwrap();
        let o = shooting_eigenvalues(&q, 200.0).unwrap();
        assert_eq!(e.len(), o.len(), "{a} {b}");
        for (x, y) in e.iter().zip(&o) {
            assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()), "{a} {b}: {x} vs {y}");
        }
    }
}

#[test]
fn eigenfunctions_are_normalized() {
    for (a, b) in [(0.0, 0.0), (1.0, 1.0), (-2.0, 0.5), (-4.0, -4.0), (30.0, 0.0)] {
        let q = p(1.5, a, b);
        let rule = crate::quadrature::GaussLegendre::new(64);
        for pair in q.eigenpairs(300.0).unwrap() {
            let panels = 16;
            let h = 1.5 / panels as f64;
            let norm: f64 = (0..panels)
                .map(|j| rule.integrate(j as f64 * h, (j + 1) as f64 * h, |x| pair.eval(x).unwrap().powi(2)))
                .sum();
            assert!((norm - 1.0).abs() < 1e-10, "{a} {b} λ={} norm={norm}", pair.eigenvalue);
            let (r0, rl) = q.boundary_residuals(&pair);
            let scale = 1e-8 * (1.0 + pair.eigenvalue.abs()) * pair.sup_bound;
            assert!(r0 <= scale && rl <= scale, "{r0} {rl}");
        }
    }
}

#[test]
fn neumann_eigenfunction_values() {
    let q = p(2.0, 0.0, 0.0);
    let e = q.eigenpairs(5.0).unwrap();
    assert_relative_eq!(e[0].eval(0.7).unwrap(), 1.0 / 2f64.sqrt(), max_relative = 1e-14);
    let q = p(1.0, 0.0, 0.0);
    let e = q.eigenpairs(10.0).unwrap();
    assert_relative_eq!(e[1].eval(0.0).unwrap().abs(), 2f64.sqrt(), max_relative = 1e-12);
    assert!(e[1].eval(1.5).is_err());
}

#[test]
fn heat_trace_values() {
    assert_relative_eq!(p(1.0, 0.0, 0.0).heat_trace(10.0).unwrap(), 1.0, max_relative = 1e-12);
    let q = p(1.0, 1.0, 1.0);
    let z = q.heat_trace(0.01).unwrap();
    let oracle: f64 = shooting_eigenvalues(&q, 4000.0).unwrap().iter().map(|l| (-0.01 * l).exp()).sum();
    assert_relative_eq!(z, oracle, max_relative = 1e-10);
    assert!(q.heat_trace(0.0).is_err());
}

#[test]
fn f32_solver_runs() {
    let q = RobinInterval1D::<f32>::new(1.0, 1.0, 1.0).unwrap();
    let e = q.eigenvalues(50.0).unwrap();
    assert!((e[0] - 1.707_053).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn count_matches_oracle(l in 0.5..2.0f64, a in -5.0..5.0f64, b in -5.0..5.0f64, cut in 1.0..200.0f64) {
        let q = p(l, a, b);
        let e = q.eigenvalues(cut).unwrap();
        let o = shooting_eigenvalues(&q, cut).unwrap();
        prop_assert_eq!(e.len(), o.len());
        for (x, y) in e.iter().zip(&o) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn interlacing_and_weyl(l in 0.5..2.0f64, a in 0.0..20.0f64, b in 0.0..20.0f64) {
        let q = p(l, a, b);
        let cut = 2000.0;
        let e = q.eigenvalues(cut).unwrap();
        for (i, v) in e.iter().enumerate() {
            let n = (i + 1) as f64;
            prop_assert!(((n - 1.0) * PI / l).powi(2) <= v + 1e-9 * (1.0 + v));
            prop_assert!(*v <= (n * PI / l).powi(2) * (1.0 + 1e-12));
        }
        let weyl = l / PI * cut.sqrt();
        prop_assert!((e.len() as f64 - weyl).abs() <= 2.0);
    }

    #[test]
    fn monotone_in_sigma(l in 0.5..2.0f64, a in -5.0..5.0f64, b in -5.0..5.0f64, da in 0.0..3.0f64, db in 0.0..3.0f64) {
        let e1 = p(l, a, b).eigenvalues(300.0).unwrap();
        let e2 = p(l, a + da, b + db).eigenvalues(300.0).unwrap();
        for (x, y) in e1.iter().zip(&e2) {
            prop_assert!(*y >= *x - 1e-9 * (1.0 + x.abs()));
        }
    }
}
