use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::quadrature::{tanh_sinh, GaussLegendre};

fn unit_interval() -> Domain<f64> {
    Domain::interval(1.0).unwrap()
}

fn endpoints(a: f64, b: f64) -> BoundaryData<f64> {
    BoundaryData::per_piece(&unit_interval(), vec![a, b]).unwrap()
}

fn square_sigma(c: f64) -> BoundaryData<f64> {
    BoundaryData::constant(&Domain::unit_square(), c).unwrap()
}

/// `∫_0^L f` with GL20 on 50 panels.
fn integrate_interval<F: FnMut(f64) -> f64>(l: f64, mut f: F) -> f64 {
    let rule = GaussLegendre::<f64>::new(20);
    (0..50).map(|i| rule.integrate(l * i as f64 / 50.0, l * (i + 1) as f64 / 50.0, &mut f)).sum()
}

#[test]
fn neumann_images_examples() {
    let t = 1e-4;
    let bulk = neumann_kernel_1d(1.0, t, 0.5, 0.5).unwrap();
    assert!((bulk * (4.0 * PI * t).sqrt() - 1.0).abs() < 1e-15);
    let edge = neumann_kernel_1d(1.0, t, 0.0, 0.0).unwrap();
    assert!((edge * (4.0 * PI * t).sqrt() - 2.0).abs() < 1e-15);
    for t in [1e-3, 0.05, 0.9, 1.1, 10.0] {
        let mass = integrate_interval(1.0, |y| neumann_kernel_1d(1.0, t, 0.3, y).unwrap());
        assert!((mass - 1.0).abs() < 1e-8, "t = {t}: {mass}");
    }
    // images and cosine series agree across the switch at t = L²
    let a: f64 = neumann_kernel_1d(1.0, 1.0, 0.2, 0.9).unwrap();
    let b = neumann_kernel_1d(1.0, 1.0 + 1e-12, 0.2, 0.9).unwrap();
    assert!((a - b).abs() < 1e-11);
    assert!(neumann_kernel_1d(1.0, 0.0, 0.2, 0.9).is_err());
}

#[test]
fn eigen_expansion_matches_images_for_neumann() {
    let d = unit_interval();
    let ev = HeatKernelEvaluator::new(&d, &endpoints(0.0, 0.0), KernelMethod::EigenExpansion, 1e-3).unwrap();
    for t in [1e-3, 1e-2, 0.3, 2.0] {
        for (x, y) in [(0.0, 0.0), (0.2, 0.7), (1.0, 0.95), (0.5, 0.5)] {
            let e = ev.eval(t, &[x], &[y]).unwrap();
            let i = neumann_kernel_1d(1.0, t, x, y).unwrap();
            // relative to the on-diagonal scale: off-diagonal values near e^{-60} are below rounding
            let scale = i.max((4.0 * PI * t).sqrt().recip());
            assert!((e - i).abs() < 1e-8 * scale, "t={t} x={x} y={y}: {e} vs {i}");
        }
    }
    let sq = Domain::unit_square();
    let e = robin_kernel_exact(&sq, &square_sigma(0.0), 1e-2, &[0.5, 0.0], &[0.4, 0.1]).unwrap();
    let i = neumann_kernel(&sq, 1e-2, &[0.5, 0.0], &[0.4, 0.1]).unwrap();
    assert!(((e - i) / i).abs() < 1e-8);
}

#[test]
fn semigroup_property() {
    let problem = endpoints(1.0, 0.5);
    let d = unit_interval();
    let ev = HeatKernelEvaluator::new(&d, &problem, KernelMethod::EigenExpansion, 1e-3).unwrap();
    for (t1, t2, x, xp) in [(0.01, 0.02, 0.0, 0.3), (0.05, 0.005, 0.6, 0.6), (0.2, 0.1, 1.0, 0.1)] {
        let lhs = integrate_interval(1.0, |y| ev.eval(t1, &[x], &[y]).unwrap() * ev.eval(t2, &[y], &[xp]).unwrap());
        let rhs = ev.eval(t1 + t2, &[x], &[xp]).unwrap();
        assert!((lhs - rhs).abs() < 1e-7 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }
}

#[test]
fn large_time_ground_state() {
    let p = crate::secular::RobinInterval1D::new(1.0, 1.0, 2.0).unwrap();
    let pairs = p.eigenpairs(200.0).unwrap();
    let gap = pairs[1].eigenvalue - pairs[0].eigenvalue;
    let t = 20.0 / gap;
    let (x, y) = (0.3, 0.8);
    let k = robin_kernel_exact(&unit_interval(), &endpoints(1.0, 2.0), t, &[x], &[y]).unwrap();
    let g = pairs[0].eval(x).unwrap() * pairs[0].eval(y).unwrap() * (-t * pairs[0].eigenvalue).exp();
    assert!(((k - g) / g).abs() < 1e-6);
}

#[test]
fn kernel_invariants() {
    let d = unit_interval();
    let robin = HeatKernelEvaluator::new(&d, &endpoints(1.0, 3.0), KernelMethod::EigenExpansion, 1e-3).unwrap();
    let neg = HeatKernelEvaluator::new(&d, &endpoints(-1.0, -0.5), KernelMethod::EigenExpansion, 1e-3).unwrap();
    let dom = HeatKernelEvaluator::new(&d, &endpoints(0.0, -1.0), KernelMethod::EigenExpansion, 1e-3).unwrap();
    let mixed = HeatKernelEvaluator::new(&d, &endpoints(2.0, -1.0), KernelMethod::EigenExpansion, 1e-3).unwrap();
    let pts = [0.0, 0.1, 0.45, 0.9, 1.0];
    for t in [1e-3, 1e-2, 0.1, 1.0] {
        let mut scale = 0.0f64;
        for &x in &pts {
            for &y in &pts {
                for ev in [&robin, &neg, &mixed] {
                    let a = ev.eval(t, &[x], &[y]).unwrap();
                    let b = ev.eval(t, &[y], &[x]).unwrap();
                    scale = scale.max(a.abs());
                    assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-300));
                    assert!(a >= -1e-12 * scale.max(1.0));
                }
                // k^σ ≤ k^{−σ₋} up to the expansions' error bounds
                let (k, ek) = mixed.eval_with_bound(t, &[x], &[y]).unwrap();
                let (kd, ed) = dom.eval_with_bound(t, &[x], &[y]).unwrap();
                assert!(k <= kd + ek + ed, "{k} {kd}");
            }
            let mass = integrate_interval(1.0, |y| robin.eval(t, &[x], &[y]).unwrap());
            assert!(mass < 1.0);
        }
    }
}

#[test]
fn duhamel_low_orders() {
    let d = unit_interval();
    let sig = endpoints(1.0, 1.0);
    for (t, x, xp) in [(0.05, 0.3, 0.3), (0.2, 0.1, 0.7)] {
        assert_eq!(duhamel_iterate(&d, &sig, 0, t, &[x], &[xp]).unwrap(), 0.0);
        assert_eq!(duhamel_iterate(&d, &sig, 1, t, &[x], &[xp]).unwrap(), neumann_kernel_1d(1.0, t, x, xp).unwrap());
        for j in 1..=4 {
            let v = duhamel_iterate(&d, &endpoints(0.0, 0.0), j, t, &[x], &[xp]).unwrap();
            assert_eq!(v, neumann_kernel_1d(1.0, t, x, xp).unwrap());
        }
    }
    // adaptive-quadrature oracle (30-digit tanh-sinh over the image-sum kernel)
    for (t, x, xp, oracle) in [(0.05, 0.3, 0.3, 1.4123826033811446), (0.05, 0.0, 0.0, 1.5231325303895846), (0.2, 0.1, 0.7, 0.5270012978426546)] {
        let v = duhamel_iterate(&d, &sig, 2, t, &[x], &[xp]).unwrap();
        assert!(((v - oracle) / oracle).abs() < 1e-8, "{v} vs {oracle}");
    }
    assert!(duhamel_iterate(&d, &sig, 5, 0.1, &[0.0], &[0.0]).is_err());
}

fn k0(t: f64, x: f64, y: f64) -> f64 {
    neumann_kernel_1d(1.0, t, x, y).unwrap()
}

#[test]
fn duhamel_telescope() {
    let d = unit_interval();
    let (sa, sb) = (1.0, 2.0);
    let sig = endpoints(sa, sb);
    let ends = [(0.0, sa), (1.0, sb)];
    let (t, x, xp) = (0.04, 0.2, 0.0);
    let k = |j| duhamel_iterate(&d, &sig, j, t, &[x], &[xp]).unwrap();
    let tol = 1e-11;
    // K_2 − K_1 = −Σ_y σ_y ∫_0^t k⁰(t−s,x,y) k⁰(s,y,x′) ds
    let mut first = 0.0;
    for (y, s_y) in ends {
        first -= s_y * tanh_sinh(0.0, t, tol, |_s, da, db| k0(db, x, y) * k0(da, y, xp)).unwrap();
    }
    assert!(((k(2) - k(1)) - first).abs() < 1e-8 * first.abs(), "{} vs {first}", k(2) - k(1));
    // K_3 − K_2 = +Σ_{y,z} σ_y σ_z ∫_0^t ∫_0^s k⁰(t−s,x,y) k⁰(s−r,y,z) k⁰(r,z,x′) dr ds
    let mut second = 0.0;
    for (y, s_y) in ends {
        for (z, s_z) in ends {
            second += s_y
                * s_z
                * tanh_sinh(0.0, t, 1e-9, |s, _da, db| k0(db, x, y) * tanh_sinh(0.0, s, 1e-9, |_r, ra, rb| k0(rb, y, z) * k0(ra, z, xp)).unwrap())
                    .unwrap();
        }
    }
    let diff = k(3) - k(2);
    assert!((diff - second).abs() < 1e-6 * second.abs(), "{diff} vs {second}");
}

#[test]
fn rectangle_duhamel_first_iterate_is_neumann() {
    let sq = Domain::unit_square();
    let v = duhamel_iterate(&sq, &square_sigma(1.0), 1, 0.01, &[0.5, 0.0], &[0.5, 0.0]).unwrap();
    assert_eq!(v, neumann_kernel(&sq, 0.01, &[0.5, 0.0], &[0.5, 0.0]).unwrap());
    assert!(duhamel_iterate(&Domain::disk(1.0).unwrap(), &BoundaryData::neumann(&Domain::disk(1.0).unwrap()), 1, 0.1, &[0.0, 0.0], &[0.0, 0.0]).is_err());
}

#[test]
fn rectangle_duhamel_second_iterate_improves() {
    let sq = Domain::unit_square();
    let sig = square_sigma(1.0);
    let x = [0.5, 0.0];
    let t = 0.01;
    let exact = robin_kernel_exact(&sq, &sig, t, &x, &x).unwrap();
    let e1 = (exact - duhamel_iterate(&sq, &sig, 1, t, &x, &x).unwrap()).abs();
    let e2 = (exact - duhamel_iterate(&sq, &sig, 2, t, &x, &x).unwrap()).abs();
    assert!(e2 < 0.3 * e1, "{e1} {e2}");
}

#[test]
fn trace_difference_examples() {
    let sq = Domain::unit_square();
    let td = trace_difference_via_kernel(&sq, &square_sigma(1.0), 1e-3).unwrap();
    // boundary doubling: t·4·2(4πt)^{−1}·(1 + corner images) → 2/π
    assert!((td.kernel_formula - 2.0 / PI).abs() < 0.05, "{}", td.kernel_formula);
    assert!(((td.exact_difference - td.kernel_formula) / td.kernel_formula).abs() < 0.1);
    let zero = trace_difference_via_kernel(&sq, &square_sigma(0.0), 1e-3).unwrap();
    assert_eq!(zero.kernel_formula, 0.0);
    assert_eq!(zero.exact_difference, 0.0);
}

#[test]
fn gaussian_probe_examples() {
    let d = unit_interval();
    let grid = ProbeGrid::stratified(&d, 15).unwrap();
    let neumann = gaussian_bound_probe(&d, &endpoints(0.0, 0.0), &grid).unwrap();
    assert!(neumann.holds && neumann.lambda_hat == 0.0 && neumann.c_hat < 4.1, "{neumann:?}");
    let neg = gaussian_bound_probe(&d, &endpoints(-1.0, -1.0), &grid).unwrap();
    let lam1 = crate::secular::RobinInterval1D::new(1.0, -1.0, -1.0).unwrap().eigenvalues(10.0).unwrap()[0];
    assert!(lam1 < 0.0);
    assert!(neg.holds && neg.lambda_hat >= -lam1 * 0.99, "{neg:?} {lam1}");
    assert!(neg.m_without_growth > 10.0 * neg.m_hat);
}

#[test]
fn kernel_csv_layout() {
    let rows = vec![KernelRow { t: 0.1, x: [0.5, 0.0], xp: [0.5, 0.0], method: KernelMethod::Duhamel(2).name(), value: 1.25 }];
    let mut buf = Vec::new();
    write_kernel_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,xp1,xp2,method,value"));
    assert!(lines.next().unwrap().contains(",duhamel2,"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn duhamel_symmetric(x in 0.0f64..1.0, xp in 0.0f64..1.0, t in 0.01f64..0.3, j in 2usize..4) {
        let d = unit_interval();
        let sig = endpoints(1.5, -0.5);
        let a = duhamel_iterate(&d, &sig, j, t, &[x], &[xp]).unwrap();
        let b = duhamel_iterate(&d, &sig, j, t, &[xp], &[x]).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{} {}", a, b);
    }
}
