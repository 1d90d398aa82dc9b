//! Quadrature rules: Gauss–Legendre and double-exponential (tanh-sinh).

use crate::error::{Error, Result};
use crate::real::{KahanSum, Real};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes by Newton iteration on `P_n` from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = T::of(n);
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (T::PI() * (T::of(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = T::lit(0.5) * (b - a);
        let mid = T::lit(0.5) * (a + b);
        let mut acc = KahanSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(*w * f(mid + half * *x));
        }
        acc.value() * half
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::of(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let d = T::of(n) * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Tanh-sinh integral of `f` over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)` with the two endpoint distances computed
/// without cancellation, so algebraic endpoint singularities can be evaluated accurately.
pub fn tanh_sinh<T: Real, F: FnMut(T, T, T) -> T>(a: T, b: T, rel_tol: T, mut f: F) -> Result<T> {
    if b <= a {
        return Ok(T::zero());
    }
    let half_pi = T::FRAC_PI_2();
    let len = b - a;
    let half = T::lit(0.5) * len;
    let tau_max = T::lit(if std::mem::size_of::<T>() == 4 { 3.5 } else { 4.5 });
    let mut eval = |tau: T| -> T {
        let u = half_pi * tau.sinh();
        let cu = u.cosh();
        let w = half * half_pi * tau.cosh() / (cu * cu);
        if w == T::zero() {
            return T::zero();
        }
        // distances to the endpoints: len / (1 + e^{∓2u})
        let da = len / (T::one() + (T::lit(2.0) * u).exp());
        let db = len / (T::one() + (T::lit(-2.0) * u).exp());
        if da <= T::zero() || db <= T::zero() {
            return T::zero();
        }
        let x = if da < db { a + da } else { b - db };
        w * f(x, da, db)
    };
    let mut h = T::one();
    let mut sum = KahanSum::new();
    sum.add(eval(T::zero()));
    let mut k = 1usize;
    while T::of(k) * h <= tau_max {
        let t = T::of(k) * h;
        sum.add(eval(t));
        sum.add(eval(-t));
        k += 1;
    }
    let mut estimate = sum.value() * h;
    for _level in 0..12 {
        h = h * T::lit(0.5);
        let mut k = 1usize;
        while T::of(k) * h <= tau_max {
            let t = T::of(k) * h;
            sum.add(eval(t));
            sum.add(eval(-t));
            k += 2;
        }
        let next = sum.value() * h;
        let diff = (next - estimate).abs();
        estimate = next;
        if diff <= rel_tol * next.abs() || diff <= T::min_positive_value() {
            return Ok(estimate);
        }
    }
    Err(Error::Quadrature(format!("tanh-sinh on [{a}, {b}] did not reach tolerance {rel_tol}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::<f64>::new(8);
        let v = rule.integrate(0.0, 2.0, |x| x.powi(15));
        assert_relative_eq!(v, 2.0_f64.powi(16) / 16.0, max_relative = 1e-13);
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn gauss_legendre_odd_order_has_center_node() {
        let rule = GaussLegendre::<f64>::new(9);
        assert!(rule.nodes[4].abs() < 1e-15);
        assert_relative_eq!(rule.integrate(-1.0, 1.0, |x| x.exp()), 1f64.exp() - (-1f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularities() {
        // ∫_0^1 s^{-1/2} (1-s)^{1/2} ds = B(1/2, 3/2) = π/2
        let v = tanh_sinh(0.0_f64, 1.0, 1e-13, |_, da, db| da.powf(-0.5) * db.sqrt()).unwrap();
        assert_relative_eq!(v, std::f64::consts::FRAC_PI_2, max_relative = 1e-11);
    }
}
