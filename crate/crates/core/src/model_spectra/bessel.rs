//! Bessel functions of integer order: `J_n` by ascending series or Miller's backward
//! recurrence, `I_n` by its (cancellation-free) ascending series.

use crate::real::Real;
use crate::special::ln_gamma;

/// Evaluation settings for `J_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEvaluator<T> {
    pub order: usize,
    /// ascending series below this argument, backward recurrence above
    pub series_below: T,
    /// extra recurrence depth beyond `1.1·max(n, x)`
    pub recurrence_margin: usize,
}

impl<T: Real> BesselEvaluator<T> {
    pub fn new(order: usize) -> Self {
        Self { order, series_below: T::lit(8.0), recurrence_margin: 60 }
    }

    /// `(J_n(x), J_{n+1}(x))`.
    pub fn pair(&self, x: T) -> (T, T) {
        let n = self.order;
        if x < T::zero() {
            // J_n(-x) = (-1)^n J_n(x)
            let (a, b) = self.pair(-x);
            return if n % 2 == 0 { (a, -b) } else { (-a, b) };
        }
        if x == T::zero() {
            return (if n == 0 { T::one() } else { T::zero() }, T::zero());
        }
        if x < self.series_below {
            (series_j(n, x), series_j(n + 1, x))
        } else {
            miller(n, x, self.recurrence_margin)
        }
    }

    pub fn j(&self, x: T) -> T {
        self.pair(x).0
    }

    /// `J_n'(x) = (n/x) J_n − J_{n+1}`, equivalently `J_{n−1} − (n/x) J_n`.
    pub fn j_prime(&self, x: T) -> T {
        let n = self.order;
        if x == T::zero() {
            return if n == 1 { T::lit(0.5) } else { T::zero() };
        }
        let (jn, jn1) = self.pair(x);
        T::of(n) / x * jn - jn1
    }
}

fn series_j<T: Real>(n: usize, x: T) -> T {
    let half = x * T::lit(0.5);
    let lead = (T::of(n) * half.ln() - ln_gamma(T::of(n + 1))).exp();
    if lead == T::zero() {
        return T::zero();
    }
    let q = -half * half;
    let mut term = T::one();
    let mut sum = T::one();
    for m in 1..200 {
        term = term * q / (T::of(m) * T::of(m + n));
        sum = sum + term;
        if term.abs() <= T::epsilon() * T::lit(0.25) * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn miller<T: Real>(n: usize, x: T, margin: usize) -> (T, T) {
    let top = x.max(T::of(n)).to_f64_lossy();
    let mut m = (1.1 * top).ceil() as usize + margin;
    if m % 2 == 1 {
        m += 1;
    }
    let big = T::max_value().sqrt();
    let small = T::one() / big;
    let two_over_x = T::lit(2.0) / x;
    let (mut j_next, mut j) = (T::zero(), small);
    let mut norm = T::zero();
    let (mut jn, mut jn1) = (T::zero(), T::zero());
    // invariant: j = J_k, j_next = J_{k+1} up to a common factor
    for k in (1..=m).rev() {
        if k == n {
            jn = j;
            jn1 = j_next;
        } else if k == n + 1 {
            jn1 = j;
        }
        if k % 2 == 0 {
            norm = norm + T::lit(2.0) * j;
        }
        let j_prev = T::of(k) * two_over_x * j - j_next;
        j_next = j;
        j = j_prev;
        if j.abs() > big {
            j = j * small;
            j_next = j_next * small;
            norm = norm * small;
            jn = jn * small;
            jn1 = jn1 * small;
        }
    }
    // j = J_0
    if n == 0 {
        jn = j;
        jn1 = j_next;
    }
    norm = norm + j;
    (jn / norm, jn1 / norm)
}

/// `J_n(x)`.
pub fn bessel_j<T: Real>(n: usize, x: T) -> T {
    BesselEvaluator::new(n).j(x)
}

/// `(J_n(x), J_{n+1}(x))`.
pub fn bessel_j_pair<T: Real>(n: usize, x: T) -> (T, T) {
    BesselEvaluator::new(n).pair(x)
}

/// `J_n'(x)`.
pub fn bessel_j_prime<T: Real>(n: usize, x: T) -> T {
    BesselEvaluator::new(n).j_prime(x)
}

/// `(I_n(x), I_{n+1}(x))` for `x ≥ 0` from the ascending series (all terms positive).
pub fn bessel_i<T: Real>(n: usize, x: T) -> (T, T) {
    if x == T::zero() {
        return (if n == 0 { T::one() } else { T::zero() }, T::zero());
    }
    let half = x * T::lit(0.5);
    let q = half * half;
    let f = |order: usize| {
        let lead = (T::of(order) * half.ln() - ln_gamma(T::of(order + 1))).exp();
        let mut term = T::one();
        let mut sum = T::one();
        for m in 1..2000 {
            term = term * q / (T::of(m) * T::of(m + order));
            sum = sum + term;
            if term <= T::epsilon() * T::lit(0.25) * sum {
                break;
            }
        }
        lead * sum
    };
    (f(n), f(n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn values_at_zero_and_known_points() {
        assert_eq!(bessel_j(0, 0.0_f64), 1.0);
        assert_eq!(bessel_j(1, 0.0_f64), 0.0);
        assert!(bessel_j(0, 2.404_825_557_695_773_f64).abs() < 1e-10);
        // J_0(10), J_1(10), J_5(30) from standard tables
        assert!((bessel_j(0, 10.0_f64) - (-0.245_935_764_451_348_3)).abs() < 1e-13);
        assert!((bessel_j(1, 10.0_f64) - 0.043_472_746_168_861_6).abs() < 1e-13);
        assert!((bessel_j(5, 30.0_f64) - (-0.143_240_295_512_077_06)).abs() < 1e-12);
    }

    #[test]
    fn derivative_identity() {
        for i in 0..200 {
            let x = 0.05 + i as f64 * 0.2;
            let d = bessel_j_prime(0, x) + bessel_j(1, x);
            assert!(d.abs() < 1e-10, "{x} {d}");
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_switch() {
        for n in [0usize, 1, 3, 10, 40] {
            let ev = BesselEvaluator::<f64>::new(n);
            for x in [7.99_f64, 8.01, 3.0, 6.0] {
                let s = series_j(n, x);
                let m = miller(n, x, ev.recurrence_margin).0;
                assert!((s - m).abs() <= 1e-12 * (1.0 + s.abs()), "{n} {x} {s} {m}");
            }
        }
    }

    #[test]
    fn modified_bessel_values() {
        // I_0(1), I_1(2)
        assert!((bessel_i(0, 1.0_f64).0 - 1.266_065_877_752_008_4).abs() < 1e-14);
        assert!((bessel_i(1, 2.0_f64).0 - 1.590_636_854_637_329).abs() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn three_term_recurrence(n in 1usize..50, x in 0.1..400.0f64) {
            let jm = bessel_j(n - 1, x);
            let (j, jp) = bessel_j_pair(n, x);
            let lhs = jm + jp;
            let rhs = 2.0 * n as f64 / x * j;
            let scale = jm.abs().max(jp.abs()).max(j.abs()).max(1e-300);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * scale, "{} {} {} {}", n, x, lhs, rhs);
            prop_assert!(j.abs() <= 1.0);
        }
    }
}
