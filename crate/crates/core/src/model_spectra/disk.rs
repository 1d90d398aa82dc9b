use super::bessel::{bessel_i, BesselEvaluator};
use super::{Level, Provenance, Spectrum};
use crate::error::{Error, Result};
use crate::real::Real;

/// Robin spectrum of the disk of radius `radius` with constant `sigma`, all `λ ≤ cutoff`.
///
/// Order `n` contributes the roots of `k J_n'(kR) + σ J_n(kR)` (and of
/// `κ I_n'(κR) + σ I_n(κR)` for `λ = −κ² < 0`), with multiplicity 2 for `n ≥ 1`.
pub fn disk_spectrum<T: Real>(radius: T, sigma: T, cutoff: T) -> Result<Spectrum<T>> {
    if !(radius > T::zero()) {
        return Err(Error::InvalidDomain(format!("disk radius must be positive, got {radius}")));
    }
    if !(cutoff > T::zero()) {
        return Err(Error::InvalidArgument(format!("cutoff must be positive, got {cutoff}")));
    }
    let mut raw = Vec::new();
    let mut empty_run = 0;
    let mut n = 0usize;
    while empty_run < 3 {
        if n > 100_000 {
            return Err(Error::NoConvergence("disk: order search did not terminate".into()));
        }
        let roots = order_roots(n, radius, sigma, cutoff)?;
        if roots.is_empty() {
            empty_run += 1;
        } else {
            empty_run = 0;
        }
        let mult = if n == 0 { 1 } else { 2 };
        raw.extend(roots.into_iter().map(|value| Level { value, multiplicity: mult }));
        n += 1;
    }
    raw.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    let provenance = Provenance { domain: format!("disk(R={radius})"), sigma: format!("constant({sigma})"), solver: "bessel-secular".into() };
    Ok(Spectrum::from_levels(raw, cutoff, cutoff, provenance, 2))
}

/// Sign of `k J_n'(kR) + σ J_n(kR)` for `k → 0⁺`, after dividing by `J_n(kR) > 0`.
fn limit_sign_at_zero<T: Real>(n: usize, radius: T, sigma: T) -> T {
    if n == 0 {
        sigma
    } else {
        T::of(n) / radius + sigma
    }
}

fn order_roots<T: Real>(n: usize, radius: T, sigma: T, cutoff: T) -> Result<Vec<T>> {
    let mut out = Vec::new();
    // negative branch: κ I_n'(κR)/I_n(κR) increases from n/R (0 for n = 0), so there is one root
    // iff the limit at 0 is negative
    let at_zero = limit_sign_at_zero(n, radius, sigma);
    if at_zero < T::zero() {
        let h = |q: T| {
            let x = q * radius;
            let (i_n, i_n1) = bessel_i(n, x);
            // κ I_n'(κR) = κ I_{n+1} + (n/R) I_n
            q * i_n1 / i_n + T::of(n) / radius + sigma
        };
        let mut hi = sigma.abs() + T::one() / radius;
        while h(hi) < T::zero() {
            hi = hi * T::lit(2.0);
            if hi > T::lit(1e6) {
                return Err(Error::BracketFailure(format!("disk: no negative root bracket for order {n}")));
            }
        }
        let mut lo = T::zero();
        for _ in 0..200 {
            let mid = T::lit(0.5) * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if h(mid) < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = T::lit(0.5) * (lo + hi);
        out.push(-(q * q));
    } else if at_zero == T::zero() {
        out.push(T::zero());
    }
    // positive branch: scan k with step 0.05/R from the known sign at 0⁺
    let ev = BesselEvaluator::new(n);
    let f = |k: T| {
        let x = k * radius;
        let (jn, jn1) = ev.pair(x);
        k * (T::of(n) / x * jn - jn1) + sigma * jn
    };
    let k_max = cutoff.sqrt();
    let step = T::lit(0.05) / radius;
    let mut prev_k = T::zero();
    let mut prev_sign = at_zero;
    let mut k = step;
    loop {
        let kk = k.min(k_max);
        let v = f(kk);
        if v != T::zero() && prev_sign != T::zero() && (v < T::zero()) != (prev_sign < T::zero()) {
            let root = bisect(&f, prev_k, kk, prev_sign)?;
            out.push(root * root);
        }
        if v != T::zero() {
            prev_sign = v;
        }
        prev_k = kk;
        if kk >= k_max {
            break;
        }
        k = k + step;
    }
    out.retain(|v| *v <= cutoff);
    Ok(out)
}

fn bisect<T: Real, F: Fn(T) -> T>(f: &F, mut lo: T, mut hi: T, sign_lo: T) -> Result<T> {
    for _ in 0..300 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let v = f(mid);
        if v == T::zero() {
            return Ok(mid);
        }
        if (v < T::zero()) == (sign_lo < T::zero()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::BracketFailure(format!("disk: bisection did not converge on [{lo}, {hi}]")))
}
