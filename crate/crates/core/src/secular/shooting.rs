//! Shooting oracle: Taylor-series integration of `u'' = -λu` with zero counting.
//!
//! Deliberately shares no code with the closed-form solver.

use super::RobinInterval1D;
use crate::error::{Error, Result};
use crate::real::Real;

const ORDER: usize = 24;

/// One Taylor step of length `h` for `u'' = -λu`.
fn taylor_step<T: Real>(lambda: T, u: T, v: T, h: T) -> (T, T) {
    // derivatives d_0 = u, d_1 = v, d_{m+2} = -λ d_m
    let mut d = [u, v];
    let (mut nu, mut nv) = (T::zero(), T::zero());
    let mut coeff = T::one();
    for m in 0..ORDER {
        let dm = d[m % 2];
        let dm1 = if m % 2 == 0 { d[1] } else { -lambda * d[0] };
        nu = nu + coeff * dm;
        nv = nv + coeff * dm1;
        if m % 2 == 1 {
            d = [-lambda * d[0], -lambda * d[1]];
        }
        coeff = coeff * h / T::of(m + 1);
    }
    (nu, nv)
}

/// State `(u, u', zeros)` at `x = L` starting from `u(0) = 1`, `u'(0) = σ_a`.
fn shoot<T: Real>(p: &RobinInterval1D<T>, lambda: T) -> (T, T, usize) {
    let w = lambda.abs().sqrt();
    let steps = ((w * p.length / T::lit(0.5)).ceil().to_usize().unwrap_or(1)).max(8);
    let h = p.length / T::of(steps);
    let (mut u, mut v) = (T::one(), p.sigma_a);
    let mut zeros = 0;
    for _ in 0..steps {
        let (nu, nv) = taylor_step(lambda, u, v, h);
        if (u > T::zero() && nu <= T::zero()) || (u < T::zero() && nu >= T::zero()) {
            zeros += 1;
        }
        u = nu;
        v = nv;
        let scale = u.abs().max(v.abs());
        if scale > T::lit(1e100) || (scale < T::lit(1e-100) && scale > T::zero()) {
            u = u / scale;
            v = v / scale;
        }
    }
    (u, v, zeros)
}

/// Eigenvalue count below `λ` by oscillation counting on the shot solution.
pub fn shooting_count_below<T: Real>(p: &RobinInterval1D<T>, lambda: T) -> usize {
    let (u, v, mut zeros) = shoot(p, lambda);
    // a zero landing exactly on x = L belongs to the boundary angle, not the interior count
    if u == T::zero() && zeros > 0 {
        zeros -= 1;
    }
    let sign = if zeros % 2 == 0 { T::one() } else { -T::one() };
    let residual_angle = (sign * u).atan2(sign * v);
    let residual_angle = if residual_angle <= T::zero() { residual_angle + T::PI() } else { residual_angle };
    let beta = T::one().atan2(-p.sigma_b);
    zeros + usize::from(beta < residual_angle)
}

/// Eigenvalues below `cutoff` by bisection on the shooting count.
pub fn shooting_eigenvalues<T: Real>(p: &RobinInterval1D<T>, cutoff: T) -> Result<Vec<T>> {
    let window = T::lit(2.0) * (p.sigma_a.abs() + p.sigma_b.abs()) + T::lit(2.0) / p.length;
    let floor = -(window * window) - T::one();
    if shooting_count_below(p, floor) != 0 {
        return Err(Error::BracketFailure("shooting: eigenvalue below the search window".into()));
    }
    let total = shooting_count_below(p, cutoff);
    let mut out = Vec::with_capacity(total);
    for i in 0..total {
        let (mut lo, mut hi) = (out.last().copied().unwrap_or(floor), cutoff);
        while hi - lo > T::lit(1e-14) * (T::one() + hi.abs()) {
            let mid = T::lit(0.5) * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if shooting_count_below(p, mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(T::lit(0.5) * (lo + hi));
    }
    Ok(out)
}
