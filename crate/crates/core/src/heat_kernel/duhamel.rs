use super::HeatKernelEvaluator;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::real::{KahanSum, Real};

/// Quadrature settings of the Duhamel time and edge integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControls {
    /// Gauss–Legendre order per graded time panel in the outermost integral, doubled until converged
    pub time_order: usize,
    pub max_time_order: usize,
    /// fixed order per time panel inside nested iterates
    pub inner_time_order: usize,
    /// number of geometric time panels per half interval
    pub time_panels: usize,
    /// Gauss–Legendre order per edge panel
    pub edge_order: usize,
    pub rel_tol: f64,
}

impl Default for QuadratureControls {
    fn default() -> Self {
        Self { time_order: 8, max_time_order: 128, inner_time_order: 12, time_panels: 28, edge_order: 16, rel_tol: 1e-10 }
    }
}

/// `∫_0^t f(s, t−s) ds` with `s = t u²` on `[0, t/2]` and `s = t(1 − v²)` on `[t/2, t]`,
/// each substituted half split at `u = 2^{−i}/√2`.
fn time_integral<T: Real, F: FnMut(T, T) -> Result<T>>(t: T, rule: &GaussLegendre<T>, panels: usize, f: &mut F) -> Result<T> {
    let top = T::FRAC_1_SQRT_2();
    let mut breaks = vec![T::zero()];
    let mut b = top;
    for _ in 0..panels {
        breaks.push(b);
        b = b * T::lit(0.5);
    }
    breaks.push(b);
    breaks[1..].reverse();
    let mut acc = KahanSum::new();
    let mut err = None;
    for w in breaks.windows(2) {
        acc.add(rule.integrate(w[0], w[1], |u: T| {
            let s = t * u * u;
            match f(s, t - s) {
                Ok(v) => T::lit(2.0) * t * u * v,
                Err(e) => {
                    err.get_or_insert(e);
                    T::zero()
                }
            }
        }));
        acc.add(rule.integrate(w[0], w[1], |v: T| {
            let tau = t * v * v;
            match f(t - tau, tau) {
                Ok(val) => T::lit(2.0) * t * v * val,
                Err(e) => {
                    err.get_or_insert(e);
                    T::zero()
                }
            }
        }));
    }
    match err {
        Some(e) => Err(e),
        None => Ok(acc.value()),
    }
}

/// `K_j(t, x, x′)`; the outermost time rule is doubled until converged.
pub(super) fn iterate<T: Real>(ev: &HeatKernelEvaluator<T>, j: usize, t: T, x: &[T], xp: &[T], outer: bool) -> Result<T> {
    match j {
        0 => return Ok(T::zero()),
        1 => return ev.neumann(t, x, xp),
        _ => {}
    }
    let k0 = ev.neumann(t, x, xp)?;
    if ev.sigma.is_neumann() {
        return Ok(k0);
    }
    let c = ev.controls;
    let mut integrand = |s: T, tau: T| boundary_integral(ev, j - 1, s, tau, x, xp);
    if !outer {
        return Ok(k0 - time_integral(t, &GaussLegendre::new(c.inner_time_order), c.time_panels, &mut integrand)?);
    }
    let mut order = c.time_order;
    let mut prev = time_integral(t, &GaussLegendre::new(order), c.time_panels, &mut integrand)?;
    while order < c.max_time_order {
        order *= 2;
        let next = time_integral(t, &GaussLegendre::new(order), c.time_panels, &mut integrand)?;
        if (next - prev).abs() <= T::lit(c.rel_tol) * (next.abs() + T::lit(1e-300)) {
            return Ok(k0 - next);
        }
        prev = next;
    }
    Err(Error::Quadrature(format!("Duhamel time integral for j = {j} at t = {t} did not reach relative change {}", c.rel_tol)))
}

/// `∫_{∂Ω} k⁰(τ, x, y) K_{j−1}(s, y, x′) σ(y) dy` with `jm1 = j − 1`.
fn boundary_integral<T: Real>(ev: &HeatKernelEvaluator<T>, jm1: usize, s: T, tau: T, x: &[T], xp: &[T]) -> Result<T> {
    if s <= T::zero() || tau <= T::zero() {
        return Ok(T::zero());
    }
    let inner = |y: &[T]| -> Result<T> { Ok(ev.neumann(tau, x, y)? * iterate(ev, jm1, s, y, xp, false)?) };
    if ev.dim() == 1 {
        let l = ev.domain_lengths()[0];
        let a = ev.sigma.value_at(0, T::zero());
        let b = ev.sigma.value_at(1, T::zero());
        let mut acc = T::zero();
        if a != T::zero() {
            acc = acc + a * inner(&[T::zero()])?;
        }
        if b != T::zero() {
            acc = acc + b * inner(&[l])?;
        }
        return Ok(acc);
    }
    let rule = GaussLegendre::new(ev.controls.edge_order);
    let width = tau.sqrt().min(s.sqrt()) * T::lit(0.5);
    let mut total = KahanSum::new();
    let mut offset = T::zero();
    for (piece, (p, q)) in ev.domain.edges().into_iter().enumerate() {
        let d = [q[0] - p[0], q[1] - p[1]];
        let len = d[0].hypot(d[1]);
        let unit = [d[0] / len, d[1] / len];
        let project = |z: &[T]| ((z[0] - p[0]) * unit[0] + (z[1] - p[1]) * unit[1]).max(T::zero()).min(len);
        let breaks = dyadic_breaks(len, &[project(x), project(xp)], width);
        let mut err = None;
        for w in breaks.windows(2) {
            let part = rule.integrate(w[0], w[1], |u| {
                let y = [p[0] + u * unit[0], p[1] + u * unit[1]];
                let sig = ev.sigma.value_at(piece, offset + u);
                if sig == T::zero() {
                    return T::zero();
                }
                match inner(&y) {
                    Ok(v) => sig * v,
                    Err(e) => {
                        err.get_or_insert(e);
                        T::zero()
                    }
                }
            });
            total.add(part);
        }
        if let Some(e) = err {
            return Err(e);
        }
        offset = offset + len;
    }
    Ok(total.value())
}

/// Panel boundaries on `[0, len]` at `c ± w·2^k` around each center.
pub(super) fn dyadic_breaks<T: Real>(len: T, centers: &[T], width: T) -> Vec<T> {
    let mut b = vec![T::zero(), len];
    let w0 = width.max(len * T::lit(1e-12));
    for &c in centers {
        b.push(c);
        let mut w = w0;
        while w < len {
            for v in [c - w, c + w] {
                if v > T::zero() && v < len {
                    b.push(v);
                }
            }
            w = w + w;
        }
    }
    b.sort_by(|a, c| a.partial_cmp(c).unwrap());
    b.dedup_by(|a, c| (*a - *c).abs() <= len * T::lit(1e-14));
    b
}
