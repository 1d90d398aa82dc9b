//! Exact 1D Robin spectra on an interval from the secular equation.
//!
//! Boundary conditions are `-u'(0) + σ_a u(0) = 0` and `u'(L) + σ_b u(L) = 0`.

mod shooting;

pub use shooting::{shooting_count_below, shooting_eigenvalues};

use crate::error::{Error, Result};
use crate::real::{KahanSum, Real};

/// The Robin problem `-u'' = λu` on `(0, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinInterval1D<T> {
    pub length: T,
    pub sigma_a: T,
    pub sigma_b: T,
}

/// Sign branch of an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Oscillatory,
    Zero,
    Hyperbolic,
}

/// A normalized eigenpair.
///
/// The eigenfunction is `u(x) = a·c(x) + b·s(x)` where on the oscillatory branch
/// `c = cos kx`, `s = sin(kx)/k`, on the hyperbolic branch `c = cosh κx`, `s = sinh(κx)/κ`,
/// and at `λ = 0` `c = 1`, `s = x`. Writing `s` with the wavenumber divided out keeps the
/// representation regular through `λ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenpair1D<T> {
    pub eigenvalue: T,
    pub branch: Branch,
    /// `k = √λ` or `κ = √(-λ)`; zero on the zero branch
    pub wavenumber: T,
    pub a: T,
    pub b: T,
    /// L² norm of the unnormalized `c + σ_a s`
    pub norm: T,
    pub length: T,
    /// `sup |u|` on `[0, L]` (an upper bound on the oscillatory branch)
    pub sup_bound: T,
}

/// `c(λ, x)`, `s(λ, x)` and their `x` derivatives.
fn basis<T: Real>(lambda: T, x: T) -> (T, T, T, T) {
    if lambda > T::zero() {
        let k = lambda.sqrt();
        let (sn, cs) = (k * x).sin_cos();
        (cs, sn / k, -k * sn, cs)
    } else if lambda < T::zero() {
        let q = (-lambda).sqrt();
        let (sh, ch) = ((q * x).sinh(), (q * x).cosh());
        (ch, sh / q, q * sh, ch)
    } else {
        (T::one(), x, T::zero(), T::one())
    }
}

impl<T: Real> RobinInterval1D<T> {
    pub fn new(length: T, sigma_a: T, sigma_b: T) -> Result<Self> {
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidDomain(format!("interval length must be positive, got {length}")));
        }
        if !sigma_a.is_finite() || !sigma_b.is_finite() {
            return Err(Error::InvalidBoundary("σ must be finite".into()));
        }
        Ok(Self { length, sigma_a, sigma_b })
    }

    pub fn neumann(length: T) -> Result<Self> {
        Self::new(length, T::zero(), T::zero())
    }

    fn negative_window(&self) -> T {
        T::lit(2.0) * (self.sigma_a.abs() + self.sigma_b.abs()) + T::lit(2.0) / self.length
    }

    /// Secular function, normalized by the wavenumber so that it is entire in `λ`:
    /// `(σ_a+σ_b) cos kL + (σ_aσ_b − k²) sin(kL)/k` and its hyperbolic continuation.
    pub fn secular_residual(&self, lambda: T) -> T {
        let (c, s, _, _) = basis(lambda, self.length);
        let (sa, sb) = (self.sigma_a, self.sigma_b);
        (sa + sb) * c + (sa * sb - lambda) * s
    }

    /// `F(λ)` together with `dF/dλ`.
    fn secular_with_derivative(&self, lambda: T) -> (T, T) {
        let l = self.length;
        let (c, s, _, _) = basis(lambda, l);
        let z2 = lambda * l * l;
        let ds = if z2.abs() < T::lit(1e-3) {
            // series of (L c - s) / (2λ)
            l * l * l * (-T::one() / T::lit(6.0) + z2 / T::lit(60.0) - z2 * z2 / T::lit(2520.0))
        } else {
            (l * c - s) / (T::lit(2.0) * lambda)
        };
        let dc = -l * s / T::lit(2.0);
        let (sa, sb) = (self.sigma_a, self.sigma_b);
        let f = (sa + sb) * c + (sa * sb - lambda) * s;
        let df = (sa + sb) * dc - s + (sa * sb - lambda) * ds;
        (f, df)
    }

    /// Number of eigenvalues strictly below `λ`, from the closed-form Prüfer angle.
    pub fn count_below(&self, lambda: T) -> usize {
        let (sa, sb, l) = (self.sigma_a, self.sigma_b, self.length);
        let pi = T::PI();
        let phase = if lambda > T::zero() {
            let k = lambda.sqrt();
            k * l + k.atan2(sa) - k.atan2(-sb)
        } else {
            // unscaled angle of (u, u') with u(0) = 1, u'(0) = σ_a
            let q = (-lambda).sqrt();
            let (u, du) = if q * l > T::lit(20.0) {
                let e = (T::lit(-2.0) * q * l).exp();
                ((T::one() + e) + sa * (T::one() - e) / q, q * (T::one() - e) + sa * (T::one() + e))
            } else {
                let (c, s, dc, ds) = basis(lambda, l);
                (c + sa * s, dc + sa * ds)
            };
            // u = A e^{qx} + B e^{-qx} has at most one zero; it lies in (0, L) iff u(L) < 0
            let mut phi = u.atan2(du);
            if phi < T::zero() || (phi == T::zero() && du < T::zero()) {
                phi = phi + T::TAU();
            }
            phi - T::one().atan2(-sb)
        };
        let n = (phase / pi).ceil();
        if n <= T::zero() {
            0
        } else {
            n.to_usize().unwrap_or(usize::MAX)
        }
    }

    /// Lower bound for the whole spectrum.
    pub fn spectral_floor(&self) -> T {
        if self.sigma_a >= T::zero() && self.sigma_b >= T::zero() {
            -T::one()
        } else {
            let k = self.negative_window();
            -(k * k) - T::one()
        }
    }

    /// All eigenvalues `≤ cutoff`, ascending.
    pub fn eigenvalues(&self, cutoff: T) -> Result<Vec<T>> {
        let floor = self.spectral_floor();
        if self.count_below(floor) != 0 {
            return Err(Error::BracketFailure(format!("eigenvalue below the negative search window {floor}")));
        }
        let slack = T::lit(1e-12) * (T::one() + cutoff.abs());
        let total = self.count_below(cutoff + slack);
        let pi_l = T::PI() / self.length;
        let mut out = Vec::with_capacity(total);
        for i in 0..total {
            // Dirichlet interlacing: λ_i ≤ ((i+1)π/L)², ((i-1)π/L)² ≤ λ_i for i ≥ 2
            let mut lo = if i >= 2 { (T::of(i - 1) * pi_l).powi(2) } else { floor };
            let mut hi = (T::of(i + 1) * pi_l).powi(2);
            if out.last().is_some_and(|p: &T| *p > lo) {
                lo = *out.last().unwrap();
            }
            if self.count_below(lo) > i || self.count_below(hi) <= i {
                // interlacing failed (round-off at a bracket end); widen
                lo = floor;
                hi = hi.max(cutoff + slack) * T::lit(2.0) + T::one();
                if self.count_below(hi) <= i {
                    return Err(Error::BracketFailure(format!("no bracket for eigenvalue index {i}")));
                }
            }
            out.push(self.root_in(i, lo, hi)?);
        }
        out.retain(|v| *v <= cutoff + slack);
        Ok(out)
    }

    /// The `i`-th eigenvalue given `count(lo) ≤ i < count(hi)`.
    fn root_in(&self, i: usize, mut lo: T, mut hi: T) -> Result<T> {
        // isolate with the count, then refine on the sign of F
        for _ in 0..200 {
            let f_lo = self.secular_residual(lo);
            let f_hi = self.secular_residual(hi);
            if f_lo * f_hi < T::zero() && (hi - lo) <= T::lit(1e-3) * (T::one() + lo.abs().min(hi.abs())) {
                break;
            }
            let mid = T::lit(0.5) * (lo + hi);
            if self.count_below(mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= T::epsilon() * T::lit(4.0) * (T::one() + hi.abs()) {
                break;
            }
        }
        let mut f_lo = self.secular_residual(lo);
        let f_hi = self.secular_residual(hi);
        if f_lo == T::zero() {
            return Ok(lo);
        }
        if f_hi == T::zero() {
            return Ok(hi);
        }
        if f_lo * f_hi > T::zero() {
            // bracket collapsed to rounding width
            if hi - lo <= T::lit(1e-12) * (T::one() + hi.abs()) {
                return Ok(T::lit(0.5) * (lo + hi));
            }
            return Err(Error::BracketFailure(format!("no sign change of the secular function on [{lo}, {hi}]")));
        }
        // safeguarded Newton
        let mut x = T::lit(0.5) * (lo + hi);
        for _ in 0..200 {
            let (f, df) = self.secular_with_derivative(x);
            if f == T::zero() {
                return Ok(x);
            }
            if (f < T::zero()) == (f_lo < T::zero()) {
                lo = x;
                f_lo = f;
            } else {
                hi = x;
            }
            let newton = x - f / df;
            let next = if df != T::zero() && newton > lo && newton < hi { newton } else { T::lit(0.5) * (lo + hi) };
            let tol = T::lit(1e-15) * (T::one() + x.abs());
            if (next - x).abs() <= tol || hi - lo <= tol {
                return Ok(next);
            }
            x = next;
        }
        Err(Error::BracketFailure(format!("secular root did not converge on [{lo}, {hi}]")))
    }

    /// Normalized eigenpair at an eigenvalue.
    pub fn eigenpair(&self, lambda: T) -> Eigenpair1D<T> {
        let l = self.length;
        let sa = self.sigma_a;
        let (branch, w) = if lambda > T::zero() {
            (Branch::Oscillatory, lambda.sqrt())
        } else if lambda < T::zero() {
            (Branch::Hyperbolic, (-lambda).sqrt())
        } else {
            (Branch::Zero, T::zero())
        };
        let z = w * l;
        let sgn = if branch == Branch::Hyperbolic { -T::one() } else { T::one() };
        // ∫c², ∫c s, ∫s² over (0, L)
        let (icc, ics, iss) = if z < T::lit(1e-3) {
            let z2 = sgn * z * z;
            (
                l * (T::one() - z2 / T::lit(3.0) + z2 * z2 / T::lit(15.0)),
                l * l / T::lit(2.0) * (T::one() - z2 / T::lit(3.0) + z2 * z2 * T::lit(2.0) / T::lit(45.0)),
                l * l * l * (T::one() / T::lit(3.0) - z2 / T::lit(15.0) + z2 * z2 * T::lit(2.0) / T::lit(315.0)),
            )
        } else if branch == Branch::Oscillatory {
            let two = T::lit(2.0);
            let sinc = z.sin() / z;
            (
                l / two * (T::one() + (two * z).sin() / (two * z)),
                l * l / two * sinc * sinc,
                l * l * l * (two * z - (two * z).sin()) / (T::lit(4.0) * z * z * z),
            )
        } else {
            let two = T::lit(2.0);
            let shc = z.sinh() / z;
            (
                l / two * (T::one() + (two * z).sinh() / (two * z)),
                l * l / two * shc * shc,
                l * l * l * ((two * z).sinh() - two * z) / (T::lit(4.0) * z * z * z),
            )
        };
        let norm = (icc + T::lit(2.0) * sa * ics + sa * sa * iss).max(T::zero()).sqrt();
        let a = T::one() / norm;
        let b = sa / norm;
        let sup_bound = match branch {
            Branch::Oscillatory => (T::one() + (sa / w).powi(2)).sqrt() / norm,
            _ => {
                let (c, s, _, _) = basis(lambda, l);
                T::one().max((c + sa * s).abs()) / norm
            }
        };
        Eigenpair1D { eigenvalue: lambda, branch, wavenumber: w, a, b, norm, length: l, sup_bound }
    }

    /// All normalized eigenpairs up to `cutoff`.
    pub fn eigenpairs(&self, cutoff: T) -> Result<Vec<Eigenpair1D<T>>> {
        Ok(self.eigenvalues(cutoff)?.into_iter().map(|l| self.eigenpair(l)).collect())
    }

    /// Boundary residuals `|-u'(0) + σ_a u(0)|`, `|u'(L) + σ_b u(L)|` of a normalized pair.
    pub fn boundary_residuals(&self, pair: &Eigenpair1D<T>) -> (T, T) {
        let (u0, du0) = pair.value_and_derivative(T::zero());
        let (ul, dul) = pair.value_and_derivative(self.length);
        ((-du0 + self.sigma_a * u0).abs(), (dul + self.sigma_b * ul).abs())
    }

    /// `Σ e^{-tλ_n}` with the spectrum taken up to `40/t`.
    pub fn heat_trace(&self, t: T) -> Result<T> {
        if !(t > T::zero()) {
            return Err(Error::InvalidArgument(format!("heat trace needs t > 0, got {t}")));
        }
        let eig = self.eigenvalues(T::lit(40.0) / t)?;
        let mut acc = KahanSum::new();
        for l in eig {
            let term = (-t * l).exp();
            if term < T::lit(1e-16) * acc.value() {
                break;
            }
            acc.add(term);
        }
        Ok(acc.value())
    }
}

impl<T: Real> Eigenpair1D<T> {
    /// `u(x)`; errors outside `[0, L]`.
    pub fn eval(&self, x: T) -> Result<T> {
        let tol = T::lit(1e-12) * self.length;
        if x < -tol || x > self.length + tol {
            return Err(Error::InvalidArgument(format!("x = {x} outside [0, {}]", self.length)));
        }
        Ok(self.value_and_derivative(x).0)
    }

    pub fn value_and_derivative(&self, x: T) -> (T, T) {
        let (c, s, dc, ds) = basis(self.eigenvalue, x);
        (self.a * c + self.b * s, self.a * dc + self.b * ds)
    }
}

/// Free-function form of [`RobinInterval1D::secular_residual`].
pub fn secular_residual<T: Real>(problem: &RobinInterval1D<T>, lambda: T) -> T {
    problem.secular_residual(lambda)
}

/// Free-function form of [`RobinInterval1D::eigenpairs`].
pub fn eigenvalues_1d<T: Real>(problem: &RobinInterval1D<T>, cutoff: T) -> Result<Vec<Eigenpair1D<T>>> {
    problem.eigenpairs(cutoff)
}

/// Free-function form of [`RobinInterval1D::heat_trace`].
pub fn heat_trace_1d<T: Real>(problem: &RobinInterval1D<T>, t: T) -> Result<T> {
    problem.heat_trace(t)
}

#[cfg(test)]
mod tests;
