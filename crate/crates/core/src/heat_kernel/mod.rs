//! Heat kernels of intervals and rectangles.
//!
//! The Neumann kernel comes from the method of images, the Robin kernel from its eigenfunction
//! expansion, and the Duhamel approximations `K_j` from the Neumann kernel through the recursion
//! `K_0 = 0`, `K_j = k⁰ − ∫_0^t ∫_{∂Ω} k⁰(t−s, x, y) K_{j−1}(s, y, x′) σ(y) dy ds`.

mod duhamel;
mod probe;

#[cfg(test)]
mod tests;

pub use duhamel::QuadratureControls;
pub use probe::{duhamel_error_decay, gaussian_bound_probe, trace_difference_via_kernel, DecayReport, GaussianBoundProbe, ProbeGrid, TraceDifference};

use std::io::Write;

use crate::domains::{BoundaryData, Domain};
use crate::error::{Error, Result};
use crate::model_spectra::separable_factors;
use crate::real::{KahanSum, Real};
use crate::secular::{Eigenpair1D, RobinInterval1D};

/// Free heat kernel on the line, `(4πt)^{−1/2} e^{−z²/4t}`.
pub fn free_gaussian<T: Real>(t: T, z: T) -> T {
    (-(z * z) / (T::lit(4.0) * t)).exp() / (T::lit(4.0) * T::PI() * t).sqrt()
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if t > T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("heat kernel needs t > 0, got {t}")))
    }
}

/// Neumann heat kernel of `[0, L]`.
///
/// For `t ≤ L²` the image sum `Σ_n G_t(x−y−2nL) + G_t(x+y−2nL)` is used, otherwise the cosine
/// series `(1/L)(1 + 2Σ cos(nπx/L) cos(nπy/L) e^{−t(nπ/L)²})`; both are truncated once the
/// next term is below `1e−17` of the partial sum.
pub fn neumann_kernel_1d<T: Real>(length: T, t: T, x: T, y: T) -> Result<T> {
    check_time(t)?;
    let l = length;
    if t <= l * l {
        let two_l = l + l;
        let mut acc = KahanSum::new();
        acc.add(free_gaussian(t, x - y) + free_gaussian(t, x + y));
        let mut n = 1usize;
        loop {
            let shift = T::of(n) * two_l;
            let terms = free_gaussian(t, x - y - shift) + free_gaussian(t, x - y + shift) + free_gaussian(t, x + y - shift) + free_gaussian(t, x + y + shift);
            acc.add(terms);
            if n >= 2 && terms <= T::lit(1e-17) * acc.value() {
                break;
            }
            n += 1;
        }
        Ok(acc.value())
    } else {
        let w = T::PI() / l;
        let mut acc = KahanSum::new();
        acc.add(T::one());
        let mut n = 1usize;
        loop {
            let k = T::of(n) * w;
            let decay = (-t * k * k).exp();
            acc.add(T::lit(2.0) * (k * x).cos() * (k * y).cos() * decay);
            if decay <= T::lit(1e-17) * acc.value().abs() {
                break;
            }
            n += 1;
        }
        Ok(acc.value() / l)
    }
}

/// Truncated eigen-expansion `Σ φ_n(x)φ_n(y)e^{−tλ_n}` of a 1D Robin kernel.
#[derive(Debug, Clone)]
pub struct RobinKernel1D<T> {
    pub problem: RobinInterval1D<T>,
    pub pairs: Vec<Eigenpair1D<T>>,
    /// all eigenvalues below this are included
    pub cutoff: T,
    pub min_time: T,
}

/// Eigen cutoff factor: the expansion keeps `λ < 60/t`.
pub const EIGEN_CUTOFF_FACTOR: f64 = 60.0;

impl<T: Real> RobinKernel1D<T> {
    /// Expansion accurate for all `t ≥ min_time`.
    pub fn new(problem: RobinInterval1D<T>, min_time: T) -> Result<Self> {
        check_time(min_time)?;
        let cutoff = T::lit(EIGEN_CUTOFF_FACTOR) / min_time;
        let pairs = problem.eigenpairs(cutoff)?;
        Ok(Self { problem, pairs, cutoff, min_time })
    }

    /// Kernel value and a bound on the omitted terms plus rounding.
    pub fn eval(&self, t: T, x: T, y: T) -> Result<(T, T)> {
        check_time(t)?;
        if t < self.min_time * (T::one() - T::lit(1e-12)) {
            return Err(Error::Certificate { requested: (T::lit(EIGEN_CUTOFF_FACTOR) / t).to_f64_lossy(), complete_below: self.cutoff.to_f64_lossy() });
        }
        let mut acc = KahanSum::new();
        let mut magnitude = T::zero();
        for p in &self.pairs {
            let term = p.value_and_derivative(x).0 * p.value_and_derivative(y).0 * (-t * p.eigenvalue).exp();
            magnitude = magnitude + term.abs();
            acc.add(term);
        }
        // rounding in the eigenfunction values is relative to each term, not to the sum
        let rounding = T::lit(16.0) * T::epsilon() * magnitude;
        Ok((acc.value(), self.tail_bound(t) + rounding))
    }

    /// `Σ_{n ≥ N} S² e^{−tλ_n}` with `λ_n ≥ max(Λ, ((n−1)π/L)²)` and
    /// `S² = (1 + σ_a²/k²)/(L/2 − 1/(4k) − |σ_a|/k²)` at `k = √Λ`, a sup bound of every omitted
    /// normalized eigenfunction.
    pub fn tail_bound(&self, t: T) -> T {
        let l = self.problem.length;
        let k = self.cutoff.sqrt();
        let sa = self.problem.sigma_a.abs();
        let denom = l / T::lit(2.0) - T::one() / (T::lit(4.0) * k) - sa / (k * k);
        if denom <= T::zero() {
            return T::infinity();
        }
        let s2 = (T::one() + sa * sa / (k * k)) / denom;
        let mut acc = T::zero();
        let mut n = self.pairs.len();
        loop {
            let floor = if n >= 1 { (T::of(n - 1) * T::PI() / l).powi(2) } else { T::zero() };
            let term = (-t * floor.max(self.cutoff)).exp();
            acc = acc + term;
            if term <= T::lit(1e-20) * acc || term == T::zero() {
                break;
            }
            n += 1;
        }
        s2 * acc
    }
}

/// How a [`HeatKernelEvaluator`] computes the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    /// method of images, Neumann only
    Images,
    /// Robin eigenfunction expansion
    EigenExpansion,
    /// Duhamel approximation `K_j`
    Duhamel(usize),
}

impl KernelMethod {
    pub fn name(&self) -> String {
        match self {
            KernelMethod::Images => "images".into(),
            KernelMethod::EigenExpansion => "eigen".into(),
            KernelMethod::Duhamel(j) => format!("duhamel{j}"),
        }
    }
}

/// Heat kernel of an interval or rectangle with Robin coefficient σ.
#[derive(Debug, Clone)]
pub struct HeatKernelEvaluator<T> {
    pub domain: Domain<T>,
    pub sigma: BoundaryData<T>,
    pub method: KernelMethod,
    pub controls: QuadratureControls,
    lengths: Vec<T>,
    robin: Vec<RobinKernel1D<T>>,
}

/// Smallest time for which eigen-expansions on a rectangle are attempted.
pub const RECTANGLE_MIN_TIME: f64 = 1e-4;

impl<T: Real> HeatKernelEvaluator<T> {
    /// `min_time` bounds the times the eigen-expansion must serve; it is ignored by other methods.
    pub fn new(domain: &Domain<T>, sigma: &BoundaryData<T>, method: KernelMethod, min_time: T) -> Result<Self> {
        let lengths = match domain {
            Domain::Interval { length } => vec![*length],
            Domain::Rectangle { width, height } => vec![*width, *height],
            _ => return Err(Error::Unsupported(format!("heat kernels on a {} are not supported", domain.kind_name()))),
        };
        if sigma.piece_count() != domain.piece_count() {
            return Err(Error::InvalidBoundary("σ was built for a different domain".into()));
        }
        let robin = match method {
            KernelMethod::Images => {
                if !sigma.is_neumann() {
                    return Err(Error::Unsupported("the method of images needs σ ≡ 0".into()));
                }
                Vec::new()
            }
            KernelMethod::EigenExpansion => {
                if lengths.len() == 2 && min_time < T::lit(RECTANGLE_MIN_TIME) {
                    return Err(Error::Unsupported(format!("eigen-expansion on a rectangle below t = {RECTANGLE_MIN_TIME}")));
                }
                separable_factors(domain, sigma)?.into_iter().map(|p| RobinKernel1D::new(p, min_time)).collect::<Result<_>>()?
            }
            KernelMethod::Duhamel(j) => {
                if j > 4 {
                    return Err(Error::InvalidArgument(format!("Duhamel iterates are limited to j ≤ 4, got {j}")));
                }
                Vec::new()
            }
        };
        Ok(Self { domain: domain.clone(), sigma: sigma.clone(), method, controls: QuadratureControls::default(), lengths, robin })
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    /// Side lengths: `[L]` or `[width, height]`.
    pub fn domain_lengths(&self) -> &[T] {
        &self.lengths
    }

    /// `k(t, x, x′)`.
    pub fn eval(&self, t: T, x: &[T], xp: &[T]) -> Result<T> {
        Ok(self.eval_with_bound(t, x, xp)?.0)
    }

    /// Kernel value with an error bound (truncation and rounding; zero for closed-form methods).
    pub fn eval_with_bound(&self, t: T, x: &[T], xp: &[T]) -> Result<(T, T)> {
        check_time(t)?;
        self.check_point(x)?;
        self.check_point(xp)?;
        match self.method {
            KernelMethod::Images => Ok((self.neumann(t, x, xp)?, T::zero())),
            KernelMethod::EigenExpansion => {
                let mut value = T::one();
                let mut bound = T::zero();
                for (i, r) in self.robin.iter().enumerate() {
                    let (v, b) = r.eval(t, x[i], xp[i])?;
                    // |ab − ãb̃| ≤ |a − ã||b| + |ã||b − b̃|
                    bound = bound * (v.abs() + b) + value.abs() * b;
                    value = value * v;
                }
                Ok((value, bound))
            }
            KernelMethod::Duhamel(j) => Ok((duhamel::iterate(self, j, t, x, xp, true)?, T::zero())),
        }
    }

    /// Neumann kernel `k⁰` as a product of 1D image sums.
    pub fn neumann(&self, t: T, x: &[T], xp: &[T]) -> Result<T> {
        let mut v = T::one();
        for (i, l) in self.lengths.iter().enumerate() {
            v = v * neumann_kernel_1d(*l, t, x[i], xp[i])?;
        }
        Ok(v)
    }

    fn check_point(&self, x: &[T]) -> Result<()> {
        if x.len() != self.lengths.len() {
            return Err(Error::InvalidArgument(format!("point has {} coordinates, domain needs {}", x.len(), self.lengths.len())));
        }
        for (c, l) in x.iter().zip(&self.lengths) {
            let tol = T::lit(1e-12) * *l;
            if !(*c >= -tol && *c <= *l + tol) {
                return Err(Error::InvalidArgument(format!("point coordinate {c} outside [0, {l}]")));
            }
        }
        Ok(())
    }
}

/// `k(t, x, x′)` with the Neumann kernel built by images.
pub fn neumann_kernel<T: Real>(domain: &Domain<T>, t: T, x: &[T], xp: &[T]) -> Result<T> {
    HeatKernelEvaluator::new(domain, &BoundaryData::neumann(domain), KernelMethod::Images, t)?.eval(t, x, xp)
}

/// Exact Robin kernel from the eigen-expansion.
pub fn robin_kernel_exact<T: Real>(domain: &Domain<T>, sigma: &BoundaryData<T>, t: T, x: &[T], xp: &[T]) -> Result<T> {
    HeatKernelEvaluator::new(domain, sigma, KernelMethod::EigenExpansion, t)?.eval(t, x, xp)
}

/// The Duhamel approximation `K_j(t, x, x′)`.
pub fn duhamel_iterate<T: Real>(domain: &Domain<T>, sigma: &BoundaryData<T>, j: usize, t: T, x: &[T], xp: &[T]) -> Result<T> {
    HeatKernelEvaluator::new(domain, sigma, KernelMethod::Duhamel(j), t)?.eval(t, x, xp)
}

/// One row of a kernel table.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRow {
    pub t: f64,
    pub x: [f64; 2],
    pub xp: [f64; 2],
    pub method: String,
    pub value: f64,
}

/// Writes `t,x1,x2,xp1,xp2,method,value`; 1D points carry `x2 = xp2 = 0`.
pub fn write_kernel_csv<W: Write>(mut w: W, rows: &[KernelRow]) -> Result<()> {
    writeln!(w, "t,x1,x2,xp1,xp2,method,value")?;
    for r in rows {
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}", r.t, r.x[0], r.x[1], r.xp[0], r.xp[1], r.method, r.value)?;
    }
    Ok(())
}
