use super::{merge_spectra, MergeMode, Provenance, Spectrum};
use crate::domains::{BoundaryData, Domain};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::secular::RobinInterval1D;

/// Spectrum of a 1D Robin problem up to `cutoff`, complete below `cutoff`.
pub fn interval_spectrum<T: Real>(problem: &RobinInterval1D<T>, cutoff: T) -> Result<Spectrum<T>> {
    let values = problem.eigenvalues(cutoff)?;
    let provenance = Provenance {
        domain: format!("interval(L={})", problem.length),
        sigma: format!("endpoints({}, {})", problem.sigma_a, problem.sigma_b),
        solver: "secular".into(),
    };
    Spectrum::from_values(values, cutoff, cutoff, provenance, 1)
}

/// The x- and y-problems of a rectangle with per-side σ (bottom, right, top, left).
pub fn rectangle_factors<T: Real>(width: T, height: T, sigma: &BoundaryData<T>) -> Result<(RobinInterval1D<T>, RobinInterval1D<T>)> {
    let v = sigma
        .piece_values()
        .filter(|v| v.len() == 4)
        .ok_or_else(|| Error::InvalidBoundary("rectangle spectra need per-side constant σ".into()))?;
    let (bottom, right, top, left) = (v[0], v[1], v[2], v[3]);
    Ok((RobinInterval1D::new(width, left, right)?, RobinInterval1D::new(height, bottom, top)?))
}

/// All eigenvalues `≤ cutoff` of the rectangle `[0, width] × [0, height]` as sums of 1D values.
pub fn rectangle_spectrum<T: Real>(width: T, height: T, sigma: &BoundaryData<T>, cutoff: T) -> Result<Spectrum<T>> {
    let (px, py) = rectangle_factors(width, height, sigma)?;
    let mu1 = ground_state(&px)?;
    let nu1 = ground_state(&py)?;
    let sx = interval_spectrum(&px, cutoff - nu1)?;
    let sy = interval_spectrum(&py, cutoff - mu1)?;
    let mut s = if sx.is_empty() || sy.is_empty() {
        Spectrum::from_values(Vec::new(), cutoff, cutoff, Provenance::default(), 2)?
    } else {
        merge_spectra(&sx, &sy, MergeMode::TensorSum)?.truncated(cutoff)
    };
    s.provenance = Provenance {
        domain: format!("rectangle({width}x{height})"),
        sigma: format!("per_side{:?}", sigma.piece_values().unwrap_or(&[])),
        solver: "tensor-secular".into(),
    };
    Ok(s)
}

/// The 1D factors of a separable domain: one for an interval, x then y for a rectangle.
pub fn separable_factors<T: Real>(domain: &Domain<T>, sigma: &BoundaryData<T>) -> Result<Vec<RobinInterval1D<T>>> {
    match domain {
        Domain::Interval { length } => {
            let v = sigma
                .piece_values()
                .filter(|v| v.len() == 2)
                .ok_or_else(|| Error::InvalidBoundary("interval needs endpoint values".into()))?;
            Ok(vec![RobinInterval1D::new(*length, v[0], v[1])?])
        }
        Domain::Rectangle { width, height } => {
            let (px, py) = rectangle_factors(*width, *height, sigma)?;
            Ok(vec![px, py])
        }
        _ => Err(Error::Unsupported(format!("{} is not a tensor-product domain", domain.kind_name()))),
    }
}

/// Lowest eigenvalue of a 1D problem.
pub fn ground_state<T: Real>(problem: &RobinInterval1D<T>) -> Result<T> {
    let l = problem.length;
    Ok(problem.eigenvalues(problem.spectral_floor().abs() + T::lit(50.0) / (l * l))?[0])
}
