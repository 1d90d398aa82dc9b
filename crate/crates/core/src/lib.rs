//! Robin, Neumann and Dirichlet Laplacian spectra on model Lipschitz domains, together with
//! the statistics (Riesz means, heat traces, gap averages, spectral functions) used to check
//! their two-term Weyl asymptotics numerically.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the crate root re-exports
//! `f64` aliases for the common types.

pub mod acceptance;
pub mod asymptotics;
pub mod domains;
pub mod error;
pub mod quadrature;
pub mod fem;
pub mod fit;
pub mod heat_kernel;
pub mod linalg;
pub mod model_spectra;
pub mod real;
pub mod secular;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use real::Real;

/// `f64` instances of the generic types.
pub type Domain = domains::Domain<f64>;
pub type BoundaryData = domains::BoundaryData<f64>;
pub type Spectrum = model_spectra::Spectrum<f64>;
pub type RobinInterval1D = secular::RobinInterval1D<f64>;
pub type TriangleMesh = fem::TriangleMesh<f64>;
pub type HeatKernelEvaluator = heat_kernel::HeatKernelEvaluator<f64>;
pub type SpectralFunction = stats::SpectralFunction<f64>;
pub type HeatTrace = stats::HeatTrace<f64>;
pub type RieszMean = stats::RieszMean<f64>;
pub type SemiclassicalConstant = asymptotics::SemiclassicalConstant<f64>;
