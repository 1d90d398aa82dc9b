//! Linear algebra for the symmetric generalized eigenproblem `A v = λ M v`.
//!
//! Dense path: Cholesky of `M`, reduction to `L⁻¹ A L⁻ᵀ`, Householder tridiagonalization,
//! implicit QL for eigenvalues, inverse iteration for the wanted vectors. Large banded
//! problems use shift-invert block subspace iteration with a banded Cholesky factor.

mod banded;
mod dense;
mod subspace;
mod sparse;
mod tridiag;

pub use banded::{reverse_cuthill_mckee, BandedCholesky};
pub use dense::{cholesky, generalized_eigen_dense, DenseMatrix};
pub use subspace::{generalized_eigen_subspace, jacobi_eigen};
pub use sparse::{CsrMatrix, TripletBuilder};
pub use tridiag::{tridiagonal_eigen, tridiagonal_eigenvalues, Tridiagonal};

/// Eigenvalues with their `M`-orthonormal eigenvectors (columns stored one per entry).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<T>>,
}
