//! P1 finite elements for the Robin Laplacian on triangulated polygons.

mod assemble;
mod mesh;
mod meshio;
mod solve;

pub use assemble::{assemble, element_mass, element_stiffness, DiscreteOperator};
pub use mesh::{disk_mesh, structured_mesh, BoundaryEdge, TriangleMesh};
pub use meshio::{read_triangle_mesh, write_triplets_csv};
pub use solve::{solve_eigen, FemSolution, DENSE_LIMIT};

#[cfg(test)]
mod tests;
