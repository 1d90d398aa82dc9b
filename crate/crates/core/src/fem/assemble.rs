use super::mesh::{signed_area, TriangleMesh};
use crate::domains::{dist, BoundaryData, Point, SigmaRepr};
use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, TripletBuilder};
use crate::real::Real;

/// Stiffness `K`, mass `M` and boundary mass `B_σ` of the P1 discretization.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator<T> {
    pub stiffness: CsrMatrix<T>,
    pub mass: CsrMatrix<T>,
    pub boundary: CsrMatrix<T>,
}

impl<T: Real> DiscreteOperator<T> {
    pub fn size(&self) -> usize {
        self.mass.n
    }

    /// `K + B_σ`.
    pub fn operator(&self) -> CsrMatrix<T> {
        self.stiffness.add_scaled(&self.boundary, T::one())
    }
}

/// Element stiffness `area · G Gᵀ` for the P1 gradients `G`.
pub fn element_stiffness<T: Real>(p: [Point<T>; 3]) -> Result<[[T; 3]; 3]> {
    let area = signed_area(p[0], p[1], p[2]).abs();
    if area == T::zero() {
        return Err(Error::DegenerateMesh("zero-area triangle".into()));
    }
    let b = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
    let c = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
    let mut k = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (b[i] * b[j] + c[i] * c[j]) / (T::lit(4.0) * area);
        }
    }
    Ok(k)
}

/// Consistent element mass `(area/12)·[[2,1,1],[1,2,1],[1,1,2]]`.
pub fn element_mass<T: Real>(p: [Point<T>; 3]) -> [[T; 3]; 3] {
    let a = signed_area(p[0], p[1], p[2]).abs() / T::lit(12.0);
    let mut m = [[a; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = a * T::lit(2.0);
    }
    m
}

/// Assembles `K`, `M`, `B_σ`; edge integrals are exact for per-piece σ and use 2-point Gauss
/// for sampled σ.
pub fn assemble<T: Real>(mesh: &TriangleMesh<T>, sigma: &BoundaryData<T>) -> Result<DiscreteOperator<T>> {
    let n = mesh.vertices.len();
    let mut kb = TripletBuilder::new(n);
    let mut mb = TripletBuilder::new(n);
    for tri in &mesh.triangles {
        let p = [mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]];
        let ke = element_stiffness(p)?;
        let me = element_mass(p);
        for i in 0..3 {
            for j in 0..3 {
                kb.add(tri[i], tri[j], ke[i][j]);
                mb.add(tri[i], tri[j], me[i][j]);
            }
        }
    }
    let mut bb = TripletBuilder::new(n);
    let g = T::lit(0.5) / T::lit(3.0).sqrt();
    for e in &mesh.boundary_edges {
        let [a, b] = e.vertices;
        let len = dist(mesh.vertices[a], mesh.vertices[b]);
        let local = match sigma.repr() {
            SigmaRepr::PerPiece(v) => {
                let c = *v.get(e.piece).ok_or_else(|| Error::InvalidBoundary(format!("σ has no value for boundary piece {}", e.piece)))?;
                let d = c * len / T::lit(6.0);
                [[d * T::lit(2.0), d], [d, d * T::lit(2.0)]]
            }
            SigmaRepr::Sampled { .. } => {
                let [sa, sb] = e.arclength.ok_or_else(|| Error::Unsupported("sampled σ needs boundary arclength on the mesh".into()))?;
                let mut m = [[T::zero(); 2]; 2];
                for xi in [T::lit(0.5) - g, T::lit(0.5) + g] {
                    let s = sa + xi * (sb - sa);
                    let w = sigma.value_at(e.piece, s) * len * T::lit(0.5);
                    let phi = [T::one() - xi, xi];
                    for i in 0..2 {
                        for j in 0..2 {
                            m[i][j] = m[i][j] + w * phi[i] * phi[j];
                        }
                    }
                }
                m
            }
        };
        for i in 0..2 {
            for j in 0..2 {
                bb.add(e.vertices[i], e.vertices[j], local[i][j]);
            }
        }
    }
    Ok(DiscreteOperator { stiffness: kb.build(), mass: mb.build(), boundary: bb.build() })
}
