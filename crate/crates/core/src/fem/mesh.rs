use std::collections::HashMap;

use crate::domains::{polygon_contains, Domain, Point};
use crate::error::{Error, Result};
use crate::real::Real;

/// A boundary edge with its domain piece and (when known) the boundary arclength of its ends.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEdge<T> {
    pub vertices: [usize; 2],
    pub piece: usize,
    pub arclength: Option<[T; 2]>,
}

/// Conforming triangle mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh<T> {
    pub vertices: Vec<Point<T>>,
    /// counterclockwise vertex triples
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge<T>>,
    /// longest edge
    pub h: T,
}

impl<T: Real> TriangleMesh<T> {
    /// Builds a mesh, orienting triangles counterclockwise, extracting the boundary edges and
    /// tagging each with `piece_of(midpoint)`.
    pub fn from_triangles<F>(vertices: Vec<Point<T>>, mut triangles: Vec<[usize; 3]>, piece_of: F) -> Result<Self>
    where
        F: Fn(Point<T>, Point<T>) -> Result<(usize, Option<[T; 2]>)>,
    {
        for tri in triangles.iter_mut() {
            if tri.iter().any(|v| *v >= vertices.len()) {
                return Err(Error::DegenerateMesh(format!("triangle {tri:?} references a missing vertex")));
            }
            let a = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if a == T::zero() {
                return Err(Error::DegenerateMesh(format!("triangle {tri:?} has zero area")));
            }
            if a < T::zero() {
                tri.swap(1, 2);
            }
        }
        let mut count: HashMap<(usize, usize), (usize, [usize; 2])> = HashMap::new();
        let mut h = T::zero();
        for tri in &triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                h = h.max(crate::domains::dist(vertices[a], vertices[b]));
                let e = count.entry((a.min(b), a.max(b))).or_insert((0, [a, b]));
                e.0 += 1;
            }
        }
        if let Some(((a, b), _)) = count.iter().find(|(_, (c, _))| *c > 2) {
            return Err(Error::DegenerateMesh(format!("edge ({a}, {b}) shared by more than two triangles")));
        }
        let mut boundary: Vec<[usize; 2]> = count.into_values().filter(|(c, _)| *c == 1).map(|(_, e)| e).collect();
        boundary.sort();
        let mut boundary_edges = Vec::with_capacity(boundary.len());
        for [a, b] in boundary {
            let (piece, arclength) = piece_of(vertices[a], vertices[b])?;
            boundary_edges.push(BoundaryEdge { vertices: [a, b], piece, arclength });
        }
        Ok(Self { vertices, triangles, boundary_edges, h })
    }

    pub fn area(&self) -> T {
        self.triangles.iter().map(|t| signed_area(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]])).sum()
    }

    pub fn boundary_length(&self) -> T {
        self.boundary_edges.iter().map(|e| crate::domains::dist(self.vertices[e.vertices[0]], self.vertices[e.vertices[1]])).sum()
    }
}

pub(crate) fn signed_area<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>) -> T {
    T::lit(0.5) * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Which polygon edge contains the segment `p–q`, with the boundary arclength of both ends.
fn polygon_piece<T: Real>(domain: &Domain<T>, p: Point<T>, q: Point<T>) -> Result<(usize, Option<[T; 2]>)> {
    let mid = [(p[0] + q[0]) * T::lit(0.5), (p[1] + q[1]) * T::lit(0.5)];
    let edges = domain.edges();
    let scale = domain.boundary_measure();
    for (i, (a, b)) in edges.iter().enumerate() {
        let len = crate::domains::dist(*a, *b);
        let cross = ((b[0] - a[0]) * (mid[1] - a[1]) - (b[1] - a[1]) * (mid[0] - a[0])) / len;
        let along = ((b[0] - a[0]) * (mid[0] - a[0]) + (b[1] - a[1]) * (mid[1] - a[1])) / len;
        if cross.abs() <= T::lit(1e-9) * scale && along >= T::zero() && along <= len {
            let sp = domain.arclength_of(p, i)?;
            let sq = domain.arclength_of(q, i)?;
            return Ok((i, Some([sp, sq])));
        }
    }
    Err(Error::DegenerateMesh(format!("boundary edge at ({}, {}) lies on no domain edge", mid[0], mid[1])))
}

/// Uniform right-triangle mesh.
///
/// Rectangles get `n` subdivisions per side. Polygons must have integer vertex coordinates
/// and be unions of unit cells (an L-shape, say); each unit gets `n` subdivisions.
pub fn structured_mesh<T: Real>(domain: &Domain<T>, n: usize) -> Result<TriangleMesh<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("structured mesh needs n ≥ 1".into()));
    }
    let (nx, ny, dx, dy, origin, keep_cell): (usize, usize, T, T, Point<T>, Box<dyn Fn(usize, usize) -> bool>) = match domain {
        Domain::Rectangle { width, height } => (n, n, *width / T::of(n), *height / T::of(n), [T::zero(), T::zero()], Box::new(|_, _| true)),
        Domain::Polygon { vertices } => {
            if vertices.iter().any(|p| p[0] != p[0].round() || p[1] != p[1].round()) {
                return Err(Error::Unsupported("structured meshes need integer polygon vertices".into()));
            }
            let lo = [vertices.iter().map(|p| p[0]).fold(T::infinity(), T::min), vertices.iter().map(|p| p[1]).fold(T::infinity(), T::min)];
            let hi = [vertices.iter().map(|p| p[0]).fold(T::neg_infinity(), T::max), vertices.iter().map(|p| p[1]).fold(T::neg_infinity(), T::max)];
            let (w, h) = ((hi[0] - lo[0]).to_usize().unwrap(), (hi[1] - lo[1]).to_usize().unwrap());
            let verts = vertices.clone();
            let step = T::one() / T::of(n);
            let keep = move |i: usize, j: usize| {
                let c = [lo[0] + (T::of(i) + T::lit(0.5)) * step, lo[1] + (T::of(j) + T::lit(0.5)) * step];
                polygon_contains(&verts, c)
            };
            (w * n, h * n, step, step, lo, Box::new(keep))
        }
        _ => return Err(Error::Unsupported(format!("no structured mesh for a {}", domain.kind_name()))),
    };
    let mut used = vec![false; (nx + 1) * (ny + 1)];
    let mut cells = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if keep_cell(i, j) {
                cells.push((i, j));
                for (a, b) in [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)] {
                    used[b * (nx + 1) + a] = true;
                }
            }
        }
    }
    let mut index = vec![usize::MAX; used.len()];
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    // row-major numbering of the used grid points
    for j in 0..=ny {
        for i in 0..=nx {
            let k = j * (nx + 1) + i;
            if used[k] {
                index[k] = vertices.len();
                vertices.push([origin[0] + T::of(i) * dx, origin[1] + T::of(j) * dy]);
            }
        }
    }
    for (i, j) in cells {
        let v = |a: usize, b: usize| index[b * (nx + 1) + a];
        triangles.push([v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
        triangles.push([v(i, j), v(i + 1, j + 1), v(i, j + 1)]);
    }
    let mesh = TriangleMesh::from_triangles(vertices, triangles, |p, q| polygon_piece(domain, p, q))?;
    if (mesh.area() - domain.volume()).abs() > T::lit(1e-9) * domain.volume() {
        return Err(Error::Unsupported("polygon is not a union of unit cells".into()));
    }
    Ok(mesh)
}

/// Polar mesh of the disk: `rings` concentric rings, the outer one with `sectors` vertices on
/// the circle (so the mesh covers the inscribed `sectors`-gon).
pub fn disk_mesh<T: Real>(radius: T, rings: usize, sectors: usize) -> Result<TriangleMesh<T>> {
    if rings == 0 || sectors < 3 {
        return Err(Error::InvalidArgument("disk mesh needs rings ≥ 1 and sectors ≥ 3".into()));
    }
    let mut vertices = vec![[T::zero(), T::zero()]];
    let mut ring_start = vec![0usize];
    let mut ring_len = vec![1usize];
    for r in 1..=rings {
        let count = ((sectors as f64 * r as f64 / rings as f64).round() as usize).max(3);
        ring_start.push(vertices.len());
        ring_len.push(count);
        let rad = radius * T::of(r) / T::of(rings);
        for k in 0..count {
            let th = T::TAU() * T::of(k) / T::of(count);
            vertices.push([rad * th.cos(), rad * th.sin()]);
        }
    }
    let mut triangles = Vec::new();
    // center fan
    for k in 0..ring_len[1] {
        triangles.push([0, ring_start[1] + k, ring_start[1] + (k + 1) % ring_len[1]]);
    }
    // zip consecutive rings by angle
    for r in 1..rings {
        let (s0, n0, s1, n1) = (ring_start[r], ring_len[r], ring_start[r + 1], ring_len[r + 1]);
        let (mut i, mut j) = (0usize, 0usize);
        while i < n0 || j < n1 {
            let a_next = (i + 1) as f64 / n0 as f64;
            let b_next = (j + 1) as f64 / n1 as f64;
            if j < n1 && (i >= n0 || b_next <= a_next) {
                triangles.push([s0 + i % n0, s1 + j % n1, s1 + (j + 1) % n1]);
                j += 1;
            } else {
                triangles.push([s0 + i % n0, s1 + j % n1, s0 + (i + 1) % n0]);
                i += 1;
            }
        }
    }
    let domain = Domain::disk(radius)?;
    TriangleMesh::from_triangles(vertices, triangles, |p, q| {
        let sp = domain.arclength_of(p, 0)?;
        let mut sq = domain.arclength_of(q, 0)?;
        if sq < sp && sp - sq > domain.boundary_measure() / T::lit(2.0) {
            sq = sq + domain.boundary_measure();
        }
        Ok((0, Some([sp, sq])))
    })
}
