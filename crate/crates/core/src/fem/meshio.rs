//! Triangle-style `.node` / `.ele` input and operator dumps.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::mesh::TriangleMesh;
use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;
use crate::real::Real;

fn data_lines<R: BufRead>(r: R, what: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push((i + 1, body.split_whitespace().map(str::to_string).collect()));
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("{what} file is empty")));
    }
    Ok(out)
}

fn field<X: std::str::FromStr>(line: &(usize, Vec<String>), k: usize, what: &str) -> Result<X> {
    line.1
        .get(k)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("{what} line {}: bad or missing field {}", line.0, k + 1)))
}

/// Reads a mesh from `.node` (`count dim attrs markers`, then `id x y [attrs] marker`) and
/// `.ele` (`count 3 attrs`, then `id v1 v2 v3`) text.
///
/// Boundary markers `m ≥ 1` map to boundary piece `m − 1`. An edge whose endpoints carry
/// different markers takes the marker of the endpoint whose same-marker boundary neighbour
/// lies on the edge's line (the other endpoint is then a corner of the neighbouring side).
pub fn read_triangle_mesh<T: Real, A: BufRead, B: BufRead>(node: A, ele: B) -> Result<TriangleMesh<T>> {
    let nodes = data_lines(node, ".node")?;
    let header = &nodes[0];
    let count: usize = field(header, 0, ".node")?;
    let attrs: usize = field(header, 2, ".node").unwrap_or(0);
    let has_marker = field::<usize>(header, 3, ".node").unwrap_or(0) > 0;
    if nodes.len() - 1 != count {
        return Err(Error::Parse(format!(".node declares {count} vertices but lists {}", nodes.len() - 1)));
    }
    let base: usize = field(&nodes[1], 0, ".node")?;
    let mut vertices = Vec::with_capacity(count);
    let mut markers = Vec::with_capacity(count);
    for line in &nodes[1..] {
        let x: f64 = field(line, 1, ".node")?;
        let y: f64 = field(line, 2, ".node")?;
        vertices.push([T::lit(x), T::lit(y)]);
        markers.push(if has_marker { field::<usize>(line, 3 + attrs, ".node")? } else { 0 });
    }
    let eles = data_lines(ele, ".ele")?;
    let ecount: usize = field(&eles[0], 0, ".ele")?;
    if eles.len() - 1 != ecount {
        return Err(Error::Parse(format!(".ele declares {ecount} triangles but lists {}", eles.len() - 1)));
    }
    let mut triangles = Vec::with_capacity(ecount);
    for line in &eles[1..] {
        let mut t = [0usize; 3];
        for (k, slot) in t.iter_mut().enumerate() {
            let id: usize = field(line, k + 1, ".ele")?;
            *slot = id.checked_sub(base).ok_or_else(|| Error::Parse(format!(".ele line {}: vertex id below base {base}", line.0)))?;
        }
        triangles.push(t);
    }
    // boundary neighbours, for the corner rule
    let probe = TriangleMesh::from_triangles(vertices.clone(), triangles.clone(), |_, _| Ok((0, None)))?;
    let mut neighbours: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in &probe.boundary_edges {
        let [a, b] = e.vertices;
        neighbours.entry(a).or_default().push(b);
        neighbours.entry(b).or_default().push(a);
    }
    let mut edge_piece: HashMap<(usize, usize), usize> = HashMap::new();
    for e in &probe.boundary_edges {
        let [a, b] = e.vertices;
        let (ma, mb) = (markers[a], markers[b]);
        let marker = if ma == mb {
            ma
        } else {
            // v continues its own side through `other` if a same-marker neighbour is collinear
            let regular = |v: usize, other: usize| {
                neighbours[&v].iter().any(|w| {
                    let (p, q, r) = (vertices[*w], vertices[v], vertices[other]);
                    let cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
                    let scale = crate::domains::dist(p, q) * crate::domains::dist(q, r);
                    *w != other && markers[*w] == markers[v] && cross.abs() <= T::lit(1e-9) * scale
                })
            };
            match (regular(a, b), regular(b, a)) {
                (true, false) => ma,
                (false, true) => mb,
                _ => ma.max(mb),
            }
        };
        if marker == 0 {
            return Err(Error::Parse(format!("boundary edge ({}, {}) has no boundary marker", a + base, b + base)));
        }
        edge_piece.insert((a.min(b), a.max(b)), marker - 1);
    }
    let position: HashMap<(u64, u64), usize> = vertices.iter().enumerate().map(|(i, p)| ((p[0].to_f64_lossy().to_bits(), p[1].to_f64_lossy().to_bits()), i)).collect();
    TriangleMesh::from_triangles(vertices, triangles, |p, q| {
        let key = |p: [T; 2]| (p[0].to_f64_lossy().to_bits(), p[1].to_f64_lossy().to_bits());
        let (a, b) = (position[&key(p)], position[&key(q)]);
        Ok((edge_piece[&(a.min(b), a.max(b))], None))
    })
}

/// Writes `i,j,value` rows.
pub fn write_triplets_csv<T: Real, W: Write>(m: &CsrMatrix<T>, mut out: W) -> Result<()> {
    writeln!(out, "i,j,value")?;
    for (i, j, v) in m.triplets() {
        writeln!(out, "{i},{j},{:.16e}", v.to_f64_lossy())?;
    }
    Ok(())
}
