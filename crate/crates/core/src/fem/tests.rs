use super::*;
use crate::domains::{BoundaryData, Domain};
use crate::model_spectra::rectangle_spectrum;
use approx::assert_relative_eq;
use std::f64::consts::PI;

#[test]
fn structured_counts() {
    let sq = Domain::<f64>::unit_square();
    let m = structured_mesh(&sq, 2).unwrap();
    assert_eq!((m.vertices.len(), m.triangles.len(), m.boundary_edges.len()), (9, 8, 8));
    let m = structured_mesh(&sq, 1).unwrap();
    assert_eq!((m.vertices.len(), m.triangles.len()), (4, 2));
    let l = structured_mesh(&Domain::<f64>::l_shape(), 2).unwrap();
    assert_eq!((l.vertices.len(), l.triangles.len()), (21, 24));
    assert_relative_eq!(l.area(), 3.0, max_relative = 1e-14);
    assert_relative_eq!(l.boundary_length(), 8.0, max_relative = 1e-14);
    assert_relative_eq!(structured_mesh(&sq, 4).unwrap().h, 2f64.sqrt() / 4.0, max_relative = 1e-14);
    assert!(structured_mesh(&Domain::disk(1.0).unwrap(), 2).is_err());
}

#[test]
fn element_matrices() {
    let k = element_stiffness::<f64>([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
    let expect = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((k[i][j] - expect[i][j]).abs() < 1e-15);
        }
    }
    let m = element_mass([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    assert_relative_eq!(m[0][0], 1.0 / 12.0);
    assert_relative_eq!(m[0][1], 1.0 / 24.0);
}

#[test]
fn assembled_invariants() {
    let l = Domain::<f64>::l_shape();
    let mesh = structured_mesh(&l, 3).unwrap();
    let sigma = BoundaryData::per_piece(&l, vec![1.0, -2.0, 0.5, 3.0, 0.0, 1.5]).unwrap();
    let op = assemble(&mesh, &sigma).unwrap();
    let ones = vec![1.0; op.size()];
    assert!(op.stiffness.matvec(&ones).iter().all(|v| v.abs() < 1e-12));
    assert_relative_eq!(op.mass.bilinear(&ones, &ones), 3.0, max_relative = 1e-12);
    assert_relative_eq!(op.boundary.bilinear(&ones, &ones), sigma.integral(), max_relative = 1e-12);
    for m in [&op.stiffness, &op.mass, &op.boundary] {
        assert!(m.asymmetry() <= 1e-14);
    }
    let mut buf = Vec::new();
    write_triplets_csv(&op.mass, &mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("i,j,value\n0,0,"));
}

#[test]
fn sampled_sigma_edge_quadrature() {
    let sq = Domain::<f64>::unit_square();
    let mesh = structured_mesh(&sq, 8).unwrap();
    // linear in arclength between nodes: 2-point Gauss is exact for the trapezoid representative
    let sigma = BoundaryData::sampled(&sq, vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 2.0, 1.0, 0.0]).unwrap();
    let op = assemble(&mesh, &sigma).unwrap();
    let ones = vec![1.0; op.size()];
    assert_relative_eq!(op.boundary.bilinear(&ones, &ones), sigma.integral(), max_relative = 1e-12);
}

#[test]
fn neumann_square_fem() {
    let sq = Domain::<f64>::unit_square();
    let op = assemble(&structured_mesh(&sq, 32).unwrap(), &BoundaryData::neumann(&sq)).unwrap();
    let sol = solve_eigen(&op, 6).unwrap();
    let exact = [0.0, PI * PI, PI * PI, 2.0 * PI * PI, 4.0 * PI * PI, 4.0 * PI * PI];
    let got = sol.spectrum.expanded();
    assert!(got[0].abs() < 1e-9);
    for (g, e) in got.iter().zip(exact).skip(1) {
        assert!(*g >= e * (1.0 - 1e-12), "Galerkin upper bound {g} < {e}");
        assert!((g / e - 1.0) < 5e-3, "{g} vs {e}");
    }
    assert!(sol.spectrum.discretized);
}

#[test]
fn robin_square_fem_matches_tensor() {
    let sq = Domain::<f64>::unit_square();
    let sigma = BoundaryData::constant(&sq, 1.0).unwrap();
    let op = assemble(&structured_mesh(&sq, 32).unwrap(), &sigma).unwrap();
    let sol = solve_eigen(&op, 4).unwrap();
    let exact = rectangle_spectrum(1.0, 1.0, &sigma, 100.0).unwrap().expanded();
    for (g, e) in sol.spectrum.expanded().iter().zip(&exact) {
        assert!((g / e - 1.0).abs() < 0.01, "{g} vs {e}");
        assert!(*g >= *e - 1e-9);
    }
}

#[test]
fn strongly_negative_sigma_gives_negative_ground_state() {
    let sq = Domain::<f64>::unit_square();
    let sigma = BoundaryData::constant(&sq, -3.0).unwrap();
    let op = assemble(&structured_mesh(&sq, 12).unwrap(), &sigma).unwrap();
    let sol = solve_eigen(&op, 2).unwrap();
    let exact = rectangle_spectrum(1.0, 1.0, &sigma, 10.0).unwrap().expanded()[0];
    assert!(sol.spectrum.expanded()[0] < 0.0);
    assert!((sol.spectrum.expanded()[0] / exact - 1.0).abs() < 0.05);
}

#[test]
fn subspace_path_matches_dense_path() {
    let sq = Domain::<f64>::unit_square();
    let sigma = BoundaryData::constant(&sq, 1.0).unwrap();
    let op = assemble(&structured_mesh(&sq, 20).unwrap(), &sigma).unwrap();
    let dense = solve_eigen(&op, 5).unwrap().pairs.values;
    let sub = crate::linalg::generalized_eigen_subspace(&op.operator(), &op.mass, 5).unwrap().values;
    for (a, b) in dense.iter().zip(&sub) {
        assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
    }
}

#[test]
fn disk_mesh_fem_count() {
    // scipy oracle: 29 eigenvalues ≤ 100 for the unit disk with σ = 1
    let mesh = disk_mesh(1.0, 16, 64).unwrap();
    assert!(mesh.area() < PI && mesh.area() > PI * 0.99);
    let d = Domain::disk(1.0).unwrap();
    let op = assemble(&mesh, &BoundaryData::constant(&d, 1.0).unwrap()).unwrap();
    let sol = solve_eigen(&op, 40).unwrap();
    let below = sol.spectrum.expanded().iter().filter(|v| **v <= 100.0).count();
    // P1 values sit above the exact ones; allow the levels just under 100 to slip out
    assert!((27..=29).contains(&below), "{below}");
}

#[test]
fn triangle_files_round_trip() {
    // the n = 2 structured square written out; side markers 1..4 (bottom, right, top, left),
    // corners carry the marker of the side that follows them counterclockwise
    let sq = Domain::<f64>::unit_square();
    let reference = structured_mesh(&sq, 2).unwrap();
    let marker = |p: [f64; 2]| match p {
        [x, y] if y == 0.0 && x < 1.0 => 1,
        [x, _] if x == 1.0 && p[1] < 1.0 => 2,
        [x, y] if y == 1.0 && x > 0.0 => 3,
        [x, _] if x == 0.0 => 4,
        _ => 0,
    };
    let mut node = format!("{} 2 0 1\n", reference.vertices.len());
    for (i, p) in reference.vertices.iter().enumerate() {
        node += &format!("{} {} {} {}\n", i + 1, p[0], p[1], marker(*p));
    }
    let mut ele = format!("{} 3 0\n", reference.triangles.len());
    for (i, t) in reference.triangles.iter().enumerate() {
        ele += &format!("{} {} {} {}\n", i + 1, t[0] + 1, t[1] + 1, t[2] + 1);
    }
    let mesh: TriangleMesh<f64> = read_triangle_mesh(node.as_bytes(), ele.as_bytes()).unwrap();
    assert_eq!(mesh.boundary_edges, reference.boundary_edges.iter().map(|e| BoundaryEdge { arclength: None, ..e.clone() }).collect::<Vec<_>>());
    let ele = "2 3 0\n1 1 2 3\n2 1 3 4\n";
    assert!(read_triangle_mesh::<f64, _, _>("3 2 0 1\n".as_bytes(), ele.as_bytes()).is_err());
}
