//! Model domains, Robin coefficients on their boundaries and exact geometric quantities.

mod boundary;
mod density;
mod json;

pub use boundary::{sigma_integral, BoundaryData, Moment, SigmaRepr};
pub use density::{density_constant, DensityConstant};
pub use json::{BoundarySpec, DomainDocument, DomainSpec};

use crate::error::{Error, Result};
use crate::real::Real;

/// A point in the plane.
pub type Point<T> = [T; 2];

/// Bounded Lipschitz domain in dimension one or two.
///
/// Boundary pieces are numbered as follows: interval endpoints `0` (x = 0) and `1` (x = L);
/// rectangle sides bottom, right, top, left; the whole circle for a disk; polygon edges in
/// vertex order (edge `i` runs from vertex `i` to vertex `i + 1`).
#[derive(Debug, Clone, PartialEq)]
pub enum Domain<T> {
    Interval { length: T },
    Rectangle { width: T, height: T },
    Disk { radius: T },
    Polygon { vertices: Vec<Point<T>> },
}

impl<T: Real> Domain<T> {
    pub fn interval(length: T) -> Result<Self> {
        positive("interval length", length)?;
        Ok(Domain::Interval { length })
    }

    pub fn rectangle(width: T, height: T) -> Result<Self> {
        positive("rectangle width", width)?;
        positive("rectangle height", height)?;
        Ok(Domain::Rectangle { width, height })
    }

    pub fn unit_square() -> Self {
        Domain::Rectangle { width: T::one(), height: T::one() }
    }

    pub fn disk(radius: T) -> Result<Self> {
        positive("disk radius", radius)?;
        Ok(Domain::Disk { radius })
    }

    /// Simple polygon with counterclockwise vertices.
    pub fn polygon(vertices: Vec<Point<T>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidDomain("polygon needs at least 3 vertices".into()));
        }
        if vertices.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::InvalidDomain("polygon vertex is not finite".into()));
        }
        let area = shoelace(&vertices);
        if area <= T::zero() {
            return Err(Error::InvalidDomain("polygon vertices must be counterclockwise with positive area".into()));
        }
        let n = vertices.len();
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            if a == b {
                return Err(Error::InvalidDomain(format!("repeated polygon vertex {i}")));
            }
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                if segments_intersect(a, b, c, d) {
                    return Err(Error::InvalidDomain(format!("polygon edges {i} and {j} intersect")));
                }
            }
        }
        Ok(Domain::Polygon { vertices })
    }

    /// The L-shaped domain `[0,2]^2 \ (1,2]^2`.
    pub fn l_shape() -> Self {
        let v = |x: f64, y: f64| [T::lit(x), T::lit(y)];
        Domain::Polygon { vertices: vec![v(0., 0.), v(2., 0.), v(2., 1.), v(1., 1.), v(1., 2.), v(0., 2.)] }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            _ => 2,
        }
    }

    /// Lebesgue measure `|Ω|`.
    pub fn volume(&self) -> T {
        match self {
            Domain::Interval { length } => *length,
            Domain::Rectangle { width, height } => *width * *height,
            Domain::Disk { radius } => T::PI() * *radius * *radius,
            Domain::Polygon { vertices } => shoelace(vertices),
        }
    }

    /// Boundary measure `H^{d-1}(∂Ω)`; counting measure on the two endpoints of an interval.
    pub fn boundary_measure(&self) -> T {
        match self {
            Domain::Interval { .. } => T::lit(2.0),
            Domain::Disk { radius } => T::TAU() * *radius,
            _ => self.piece_lengths().into_iter().sum(),
        }
    }

    pub fn piece_count(&self) -> usize {
        match self {
            Domain::Interval { .. } => 2,
            Domain::Rectangle { .. } => 4,
            Domain::Disk { .. } => 1,
            Domain::Polygon { vertices } => vertices.len(),
        }
    }

    /// Measure of every boundary piece (1 for each interval endpoint).
    pub fn piece_lengths(&self) -> Vec<T> {
        match self {
            Domain::Interval { .. } => vec![T::one(), T::one()],
            Domain::Disk { radius } => vec![T::TAU() * *radius],
            _ => self.edges().iter().map(|(a, b)| dist(*a, *b)).collect(),
        }
    }

    /// Straight boundary edges for rectangles and polygons (empty otherwise).
    pub fn edges(&self) -> Vec<(Point<T>, Point<T>)> {
        let verts = match self.polygon_vertices() {
            Some(v) => v,
            None => return Vec::new(),
        };
        let n = verts.len();
        (0..n).map(|i| (verts[i], verts[(i + 1) % n])).collect()
    }

    /// Vertices of a rectangle or polygon, counterclockwise from the origin corner.
    pub fn polygon_vertices(&self) -> Option<Vec<Point<T>>> {
        match self {
            Domain::Rectangle { width, height } => {
                let (z, w, h) = (T::zero(), *width, *height);
                Some(vec![[z, z], [w, z], [w, h], [z, h]])
            }
            Domain::Polygon { vertices } => Some(vertices.clone()),
            _ => None,
        }
    }

    /// Point at boundary arclength `s ∈ [0, H^1(∂Ω))` and the piece containing it.
    pub fn boundary_point(&self, s: T) -> Result<(Point<T>, usize)> {
        match self {
            Domain::Interval { .. } => Err(Error::Unsupported("interval boundary has no arclength parametrization".into())),
            Domain::Disk { radius } => {
                let theta = s / *radius;
                Ok(([*radius * theta.cos(), *radius * theta.sin()], 0))
            }
            _ => {
                let total = self.boundary_measure();
                let mut s = s % total;
                if s < T::zero() {
                    s = s + total;
                }
                let edges = self.edges();
                for (i, (a, b)) in edges.iter().enumerate() {
                    let len = dist(*a, *b);
                    if s <= len || i + 1 == edges.len() {
                        let u = (s / len).min(T::one());
                        return Ok(([a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])], i));
                    }
                    s = s - len;
                }
                unreachable!("polygon has at least three edges")
            }
        }
    }

    /// Arclength coordinate of a point lying on boundary piece `piece`.
    pub fn arclength_of(&self, p: Point<T>, piece: usize) -> Result<T> {
        match self {
            Domain::Interval { .. } => Err(Error::Unsupported("interval boundary has no arclength parametrization".into())),
            Domain::Disk { radius } => {
                let mut theta = p[1].atan2(p[0]);
                if theta < T::zero() {
                    theta = theta + T::TAU();
                }
                Ok(theta * *radius)
            }
            _ => {
                let edges = self.edges();
                let (a, _) = edges.get(piece).ok_or_else(|| Error::InvalidArgument(format!("no boundary piece {piece}")))?;
                let before: T = edges[..piece].iter().map(|(a, b)| dist(*a, *b)).sum();
                Ok(before + dist(*a, p))
            }
        }
    }

    /// Image of the domain under `x ↦ s·x`.
    pub fn scaled(&self, s: T) -> Result<Self> {
        positive("scale factor", s)?;
        Ok(match self {
            Domain::Interval { length } => Domain::Interval { length: *length * s },
            Domain::Rectangle { width, height } => Domain::Rectangle { width: *width * s, height: *height * s },
            Domain::Disk { radius } => Domain::Disk { radius: *radius * s },
            Domain::Polygon { vertices } => Domain::Polygon { vertices: vertices.iter().map(|p| [p[0] * s, p[1] * s]).collect() },
        })
    }

    /// Short identifier of the domain kind.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Domain::Interval { .. } => "interval",
            Domain::Rectangle { .. } => "rectangle",
            Domain::Disk { .. } => "disk",
            Domain::Polygon { .. } => "polygon",
        }
    }
}

fn positive<T: Real>(what: &str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!("{what} must be positive and finite, got {x}")))
    }
}

pub(crate) fn dist<T: Real>(a: Point<T>, b: Point<T>) -> T {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn shoelace<T: Real>(v: &[Point<T>]) -> T {
    let n = v.len();
    let twice: T = (0..n).map(|i| {
        let (a, b) = (v[i], v[(i + 1) % n]);
        a[0] * b[1] - b[0] * a[1]
    }).sum();
    twice * T::lit(0.5)
}

fn orient<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>) -> T {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment<T: Real>(a: Point<T>, b: Point<T>, p: Point<T>) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_intersect<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>, d: Point<T>) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    let z = T::zero();
    if ((o1 > z && o2 < z) || (o1 < z && o2 > z)) && ((o3 > z && o4 < z) || (o3 < z && o4 > z)) {
        return true;
    }
    (o1 == z && on_segment(a, b, c)) || (o2 == z && on_segment(a, b, d)) || (o3 == z && on_segment(c, d, a)) || (o4 == z && on_segment(c, d, b))
}

/// Point-in-polygon test (even-odd rule).
pub fn polygon_contains<T: Real>(vertices: &[Point<T>], p: Point<T>) -> bool {
    let n = vertices.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0];
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn volumes_and_boundaries() {
        let sq = Domain::<f64>::unit_square();
        assert_eq!(sq.volume(), 1.0);
        assert_eq!(sq.boundary_measure(), 4.0);
        let disk = Domain::disk(1.0_f64).unwrap();
        assert_relative_eq!(disk.volume(), std::f64::consts::PI, max_relative = 1e-15);
        assert_relative_eq!(disk.boundary_measure(), 2.0 * std::f64::consts::PI, max_relative = 1e-15);
        assert_eq!(Domain::interval(1.0_f64).unwrap().boundary_measure(), 2.0);
        let l = Domain::<f64>::l_shape();
        assert_eq!(l.volume(), 3.0);
        assert_eq!(l.boundary_measure(), 8.0);
    }

    #[test]
    fn works_in_single_precision() {
        let r = Domain::rectangle(2.0_f32, 0.5).unwrap();
        assert_eq!(r.volume(), 1.0_f32);
        assert_eq!(r.boundary_measure(), 5.0_f32);
    }

    #[test]
    fn rejects_bad_polygons() {
        let cw = vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]];
        assert!(Domain::<f64>::polygon(cw).is_err());
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(Domain::<f64>::polygon(bowtie).is_err());
        assert!(Domain::<f64>::rectangle(0.0, 1.0).is_err());
        assert!(Domain::<f64>::disk(-1.0).is_err());
    }

    #[test]
    fn boundary_parametrization_round_trips() {
        let r = Domain::rectangle(2.0_f64, 1.0).unwrap();
        let (p, piece) = r.boundary_point(2.5).unwrap();
        assert_eq!(piece, 1);
        assert_relative_eq!(p[0], 2.0);
        assert_relative_eq!(p[1], 0.5);
        assert_relative_eq!(r.arclength_of(p, piece).unwrap(), 2.5);
        let (p, piece) = r.boundary_point(5.5).unwrap();
        assert_eq!(piece, 3);
        assert_relative_eq!(p[1], 0.5);
    }

    #[test]
    fn contains_point() {
        let l = Domain::<f64>::l_shape().polygon_vertices().unwrap();
        assert!(polygon_contains(&l, [0.5, 1.5]));
        assert!(!polygon_contains(&l, [1.5, 1.5]));
    }

    proptest! {
        #[test]
        fn scaling_laws(s in 0.1_f64..10.0, a in 0.1_f64..3.0, b in 0.1_f64..3.0) {
            for d in [Domain::rectangle(a, b).unwrap(), Domain::disk(a).unwrap()] {
                let sd = d.scaled(s).unwrap();
                prop_assert!((sd.volume() - s * s * d.volume()).abs() <= 1e-14 * sd.volume());
                prop_assert!((sd.boundary_measure() - s * d.boundary_measure()).abs() <= 1e-14 * sd.boundary_measure());
            }
        }
    }
}
