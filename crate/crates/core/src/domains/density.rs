use super::{dist, Domain, Point};
use crate::error::{Error, Result};
use crate::real::Real;

/// Grid-search lower estimate of `sup_{z, r} H^{d-1}(∂Ω ∩ B_r(z)) / r^{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityConstant<T> {
    pub value: T,
    pub center: Point<T>,
    pub radius: T,
    /// spacing of the center grid
    pub grid_spacing: T,
}

/// Lower bound on the boundary density constant of a planar domain.
///
/// Centers range over a `grid_resolution²` grid covering the bounding box (plus vertices and
/// edge midpoints), radii over a geometric grid from `diam / grid_resolution²` to `diam` together with the
/// distances from each center to the vertices.
pub fn density_constant<T: Real>(domain: &Domain<T>, grid_resolution: usize) -> Result<DensityConstant<T>> {
    if grid_resolution < 2 {
        return Err(Error::InvalidArgument("grid_resolution must be at least 2".into()));
    }
    let g = grid_resolution;
    let (lo, hi, mut extra_centers) = match domain {
        Domain::Interval { .. } => return Err(Error::Unsupported("density constant needs a planar domain".into())),
        Domain::Disk { radius } => {
            let r = *radius;
            ([-r, -r], [r, r], vec![[T::zero(), T::zero()], [r, T::zero()]])
        }
        _ => {
            let verts = domain.polygon_vertices().expect("polygonal domain");
            let mut lo = verts[0];
            let mut hi = verts[0];
            for p in &verts {
                lo = [lo[0].min(p[0]), lo[1].min(p[1])];
                hi = [hi[0].max(p[0]), hi[1].max(p[1])];
            }
            let mut extra = verts.clone();
            extra.extend(domain.edges().iter().map(|(a, b)| [(a[0] + b[0]) * T::lit(0.5), (a[1] + b[1]) * T::lit(0.5)]));
            (lo, hi, extra)
        }
    };
    let diam = dist(lo, hi);
    let step = [(hi[0] - lo[0]) / T::of(g - 1), (hi[1] - lo[1]) / T::of(g - 1)];
    let mut centers = Vec::with_capacity(g * g + extra_centers.len());
    for i in 0..g {
        for j in 0..g {
            centers.push([lo[0] + T::of(i) * step[0], lo[1] + T::of(j) * step[1]]);
        }
    }
    centers.append(&mut extra_centers);
    let r_min = diam / T::of(g * g);
    let ratio = (diam / r_min).powf(T::one() / T::of(g - 1));
    let radii: Vec<T> = (0..g).map(|k| r_min * ratio.powi(k as i32)).collect();

    let verts = domain.polygon_vertices().unwrap_or_default();
    let mut best = DensityConstant { value: T::zero(), center: centers[0], radius: radii[0], grid_spacing: step[0].max(step[1]) };
    for z in &centers {
        // the captured length over r peaks where the sphere passes through a vertex
        let kinks = verts.iter().map(|v| dist(*v, *z)).filter(|r| *r > T::zero());
        for r in radii.iter().copied().chain(kinks).collect::<Vec<_>>().iter() {
            let captured = boundary_in_ball(domain, *z, *r);
            let v = captured / *r;
            if v > best.value {
                best.value = v;
                best.center = *z;
                best.radius = *r;
            }
        }
    }
    Ok(best)
}

/// Exact length of `∂Ω ∩ B_r(z)` for planar domains.
pub(crate) fn boundary_in_ball<T: Real>(domain: &Domain<T>, z: Point<T>, r: T) -> T {
    match domain {
        Domain::Disk { radius } => {
            let big_r = *radius;
            let d = z[0].hypot(z[1]);
            if d == T::zero() {
                return if big_r <= r { T::TAU() * big_r } else { T::zero() };
            }
            let c = (big_r * big_r + d * d - r * r) / (T::lit(2.0) * big_r * d);
            if c <= -T::one() {
                T::TAU() * big_r
            } else if c >= T::one() {
                T::zero()
            } else {
                T::lit(2.0) * big_r * c.acos()
            }
        }
        _ => domain.edges().iter().map(|(a, b)| segment_in_ball(*a, *b, z, r)).sum(),
    }
}

fn segment_in_ball<T: Real>(p: Point<T>, q: Point<T>, z: Point<T>, r: T) -> T {
    let d = [q[0] - p[0], q[1] - p[1]];
    let f = [p[0] - z[0], p[1] - z[1]];
    let a = d[0] * d[0] + d[1] * d[1];
    let b = f[0] * d[0] + f[1] * d[1];
    let c = f[0] * f[0] + f[1] * f[1] - r * r;
    let disc = b * b - a * c;
    if disc <= T::zero() {
        return T::zero();
    }
    let sq = disc.sqrt();
    let u1 = ((-b - sq) / a).max(T::zero());
    let u2 = ((-b + sq) / a).min(T::one());
    if u2 <= u1 {
        T::zero()
    } else {
        (u2 - u1) * a.sqrt()
    }
}
