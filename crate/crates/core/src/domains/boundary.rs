use super::Domain;
use crate::error::{Error, Result};
use crate::real::{ksum, Real};

/// How the Robin coefficient σ is represented on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaRepr<T> {
    /// One constant per boundary piece.
    PerPiece(Vec<T>),
    /// Periodic piecewise-linear interpolant of values at increasing arclength nodes.
    Sampled { arclength: Vec<T>, values: Vec<T> },
}

/// Which boundary integral of σ to compute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment<T> {
    Sigma,
    Positive,
    Negative,
    /// `∫|σ|^p` for `p ≥ 1`.
    AbsPow(T),
}

/// Robin coefficient on `∂Ω` (boundary condition `∂_ν u + σ u = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData<T> {
    repr: SigmaRepr<T>,
    /// lengths of the pieces of the domain it was built for
    piece_lengths: Vec<T>,
    perimeter: T,
    integral: T,
    integral_pos: T,
    integral_neg: T,
}

impl<T: Real> BoundaryData<T> {
    pub fn per_piece(domain: &Domain<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != domain.piece_count() {
            return Err(Error::InvalidBoundary(format!(
                "{} expects {} boundary values, got {}",
                domain.kind_name(),
                domain.piece_count(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBoundary("σ must be finite".into()));
        }
        let lengths = domain.piece_lengths();
        let integral = ksum(values.iter().zip(&lengths).map(|(v, l)| *v * *l));
        let integral_pos = ksum(values.iter().zip(&lengths).map(|(v, l)| v.pos_part() * *l));
        let integral_neg = ksum(values.iter().zip(&lengths).map(|(v, l)| v.neg_part() * *l));
        Ok(Self { repr: SigmaRepr::PerPiece(values), perimeter: lengths.iter().copied().sum(), piece_lengths: lengths, integral, integral_pos, integral_neg })
    }

    /// The same constant on every piece.
    pub fn constant(domain: &Domain<T>, c: T) -> Result<Self> {
        Self::per_piece(domain, vec![c; domain.piece_count()])
    }

    /// Neumann condition σ ≡ 0.
    pub fn neumann(domain: &Domain<T>) -> Self {
        Self::constant(domain, T::zero()).expect("zero is a valid coefficient")
    }

    /// Sampled σ at arclength nodes `0 ≤ s_0 < s_1 < … < H^1(∂Ω)`, interpolated linearly and periodically.
    pub fn sampled(domain: &Domain<T>, arclength: Vec<T>, values: Vec<T>) -> Result<Self> {
        if domain.dim() == 1 {
            return Err(Error::Unsupported("sampled σ on an interval; use per-endpoint values".into()));
        }
        if arclength.len() != values.len() || arclength.len() < 2 {
            return Err(Error::InvalidBoundary("sampled σ needs at least two (arclength, value) pairs".into()));
        }
        let perimeter = domain.boundary_measure();
        if arclength[0] < T::zero() || *arclength.last().unwrap() >= perimeter || arclength.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidBoundary("arclength nodes must increase within [0, perimeter)".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBoundary("σ must be finite".into()));
        }
        let spacing = node_spacing(&arclength, perimeter);
        let trap = |f: &dyn Fn(T) -> T| ksum(values.iter().zip(&spacing).map(|(v, w)| f(*v) * *w));
        let integral = trap(&|v| v);
        let integral_pos = trap(&|v| v.pos_part());
        let integral_neg = trap(&|v| v.neg_part());
        Ok(Self { repr: SigmaRepr::Sampled { arclength, values }, piece_lengths: domain.piece_lengths(), perimeter, integral, integral_pos, integral_neg })
    }

    pub fn repr(&self) -> &SigmaRepr<T> {
        &self.repr
    }

    /// Per-piece constants, if σ is piecewise constant.
    pub fn piece_values(&self) -> Option<&[T]> {
        match &self.repr {
            SigmaRepr::PerPiece(v) => Some(v),
            SigmaRepr::Sampled { .. } => None,
        }
    }

    /// Single constant value if σ is constant on the whole boundary.
    pub fn as_constant(&self) -> Option<T> {
        let v = self.piece_values()?;
        v.iter().all(|x| *x == v[0]).then_some(v[0])
    }

    /// Number of boundary pieces of the domain σ was built for.
    pub fn piece_count(&self) -> usize {
        self.piece_lengths.len()
    }

    pub fn is_neumann(&self) -> bool {
        self.as_constant() == Some(T::zero())
    }

    /// σ at boundary arclength `s` on piece `piece`.
    pub fn value_at(&self, piece: usize, s: T) -> T {
        match &self.repr {
            SigmaRepr::PerPiece(v) => v[piece],
            SigmaRepr::Sampled { arclength, values } => interpolate_periodic(arclength, values, self.perimeter, s),
        }
    }

    pub fn integral(&self) -> T {
        self.integral
    }

    pub fn integral_pos(&self) -> T {
        self.integral_pos
    }

    pub fn integral_neg(&self) -> T {
        self.integral_neg
    }

    /// `(∫|σ|^p)^{1/p}`.
    pub fn lp_norm(&self, p: T) -> Result<T> {
        Ok(self.moment(Moment::AbsPow(p))?.powf(T::one() / p))
    }

    pub fn moment(&self, moment: Moment<T>) -> Result<T> {
        Ok(match moment {
            Moment::Sigma => self.integral,
            Moment::Positive => self.integral_pos,
            Moment::Negative => self.integral_neg,
            Moment::AbsPow(p) => {
                if !(p >= T::one()) || !p.is_finite() {
                    return Err(Error::InvalidArgument(format!("Lp exponent must be ≥ 1, got {p}")));
                }
                match &self.repr {
                    SigmaRepr::PerPiece(v) => ksum(v.iter().zip(&self.piece_lengths).map(|(v, l)| v.abs().powf(p) * *l)),
                    SigmaRepr::Sampled { arclength, values } => {
                        let spacing = node_spacing(arclength, self.perimeter);
                        ksum(values.iter().zip(&spacing).map(|(v, w)| v.abs().powf(p) * *w))
                    }
                }
            }
        })
    }

    /// σ multiplied by a scalar.
    pub fn scaled(&self, factor: T) -> Self {
        let repr = match &self.repr {
            SigmaRepr::PerPiece(v) => SigmaRepr::PerPiece(v.iter().map(|x| *x * factor).collect()),
            SigmaRepr::Sampled { arclength, values } => SigmaRepr::Sampled { arclength: arclength.clone(), values: values.iter().map(|x| *x * factor).collect() },
        };
        let (pos, neg) = if factor >= T::zero() {
            (self.integral_pos * factor, self.integral_neg * factor)
        } else {
            (self.integral_neg * -factor, self.integral_pos * -factor)
        };
        Self { repr, piece_lengths: self.piece_lengths.clone(), perimeter: self.perimeter, integral: self.integral * factor, integral_pos: pos, integral_neg: neg }
    }

    /// Pointwise negative part `-σ_-` (for the domination bound `k^σ ≤ k^{-σ_-}`).
    pub fn minus_negative_part(&self) -> Self {
        let f = |x: &T| -x.neg_part();
        let repr = match &self.repr {
            SigmaRepr::PerPiece(v) => SigmaRepr::PerPiece(v.iter().map(f).collect()),
            SigmaRepr::Sampled { arclength, values } => SigmaRepr::Sampled { arclength: arclength.clone(), values: values.iter().map(f).collect() },
        };
        Self { repr, piece_lengths: self.piece_lengths.clone(), perimeter: self.perimeter, integral: -self.integral_neg, integral_pos: T::zero(), integral_neg: self.integral_neg }
    }
}

/// Trapezoid weights of periodic nodes: half the distance to each neighbour.
fn node_spacing<T: Real>(s: &[T], perimeter: T) -> Vec<T> {
    let n = s.len();
    (0..n)
        .map(|i| {
            let next = if i + 1 < n { s[i + 1] } else { s[0] + perimeter };
            let prev = if i > 0 { s[i - 1] } else { s[n - 1] - perimeter };
            T::lit(0.5) * (next - prev)
        })
        .collect()
}

fn interpolate_periodic<T: Real>(s: &[T], v: &[T], perimeter: T, at: T) -> T {
    let n = s.len();
    let mut x = at % perimeter;
    if x < T::zero() {
        x = x + perimeter;
    }
    let idx = s.partition_point(|&node| node <= x);
    let (s0, v0, s1, v1) = if idx == 0 {
        (s[n - 1] - perimeter, v[n - 1], s[0], v[0])
    } else if idx == n {
        (s[n - 1], v[n - 1], s[0] + perimeter, v[0])
    } else {
        (s[idx - 1], v[idx - 1], s[idx], v[idx])
    };
    let u = (x - s0) / (s1 - s0);
    v0 + u * (v1 - v0)
}

/// Boundary integral of σ, σ_+, σ_- or |σ|^p.
pub fn sigma_integral<T: Real>(domain: &Domain<T>, sigma: &BoundaryData<T>, moment: Moment<T>) -> Result<T> {
    if sigma.piece_lengths.len() != domain.piece_count() {
        return Err(Error::InvalidBoundary("σ was built for a different domain".into()));
    }
    sigma.moment(moment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn per_side_moments() {
        let sq = Domain::<f64>::unit_square();
        let one = BoundaryData::constant(&sq, 1.0).unwrap();
        assert_eq!(sigma_integral(&sq, &one, Moment::Sigma).unwrap(), 4.0);
        let alt = BoundaryData::per_piece(&sq, vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        assert_eq!(sigma_integral(&sq, &alt, Moment::Negative).unwrap(), 2.0);
        assert_eq!(sigma_integral(&sq, &alt, Moment::Positive).unwrap(), 2.0);
        assert_eq!(sigma_integral(&sq, &alt, Moment::Sigma).unwrap(), 0.0);
        let disk = Domain::disk(2.0).unwrap();
        let half = BoundaryData::constant(&disk, 0.5).unwrap();
        assert_relative_eq!(sigma_integral(&disk, &half, Moment::Sigma).unwrap(), 2.0 * std::f64::consts::PI, max_relative = 1e-15);
    }

    #[test]
    fn invalid_exponent_and_shape() {
        let sq = Domain::<f64>::unit_square();
        let one = BoundaryData::constant(&sq, 1.0).unwrap();
        assert!(sigma_integral(&sq, &one, Moment::AbsPow(0.5)).is_err());
        assert!(BoundaryData::per_piece(&sq, vec![1.0; 3]).is_err());
        let interval = Domain::interval(1.0).unwrap();
        assert!(sigma_integral(&interval, &one, Moment::Sigma).is_err());
        assert_eq!(BoundaryData::per_piece(&interval, vec![1.0, 2.0]).unwrap().integral(), 3.0);
    }

    #[test]
    fn sampled_trapezoid_and_interpolation() {
        let sq = Domain::<f64>::unit_square();
        // σ(s) = s on [0,2], then back down linearly to 0 at s = 4 (periodic): integral = 4
        let sig = BoundaryData::sampled(&sq, vec![0.0, 2.0], vec![0.0, 2.0]).unwrap();
        assert_relative_eq!(sig.integral(), 4.0, max_relative = 1e-15);
        assert_relative_eq!(sig.value_at(0, 0.5), 0.5);
        assert_relative_eq!(sig.value_at(3, 3.0), 1.0);
        assert_relative_eq!(sig.lp_norm(1.0).unwrap(), 4.0);
    }

    proptest! {
        #[test]
        fn sign_decomposition_and_linearity(v in proptest::collection::vec(-5.0_f64..5.0, 4), c in -3.0_f64..3.0) {
            let sq = Domain::rectangle(1.3, 0.7).unwrap();
            let s = BoundaryData::per_piece(&sq, v.clone()).unwrap();
            let scale = 1.0 + s.integral_pos() + s.integral_neg();
            prop_assert!((s.integral() - (s.integral_pos() - s.integral_neg())).abs() <= 1e-12 * scale);
            let sc = s.scaled(c);
            prop_assert!((sc.integral() - c * s.integral()).abs() <= 1e-12 * scale * (1.0 + c.abs()));
            let direct = BoundaryData::per_piece(&sq, v.iter().map(|x| x * c).collect()).unwrap();
            prop_assert!((sc.integral_neg() - direct.integral_neg()).abs() <= 1e-12 * scale * (1.0 + c.abs()));
            let samp = BoundaryData::sampled(&sq, vec![0.0, 0.5, 1.9, 3.1], v.clone()).unwrap();
            prop_assert!((samp.integral() - (samp.integral_pos() - samp.integral_neg())).abs() <= 1e-12 * (1.0 + samp.integral_pos()));
        }
    }
}
