//! Constant-coefficient Lorentzian metrics on the cylinder and their
//! pointwise causal algebra: validation, the quadratic form, causal
//! characters, null directions, and a canonical time orientation.

use core::fmt;
use core::ops::Neg;

use crate::math;

/// Errors from metric validation and pointwise causal queries.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    /// The coefficients do not define a Lorentzian metric. Lorentzian
    /// signature on the cylinder is exactly `E*G + F^2 > 0`.
    #[error("not Lorentzian: discriminant E*G + F^2 = {discriminant} is not positive")]
    NotLorentzian {
        /// The computed value of `E*G + F^2`.
        discriminant: f64,
    },
    /// A coefficient, component, or derived quantity is NaN or infinite.
    #[error("non-finite value in metric data")]
    NotFinite,
    /// The zero vector has no causal character.
    #[error("the zero vector has no causal character")]
    ZeroVector,
    /// Future/past direction is only defined for causal vectors.
    #[error("a spacelike vector is neither future nor past directed")]
    SpacelikeVector,
    /// Tolerances must be finite and non-negative.
    #[error("invalid tolerance {eps}: must be finite and >= 0")]
    InvalidEpsilon {
        /// The offending tolerance.
        eps: f64,
    },
}

/// A tangent vector `dx ∂x + dy ∂y` on the cylinder.
///
/// The components are coordinates with respect to the global frame
/// `(∂x, ∂y)`; because the coefficients of the metric are constant, the
/// same component pair describes a vector at every base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    /// Component along the periodic `x` direction.
    pub dx: f64,
    /// Component along the `y` direction.
    pub dy: f64,
}

impl TangentVector {
    /// Builds a vector from its frame components.
    pub const fn new(dx: f64, dy: f64) -> Self {
        TangentVector { dx, dy }
    }

    /// True for the zero vector, which has no causal character.
    pub fn is_zero(&self) -> bool {
        self.dx == 0.0 && self.dy == 0.0
    }
}

impl fmt::Display for TangentVector {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({}, {})", self.dx, self.dy)
    }
}

/// Causal character of a nonzero tangent vector under a fixed metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalCharacter {
    /// `q(v) < 0`.
    Timelike,
    /// `q(v) = 0` (within the caller's tolerance band).
    Null,
    /// `q(v) > 0`.
    Spacelike,
}

impl fmt::Display for CausalCharacter {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            CausalCharacter::Timelike => "Timelike",
            CausalCharacter::Null => "Null",
            CausalCharacter::Spacelike => "Spacelike",
        })
    }
}

/// The metric `g = -E dx^2 + 2F dx dy + G dy^2` with constant, finite
/// coefficients and Lorentzian signature (`E*G + F^2 > 0`).
///
/// `F` stores *half* the mixed term, so the coefficient matrix is
/// `[[-E, F], [F, G]]` and the signature condition says its determinant
/// `-(E*G + F^2)` is negative. Construction validates both invariants;
/// every constructed value is safe to use with all operations in this
/// crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatMetric {
    e: f64,
    f: f64,
    g: f64,
}

impl FlatMetric {
    /// Validates the coefficients and builds the metric.
    ///
    /// # Errors
    ///
    /// [`MetricError::NotFinite`] if any coefficient (or the discriminant
    /// they produce) is NaN or infinite, [`MetricError::NotLorentzian`] if
    /// `E*G + F^2 <= 0`.
    pub fn new(e: f64, f: f64, g: f64) -> Result<Self, MetricError> {
        if !(e.is_finite() && f.is_finite() && g.is_finite()) {
            return Err(MetricError::NotFinite);
        }
        let discriminant = e * g + f * f;
        if !discriminant.is_finite() {
            return Err(MetricError::NotFinite);
        }
        if discriminant <= 0.0 {
            return Err(MetricError::NotLorentzian { discriminant });
        }
        Ok(FlatMetric { e, f, g })
    }

    /// Coefficient of `-dx^2`.
    pub fn e(&self) -> f64 {
        self.e
    }

    /// Coefficient of `dx dy` (half the mixed term `2F dx dy`).
    pub fn f(&self) -> f64 {
        self.f
    }

    /// Coefficient of `dy^2`.
    pub fn g(&self) -> f64 {
        self.g
    }

    /// The signature discriminant `E*G + F^2`, strictly positive for every
    /// constructed metric and invariant under sign flip of the metric.
    pub fn discriminant(&self) -> f64 {
        self.e * self.g + self.f * self.f
    }

    /// The quadratic form `q(v) = -E dx^2 + 2F dx dy + G dy^2`.
    ///
    /// In particular `q(∂x) = -E` and `q(∂y) = G`, and `q(-v) = q(v)`.
    pub fn quadratic_form(&self, v: TangentVector) -> f64 {
        -self.e * v.dx * v.dx + 2.0 * self.f * v.dx * v.dy + self.g * v.dy * v.dy
    }

    /// The symmetric pairing `g(u, v)`, the polarization of
    /// [`quadratic_form`](Self::quadratic_form): `g(v, v) = q(v)`.
    pub fn pairing(&self, u: TangentVector, v: TangentVector) -> f64 {
        -self.e * u.dx * v.dx + self.f * (u.dx * v.dy + u.dy * v.dx) + self.g * u.dy * v.dy
    }

    /// Causal character of a nonzero vector with a relative null band.
    ///
    /// The vector is `Null` when `|q(v)| <= eps * scale` with
    /// `scale = (|E| + 2|F| + |G|) * (dx^2 + dy^2)`, so `eps` is a relative
    /// tolerance that is invariant under scaling of either the metric or
    /// the vector. With `eps = 0` the comparison is exact.
    ///
    /// # Errors
    ///
    /// [`MetricError::InvalidEpsilon`] for negative or non-finite `eps`,
    /// [`MetricError::ZeroVector`] for `v = 0`, and
    /// [`MetricError::NotFinite`] if the evaluation overflows.
    pub fn classify_vector(
        &self,
        v: TangentVector,
        eps: f64,
    ) -> Result<CausalCharacter, MetricError> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(MetricError::InvalidEpsilon { eps });
        }
        if v.is_zero() {
            return Err(MetricError::ZeroVector);
        }
        let q = self.quadratic_form(v);
        let scale = (math::abs(self.e) + 2.0 * math::abs(self.f) + math::abs(self.g))
            * (v.dx * v.dx + v.dy * v.dy);
        if !q.is_finite() || !scale.is_finite() {
            return Err(MetricError::NotFinite);
        }
        Ok(if math::abs(q) <= eps * scale {
            CausalCharacter::Null
        } else if q < 0.0 {
            CausalCharacter::Timelike
        } else {
            CausalCharacter::Spacelike
        })
    }

    /// The two independent null directions of the metric.
    ///
    /// For `E != 0` both directions are normalized to `dy = 1`, so their
    /// `dx` components are the two roots of `-E s^2 + 2F s + G = 0`; the
    /// first direction carries the root `(F + sign(F)·√(F^2+EG))/E`. For
    /// `E = 0` the pair is `(1, 0)` and `(-G, 2F)`. The signature
    /// invariant makes the discriminant strictly positive, so the two
    /// directions are always linearly independent.
    pub fn null_directions(&self) -> (TangentVector, TangentVector) {
        if self.e == 0.0 {
            // q(a, b) = b (2F a + G b): the circle direction and the
            // solution of the linear factor.
            return (
                TangentVector::new(1.0, 0.0),
                TangentVector::new(-self.g + 0.0, 2.0 * self.f),
            );
        }
        let sq = math::sqrt(self.discriminant());
        // Root extraction without cancellation: fold the square root into
        // the larger-magnitude root, recover the other one from the product
        // of roots (-G/E). `t` is never zero because sq > 0.
        let t = if self.f >= 0.0 {
            self.f + sq
        } else {
            self.f - sq
        };
        let s1 = t / self.e;
        let s2 = if self.g == 0.0 { 0.0 } else { -self.g / t };
        (
            TangentVector::new(s1, 1.0),
            TangentVector::new(s2 + 0.0, 1.0),
        )
    }
}

impl Neg for FlatMetric {
    type Output = FlatMetric;

    /// The sign-flipped metric `-g`, which is Lorentzian again (the
    /// discriminant is unchanged) and swaps timelike with spacelike.
    fn neg(self) -> FlatMetric {
        FlatMetric {
            e: -self.e,
            f: -self.f,
            g: -self.g,
        }
    }
}

/// A global timelike vector field selecting the future half of every
/// light cone. Since the metric has constant coefficients, a single
/// tangent vector describes the whole field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeOrientation {
    t: TangentVector,
}

impl TimeOrientation {
    /// The canonical orientation for a metric, chosen so that the future
    /// is the direction of growing `y` whenever a timelike vector with
    /// `dy > 0` exists, and growing `x` otherwise.
    ///
    /// Branch table (each entry has `q(T) < 0` by the signature invariant):
    /// `E < 0` takes the cone bisector `(F/E, 1)`; `E = 0` takes
    /// `((-1-G)/(2F), 1)`, which gives `q(T) = -1` exactly; for `E > 0`
    /// the choice is `(1, -F/G)` when `G > 0`, `(0, 1)` when `G < 0`, and
    /// `(1, 0)` when `G = 0`.
    pub fn canonical(m: &FlatMetric) -> TimeOrientation {
        let t = if m.e() < 0.0 {
            // q(F/E, 1) = (F^2 + EG)/E < 0. The `+ 0.0` folds -0.0 from
            // F = 0 into plain zero for clean display.
            TangentVector::new(m.f() / m.e() + 0.0, 1.0)
        } else if m.e() == 0.0 {
            // F != 0 here (discriminant is F^2), and q(T) = 2F t_x + G = -1.
            TangentVector::new((-1.0 - m.g()) / (2.0 * m.f()) + 0.0, 1.0)
        } else if m.g() > 0.0 {
            // q(1, -F/G) = -E - F^2/G < 0.
            TangentVector::new(1.0, -m.f() / m.g() + 0.0)
        } else if m.g() < 0.0 {
            // q(0, 1) = G < 0.
            TangentVector::new(0.0, 1.0)
        } else {
            // E > 0, G = 0: q(1, 0) = -E < 0.
            TangentVector::new(1.0, 0.0)
        };
        TimeOrientation { t }
    }

    /// The orienting timelike vector.
    pub fn vector(&self) -> TangentVector {
        self.t
    }

    /// Whether a causal vector points into the future cone.
    ///
    /// For a causal `v` and timelike `T` the pairing `g(v, T)` is never
    /// zero, so the sign test `g(v, T) < 0` is total on causal vectors.
    ///
    /// # Errors
    ///
    /// [`MetricError::SpacelikeVector`] when `v` is spacelike (at exact
    /// tolerance), plus the [`classify_vector`](FlatMetric::classify_vector)
    /// errors for zero or non-finite input.
    pub fn is_future(&self, m: &FlatMetric, v: TangentVector) -> Result<bool, MetricError> {
        match m.classify_vector(v, 0.0)? {
            CausalCharacter::Spacelike => Err(MetricError::SpacelikeVector),
            _ => Ok(m.pairing(v, self.t) < 0.0),
        }
    }
}

/// A point on the cylinder, with the periodic coordinate stored as its
/// canonical representative in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPoint {
    x: f64,
    y: f64,
}

impl CylinderPoint {
    /// Builds a point, folding `x` into `[0, 1)`. Coordinates are expected
    /// to be finite; non-finite input propagates as NaN.
    pub fn new(x: f64, y: f64) -> CylinderPoint {
        CylinderPoint {
            x: math::wrap_unit(x),
            y,
        }
    }

    /// The canonical periodic coordinate in `[0, 1)`.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// The unbounded coordinate.
    pub fn y(&self) -> f64 {
        self.y
    }
}

impl fmt::Display for CylinderPoint {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({}, {})", self.x, self.y)
    }
}
