//! Exact causal structure of the cylinder: classification on the causal
//! ladder, duality under metric sign flip, and chronological/causal
//! reachability resolved over windings of the compact direction.
//!
//! Everything here is decided in closed form. Lifting a curve to the
//! universal cover turns "is `target` in the future of `p`" into "does an
//! integer winding `k` exist so that the displacement `(Δx + k, Δy)` lies
//! in the future cone". Depending on the sign of `E`, the admissible `k`
//! form all of `ℤ`, a half-line, or a bounded interval, and each closed
//! form is verified with exact floating-point sign tests.

use core::fmt;

use crate::expr::{EvalError, Expression};
use crate::math;
use crate::metric::{
    CausalCharacter, CylinderPoint, FlatMetric, TangentVector, TimeOrientation,
};

/// Position of a spacetime on the causal ladder (the only three positions
/// a flat Lorentzian cylinder can occupy).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalClass {
    /// A closed timelike curve passes through every point; `I⁺(p) = Z`.
    TotallyVicious,
    /// Closed null curves exist but no closed timelike ones.
    ChronologicalNonCausal,
    /// Causal with compact causal diamonds.
    GloballyHyperbolic,
}

impl CausalClass {
    /// The class of the sign-flipped metric `-g`: totally vicious and
    /// globally hyperbolic trade places, the middle class is self-dual.
    pub fn dual(self) -> CausalClass {
        match self {
            CausalClass::TotallyVicious => CausalClass::GloballyHyperbolic,
            CausalClass::ChronologicalNonCausal => CausalClass::ChronologicalNonCausal,
            CausalClass::GloballyHyperbolic => CausalClass::TotallyVicious,
        }
    }
}

impl fmt::Display for CausalClass {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            CausalClass::TotallyVicious => "TotallyVicious",
            CausalClass::ChronologicalNonCausal => "ChronologicalNonCausal",
            CausalClass::GloballyHyperbolic => "GloballyHyperbolic",
        })
    }
}

/// Which future relation a membership query asks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalMode {
    /// `I⁺`: reachable by a future-directed timelike curve.
    Chronological,
    /// `J⁺`: reachable by a future-directed causal curve (reflexive).
    Causal,
}

/// Classifies the spacetime from the causal character of the circle
/// direction: `q(∂x) = -E`, so `E > 0` is totally vicious, `E = 0` is
/// chronological but non-causal, and `E < 0` is globally hyperbolic.
///
/// The comparison is exact on the stored coefficient; the classification
/// is genuinely discontinuous at `E = 0` (the CLI warns when `|E|` is tiny
/// relative to the other coefficients).
pub fn classify(m: &FlatMetric) -> CausalClass {
    if m.e() > 0.0 {
        CausalClass::TotallyVicious
    } else if m.e() == 0.0 {
        CausalClass::ChronologicalNonCausal
    } else {
        CausalClass::GloballyHyperbolic
    }
}

/// Errors from [`classify_conformal`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConformalError {
    /// The conformal factor fails the numeric x-periodicity check and so
    /// does not define a function on the cylinder.
    #[error("conformal factor is not periodic in x")]
    NotPeriodic,
    /// The conformal factor could not be evaluated.
    #[error("conformal factor evaluation failed: {0}")]
    Eval(#[from] EvalError),
}

/// Classifies a conformally flat metric `e^{2ψ} g`.
///
/// Causality is conformally invariant, so after validating that `ψ` is
/// x-periodic (with the default sampling of
/// [`expr::validate_periodicity`](crate::expr::validate_periodicity)) the
/// factor is discarded and the flat representative decides the class.
pub fn classify_conformal(
    flat: &FlatMetric,
    psi: &Expression,
) -> Result<CausalClass, ConformalError> {
    let periodic = crate::expr::validate_periodicity(
        psi,
        crate::expr::DEFAULT_PERIODICITY_SAMPLES,
        crate::expr::DEFAULT_PERIODICITY_TOL,
    )?;
    if !periodic {
        return Err(ConformalError::NotPeriodic);
    }
    Ok(classify(flat))
}

/// Whether `target` lies in the chronological (`I⁺`) or causal (`J⁺`)
/// future of `p` under the canonical time orientation.
///
/// The decision is exact and total:
///
/// - `E > 0`: always true. Horizontal windings `(k, 0)` are timelike with
///   `q = -E k^2`, and a winding of the right sign is future directed, so
///   every point (including `p` itself) is in `I⁺(p)`.
/// - `E = 0`: the future cone is spanned by a horizontal null ray and a
///   ray with `dy > 0`, so membership depends only on `Δy`: chronological
///   iff `Δy > 0`, causal iff `Δy >= 0`.
/// - `E < 0`: future causal displacements need `Δy > 0` and a winding `k`
///   with `s_lo·Δy <= Δx + k <= s_hi·Δy` (the null slopes bound the cone).
///   Candidate windings around both interval ends and the midpoint are
///   each verified with an exact sign test of `q`, so interval rounding
///   can never admit a spurious member. `J⁺` additionally contains `p`
///   itself (the constant curve).
pub fn future_membership(
    m: &FlatMetric,
    t: &TimeOrientation,
    p: CylinderPoint,
    target: CylinderPoint,
    mode: CausalMode,
) -> bool {
    debug_assert_eq!(
        *t,
        TimeOrientation::canonical(m),
        "future_membership expects the canonical time orientation"
    );
    let u = math::wrap_unit(target.x() - p.x());
    let w = target.y() - p.y();

    if m.e() > 0.0 {
        return true;
    }
    if m.e() == 0.0 {
        return match mode {
            CausalMode::Chronological => w > 0.0,
            CausalMode::Causal => w >= 0.0,
        };
    }

    // E < 0 from here on.
    if u == 0.0 && w == 0.0 {
        // The constant curve keeps J⁺ reflexive; I⁺ has no closed curves.
        return mode == CausalMode::Causal;
    }
    if w <= 0.0 {
        // The future cone lies strictly in dy > 0: the pairing of (s, w)
        // with the canonical T reduces to w (F^2 + EG)/E, negative exactly
        // when w > 0.
        return false;
    }
    let strict = mode == CausalMode::Chronological;
    find_winding(m, u, w, strict).is_some()
}

/// Searches the bounded winding interval of an `E < 0` metric for an
/// integer `k` making `(u + k, w)` future causal (or future timelike when
/// `strict`). Requires `w > 0`; returns the accepted winding.
fn find_winding(m: &FlatMetric, u: f64, w: f64, strict: bool) -> Option<i64> {
    let (d1, d2) = m.null_directions();
    let (s_lo, s_hi) = if d1.dx <= d2.dx {
        (d1.dx, d2.dx)
    } else {
        (d2.dx, d1.dx)
    };
    let lo = s_lo * w - u;
    let hi = s_hi * w - u;
    let accept = |k: f64| -> bool {
        let q = m.quadratic_form(TangentVector::new(u + k, w));
        if strict {
            q < 0.0
        } else {
            q <= 0.0
        }
    };
    // The admissible k form one interval, so it suffices to probe both
    // rounded ends (padded by one to absorb rounding in lo/hi) plus the
    // midpoint, which is interior whenever the interval is wide.
    let candidates = [
        math::ceil(lo) - 1.0,
        math::ceil(lo),
        math::ceil(lo) + 1.0,
        math::round(0.5 * (lo + hi)),
        math::floor(hi) - 1.0,
        math::floor(hi),
        math::floor(hi) + 1.0,
    ];
    candidates
        .iter()
        .find(|&&k| accept(k))
        .map(|&k| k as i64)
}

/// Whether `r` lies in the causal diamond `J⁺(p) ∩ J⁻(q)`.
///
/// Computed as `r ∈ J⁺(p)` and `q ∈ J⁺(r)`. For `E < 0` every member
/// satisfies `p.y <= r.y <= q.y`, which is what makes the diamonds of the
/// globally hyperbolic case compact.
pub fn diamond_membership(
    m: &FlatMetric,
    t: &TimeOrientation,
    p: CylinderPoint,
    q: CylinderPoint,
    r: CylinderPoint,
) -> bool {
    future_membership(m, t, p, r, CausalMode::Causal)
        && future_membership(m, t, r, q, CausalMode::Causal)
}

/// A closed causal curve: the circle `t ↦ (x₀ + t mod 1, y₀)`, traversed
/// once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedCurveWitness {
    /// A point the loop passes through.
    pub base: CylinderPoint,
    /// Character of the loop velocity: `Timelike` when `E > 0`, `Null`
    /// when `E = 0`.
    pub character: CausalCharacter,
}

impl ClosedCurveWitness {
    /// The loop position at parameter `s ∈ [0, 1]`; `point_at(0)` equals
    /// `point_at(1)`.
    pub fn point_at(&self, s: f64) -> CylinderPoint {
        CylinderPoint::new(self.base.x() + s, self.base.y())
    }

    /// The constant loop velocity `∂x`.
    pub fn velocity(&self) -> TangentVector {
        TangentVector::new(1.0, 0.0)
    }
}

/// A closed causal curve when one exists, i.e. unless the spacetime is
/// globally hyperbolic. The witness is the circle through the origin; its
/// character is the exact character of `∂x`.
pub fn closed_causal_curve(m: &FlatMetric) -> Option<ClosedCurveWitness> {
    if m.e() < 0.0 {
        return None;
    }
    let character = m
        .classify_vector(TangentVector::new(1.0, 0.0), 0.0)
        .expect("the circle direction is a nonzero vector");
    Some(ClosedCurveWitness {
        base: CylinderPoint::new(0.0, 0.0),
        character,
    })
}
