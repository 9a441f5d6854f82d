//! Causal structure of flat and conformally flat Lorentzian metrics on the
//! cylinder `S^1 x R`.
//!
//! Points are written `(x, y)` with `x` periodic of period 1. A constant
//! coefficient line element
//!
//! ```text
//! g = -E dx^2 + 2 F dx dy + G dy^2
//! ```
//!
//! is Lorentzian exactly when `E*G + F^2 > 0`. The causal character of the
//! closed circle direction `d/dx` (its squared length is `-E`) decides the
//! causal class of the whole cylinder: timelike circles make every point lie
//! on a closed timelike curve, lightlike circles give a chronological but
//! non causal spacetime, and spacelike circles give a globally hyperbolic
//! one. Negating the metric swaps the first and last cases. A conformal
//! factor `exp(2 psi)` never changes any of this, so conformally flat
//! metrics are classified through their flat representative.
//!
//! Module map:
//! - [`metric`]: pointwise algebra (characters, null cones, a canonical time
//!   orientation),
//! - [`causality`]: the exact classifier and winding based reachability,
//! - [`curvature`]: finite difference curvature and isometry diagnostics on
//!   sampled coefficient grids,
//! - [`oracle`]: a brute force discretisation of the cylinder that
//!   cross-checks the exact answers,
//! - [`expr`] / [`specfile`]: the expression language and the metric spec
//!   file format used by the command line tools.
//!
//! The crate only needs `alloc`; build with `default-features = false,
//! features = ["libm"]` for `no_std` targets.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("lorcyl needs either the `std` or the `libm` feature");

pub(crate) mod math;

pub mod causality;
pub mod curvature;
pub mod expr;
pub mod metric;
pub mod oracle;
pub mod specfile;

pub use causality::{
    classify, classify_conformal, closed_causal_curve, diamond_membership, future_membership,
    CausalClass, CausalMode, ClosedCurveWitness, ConformalError,
};
pub use curvature::{
    brioschi_curvature, killing_residual, riemann_component, Axis, CurvatureField, FieldError,
    GridError, GridSpec, MetricField, Translation,
};
pub use expr::{validate_periodicity, EvalError, ExprError, Expression};
pub use metric::{
    CausalCharacter, CylinderPoint, FlatMetric, MetricError, TangentVector, TimeOrientation,
};
pub use oracle::{
    detect_cycles, oracle_classify, CausalGraph, CycleSummary, EdgeLabel, InconclusiveReason,
    OracleError, OracleReport, OracleVerdict, StencilStep,
};
pub use specfile::{parse_metric_spec, MetricSpec, SpecFileError};
