//! Tiny shim over the `f64` transcendentals so the crate builds on `no_std`
//! targets (where the inherent methods are missing) without sprinkling
//! `cfg` through the numeric code.

#![allow(dead_code)]

#[cfg(feature = "std")]
mod imp {
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    pub fn abs(x: f64) -> f64 {
        x.abs()
    }
    pub fn floor(x: f64) -> f64 {
        x.floor()
    }
    pub fn ceil(x: f64) -> f64 {
        x.ceil()
    }
    pub fn round(x: f64) -> f64 {
        x.round()
    }
    pub fn sin(x: f64) -> f64 {
        x.sin()
    }
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
    pub fn powf(x: f64, y: f64) -> f64 {
        x.powf(y)
    }
}

#[cfg(not(feature = "std"))]
mod imp {
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }
    pub fn floor(x: f64) -> f64 {
        libm::floor(x)
    }
    pub fn ceil(x: f64) -> f64 {
        libm::ceil(x)
    }
    pub fn round(x: f64) -> f64 {
        libm::round(x)
    }
    pub fn sin(x: f64) -> f64 {
        libm::sin(x)
    }
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    pub fn powf(x: f64, y: f64) -> f64 {
        libm::pow(x, y)
    }
}

pub use imp::*;

/// Reduces `x` into `[0, 1)`, the fundamental domain of the circle
/// coordinate.
///
/// Hand rolled because `f64::rem_euclid` is not available in `core`. The
/// remainder of a tiny negative number plus `1.0` can round back up to
/// exactly `1.0`, which must fold to `0.0` to stay inside the half open
/// interval.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x % 1.0;
    let r = if r < 0.0 { r + 1.0 } else { r };
    if r >= 1.0 {
        0.0
    } else {
        // Normalise -0.0 so wrapped coordinates compare and print cleanly.
        r + 0.0
    }
}
