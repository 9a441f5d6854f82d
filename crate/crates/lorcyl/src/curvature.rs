//! Grid-sampled curvature and isometry diagnostics: Gaussian curvature
//! through the Brioschi formula, the single independent Riemann
//! component, Killing residuals of the coordinate directions, and
//! translations of the cylinder.
//!
//! The Brioschi formula computes Gaussian curvature from the coefficient
//! functions of the metric and their first and second partials alone. It
//! is rational in those quantities with the *square* of the determinant
//! in the denominator, so it applies verbatim to Lorentzian coefficient
//! triples (where the determinant is negative). Derivatives are
//! second-order central differences, wrapping periodically in `x`;
//! the two boundary rows in `y` fall back to one-sided second-order
//! stencils. All stencils are evaluated in difference form, so constant
//! fields produce exact zeros rather than rounding residue.

use alloc::vec::Vec;

use crate::math;
use crate::metric::{CylinderPoint, FlatMetric};

/// Errors from grid construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid resolution {nx}x{ny} too small: need at least 4x4")]
    TooSmall { nx: usize, ny: usize },
    #[error("invalid y range [{y_min}, {y_max}]: bounds must be finite with y_min < y_max")]
    InvalidRange { y_min: f64, y_max: f64 },
}

/// Errors from building or combining sampled fields.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    /// The coefficients fail the pointwise Lorentzian condition
    /// `gxx*gyy - gxy^2 < 0`; reports the first offending node.
    #[error("signature violation at node ({i}, {j}): gxx*gyy - gxy^2 = {det} is not negative")]
    Signature { i: usize, j: usize, det: f64 },
    /// A sampled value is NaN or infinite.
    #[error("non-finite coefficient at node ({i}, {j})")]
    NotFinite { i: usize, j: usize },
    /// Two fields that must share a grid do not.
    #[error("fields are sampled on different grids")]
    GridMismatch,
}

/// A sampling rectangle on the cylinder: `nx` columns across the periodic
/// `x` direction and `ny` rows spanning `[y_min, y_max]`.
///
/// Two samplings are offered: *nodes* (`x = i/nx`, `y` linearly spaced
/// with both endpoints included), used by the curvature operations so the
/// boundary rows sit exactly on `y_min`/`y_max`; and *cell centers*
/// (`x = (i+1/2)/nx`, `y` at centers of `ny` equal cells), used by the
/// reachability oracle so no two cells are identified by periodicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    nx: usize,
    ny: usize,
    y_min: f64,
    y_max: f64,
}

impl GridSpec {
    /// Validates and builds a grid. Requires `nx, ny >= 4` (the one-sided
    /// stencils need four rows) and a finite, nonempty `y` range.
    pub fn new(nx: usize, ny: usize, y_min: f64, y_max: f64) -> Result<GridSpec, GridError> {
        if nx < 4 || ny < 4 {
            return Err(GridError::TooSmall { nx, ny });
        }
        if !(y_min.is_finite() && y_max.is_finite()) || y_min >= y_max {
            return Err(GridError::InvalidRange { y_min, y_max });
        }
        Ok(GridSpec { nx, ny, y_min, y_max })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    /// Number of sample points (either convention).
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    /// True only for the unconstructible empty grid; present for lint
    /// symmetry with [`len`](Self::len).
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index of column `i`, row `j`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    /// Node abscissa `i/nx` (column `nx` would wrap onto column 0).
    pub fn node_x(&self, i: usize) -> f64 {
        i as f64 / self.nx as f64
    }

    /// Node ordinate: `ny` rows spaced evenly with rows 0 and `ny-1` on
    /// the boundary.
    pub fn node_y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.node_step_y()
    }

    /// Node spacing in `x`.
    pub fn node_step_x(&self) -> f64 {
        1.0 / self.nx as f64
    }

    /// Node spacing in `y`.
    pub fn node_step_y(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    /// Center abscissa of cell column `i`.
    pub fn center_x(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.nx as f64
    }

    /// Center ordinate of cell row `j`.
    pub fn center_y(&self, j: usize) -> f64 {
        self.y_min + (j as f64 + 0.5) * self.cell_step_y()
    }

    /// Cell width in `x` (equals [`node_step_x`](Self::node_step_x)).
    pub fn cell_step_x(&self) -> f64 {
        1.0 / self.nx as f64
    }

    /// Cell height in `y`.
    pub fn cell_step_y(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }
}

/// The three metric coefficient functions sampled at the nodes of a grid:
/// `gxx = -E`, `gxy = F`, `gyy = G`. Construction verifies the pointwise
/// Lorentzian condition eagerly, so every field is usable with the
/// curvature operations.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    grid: GridSpec,
    gxx: Vec<f64>,
    gxy: Vec<f64>,
    gyy: Vec<f64>,
}

impl MetricField {
    /// Samples `coeffs(x, y) = (gxx, gxy, gyy)` at every node.
    ///
    /// # Errors
    ///
    /// [`FieldError::NotFinite`] or [`FieldError::Signature`] naming the
    /// first offending node (row-major order).
    pub fn from_fn<F>(grid: GridSpec, mut coeffs: F) -> Result<MetricField, FieldError>
    where
        F: FnMut(f64, f64) -> (f64, f64, f64),
    {
        let mut gxx = Vec::with_capacity(grid.len());
        let mut gxy = Vec::with_capacity(grid.len());
        let mut gyy = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let (a, b, c) = coeffs(grid.node_x(i), grid.node_y(j));
                if !(a.is_finite() && b.is_finite() && c.is_finite()) {
                    return Err(FieldError::NotFinite { i, j });
                }
                let det = a * c - b * b;
                if !det.is_finite() {
                    return Err(FieldError::NotFinite { i, j });
                }
                if det >= 0.0 {
                    return Err(FieldError::Signature { i, j, det });
                }
                gxx.push(a);
                gxy.push(b);
                gyy.push(c);
            }
        }
        Ok(MetricField { grid, gxx, gxy, gyy })
    }

    /// The constant field of a flat metric; infallible because the
    /// signature invariant of [`FlatMetric`] is exactly the pointwise
    /// condition.
    pub fn constant(grid: GridSpec, m: &FlatMetric) -> MetricField {
        MetricField::from_fn(grid, |_, _| (-m.e(), m.f(), m.g()))
            .expect("a Lorentzian metric satisfies the pointwise signature condition")
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn gxx(&self, i: usize, j: usize) -> f64 {
        self.gxx[self.grid.index(i, j)]
    }

    pub fn gxy(&self, i: usize, j: usize) -> f64 {
        self.gxy[self.grid.index(i, j)]
    }

    pub fn gyy(&self, i: usize, j: usize) -> f64 {
        self.gyy[self.grid.index(i, j)]
    }

    /// The pointwise determinant `gxx*gyy - gxy^2` (negative everywhere).
    pub fn det(&self, i: usize, j: usize) -> f64 {
        let k = self.grid.index(i, j);
        self.gxx[k] * self.gyy[k] - self.gxy[k] * self.gxy[k]
    }
}

/// A scalar field sampled on the nodes of a grid (Gaussian curvature, or
/// any node-sampled scalar derived from one).
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl CurvatureField {
    /// Wraps raw row-major values.
    ///
    /// # Errors
    ///
    /// [`FieldError::GridMismatch`] when the length is not `grid.len()`.
    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<CurvatureField, FieldError> {
        if values.len() != grid.len() {
            return Err(FieldError::GridMismatch);
        }
        Ok(CurvatureField { grid, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest magnitude over all nodes.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(math::abs(*v)))
    }

    /// Largest magnitude excluding the two `y`-boundary rows, where the
    /// one-sided stencils have larger constants.
    pub fn max_abs_interior(&self) -> f64 {
        let nx = self.grid.nx();
        let interior = &self.values[nx..self.values.len() - nx];
        interior.iter().fold(0.0, |m, v| m.max(math::abs(*v)))
    }
}

/// A coordinate direction on the cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

// ---------------------------------------------------------------------
// Difference stencils. All formulas are algebraically rearranged into
// sums of local differences so that a constant input yields exact zeros.

fn d_x(grid: &GridSpec, f: &[f64]) -> Vec<f64> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let inv = 1.0 / (2.0 * grid.node_step_x());
    let mut out = Vec::with_capacity(f.len());
    for j in 0..ny {
        let row = j * nx;
        for i in 0..nx {
            let fp = f[row + (i + 1) % nx];
            let fm = f[row + (i + nx - 1) % nx];
            out.push((fp - fm) * inv);
        }
    }
    out
}

fn d_xx(grid: &GridSpec, f: &[f64]) -> Vec<f64> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let h = grid.node_step_x();
    let inv = 1.0 / (h * h);
    let mut out = Vec::with_capacity(f.len());
    for j in 0..ny {
        let row = j * nx;
        for i in 0..nx {
            let f0 = f[row + i];
            let fp = f[row + (i + 1) % nx];
            let fm = f[row + (i + nx - 1) % nx];
            out.push(((fp - f0) + (fm - f0)) * inv);
        }
    }
    out
}

fn d_y(grid: &GridSpec, f: &[f64]) -> Vec<f64> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let inv = 1.0 / (2.0 * grid.node_step_y());
    let mut out = Vec::with_capacity(f.len());
    let at = |i: usize, j: usize| f[j * nx + i];
    for j in 0..ny {
        for i in 0..nx {
            // -3f0 + 4f1 - f2 in difference form at the boundary rows,
            // fp - fm in the interior.
            let d = if j == 0 {
                3.0 * (at(i, 1) - at(i, 0)) + (at(i, 1) - at(i, 2))
            } else if j == ny - 1 {
                3.0 * (at(i, ny - 1) - at(i, ny - 2)) + (at(i, ny - 3) - at(i, ny - 2))
            } else {
                at(i, j + 1) - at(i, j - 1)
            };
            out.push(d * inv);
        }
    }
    out
}

fn d_yy(grid: &GridSpec, f: &[f64]) -> Vec<f64> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let h = grid.node_step_y();
    let inv = 1.0 / (h * h);
    let mut out = Vec::with_capacity(f.len());
    let at = |i: usize, j: usize| f[j * nx + i];
    // Second difference of three consecutive rows, exact zero on equal
    // values.
    let second = |i: usize, j0: usize, j1: usize, j2: usize| {
        (at(i, j0) - at(i, j1)) + (at(i, j2) - at(i, j1))
    };
    for j in 0..ny {
        for i in 0..nx {
            // 2f0 - 5f1 + 4f2 - f3 = 2*(f0 - 2f1 + f2) - (f1 - 2f2 + f3)
            // at the boundary rows (second order, one-sided).
            let d = if j == 0 {
                2.0 * second(i, 0, 1, 2) - second(i, 1, 2, 3)
            } else if j == ny - 1 {
                2.0 * second(i, ny - 1, ny - 2, ny - 3) - second(i, ny - 2, ny - 3, ny - 4)
            } else {
                second(i, j - 1, j, j + 1)
            };
            out.push(d * inv);
        }
    }
    out
}

fn det3(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> f64 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

/// Gaussian curvature of a sampled metric via the Brioschi formula.
///
/// With `a = gxx`, `b = gxy`, `c = gyy`:
///
/// ```text
///     | -a_yy/2 + b_xy - c_xx/2   a_x/2   b_x - a_y/2 |   | 0       a_y/2   c_x/2 |
///     | b_y - c_x/2               a       b           | - | a_y/2   a       b     |
///     | c_y/2                     b       c           |   | c_x/2   b       c     |
/// K = -----------------------------------------------------------------------------
///                                  (a c - b^2)^2
/// ```
///
/// Constant fields produce exactly zero at every node because all
/// stencils are difference-formed. Values on the two `y`-boundary rows
/// come from one-sided stencils; keep them out of tight tolerance norms.
pub fn brioschi_curvature(field: &MetricField) -> CurvatureField {
    let grid = field.grid;
    let (a, b, c) = (&field.gxx, &field.gxy, &field.gyy);

    let ax = d_x(&grid, a);
    let ay = d_y(&grid, a);
    let ayy = d_yy(&grid, a);
    let bx = d_x(&grid, b);
    let by = d_y(&grid, b);
    let bxy = d_x(&grid, &by);
    let cx = d_x(&grid, c);
    let cy = d_y(&grid, c);
    let cxx = d_xx(&grid, c);

    let mut values = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let m1 = det3(
            [
                -0.5 * ayy[k] + bxy[k] - 0.5 * cxx[k],
                0.5 * ax[k],
                bx[k] - 0.5 * ay[k],
            ],
            [by[k] - 0.5 * cx[k], a[k], b[k]],
            [0.5 * cy[k], b[k], c[k]],
        );
        let m2 = det3(
            [0.0, 0.5 * ay[k], 0.5 * cx[k]],
            [0.5 * ay[k], a[k], b[k]],
            [0.5 * cx[k], b[k], c[k]],
        );
        let det = a[k] * c[k] - b[k] * b[k];
        values.push((m1 - m2) / (det * det));
    }
    CurvatureField { grid, values }
}

/// The single independent Riemann component in two dimensions,
/// `R_1212 = K * det g`, per node.
///
/// # Errors
///
/// [`FieldError::GridMismatch`] when the two inputs are sampled on
/// different grids.
pub fn riemann_component(
    field: &MetricField,
    curvature: &CurvatureField,
) -> Result<CurvatureField, FieldError> {
    if field.grid != curvature.grid {
        return Err(FieldError::GridMismatch);
    }
    let values = (0..field.grid.len())
        .map(|k| {
            let det = field.gxx[k] * field.gyy[k] - field.gxy[k] * field.gxy[k];
            curvature.values[k] * det
        })
        .collect();
    Ok(CurvatureField { grid: field.grid, values })
}

/// Residual of the Killing equation for a coordinate direction: since the
/// flow of `∂x` (or `∂y`) is a coordinate translation, its Lie derivative
/// of the metric is just the directional derivative of each coefficient,
/// and the residual is `max |∂ g_ij|` over all nodes and components.
/// Exactly zero when the coefficients do not depend on that coordinate.
pub fn killing_residual(field: &MetricField, direction: Axis) -> f64 {
    let grid = &field.grid;
    let deriv: fn(&GridSpec, &[f64]) -> Vec<f64> = match direction {
        Axis::X => d_x,
        Axis::Y => d_y,
    };
    let mut max = 0.0f64;
    for coeff in [&field.gxx, &field.gxy, &field.gyy] {
        for v in deriv(grid, coeff) {
            max = max.max(math::abs(v));
        }
    }
    max
}

/// A translation `(x, y) ↦ (x + dx mod 1, y + dy)` of the cylinder.
///
/// Translations act transitively and are isometries of every
/// constant-coefficient metric — the pullback of the metric along a
/// translation is the metric itself, coefficient by coefficient, because
/// the coefficients do not depend on the point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Translation {
    dx: f64,
    dy: f64,
}

impl Translation {
    /// Builds a translation, canonicalizing `dx` into `[0, 1)`.
    pub fn new(dx: f64, dy: f64) -> Translation {
        Translation { dx: math::wrap_unit(dx), dy }
    }

    /// The unique translation with `apply(p) = q`.
    pub fn between(p: CylinderPoint, q: CylinderPoint) -> Translation {
        Translation::new(q.x() - p.x(), q.y() - p.y())
    }

    /// Offset along the periodic direction, in `[0, 1)`.
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Offset along `y`.
    pub fn dy(&self) -> f64 {
        self.dy
    }

    /// Image of a point.
    pub fn apply(&self, p: CylinderPoint) -> CylinderPoint {
        CylinderPoint::new(p.x() + self.dx, p.y() + self.dy)
    }

    /// The composite "`self`, then `other`" (translations commute, so the
    /// order is immaterial).
    pub fn then(&self, other: &Translation) -> Translation {
        Translation::new(self.dx + other.dx, self.dy + other.dy)
    }
}
