//! Numerical thresholds used across the engine.

/// Parametric speed below which a point is treated as degenerate.
pub const SPEED_FLOOR: f64 = 1e-9;

/// Relative finite-difference step; the absolute step is `max(FD_STEP, FD_STEP * |t|)`.
pub const FD_STEP: f64 = 1e-6;

/// Tolerance for `|e - 1|` when classifying floating-point Cayley parameters.
pub const LEMNISCATE_TOL: f64 = 1e-12;

/// Bifocal residual accepted as "on the true oval" for a single point.
pub const ON_OVAL_TOL: f64 = 1e-6;

/// Median bifocal residual below which a contour loop is kept as a true oval component.
pub const TRUE_LOOP_MEDIAN_TOL: f64 = 1e-3;

/// Cusp certificate on `|1 + k * d_signed|`.
pub const CUSP_TOL: f64 = 1e-9;

/// Minimum parameter separation `|s - t|` for a self-crossing.
pub const SEP_TOL: f64 = 1e-6;

/// Planar distance under which two singular points are the same point.
pub const POINT_TOL: f64 = 1e-8;

/// Residual target for Newton refinement of crossing systems.
pub const NEWTON_TOL: f64 = 1e-10;

/// Crossing angle below which a self-contact is reported as tangential.
pub const TANGENCY_ANGLE: f64 = 1e-3;

/// Bisection stops once the bracket is at most this wide.
pub const BISECTION_WIDTH: f64 = 1e-12;

/// Offset speed bound, relative to `max(1, progenitor speed)`, for a stationary point to count as a cusp.
pub const CUSP_SPEED_REL: f64 = 1e-6;

/// Default gap threshold as a multiple of the median edge length of an arc.
pub const EDGE_GAP_FACTOR: f64 = 50.0;

/// Polyline crossings closer than this are one seed.
pub const SEED_MERGE: f64 = 1e-6;
