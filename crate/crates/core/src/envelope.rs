//! Envelopes of one-parameter circle families centred on a parametric curve.
//!
//! For `F(x, y, t) = |P - c(t)|^2 - r(t)^2` the system `F = 0, dF/dt = 0` is solved per `t` in
//! closed form: the envelope points are where the circle meets the line
//! `(P - c) . c' = -r r'`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveError, Interval, Jet, ParametricCurve};
use crate::geom::Vec2;
use crate::polyline::{sample_with_reason, ArcKind, GapReason, Polyline, SampleOptions, Side};
use crate::tol;

/// `|cos(c_x)|` is treated as non-differentiable when `|cos(c_x)|` is below this.
const KINK_TOL: f64 = 1e-12;
/// Relative slack on `1 - (r'/|c'|)^2` for the tangential case.
const TANGENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvelopeError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("radius is not differentiable at t = {t}")]
    RadiusKink { t: f64 },
    #[error("radius {r} at t = {t} is negative or not finite")]
    BadRadius { t: f64, r: f64 },
}

type RadiusFn = dyn Fn(f64, &Jet) -> Result<(f64, f64), EnvelopeError> + Send + Sync;

/// Radius law `r(t)` with its derivative.
#[derive(Clone)]
pub enum Radius {
    Constant(f64),
    /// `|cos x_c(t)|`, where `x_c` is the x coordinate of the centre.
    AbsCosCenterX,
    /// Arbitrary `(r, r')` from the parameter and the centre jet.
    Custom(Arc<RadiusFn>),
}

impl fmt::Debug for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Constant(r) => write!(f, "Constant({r})"),
            Radius::AbsCosCenterX => write!(f, "AbsCosCenterX"),
            Radius::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Radius {
    fn eval(&self, t: f64, center: &Jet) -> Result<(f64, f64), EnvelopeError> {
        let (r, dr) = match self {
            Radius::Constant(r) => (*r, 0.0),
            Radius::AbsCosCenterX => {
                let (s, c) = center.pos.x.sin_cos();
                if c.abs() <= KINK_TOL {
                    return Err(EnvelopeError::RadiusKink { t });
                }
                (c.abs(), -c.signum() * s * center.d1.x)
            }
            Radius::Custom(f) => f(t, center)?,
        };
        if !(r.is_finite() && r >= 0.0 && dr.is_finite()) {
            return Err(EnvelopeError::BadRadius { t, r });
        }
        Ok((r, dr))
    }
}

/// Circles of radius `radius(t)` centred at `center(t)`.
#[derive(Debug, Clone)]
pub struct CircleFamily {
    pub center: ParametricCurve,
    pub radius: Radius,
}

impl CircleFamily {
    pub fn new(center: ParametricCurve, radius: Radius) -> Self {
        CircleFamily { center, radius }
    }

    pub fn constant(center: ParametricCurve, r: f64) -> Self {
        Self::new(center, Radius::Constant(r))
    }
}

/// Why a parameter contributes no envelope point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoPointReason {
    /// `|r'| > |c'|`: consecutive circles are nested near `t`.
    RadiusTooSteep,
}

/// Envelope points contributed by one member of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopePoints {
    /// Left of travel first, then right.
    Two([Vec2; 2]),
    /// `|r'| = |c'|`; the characteristic line is tangent to the circle.
    Tangential(Vec2),
    Empty(NoPointReason),
}

impl EnvelopePoints {
    pub fn points(&self) -> Vec<Vec2> {
        match *self {
            EnvelopePoints::Two(p) => p.to_vec(),
            EnvelopePoints::Tangential(p) => vec![p],
            EnvelopePoints::Empty(_) => Vec::new(),
        }
    }

    pub fn on_side(&self, side: Side) -> Option<Vec2> {
        match (*self, side) {
            (EnvelopePoints::Two([l, _]), Side::Left) => Some(l),
            (EnvelopePoints::Two([_, r]), Side::Right) => Some(r),
            (EnvelopePoints::Tangential(p), _) => Some(p),
            _ => None,
        }
    }
}

/// Solve `F = 0, dF/dt = 0` at parameter `t`.
pub fn envelope_circle_family(f: &CircleFamily, t: f64) -> Result<EnvelopePoints, EnvelopeError> {
    let jet = f.center.jet(t)?;
    let speed = jet.speed();
    if !(speed > tol::SPEED_FLOOR) {
        return Err(CurveError::Degenerate { t, speed }.into());
    }
    let (r, dr) = f.radius.eval(t, &jet)?;
    let tangent = jet.d1 * (1.0 / speed);
    let normal = tangent.perp();
    let q = dr / speed;
    let along = -r * q;
    let disc = 1.0 - q * q;
    if disc < -TANGENT_TOL {
        return Ok(EnvelopePoints::Empty(NoPointReason::RadiusTooSteep));
    }
    let foot = jet.pos + tangent * along;
    if disc.abs() <= TANGENT_TOL {
        return Ok(EnvelopePoints::Tangential(foot));
    }
    let across = r * disc.sqrt();
    Ok(EnvelopePoints::Two([foot + normal * across, foot - normal * across]))
}

/// Sample both envelope sheets over `range`.
pub fn sample_envelope(f: &CircleFamily, range: Interval, n: usize, opts: &SampleOptions) -> Polyline {
    let mut out = Polyline::default();
    for side in [Side::Left, Side::Right] {
        out.extend(sample_with_reason(&f.center, range, n, opts, ArcKind::Envelope(side), |t| {
            match envelope_circle_family(f, t) {
                Ok(points) => points.on_side(side).ok_or(GapReason::NoEnvelopePoint),
                Err(EnvelopeError::Curve(CurveError::Degenerate { .. })) => Err(GapReason::SpeedCollapse),
                Err(_) => Err(GapReason::EvaluationFailure),
            }
        }));
    }
    out
}
