//! Offsets at distance `d` along the unit normal.
//!
//! Sides are tied to the direction of travel. `Left` uses the normal obtained by turning the
//! tangent a quarter turn counter-clockwise; `Right` the opposite. Wherever the progenitor is
//! regular the chosen normal varies continuously, so the offset never jumps from one side to the
//! other when the curve crosses an axis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{cayley_strand, Branch, CayleyParams};
use crate::curve::{CurveError, Interval, ParametricCurve};
use crate::geom::{point_in_polygon, Vec2};
use crate::polyline::{sample_with, ArcKind, Placement, PolyArc, Polyline, SampleOptions, Side};
use crate::tol;

/// Which offsets an [`OffsetSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sides {
    Left,
    Right,
    Both,
}

impl Sides {
    pub fn expand(self) -> &'static [Side] {
        match self {
            Sides::Left => &[Side::Left],
            Sides::Right => &[Side::Right],
            Sides::Both => &[Side::Left, Side::Right],
        }
    }
}

impl From<Side> for Sides {
    fn from(s: Side) -> Self {
        match s {
            Side::Left => Sides::Left,
            Side::Right => Sides::Right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OffsetError {
    #[error("offset distance must be finite and positive, got {0}")]
    BadDistance(f64),
    #[error("operation needs a single side, got both")]
    AmbiguousSide,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Progenitor, distance and side(s).
#[derive(Debug, Clone)]
pub struct OffsetSpec {
    progenitor: ParametricCurve,
    d: f64,
    sides: Sides,
}

impl OffsetSpec {
    pub fn new(progenitor: ParametricCurve, d: f64, sides: impl Into<Sides>) -> Result<Self, OffsetError> {
        if !(d.is_finite() && d > 0.0) {
            return Err(OffsetError::BadDistance(d));
        }
        Ok(OffsetSpec { progenitor, d, sides: sides.into() })
    }

    pub fn progenitor(&self) -> &ParametricCurve {
        &self.progenitor
    }

    pub fn distance(&self) -> f64 {
        self.d
    }

    pub fn sides(&self) -> Sides {
        self.sides
    }

    /// The same progenitor and distance restricted to one side.
    pub fn with_side(&self, side: Side) -> OffsetSpec {
        OffsetSpec { progenitor: self.progenitor.clone(), d: self.d, sides: side.into() }
    }

    /// The single side, or an error for [`Sides::Both`].
    pub fn side(&self) -> Result<Side, OffsetError> {
        match self.sides {
            Sides::Left => Ok(Side::Left),
            Sides::Right => Ok(Side::Right),
            Sides::Both => Err(OffsetError::AmbiguousSide),
        }
    }

    /// `+d` on the right, `-d` on the left; the cusp condition is `1 + k * d_signed = 0`.
    pub fn signed_distance(&self, side: Side) -> f64 {
        signed_distance(self.d, side)
    }
}

pub fn signed_distance(d: f64, side: Side) -> f64 {
    match side {
        Side::Left => -d,
        Side::Right => d,
    }
}

/// Unit normal on the requested side of travel.
pub fn unit_normal(c: &ParametricCurve, t: f64, side: Side) -> Result<Vec2, CurveError> {
    let jet = c.jet(t)?;
    let speed = jet.speed();
    if !(speed > tol::SPEED_FLOOR) {
        return Err(CurveError::Degenerate { t, speed });
    }
    let left = jet.d1.perp() * (1.0 / speed);
    Ok(match side {
        Side::Left => left,
        Side::Right => -left,
    })
}

/// Offset point with its parameter derivative and the local quantities that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetJet {
    pub pos: Vec2,
    pub d1: Vec2,
    /// Progenitor point.
    pub base: Vec2,
    /// Progenitor speed.
    pub speed: f64,
    /// Progenitor signed curvature.
    pub curvature: f64,
    /// `1 + k * d_signed`; the offset speed is `speed * |stretch|`.
    pub stretch: f64,
}

/// Offset point and derivative `O'(t) = |P'| (1 + k d_signed) T` on one side.
pub fn offset_jet(c: &ParametricCurve, d: f64, side: Side, t: f64) -> Result<OffsetJet, CurveError> {
    let jet = c.jet(t)?;
    let speed = jet.speed();
    if !(speed > tol::SPEED_FLOOR) {
        return Err(CurveError::Degenerate { t, speed });
    }
    let tangent = jet.d1 * (1.0 / speed);
    let normal = match side {
        Side::Left => tangent.perp(),
        Side::Right => -tangent.perp(),
    };
    let k = jet.curvature();
    let stretch = 1.0 + k * signed_distance(d, side);
    Ok(OffsetJet { pos: jet.pos + normal * d, d1: jet.d1 * stretch, base: jet.pos, speed, curvature: k, stretch })
}

/// `progenitor(t) + d * unit_normal(t, side)` for a single-sided spec.
pub fn offset_point(spec: &OffsetSpec, t: f64) -> Result<Vec2, OffsetError> {
    let side = spec.side()?;
    Ok(offset_point_on(&spec.progenitor, spec.d, side, t)?)
}

pub fn offset_point_on(c: &ParametricCurve, d: f64, side: Side, t: f64) -> Result<Vec2, CurveError> {
    Ok(c.point(t)? + unit_normal(c, t, side)? * d)
}

/// Signed curvature of the offset as parametrized by `t`: `k / |1 + k d_signed|`.
///
/// The magnitude is the curvature of the parallel curve; the sign follows the offset's own
/// direction of travel, which reverses past a cusp.
pub fn offset_curvature(spec: &OffsetSpec, t: f64) -> Result<f64, OffsetError> {
    let side = spec.side()?;
    let k = crate::curve::curvature(&spec.progenitor, t)?;
    let stretch = 1.0 + k * spec.signed_distance(side);
    if stretch.abs() <= tol::CUSP_TOL {
        return Err(CurveError::CuspDegenerate { t }.into());
    }
    Ok(k / stretch.abs())
}

/// Default parameter range: the curve's trace range, else one turn.
pub fn default_range(c: &ParametricCurve) -> Interval {
    c.trace_range().unwrap_or(Interval::new(0.0, 2.0 * PI))
}

/// Sample every side of `spec` on a uniform grid of `n` parameters over `range`.
pub fn sample_offset(spec: &OffsetSpec, range: Interval, n: usize) -> Polyline {
    sample_offset_with(spec, range, n, &SampleOptions::default())
}

pub fn sample_offset_with(spec: &OffsetSpec, range: Interval, n: usize, opts: &SampleOptions) -> Polyline {
    let mut out = Polyline::default();
    for &side in spec.sides.expand() {
        let c = &spec.progenitor;
        out.extend(sample_with(c, range, n, opts, ArcKind::Offset(side), |t| offset_point_on(c, spec.d, side, t)));
    }
    out
}

/// One single-sided offset in an [`OffsetFamily`].
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub label: String,
    pub curve: ParametricCurve,
    pub d: f64,
    pub side: Side,
    /// Member whose point set is the mirror image of this one in the x-axis, at equal parameter.
    pub mirror: Option<usize>,
}

impl FamilyMember {
    pub fn point(&self, t: f64) -> Result<Vec2, CurveError> {
        offset_point_on(&self.curve, self.d, self.side, t)
    }

    pub fn jet(&self, t: f64) -> Result<OffsetJet, CurveError> {
        offset_jet(&self.curve, self.d, self.side, t)
    }

    pub fn signed_distance(&self) -> f64 {
        signed_distance(self.d, self.side)
    }
}

/// The single-sided offsets that make up one offset distance, possibly over several progenitor
/// branches, plus the x-axis mirror pairing between them.
#[derive(Debug, Clone, Default)]
pub struct OffsetFamily {
    pub members: Vec<FamilyMember>,
}

impl OffsetFamily {
    /// Every side of one `OffsetSpec`; no mirror pairing.
    pub fn from_spec(spec: &OffsetSpec) -> Self {
        let members = spec
            .sides
            .expand()
            .iter()
            .map(|&side| FamilyMember {
                label: format!("{}/{}", spec.progenitor.name(), side.as_str()),
                curve: spec.progenitor.clone(),
                d: spec.d,
                side,
                mirror: None,
            })
            .collect();
        OffsetFamily { members }
    }

    /// Both strands of a Cayley oval. The lower strand is the mirror of the upper at equal
    /// parameter with the direction of travel reversed, so upper/left pairs with lower/right.
    pub fn cayley(p: &CayleyParams, d: f64, sides: Sides) -> Result<Self, OffsetError> {
        if !(d.is_finite() && d > 0.0) {
            return Err(OffsetError::BadDistance(d));
        }
        let mut members = Vec::new();
        let mut branch_of = Vec::new();
        for branch in [Branch::Upper, Branch::Lower] {
            let curve = cayley_strand(p, branch);
            for &side in sides.expand() {
                members.push(FamilyMember {
                    label: format!("{}/{}", branch.as_str(), side.as_str()),
                    curve: curve.clone(),
                    d,
                    side,
                    mirror: None,
                });
                branch_of.push(branch);
            }
        }
        for i in 0..members.len() {
            let side = members[i].side.opposite();
            members[i].mirror = (0..members.len()).find(|&j| branch_of[j] != branch_of[i] && members[j].side == side);
        }
        Ok(OffsetFamily { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Sample each member over `range`, or over its own trace range.
    pub fn sample(&self, range: Option<Interval>, n: usize, opts: &SampleOptions) -> Vec<Polyline> {
        self.members
            .iter()
            .map(|m| {
                let r = range.unwrap_or_else(|| default_range(&m.curve));
                let mut p = sample_with(&m.curve, r, n, opts, ArcKind::Offset(m.side), |t| m.point(t));
                for arc in &mut p.arcs {
                    arc.label = m.label.clone();
                }
                p
            })
            .collect()
    }
}

/// Label an arc internal or external relative to closed progenitor outlines by majority vote of
/// its points. Returns `None` when no outline is given.
pub fn classify_placement(arc: &PolyArc, outlines: &[Vec<Vec2>]) -> Option<Placement> {
    if outlines.is_empty() || arc.is_empty() {
        return None;
    }
    let inside = arc.points.iter().filter(|p| outlines.iter().any(|o| point_in_polygon(**p, o))).count();
    Some(if 2 * inside > arc.len() { Placement::Internal } else { Placement::External })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{circle, ellipse, line};

    #[test]
    fn circle_normals() {
        let c = circle(1.0);
        let l = unit_normal(&c, 0.0, Side::Left).unwrap();
        let r = unit_normal(&c, 0.0, Side::Right).unwrap();
        assert!((l - Vec2::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((r - Vec2::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normals_are_unit() {
        let c = ellipse(3.0, 0.7);
        for i in 0..100 {
            let t = 0.063 * i as f64;
            let n = unit_normal(&c, t, Side::Left).unwrap();
            assert!((n.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inward_offset_of_unit_circle() {
        let spec = OffsetSpec::new(circle(1.0), 0.5, Side::Left).unwrap();
        let p = offset_point(&spec, 0.0).unwrap();
        assert!((p - Vec2::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ellipse_offsets_at_vertex() {
        let out = OffsetSpec::new(ellipse(5.0, 3.0), 1.0, Side::Right).unwrap();
        let inn = out.with_side(Side::Left);
        assert!((offset_point(&out, 0.0).unwrap() - Vec2::new(6.0, 0.0)).norm() < 1e-14);
        assert!((offset_point(&inn, 0.0).unwrap() - Vec2::new(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn both_sides_is_rejected_where_ambiguous() {
        let spec = OffsetSpec::new(circle(1.0), 0.5, Sides::Both).unwrap();
        assert_eq!(offset_point(&spec, 0.0), Err(OffsetError::AmbiguousSide));
        assert!(matches!(OffsetSpec::new(circle(1.0), 0.0, Sides::Both), Err(OffsetError::BadDistance(_))));
    }

    #[test]
    fn circle_offset_curvature() {
        let out = OffsetSpec::new(circle(1.0), 0.5, Side::Right).unwrap();
        assert!((offset_curvature(&out, 0.3).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        let inn = out.with_side(Side::Left);
        assert!((offset_curvature(&inn, 0.3).unwrap() - 2.0).abs() < 1e-14);
        let cusp = OffsetSpec::new(circle(1.0), 1.0, Side::Left).unwrap();
        assert!(matches!(offset_curvature(&cusp, 0.3), Err(OffsetError::Curve(CurveError::CuspDegenerate { .. }))));
    }

    #[test]
    fn outward_circle_sampling() {
        let spec = OffsetSpec::new(circle(1.0), 0.5, Side::Right).unwrap();
        let p = sample_offset(&spec, Interval::new(0.0, 2.0 * PI), 1000);
        assert_eq!(p.arcs.len(), 1);
        let dev = p.points().map(|q| (q.norm() - 1.5).abs()).fold(0.0, f64::max);
        assert!(dev <= 1e-9);
        assert!(p.arcs[0].is_closed(1e-12));
    }

    #[test]
    fn two_point_line() {
        let spec = OffsetSpec::new(line(Vec2::ZERO, Vec2::new(1.0, 0.0)), 0.25, Side::Left).unwrap();
        let p = sample_offset(&spec, Interval::new(0.0, 1.0), 2);
        assert_eq!(p.arcs.len(), 1);
        assert_eq!(p.arcs[0].points, vec![Vec2::new(0.0, 0.25), Vec2::new(1.0, 0.25)]);
    }

    #[test]
    fn cayley_family_mirror_pairs() {
        let p = CayleyParams::new(1.0, 1.5).unwrap();
        let fam = OffsetFamily::cayley(&p, 0.3, Sides::Both).unwrap();
        assert_eq!(fam.len(), 4);
        for (i, m) in fam.members.iter().enumerate() {
            let j = m.mirror.unwrap();
            assert_eq!(fam.members[j].mirror, Some(i));
            let t = 0.6;
            let a = m.point(t).unwrap();
            let b = fam.members[j].point(t).unwrap();
            assert!((a.mirror_x() - b).norm() < 1e-12);
        }
    }

    #[test]
    fn placement_by_outline() {
        let c = circle(1.0);
        let spec = OffsetSpec::new(c.clone(), 0.3, Sides::Both).unwrap();
        let range = Interval::new(0.0, 2.0 * PI);
        let outline = crate::polyline::sample_curve(&c, range, 200, &SampleOptions::default()).arcs[0].points.clone();
        let p = sample_offset(&spec, range, 200);
        let tags: Vec<_> = p.arcs.iter().map(|a| classify_placement(a, std::slice::from_ref(&outline))).collect();
        assert_eq!(tags, vec![Some(Placement::Internal), Some(Placement::External)]);
    }
}
