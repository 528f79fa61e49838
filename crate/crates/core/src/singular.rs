//! Cusps and crunodes of offset curves.
//!
//! Cusps are found two ways: as roots of `1 + k d_signed` (curvature) and as roots of the
//! offset's x-velocity where the whole offset velocity collapses (stationary derivative).
//! Crunodes are seeded from crossings of sampled polylines and refined with a damped 2-D Newton
//! iteration on `offset_a(s) - offset_b(t) = 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{Interval, ParametricCurve};
use crate::geom::{cmp_xy, Vec2};
use crate::intersect::{polyline_oracle, Seed};
use crate::offset::{FamilyMember, OffsetFamily, OffsetSpec};
use crate::polyline::{sample_with, ArcKind, Polyline, SampleOptions};
use crate::roots::{interior_grid, scan_roots};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularKind {
    Cusp,
    Crunode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    StationaryDeriv,
    CurvatureEq,
    PolylineOracle,
    NewtonRefined,
}

/// A located cusp or crunode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub kind: SingularKind,
    pub location: Vec2,
    /// `[t]` for a cusp, `[s, t]` for a crunode.
    pub params: Vec<f64>,
    /// Family member label per parameter.
    pub sources: Vec<String>,
    pub method: Method,
    /// `|1 + k d_signed|` for cusps, `|offset_a(s) - offset_b(t)|` for crunodes.
    pub residual: f64,
    /// Crossing angle below the tangency threshold: a contact, not a transversal crossing.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub tangential: bool,
}

impl SingularPoint {
    /// Tolerance the residual is held to.
    pub fn tolerance(&self) -> f64 {
        match self.kind {
            SingularKind::Cusp => tol::CUSP_TOL,
            SingularKind::Crunode => tol::NEWTON_TOL,
        }
    }
}

/// Canonical output order: by x, then y, then kind.
pub fn sort_canonical(points: &mut [SingularPoint]) {
    points.sort_by(|a, b| cmp_xy(&a.location, &b.location).then_with(|| (a.kind as u8).cmp(&(b.kind as u8))));
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchRangeError {
    #[error("search range has no intervals")]
    NoIntervals,
    #[error("interval {0} is empty or not finite")]
    BadInterval(usize),
    #[error("resolution {0} is below the minimum of 8")]
    LowResolution(usize),
}

/// Parameter intervals to search and the number of grid points per interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRange {
    intervals: Vec<Interval>,
    resolution: usize,
}

impl SearchRange {
    pub const MIN_RESOLUTION: usize = 8;

    pub fn new(intervals: Vec<Interval>, resolution: usize) -> Result<Self, SearchRangeError> {
        if intervals.is_empty() {
            return Err(SearchRangeError::NoIntervals);
        }
        if let Some(i) = intervals.iter().position(|iv| iv.is_empty() || !iv.lo.is_finite() || !iv.hi.is_finite()) {
            return Err(SearchRangeError::BadInterval(i));
        }
        if resolution < Self::MIN_RESOLUTION {
            return Err(SearchRangeError::LowResolution(resolution));
        }
        Ok(SearchRange { intervals, resolution })
    }

    pub fn single(range: Interval, resolution: usize) -> Result<Self, SearchRangeError> {
        Self::new(vec![range], resolution)
    }

    /// The curve's trace range, or one full turn.
    pub fn trace(curve: &ParametricCurve, resolution: usize) -> Result<Self, SearchRangeError> {
        Self::single(crate::offset::default_range(curve), resolution)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }
}

/// How cusp candidates are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspMethod {
    CurvatureEq,
    StationaryDeriv,
}

fn stretch(m: &FamilyMember, t: f64) -> Option<f64> {
    let jet = m.curve.jet(t).ok()?;
    if !(jet.speed() > tol::SPEED_FLOOR) {
        return None;
    }
    Some(1.0 + jet.curvature() * m.signed_distance())
}

/// Offset velocity from the progenitor jet, without going through curvature.
fn offset_velocity(m: &FamilyMember, t: f64) -> Option<(Vec2, f64)> {
    let j = m.curve.jet(t).ok()?;
    let v = j.speed();
    if !(v > tol::SPEED_FLOOR) {
        return None;
    }
    let ds = m.signed_distance();
    let dv = j.d1.dot(j.d2) / v;
    let vx = j.d1.x + ds * (j.d2.y * v - j.d1.y * dv) / (v * v);
    let vy = j.d1.y - ds * (j.d2.x * v - j.d1.x * dv) / (v * v);
    Some((Vec2::new(vx, vy), v))
}

fn member_grids(m: &FamilyMember, range: &SearchRange) -> Vec<Vec<f64>> {
    let mut grids = Vec::new();
    for iv in &range.intervals {
        for piece in m.curve.domain_intervals(*iv) {
            let share = (piece.width() / iv.width() * range.resolution as f64).ceil() as usize;
            grids.push(interior_grid(piece.lo, piece.hi, share.max(SearchRange::MIN_RESOLUTION)));
        }
    }
    grids
}

fn cusp_at(m: &FamilyMember, t: f64, method: Method) -> Option<SingularPoint> {
    let location = m.point(t).ok()?;
    let residual = stretch(m, t)?.abs();
    Some(SingularPoint {
        kind: SingularKind::Cusp,
        location,
        params: vec![t],
        sources: vec![m.label.clone()],
        method,
        residual,
        tangential: false,
    })
}

fn member_cusps(m: &FamilyMember, range: &SearchRange, method: CuspMethod) -> Vec<SingularPoint> {
    let mut out = Vec::new();
    for ts in member_grids(m, range) {
        let roots = match method {
            CuspMethod::CurvatureEq => scan_roots(|t| stretch(m, t), &ts),
            CuspMethod::StationaryDeriv => scan_roots(|t| offset_velocity(m, t).map(|(w, _)| w.x), &ts)
                .into_iter()
                .filter(|&t| offset_velocity(m, t).is_some_and(|(w, v)| w.norm() <= tol::CUSP_SPEED_REL * v.max(1.0)))
                .collect(),
        };
        let tag = match method {
            CuspMethod::CurvatureEq => Method::CurvatureEq,
            CuspMethod::StationaryDeriv => Method::StationaryDeriv,
        };
        out.extend(roots.into_iter().filter_map(|t| cusp_at(m, t, tag)));
    }
    out
}

fn push_unique(out: &mut Vec<SingularPoint>, p: SingularPoint) -> bool {
    if out.iter().any(|q| q.kind == p.kind && q.location.distance(p.location) <= tol::POINT_TOL) {
        return false;
    }
    out.push(p);
    true
}

/// Cusps of every member of `family`, deduplicated, mirror-completed and sorted.
pub fn family_cusps(family: &OffsetFamily, range: &SearchRange, method: CuspMethod) -> Vec<SingularPoint> {
    let found: Vec<Vec<SingularPoint>> = family.members.par_iter().map(|m| member_cusps(m, range, method)).collect();
    let mut out = Vec::new();
    for p in found.into_iter().flatten() {
        push_unique(&mut out, p);
    }
    complete_mirror(family, &mut out);
    sort_canonical(&mut out);
    out
}

/// Roots of `1 + k d_signed` on each side of `spec`.
pub fn find_cusps_curvature(spec: &OffsetSpec, range: &SearchRange) -> Vec<SingularPoint> {
    family_cusps(&OffsetFamily::from_spec(spec), range, CuspMethod::CurvatureEq)
}

/// Roots of the offset x-velocity at which the full offset velocity vanishes.
pub fn find_cusps_stationary(spec: &OffsetSpec, range: &SearchRange) -> Vec<SingularPoint> {
    family_cusps(&OffsetFamily::from_spec(spec), range, CuspMethod::StationaryDeriv)
}

/// Add the x-axis mirror image of every point whose members have declared mirrors, after
/// re-evaluating it on the mirror members.
fn complete_mirror(family: &OffsetFamily, points: &mut Vec<SingularPoint>) {
    let index = |label: &str| family.members.iter().position(|m| m.label == label);
    let mut extra = Vec::new();
    for p in points.iter() {
        let Some(mirrors) =
            p.sources.iter().map(|l| index(l).and_then(|i| family.members[i].mirror)).collect::<Option<Vec<usize>>>()
        else {
            continue;
        };
        let image = match p.kind {
            SingularKind::Cusp => cusp_at(&family.members[mirrors[0]], p.params[0], p.method),
            SingularKind::Crunode => {
                let (a, b) = (&family.members[mirrors[0]], &family.members[mirrors[1]]);
                match (a.point(p.params[0]), b.point(p.params[1])) {
                    (Ok(x), Ok(y)) => Some(SingularPoint {
                        location: x,
                        sources: vec![a.label.clone(), b.label.clone()],
                        residual: x.distance(y),
                        ..p.clone()
                    }),
                    _ => None,
                }
            }
        };
        if let Some(q) = image {
            extra.push(q);
        }
    }
    for q in extra {
        push_unique(points, q);
    }
}

/// Why a crossing seed did not become a crunode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum SeedRejection {
    /// Newton stalled above the residual tolerance.
    Diverged { residual: f64 },
    /// The two tangents are parallel, so the Newton step is undefined.
    SingularJacobian,
    /// Converged onto one point of one member (`|s - t|` below the separation tolerance).
    Coincident,
    /// An iterate left the seed's domain piece or could not be evaluated.
    LeftDomain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedDiagnostic {
    pub sources: [String; 2],
    pub s: f64,
    pub t: f64,
    pub point: Vec2,
    #[serde(flatten)]
    pub rejection: SeedRejection,
}

/// A polyline crossing, tagged with the family members it joins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSeed {
    pub members: [usize; 2],
    pub s: f64,
    pub t: f64,
    pub point: Vec2,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CrunodeReport {
    pub points: Vec<SingularPoint>,
    /// Deduplicated polyline crossings used as seeds.
    pub seeds: Vec<OracleSeed>,
    /// Seeds Newton could not turn into crunodes.
    pub diagnostics: Vec<SeedDiagnostic>,
    /// Largest sampled edge; seeds and refined points are at most this far apart.
    pub max_edge: f64,
}

/// Newton iteration knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { max_iter: 60, tol: tol::NEWTON_TOL, max_halvings: 40 }
    }
}

/// Result of a converged 2-D Newton solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSolution {
    pub s: f64,
    pub t: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Solve `a(s) = b(t)` starting from `(s, t)`, keeping `s` inside `piece_a` and `t` inside
/// `piece_b`. Steps are halved until the residual decreases.
pub fn newton_intersect(
    a: &FamilyMember,
    b: &FamilyMember,
    (mut s, mut t): (f64, f64),
    (piece_a, piece_b): (Interval, Interval),
    opts: &NewtonOptions,
) -> Result<NewtonSolution, SeedRejection> {
    let eval = |s: f64, t: f64| -> Option<(Vec2, Vec2, Vec2)> {
        if !(piece_a.contains(s) && piece_b.contains(t)) {
            return None;
        }
        let ja = a.jet(s).ok()?;
        let jb = b.jet(t).ok()?;
        Some((ja.pos - jb.pos, ja.d1, jb.d1))
    };
    let Some((mut g, mut da, mut db)) = eval(s, t) else {
        return Err(SeedRejection::LeftDomain);
    };
    for iter in 0..opts.max_iter {
        let r = g.norm();
        if r <= opts.tol {
            return Ok(NewtonSolution { s, t, residual: r, iterations: iter });
        }
        // [da, -db] (ds, dt)^T = -g
        let det = -da.cross(db);
        if det.abs() <= 1e-14 * da.norm() * db.norm() || det == 0.0 {
            return Err(SeedRejection::SingularJacobian);
        }
        let ds = -(g.cross(-db)) / det;
        let dt = -(da.cross(g)) / det;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..opts.max_halvings {
            let (sn, tn) = (s + lambda * ds, t + lambda * dt);
            if let Some((gn, dan, dbn)) = eval(sn, tn) {
                if gn.norm() < r {
                    (s, t, g, da, db) = (sn, tn, gn, dan, dbn);
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(SeedRejection::Diverged { residual: r });
        }
    }
    let r = g.norm();
    if r <= opts.tol {
        Ok(NewtonSolution { s, t, residual: r, iterations: opts.max_iter })
    } else {
        Err(SeedRejection::Diverged { residual: r })
    }
}

/// Angle in `[0, pi/2]` between two directions, ignoring orientation.
fn line_angle(u: Vec2, v: Vec2) -> f64 {
    u.cross(v).abs().atan2(u.dot(v).abs())
}

fn piece_of(curve: &ParametricCurve, range: &SearchRange, t: f64) -> Option<Interval> {
    range.intervals.iter().flat_map(|iv| curve.domain_intervals(*iv)).find(|p| p.contains(t))
}

/// Sample every member over the search range.
pub fn sample_family(family: &OffsetFamily, range: &SearchRange) -> Vec<Polyline> {
    let opts = SampleOptions::default();
    family
        .members
        .par_iter()
        .map(|m| {
            let mut p = Polyline::default();
            for iv in &range.intervals {
                p.extend(sample_with(&m.curve, *iv, range.resolution, &opts, ArcKind::Offset(m.side), |t| m.point(t)));
            }
            for arc in &mut p.arcs {
                arc.label = m.label.clone();
            }
            p
        })
        .collect()
}

/// Deduplicated crossings between all member pairs, self pairs included.
pub fn family_seeds(family: &OffsetFamily, polylines: &[Polyline]) -> Vec<OracleSeed> {
    let n = family.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let raw: Vec<Vec<(usize, usize, Seed)>> = pairs
        .par_iter()
        .map(|&(i, j)| polyline_oracle(&polylines[i], &polylines[j]).into_iter().map(|s| (i, j, s)).collect())
        .collect();
    let mut seeds: Vec<OracleSeed> = Vec::new();
    for (i, j, s) in raw.into_iter().flatten() {
        if seeds.iter().any(|q| q.point.distance(s.point) <= tol::SEED_MERGE) {
            continue;
        }
        seeds.push(OracleSeed { members: [i, j], s: s.s, t: s.t, point: s.point });
    }
    seeds.sort_by(|a, b| cmp_xy(&a.point, &b.point));
    seeds
}

/// Samples across the window around a close cusp pair.
const SWALLOWTAIL_SAMPLES: usize = 256;

/// Swallowtails smaller than the sampling grid close between two nearby cusps on one member.
/// Resample around each such pair and look for the self-crossing there.
fn swallowtail_seeds(family: &OffsetFamily, range: &SearchRange) -> Vec<OracleSeed> {
    let cusps = family_cusps(family, range, CuspMethod::CurvatureEq);
    let opts = SampleOptions { endpoint_inset: None, ..SampleOptions::default() };
    let mut seeds = Vec::new();
    for (i, m) in family.members.iter().enumerate() {
        let mut ts: Vec<f64> = cusps.iter().filter(|c| c.sources[0] == m.label).map(|c| c.params[0]).collect();
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            let gap = w[1] - w[0];
            let step = range.intervals.iter().map(|iv| iv.width()).fold(0.0, f64::max) / range.resolution as f64;
            let Some(piece) = piece_of(&m.curve, range, w[0]) else { continue };
            if gap > 8.0 * step || !piece.contains(w[1]) {
                continue;
            }
            let lo = (w[0] - gap).max(piece.lo + 1e-9 * piece.width());
            let hi = (w[1] + gap).min(piece.hi - 1e-9 * piece.width());
            let local = sample_with(
                &m.curve,
                Interval::new(lo, hi),
                SWALLOWTAIL_SAMPLES,
                &opts,
                ArcKind::Offset(m.side),
                |t| m.point(t),
            );
            for s in polyline_oracle(&local, &local) {
                seeds.push(OracleSeed { members: [i, i], s: s.s, t: s.t, point: s.point });
            }
        }
    }
    seeds
}

/// Crunodes between all members of `family`, including self-intersections of each member.
pub fn family_crunodes(family: &OffsetFamily, range: &SearchRange) -> CrunodeReport {
    let polylines = sample_family(family, range);
    let mut seeds = family_seeds(family, &polylines);
    for s in swallowtail_seeds(family, range) {
        if !seeds.iter().any(|q| q.point.distance(s.point) <= tol::SEED_MERGE) {
            seeds.push(s);
        }
    }
    seeds.sort_by(|a, b| cmp_xy(&a.point, &b.point));
    let max_edge = polylines.iter().flat_map(|p| p.arcs.iter().map(|a| a.max_edge())).fold(0.0, f64::max);
    let opts = NewtonOptions::default();

    let results: Vec<Result<SingularPoint, SeedDiagnostic>> =
        seeds.par_iter().map(|seed| refine_seed(family, range, seed, &opts)).collect();

    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    for r in results {
        match r {
            Ok(p) => {
                push_unique(&mut points, p);
            }
            Err(d) => diagnostics.push(d),
        }
    }
    complete_mirror(family, &mut points);
    sort_canonical(&mut points);
    CrunodeReport { points, seeds, diagnostics, max_edge }
}

fn refine_seed(
    family: &OffsetFamily,
    range: &SearchRange,
    seed: &OracleSeed,
    opts: &NewtonOptions,
) -> Result<SingularPoint, SeedDiagnostic> {
    let [i, j] = seed.members;
    let (a, b) = (&family.members[i], &family.members[j]);
    let reject = |rejection| SeedDiagnostic {
        sources: [a.label.clone(), b.label.clone()],
        s: seed.s,
        t: seed.t,
        point: seed.point,
        rejection,
    };
    let pieces = piece_of(&a.curve, range, seed.s).zip(piece_of(&b.curve, range, seed.t));
    let Some(pieces) = pieces else {
        return Err(reject(SeedRejection::LeftDomain));
    };
    let sol = newton_intersect(a, b, (seed.s, seed.t), pieces, opts).map_err(reject)?;
    if i == j && (sol.s - sol.t).abs() < tol::SEP_TOL {
        return Err(reject(SeedRejection::Coincident));
    }
    let (ja, jb) = match (a.jet(sol.s), b.jet(sol.t)) {
        (Ok(x), Ok(y)) => (x, y),
        _ => return Err(reject(SeedRejection::Diverged { residual: sol.residual })),
    };
    Ok(SingularPoint {
        kind: SingularKind::Crunode,
        location: ja.pos,
        params: vec![sol.s, sol.t],
        sources: vec![a.label.clone(), b.label.clone()],
        method: Method::NewtonRefined,
        residual: sol.residual,
        tangential: line_angle(ja.d1, jb.d1) < tol::TANGENCY_ANGLE,
    })
}

/// Crossings between the offsets described by `a` and `b`. When both describe the same
/// progenitor, distance and sides this is a self-intersection search.
pub fn find_crunodes(a: &OffsetSpec, b: &OffsetSpec, range: &SearchRange) -> CrunodeReport {
    let same = a.progenitor().same_as(b.progenitor()) && a.distance() == b.distance() && a.sides() == b.sides();
    let mut family = OffsetFamily::from_spec(a);
    if !same {
        let mut other = OffsetFamily::from_spec(b);
        for m in &mut other.members {
            if family.members.iter().any(|x| x.label == m.label) {
                m.label = format!("{} (b)", m.label);
            }
        }
        let split = family.len();
        family.members.extend(other.members);
        let mut report = family_crunodes(&family, range);
        let cross = |p: &[usize; 2]| (p[0] < split) != (p[1] < split);
        report.seeds.retain(|s| cross(&s.members));
        let index = |l: &str| family.members.iter().position(|m| m.label == l).unwrap_or(0);
        report.points.retain(|p| (index(&p.sources[0]) < split) != (index(&p.sources[1]) < split));
        report.diagnostics.retain(|d| (index(&d.sources[0]) < split) != (index(&d.sources[1]) < split));
        return report;
    }
    family_crunodes(&family, range)
}

/// Cusps and crunodes of a family, merged in canonical order.
pub fn all_singular_points(family: &OffsetFamily, range: &SearchRange) -> (Vec<SingularPoint>, CrunodeReport) {
    let mut pts = family_cusps(family, range, CuspMethod::CurvatureEq);
    let report = family_crunodes(family, range);
    pts.extend(report.points.iter().cloned());
    sort_canonical(&mut pts);
    (pts, report)
}

/// Order-insensitive comparison of two point sets within `tol`.
pub fn same_point_set(a: &[Vec2], b: &[Vec2], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| p.distance(*q) <= tol))
        && b.iter().all(|q| a.iter().any(|p| p.distance(*q) <= tol))
}
