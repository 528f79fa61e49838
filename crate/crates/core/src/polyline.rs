//! Sampled curves split into arcs at recorded gaps.

use serde::{Deserialize, Serialize};

use crate::curve::{CurveError, Interval, ParametricCurve};
use crate::geom::Vec2;
use crate::tol;

/// Side of travel relative to a parametrized curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// What an arc was sampled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "side", rename_all = "lowercase")]
pub enum ArcKind {
    Progenitor,
    Offset(Side),
    Envelope(Side),
    Contour,
    TrueOval,
}

/// Internal/external label attached after sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Internal,
    External,
}

/// Why an arc ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapReason {
    /// A declared singular parameter of the progenitor.
    SingularParam,
    /// A corner of the progenitor (defined, not smooth).
    Corner,
    /// Edge of the domain, e.g. where a radicand reaches zero.
    DomainBoundary,
    /// The progenitor speed dropped below the floor.
    SpeedCollapse,
    /// An evaluation failed for another reason.
    EvaluationFailure,
    /// Consecutive samples were farther apart than the edge limit.
    EdgeLength,
    /// An envelope had no real point at this parameter.
    NoEnvelopePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub t: f64,
    pub reason: GapReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyArc {
    pub kind: ArcKind,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<Placement>,
    pub points: Vec<Vec2>,
    /// Parameter value per point; empty for contours.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
}

impl PolyArc {
    pub fn new(kind: ArcKind, label: impl Into<String>) -> Self {
        PolyArc { kind, label: label.into(), placement: None, points: Vec::new(), params: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        self.points.len() > 2 && self.points[0].distance(*self.points.last().unwrap()) <= tol
    }

    pub fn edge_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.windows(2).map(|w| w[0].distance(w[1]))
    }

    pub fn max_edge(&self) -> f64 {
        self.edge_lengths().fold(0.0, f64::max)
    }

    pub fn median_edge(&self) -> f64 {
        let mut e: Vec<f64> = self.edge_lengths().collect();
        if e.is_empty() {
            return 0.0;
        }
        e.sort_by(f64::total_cmp);
        e[e.len() / 2]
    }
}

/// Ordered arcs plus the gaps that separate them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub arcs: Vec<PolyArc>,
    pub gaps: Vec<Gap>,
}

impl Polyline {
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn point_count(&self) -> usize {
        self.arcs.iter().map(PolyArc::len).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.arcs.iter().flat_map(|a| a.points.iter().copied())
    }

    pub fn extend(&mut self, other: Polyline) {
        self.arcs.extend(other.arcs);
        self.gaps.extend(other.gaps);
    }
}

/// Sampling knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleOptions {
    /// Break an arc where an edge exceeds this multiple of the arc's median edge.
    pub max_edge_factor: f64,
    /// Absolute edge limit; overrides the factor when set.
    pub max_edge_length: Option<f64>,
    /// Extra samples this fraction of the piece width inside open domain ends, so arcs reach
    /// close to boundaries that the uniform grid would leave far away.
    pub endpoint_inset: Option<f64>,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { max_edge_factor: tol::EDGE_GAP_FACTOR, max_edge_length: None, endpoint_inset: Some(1e-7) }
    }
}

/// Sample `eval` on a uniform grid of `n` parameters over the closed `range`, restricted to the
/// domain of `curve`, one arc per domain piece, split at failures and long edges.
pub fn sample_with<F>(
    curve: &ParametricCurve,
    range: Interval,
    n: usize,
    opts: &SampleOptions,
    kind: ArcKind,
    eval: F,
) -> Polyline
where
    F: Fn(f64) -> Result<Vec2, CurveError>,
{
    sample_with_reason(curve, range, n, opts, kind, |t| {
        eval(t).map_err(|e| match e {
            CurveError::Degenerate { .. } => GapReason::SpeedCollapse,
            _ => GapReason::EvaluationFailure,
        })
    })
}

/// Like [`sample_with`], with the evaluator choosing the gap reason for its own failures.
pub fn sample_with_reason<F>(
    curve: &ParametricCurve,
    range: Interval,
    n: usize,
    opts: &SampleOptions,
    kind: ArcKind,
    eval: F,
) -> Polyline
where
    F: Fn(f64) -> Result<Vec2, GapReason>,
{
    let mut out = Polyline::default();
    if range.is_empty() || n < 2 {
        return out;
    }
    let pieces = curve.domain_intervals(range);
    let step = range.width() / (n - 1) as f64;
    let grid = |i: usize| if i + 1 == n { range.hi } else { range.lo + step * i as f64 };

    for (k, piece) in pieces.iter().enumerate() {
        if k > 0 {
            out.gaps.push(Gap { t: piece.lo, reason: boundary_reason(curve, piece.lo) });
        }
        let lo_open = !(piece.lo == range.lo && curve.contains(range.lo));
        let hi_open = !(piece.hi == range.hi && curve.contains(range.hi));
        let mut ts: Vec<f64> = Vec::new();
        let first = (((piece.lo - range.lo) / step).floor().max(0.0)) as usize;
        for i in first..n {
            let t = grid(i);
            if t > piece.hi || (t == piece.hi && hi_open) {
                break;
            }
            if t < piece.lo || (t == piece.lo && lo_open) {
                continue;
            }
            ts.push(t);
        }
        if let Some(inset) = opts.endpoint_inset {
            let delta = inset * piece.width();
            if lo_open && ts.first().is_none_or(|&t0| t0 > piece.lo + delta) {
                ts.insert(0, piece.lo + delta);
            }
            if hi_open && ts.last().is_none_or(|&t1| t1 < piece.hi - delta) {
                ts.push(piece.hi - delta);
            }
        }

        let mut arc = PolyArc::new(kind, curve.name());
        for t in ts {
            match eval(t) {
                Ok(p) if p.is_finite() => {
                    arc.points.push(p);
                    arc.params.push(t);
                }
                other => {
                    let reason = other.err().unwrap_or(GapReason::EvaluationFailure);
                    out.gaps.push(Gap { t, reason });
                    flush(&mut out, &mut arc, opts);
                }
            }
        }
        flush(&mut out, &mut arc, opts);
    }
    out
}

fn boundary_reason(curve: &ParametricCurve, t: f64) -> GapReason {
    let near = |l: &crate::curve::SingularLattice| l.distance(t) <= 1e-12 * t.abs().max(1.0);
    if curve.singular_params().iter().any(near) {
        GapReason::SingularParam
    } else if curve.corners().iter().any(near) {
        GapReason::Corner
    } else {
        GapReason::DomainBoundary
    }
}

fn flush(out: &mut Polyline, arc: &mut PolyArc, opts: &SampleOptions) {
    let done = std::mem::replace(arc, PolyArc::new(arc.kind, arc.label.clone()));
    for piece in split_long_edges(done, opts, &mut out.gaps) {
        if piece.len() >= 2 {
            out.arcs.push(piece);
        }
    }
}

fn split_long_edges(arc: PolyArc, opts: &SampleOptions, gaps: &mut Vec<Gap>) -> Vec<PolyArc> {
    if arc.len() < 3 {
        return vec![arc];
    }
    let limit = opts.max_edge_length.unwrap_or_else(|| opts.max_edge_factor * arc.median_edge());
    if !(limit > 0.0) {
        return vec![arc];
    }
    let mut pieces = Vec::new();
    let mut cur = PolyArc::new(arc.kind, arc.label.clone());
    for i in 0..arc.len() {
        if i > 0 && arc.points[i - 1].distance(arc.points[i]) > limit {
            gaps.push(Gap { t: 0.5 * (arc.params[i - 1] + arc.params[i]), reason: GapReason::EdgeLength });
            pieces.push(std::mem::replace(&mut cur, PolyArc::new(arc.kind, arc.label.clone())));
        }
        cur.points.push(arc.points[i]);
        cur.params.push(arc.params[i]);
    }
    pieces.push(cur);
    pieces
}

/// Sample the curve itself.
pub fn sample_curve(curve: &ParametricCurve, range: Interval, n: usize, opts: &SampleOptions) -> Polyline {
    sample_with(curve, range, n, opts, ArcKind::Progenitor, |t| curve.point(t))
}
