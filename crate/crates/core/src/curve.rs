//! Parametric plane curves with derivative access and declared domains.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec2;
use crate::tol;

/// Failure to evaluate a curve or a quantity derived from it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("parameter t = {t} is outside the curve domain")]
    OutOfDomain { t: f64 },
    #[error("parameter t = {t} is a declared singular parameter")]
    SingularParam { t: f64 },
    #[error("speed {speed:e} at t = {t} is below the degeneracy floor")]
    Degenerate { t: f64, speed: f64 },
    #[error("non-finite value at t = {t}")]
    NonFinite { t: f64 },
    #[error("point coincides with a focus")]
    Pole,
    #[error("1 + k*d vanishes at t = {t}: the offset has a cusp here")]
    CuspDegenerate { t: f64 },
}

/// Position with first and second parameter derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub pos: Vec2,
    pub d1: Vec2,
    pub d2: Vec2,
}

impl Jet {
    pub fn speed(&self) -> f64 {
        self.d1.norm()
    }

    /// Signed curvature, positive when the curve turns left.
    pub fn curvature(&self) -> f64 {
        let v2 = self.d1.norm_sq();
        self.d1.cross(self.d2) / (v2 * v2.sqrt())
    }
}

/// Open parameter interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (hi > lo).then_some(Interval { lo, hi })
    }

    pub fn is_empty(&self) -> bool {
        !(self.hi > self.lo)
    }
}

/// Where a curve is defined.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Every real parameter.
    All,
    /// A finite union of open intervals.
    Intervals(Vec<Interval>),
    /// `base` intervals repeated with the given period.
    Periodic { base: Vec<Interval>, period: f64 },
}

impl Domain {
    pub fn contains(&self, t: f64) -> bool {
        match self {
            Domain::All => true,
            Domain::Intervals(v) => v.iter().any(|i| i.contains(t)),
            Domain::Periodic { base, period } => {
                let origin = base.first().map_or(0.0, |i| i.lo);
                let k = ((t - origin) / period).floor();
                [k - 1.0, k, k + 1.0].iter().any(|k| {
                    let shift = k * period;
                    base.iter().any(|i| i.contains(t - shift))
                })
            }
        }
    }

    /// Sorted, disjoint pieces of the domain inside `range`.
    pub fn restrict(&self, range: Interval) -> Vec<Interval> {
        let mut out: Vec<Interval> = match self {
            Domain::All => range.intersect(&range).into_iter().collect(),
            Domain::Intervals(v) => v.iter().filter_map(|i| i.intersect(&range)).collect(),
            Domain::Periodic { base, period } => {
                let lo_base = base.iter().map(|i| i.lo).fold(f64::INFINITY, f64::min);
                let hi_base = base.iter().map(|i| i.hi).fold(f64::NEG_INFINITY, f64::max);
                let k0 = ((range.lo - hi_base) / period).floor() as i64;
                let k1 = ((range.hi - lo_base) / period).ceil() as i64;
                let mut v = Vec::new();
                for k in k0..=k1 {
                    let shift = k as f64 * period;
                    for i in base {
                        let shifted = Interval::new(i.lo + shift, i.hi + shift);
                        if let Some(j) = shifted.intersect(&range) {
                            v.push(j);
                        }
                    }
                }
                v
            }
        };
        out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        out
    }
}

/// Parameter values excluded from the domain: `offset + k * period` for all integers `k`,
/// or the single value `offset` when `period` is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularLattice {
    pub offset: f64,
    pub period: Option<f64>,
}

impl SingularLattice {
    pub fn isolated(t: f64) -> Self {
        SingularLattice { offset: t, period: None }
    }

    pub fn periodic(offset: f64, period: f64) -> Self {
        SingularLattice { offset, period: Some(period) }
    }

    /// Members strictly inside `range`, ascending.
    pub fn members_in(&self, range: Interval) -> Vec<f64> {
        match self.period {
            None => range.contains(self.offset).then_some(self.offset).into_iter().collect(),
            Some(p) => {
                let k0 = ((range.lo - self.offset) / p).floor() as i64;
                let k1 = ((range.hi - self.offset) / p).ceil() as i64;
                (k0..=k1).map(|k| self.offset + k as f64 * p).filter(|t| range.contains(*t)).collect()
            }
        }
    }

    fn negated(&self) -> SingularLattice {
        SingularLattice { offset: -self.offset, period: self.period }
    }

    /// Distance from `t` to the nearest member.
    pub fn distance(&self, t: f64) -> f64 {
        match self.period {
            None => (t - self.offset).abs(),
            Some(p) => {
                let r = (t - self.offset).rem_euclid(p);
                r.min(p - r)
            }
        }
    }
}

type PositionFn = dyn Fn(f64) -> Result<Vec2, CurveError> + Send + Sync;
type JetFn = dyn Fn(f64) -> Result<Jet, CurveError> + Send + Sync;

/// A parametrized plane curve.
///
/// Cloning is cheap: the coordinate functions are shared.
#[derive(Clone)]
pub struct ParametricCurve {
    name: String,
    position: Arc<PositionFn>,
    jet: Option<Arc<JetFn>>,
    domain: Domain,
    singular: Vec<SingularLattice>,
    corners: Vec<SingularLattice>,
    trace_range: Option<Interval>,
    mirror_symmetric: bool,
}

impl fmt::Debug for ParametricCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricCurve")
            .field("name", &self.name)
            .field("analytic", &self.jet.is_some())
            .field("domain", &self.domain)
            .field("singular", &self.singular)
            .field("corners", &self.corners)
            .field("trace_range", &self.trace_range)
            .finish()
    }
}

impl ParametricCurve {
    /// A curve defined on all of R with finite-difference derivatives.
    pub fn new<F>(name: impl Into<String>, position: F) -> Self
    where
        F: Fn(f64) -> Vec2 + Send + Sync + 'static,
    {
        Self::fallible(name, move |t| Ok(position(t)))
    }

    /// Like [`ParametricCurve::new`] but the coordinate function may reject a parameter.
    pub fn fallible<F>(name: impl Into<String>, position: F) -> Self
    where
        F: Fn(f64) -> Result<Vec2, CurveError> + Send + Sync + 'static,
    {
        ParametricCurve {
            name: name.into(),
            position: Arc::new(position),
            jet: None,
            domain: Domain::All,
            singular: Vec::new(),
            corners: Vec::new(),
            trace_range: None,
            mirror_symmetric: false,
        }
    }

    /// Attach analytic first and second derivatives.
    pub fn with_jet<J>(mut self, jet: J) -> Self
    where
        J: Fn(f64) -> Result<Jet, CurveError> + Send + Sync + 'static,
    {
        self.jet = Some(Arc::new(jet));
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_singular(mut self, lattice: SingularLattice) -> Self {
        self.singular.push(lattice);
        self
    }

    /// Parameters where the curve is defined but not smooth; sampled arcs are split there.
    pub fn with_corner(mut self, lattice: SingularLattice) -> Self {
        self.corners.push(lattice);
        self
    }

    /// Parameter range over which the curve is traced exactly once.
    pub fn with_trace_range(mut self, range: Interval) -> Self {
        self.trace_range = Some(range);
        self
    }

    /// Declare that the union of this curve and its mirror partner is symmetric about the x-axis.
    pub fn with_mirror_symmetry(mut self, yes: bool) -> Self {
        self.mirror_symmetric = yes;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn singular_params(&self) -> &[SingularLattice] {
        &self.singular
    }

    pub fn corners(&self) -> &[SingularLattice] {
        &self.corners
    }

    pub fn trace_range(&self) -> Option<Interval> {
        self.trace_range
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        self.mirror_symmetric
    }

    /// True when both handles share the same coordinate function.
    pub fn same_as(&self, other: &ParametricCurve) -> bool {
        Arc::ptr_eq(&self.position, &other.position)
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.jet.is_some()
    }

    pub fn is_singular_param(&self, t: f64) -> bool {
        self.singular.iter().any(|s| s.distance(t) == 0.0)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.domain.contains(t) && !self.is_singular_param(t)
    }

    fn check(&self, t: f64) -> Result<(), CurveError> {
        if self.is_singular_param(t) {
            return Err(CurveError::SingularParam { t });
        }
        if !self.domain.contains(t) {
            return Err(CurveError::OutOfDomain { t });
        }
        Ok(())
    }

    /// Position at `t`.
    pub fn point(&self, t: f64) -> Result<Vec2, CurveError> {
        self.check(t)?;
        let p = (self.position)(t)?;
        if !p.is_finite() {
            return Err(CurveError::NonFinite { t });
        }
        Ok(p)
    }

    /// Position and derivatives at `t`, analytic when available.
    pub fn jet(&self, t: f64) -> Result<Jet, CurveError> {
        self.check(t)?;
        let jet = match &self.jet {
            Some(j) => j(t)?,
            None => self.jet_fd(t)?,
        };
        if !(jet.pos.is_finite() && jet.d1.is_finite() && jet.d2.is_finite()) {
            return Err(CurveError::NonFinite { t });
        }
        Ok(jet)
    }

    /// Derivatives by central differences, ignoring any analytic jet.
    pub fn jet_fd(&self, t: f64) -> Result<Jet, CurveError> {
        let h = fd_step(t);
        let f = |s: f64| (self.position)(s);
        let (pm, p0, pp) = (f(t - h)?, f(t)?, f(t + h)?);
        Ok(Jet { pos: p0, d1: (pp - pm) * (0.5 / h), d2: (pp - p0 * 2.0 + pm) * (1.0 / (h * h)) })
    }

    /// Sorted open sub-intervals of `range` on which the curve is defined, split at singular
    /// parameters and corners.
    pub fn domain_intervals(&self, range: Interval) -> Vec<Interval> {
        let mut out = Vec::new();
        for piece in self.domain.restrict(range) {
            let mut cuts: Vec<f64> =
                self.singular.iter().chain(&self.corners).flat_map(|s| s.members_in(piece)).collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            let mut lo = piece.lo;
            for c in cuts {
                if c > lo {
                    out.push(Interval::new(lo, c));
                }
                lo = c;
            }
            if piece.hi > lo {
                out.push(Interval::new(lo, piece.hi));
            }
        }
        out
    }

    /// The same point set traversed with `t -> -t`.
    pub fn reversed(&self) -> ParametricCurve {
        let pos = self.position.clone();
        let jet = self.jet.clone();
        let flip = |i: &Interval| Interval::new(-i.hi, -i.lo);
        let domain = match &self.domain {
            Domain::All => Domain::All,
            Domain::Intervals(v) => Domain::Intervals(v.iter().map(flip).collect()),
            Domain::Periodic { base, period } => {
                Domain::Periodic { base: base.iter().map(flip).collect(), period: *period }
            }
        };
        ParametricCurve {
            name: format!("{} (reversed)", self.name),
            position: Arc::new(move |t| pos(-t)),
            jet: jet.map(|j| -> Arc<JetFn> {
                Arc::new(move |t| {
                    let j = j(-t)?;
                    Ok(Jet { pos: j.pos, d1: -j.d1, d2: j.d2 })
                })
            }),
            domain,
            singular: self.singular.iter().map(SingularLattice::negated).collect(),
            corners: self.corners.iter().map(SingularLattice::negated).collect(),
            trace_range: self.trace_range.as_ref().map(flip),
            mirror_symmetric: self.mirror_symmetric,
        }
    }
}

/// Finite-difference step used for a parameter value.
pub fn fd_step(t: f64) -> f64 {
    tol::FD_STEP.max(tol::FD_STEP * t.abs())
}

/// Central first and second differences of a scalar function.
pub fn derivatives_fd<F, E>(f: F, t: f64, h: f64) -> Result<(f64, f64), E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let (fm, f0, fp) = (f(t - h)?, f(t)?, f(t + h)?);
    Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
}

/// Signed curvature `(x'y'' - x''y') / (x'^2 + y'^2)^(3/2)`.
pub fn curvature(curve: &ParametricCurve, t: f64) -> Result<f64, CurveError> {
    let jet = curve.jet(t)?;
    let speed = jet.speed();
    if speed <= tol::SPEED_FLOOR {
        return Err(CurveError::Degenerate { t, speed });
    }
    Ok(jet.curvature())
}

// Presets used throughout the examples and tests.

/// Circle of radius `r` about the origin, counter-clockwise.
pub fn circle(r: f64) -> ParametricCurve {
    ellipse(r, r).renamed(format!("circle(r={r})"))
}

/// Ellipse `(a cos t, b sin t)`, counter-clockwise.
pub fn ellipse(a: f64, b: f64) -> ParametricCurve {
    ParametricCurve::new(format!("ellipse(a={a}, b={b})"), move |t| Vec2::new(a * t.cos(), b * t.sin()))
        .with_jet(move |t| {
            let (s, c) = t.sin_cos();
            Ok(Jet { pos: Vec2::new(a * c, b * s), d1: Vec2::new(-a * s, b * c), d2: Vec2::new(-a * c, -b * s) })
        })
        .with_trace_range(Interval::new(0.0, 2.0 * PI))
}

/// Straight line `origin + t * direction`.
pub fn line(origin: Vec2, direction: Vec2) -> ParametricCurve {
    ParametricCurve::new("line", move |t| origin + direction * t)
        .with_jet(move |t| Ok(Jet { pos: origin + direction * t, d1: direction, d2: Vec2::ZERO }))
}

/// Figure-eight `(sin 2t, sin t)`; self-crossing at the origin for `t = 0, pi`.
pub fn figure_eight() -> ParametricCurve {
    ParametricCurve::new("figure-eight", |t| Vec2::new((2.0 * t).sin(), t.sin()))
        .with_jet(|t| {
            let (s2, c2) = (2.0 * t).sin_cos();
            let (s, c) = t.sin_cos();
            Ok(Jet { pos: Vec2::new(s2, s), d1: Vec2::new(2.0 * c2, c), d2: Vec2::new(-4.0 * s2, -s) })
        })
        .with_trace_range(Interval::new(-PI / 2.0, 3.0 * PI / 2.0))
}

/// `(cos t, sin^3 t)`, the test curve used for curvature-based cusp detection.
///
/// The curve is stationary at `t = 0, pi`, so those parameters are declared singular.
pub fn cos_sin_cubed() -> ParametricCurve {
    ParametricCurve::new("cos-sin-cubed", |t| {
        let (s, c) = t.sin_cos();
        Vec2::new(c, s * s * s)
    })
    .with_jet(|t| {
        let (s, c) = t.sin_cos();
        Ok(Jet {
            pos: Vec2::new(c, s * s * s),
            d1: Vec2::new(-s, 3.0 * s * s * c),
            d2: Vec2::new(-c, 6.0 * s * c * c - 3.0 * s * s * s),
        })
    })
    .with_singular(SingularLattice::periodic(0.0, PI))
    .with_trace_range(Interval::new(-PI, PI))
}

impl ParametricCurve {
    fn renamed(mut self, name: String) -> Self {
        self.name = name;
        self
    }
}
