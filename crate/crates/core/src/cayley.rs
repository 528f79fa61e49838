//! Cayley ovals: points whose distances to the foci `(±a, 0)` have harmonic mean `b`.
//!
//! Three descriptions are provided and cross-checked in the tests:
//!
//! * the bifocal residual `1/|MF1| + 1/|MF2| - 2/b`, zero exactly on the oval;
//! * the implicit octic obtained by clearing the square roots, which also
//!   vanishes on two spurious interior loops;
//! * a parametrization of the outer component by `t`, where the focal radii
//!   are `r1 = b / (2 cos^2 t)` and `r2 = b / (2 sin^2 t)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveError, Domain, Interval, Jet, ParametricCurve, SingularLattice};
use crate::geom::Vec2;
use crate::poly::{rational_from_f64, rational_from_int, ImplicitPolynomial, Rational};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CayleyError {
    #[error("parameter `{name}` must be finite and positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
}

/// Half focal distance `a` and harmonic-mean level `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CayleyParams {
    a: f64,
    b: f64,
    a_exact: Rational,
    b_exact: Rational,
    exact_input: bool,
}

impl CayleyParams {
    /// Floating-point parameters. The doubles are converted exactly for the implicit form.
    pub fn new(a: f64, b: f64) -> Result<Self, CayleyError> {
        for (name, value) in [("a", a), ("b", b)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(CayleyError::NonPositive { name, value });
            }
        }
        Ok(CayleyParams {
            a,
            b,
            a_exact: rational_from_f64(a).expect("finite"),
            b_exact: rational_from_f64(b).expect("finite"),
            exact_input: false,
        })
    }

    /// Rational parameters; classification then uses exact comparisons.
    pub fn exact(a: Rational, b: Rational) -> Result<Self, CayleyError> {
        let af = a.to_f64().unwrap_or(f64::NAN);
        let bf = b.to_f64().unwrap_or(f64::NAN);
        if !a.is_positive() {
            return Err(CayleyError::NonPositive { name: "a", value: af });
        }
        if !b.is_positive() {
            return Err(CayleyError::NonPositive { name: "b", value: bf });
        }
        Ok(CayleyParams { a: af, b: bf, a_exact: a, b_exact: b, exact_input: true })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, CayleyError> {
        Self::exact(rational_from_int(a), rational_from_int(b))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `e = b / a`.
    pub fn e(&self) -> f64 {
        self.b / self.a
    }

    pub fn e_exact(&self) -> Rational {
        &self.b_exact / &self.a_exact
    }

    pub fn is_exact(&self) -> bool {
        self.exact_input
    }

    pub fn foci(&self) -> [Vec2; 2] {
        [Vec2::new(self.a, 0.0), Vec2::new(-self.a, 0.0)]
    }

    pub fn is_lemniscate(&self) -> bool {
        self.shape() == ShapeClass::Lemniscate
    }

    pub fn shape(&self) -> ShapeClass {
        classify_shape(self)
    }
}

/// Topology of the oval as a function of `e = b / a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeClass {
    /// `e < 1`: two disjoint loops.
    TwoLoops,
    /// `e = 1`: a figure eight through the origin.
    Lemniscate,
    /// `1 < e < sqrt 3`: one non-convex loop.
    NonConvexOval,
    /// `e >= sqrt 3`: one convex loop.
    ConvexOval,
}

impl ShapeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ShapeClass::TwoLoops => "TwoLoops",
            ShapeClass::Lemniscate => "Lemniscate",
            ShapeClass::NonConvexOval => "NonConvexOval",
            ShapeClass::ConvexOval => "ConvexOval",
        }
    }
}

/// Shape class of the oval; `e = sqrt 3` is assigned to [`ShapeClass::ConvexOval`].
pub fn classify_shape(p: &CayleyParams) -> ShapeClass {
    if p.exact_input {
        let e = p.e_exact();
        let one = Rational::one();
        if e < one {
            ShapeClass::TwoLoops
        } else if e == one {
            ShapeClass::Lemniscate
        } else if &e * &e < rational_from_int(3) {
            ShapeClass::NonConvexOval
        } else {
            ShapeClass::ConvexOval
        }
    } else {
        let e = p.e();
        if (e - 1.0).abs() <= tol::LEMNISCATE_TOL {
            ShapeClass::Lemniscate
        } else if e < 1.0 {
            ShapeClass::TwoLoops
        } else if e < 3f64.sqrt() {
            ShapeClass::NonConvexOval
        } else {
            ShapeClass::ConvexOval
        }
    }
}

/// The octic `P(x, y)` whose zero set contains the oval (and two spurious loops).
pub fn cayley_implicit(p: &CayleyParams) -> ImplicitPolynomial {
    let a = &p.a_exact;
    let b = &p.b_exact;
    let pw = |r: &Rational, n: u32| (0..n).fold(Rational::one(), |acc, _| acc * r);
    let (a2, a4, a6, a8) = (pw(a, 2), pw(a, 4), pw(a, 6), pw(a, 8));
    let (b2, b4) = (pw(b, 2), pw(b, 4));
    let k = |n: i64| rational_from_int(n);
    let terms: Vec<(u32, u32, Rational)> = vec![
        (0, 0, k(16) * &a8),
        (0, 0, k(-16) * &a6 * &b2),
        (2, 0, k(-64) * &a6),
        (0, 2, k(64) * &a6),
        (2, 0, k(16) * &a4 * &b2),
        (0, 2, k(-48) * &a4 * &b2),
        (4, 0, k(96) * &a4),
        (2, 2, k(-64) * &a4),
        (0, 4, k(96) * &a4),
        (2, 0, k(16) * &a2 * &b4),
        (4, 0, k(16) * &a2 * &b2),
        (2, 2, k(-32) * &a2 * &b2),
        (0, 4, k(-48) * &a2 * &b2),
        (6, 0, k(-64) * &a2),
        (4, 2, k(-64) * &a2),
        (2, 4, k(64) * &a2),
        (0, 6, k(64) * &a2),
        (6, 0, k(-16) * &b2),
        (4, 2, k(-48) * &b2),
        (2, 4, k(-48) * &b2),
        (0, 6, k(-16) * &b2),
        (8, 0, k(16)),
        (6, 2, k(64)),
        (4, 4, k(96)),
        (2, 6, k(64)),
        (0, 8, k(16)),
    ];
    ImplicitPolynomial::from_terms(terms)
}

/// `1/|M - F1| + 1/|M - F2| - 2/b`.
pub fn bifocal_residual(point: Vec2, p: &CayleyParams) -> Result<f64, CurveError> {
    let [f1, f2] = p.foci();
    let (r1, r2) = (point.distance(f1), point.distance(f2));
    if r1 == 0.0 || r2 == 0.0 {
        return Err(CurveError::Pole);
    }
    Ok(1.0 / r1 + 1.0 / r2 - 2.0 / p.b)
}

/// Sign of `y` in the parametrization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Upper,
    Lower,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Upper => 1.0,
            Branch::Lower => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Upper => "upper",
            Branch::Lower => "lower",
        }
    }
}

/// Parameter intervals inside `(0, pi/2)` on which the radicand is positive.
///
/// With `w = cos 2t` the triangle inequalities on the focal radii reduce to
/// `sqrt(1 - e) <= |w| <= (sqrt(e^2 + 4) - e) / 2` (lower bound dropped when `e >= 1`).
pub fn cayley_base_intervals(p: &CayleyParams) -> Vec<Interval> {
    let e = p.e();
    let w_hi = ((e * e + 4.0).sqrt() - e) / 2.0;
    let t_lo = w_hi.acos() / 2.0;
    match p.shape() {
        ShapeClass::TwoLoops => {
            let w_lo = (1.0 - e).sqrt();
            let t_mid = w_lo.acos() / 2.0;
            vec![Interval::new(t_lo, t_mid), Interval::new(FRAC_PI_2 - t_mid, FRAC_PI_2 - t_lo)]
        }
        _ => vec![Interval::new(t_lo, FRAC_PI_2 - t_lo)],
    }
}

/// One y-branch of the outer component.
///
/// The domain repeats with period `pi/2`; `t -> pi - t` retraces the same points in the opposite
/// direction, so `(0, pi/2)` is recorded as the trace range. Singular parameters are the zeros of
/// `sin 2t` (which include those of `cos t`) and, for the lemniscate, the node parameters
/// `pi/4 + k pi/2`, declared as corners: the branch passes through the origin there but is not
/// smooth.
pub fn cayley_param(p: &CayleyParams, branch: Branch) -> ParametricCurve {
    let (a, b) = (p.a, p.b);
    let sign = branch.sign();
    let name = format!("cayley(a={a}, b={b}, {})", branch.as_str());
    let mut curve = ParametricCurve::fallible(name, move |t| Ok(cayley_jet(a, b, sign, t, false)?.pos))
        .with_jet(move |t| cayley_jet(a, b, sign, t, true))
        .with_domain(Domain::Periodic { base: cayley_base_intervals(p), period: FRAC_PI_2 })
        .with_singular(SingularLattice::periodic(0.0, FRAC_PI_2))
        .with_trace_range(Interval::new(0.0, FRAC_PI_2))
        .with_mirror_symmetry(true);
    if p.is_lemniscate() {
        curve = curve.with_corner(SingularLattice::periodic(FRAC_PI_4, FRAC_PI_2));
    }
    curve
}

/// The smooth strand of the outer component that starts on `start`.
///
/// Away from the lemniscate this is [`cayley_param`]. At `e = 1` the strand swaps y-branch at each
/// node parameter, following the curve straight through the crossing at the origin instead of
/// turning the corner; only the exact node parameter itself has no derivatives.
pub fn cayley_strand(p: &CayleyParams, start: Branch) -> ParametricCurve {
    if !p.is_lemniscate() {
        return cayley_param(p, start);
    }
    let (a, b) = (p.a, p.b);
    let base = start.sign();
    let sign = move |t: f64| {
        let phase = t.rem_euclid(FRAC_PI_2);
        if phase < FRAC_PI_4 {
            base
        } else {
            -base
        }
    };
    let name = format!("cayley(a={a}, b={b}, {} strand)", start.as_str());
    let full = cayley_base_intervals(p);
    ParametricCurve::fallible(name, move |t| Ok(cayley_jet(a, b, sign(t), t, false)?.pos))
        .with_jet(move |t| cayley_jet(a, b, sign(t), t, true))
        .with_domain(Domain::Periodic { base: full, period: FRAC_PI_2 })
        .with_singular(SingularLattice::periodic(0.0, FRAC_PI_2))
        .with_trace_range(Interval::new(0.0, FRAC_PI_2))
        .with_mirror_symmetry(true)
}

const RADICAND_SLACK: f64 = 1e-12;

fn cayley_jet(a: f64, b: f64, sign: f64, t: f64, derivs: bool) -> Result<Jet, CurveError> {
    let (s, c) = (2.0 * t).sin_cos();
    let k = b * b / a;
    let s2 = s * s;
    let s4 = s2 * s2;
    let x = k * c / s4;
    let (st, ct) = t.sin_cos();
    let ct2 = ct * ct;
    let r1 = b / (2.0 * ct2);
    // (x - a)^2 + y^2 = r1^2, factored to limit cancellation near the axis.
    let mut radicand = (r1 - x + a) * (r1 + x - a);
    if !x.is_finite() || radicand.is_nan() {
        return Err(CurveError::OutOfDomain { t });
    }
    if radicand < 0.0 {
        // Rounding at a double root (the lemniscate node) may dip just below zero.
        if radicand < -RADICAND_SLACK * r1 * r1 {
            return Err(CurveError::OutOfDomain { t });
        }
        radicand = 0.0;
    }
    let y = sign * radicand.sqrt();
    if !derivs {
        return Ok(Jet { pos: Vec2::new(x, y), d1: Vec2::ZERO, d2: Vec2::ZERO });
    }
    let dx = k * (-2.0 * s2 - 8.0 * c * c) / (s4 * s);
    let ddx = k * c * (44.0 * s2 + 80.0 * c * c) / (s4 * s2);
    let r1p = b * st / (ct2 * ct);
    let r1pp = b * (1.0 / ct2 + 3.0 * st * st / (ct2 * ct2));
    let rp = 2.0 * r1 * r1p - 2.0 * (x - a) * dx;
    let rpp = 2.0 * (r1p * r1p + r1 * r1pp) - 2.0 * (dx * dx + (x - a) * ddx);
    if y == 0.0 {
        return Err(CurveError::NonFinite { t });
    }
    let dy = rp / (2.0 * y);
    let ddy = (rpp - 2.0 * dy * dy) / (2.0 * y);
    Ok(Jet { pos: Vec2::new(x, y), d1: Vec2::new(dx, dy), d2: Vec2::new(ddx, ddy) })
}
