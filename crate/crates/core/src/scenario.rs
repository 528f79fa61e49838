//! Scenario descriptions, result documents, and the runner shared by the CLI and the service.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{cayley_implicit, cayley_strand, Branch, CayleyParams, ShapeClass};
use crate::contour::{contour, filter_true_oval, ContourGrid};
use crate::curve::{self, Interval, ParametricCurve};
use crate::envelope::{sample_envelope, CircleFamily, Radius};
use crate::geom::Vec2;
use crate::offset::{classify_placement, OffsetFamily, OffsetSpec, Sides};
use crate::poly::{rational_from_f64, ImplicitPolynomial};
use crate::polyline::{sample_curve, PolyArc, Polyline, SampleOptions};
use crate::singular::{all_singular_points, SearchRange, SeedDiagnostic, SingularPoint};

pub const SCHEMA_VERSION: &str = "ovalkit.result.v1";
pub const ENGINE_NAME: &str = "ovalkit";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_SAMPLES: usize = 2000;
pub const MAX_SAMPLES: usize = 1_000_000;
pub const MAX_CONTOUR_CELLS: usize = 8192;

/// Built-in parametric test curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `(cos t, sin t)`.
    UnitCircle,
    /// `(sin 2t, sin t)`, crossing itself at the origin.
    FigureEight,
    /// `(cos t, sin^3 t)`, with stationary points at `t = k pi`.
    CosSinCubed,
}

impl Preset {
    pub fn curve(self) -> ParametricCurve {
        match self {
            Preset::UnitCircle => curve::circle(1.0),
            Preset::FigureEight => curve::figure_eight(),
            Preset::CosSinCubed => curve::cos_sin_cubed(),
        }
    }

    pub fn implicit(self) -> ImplicitPolynomial {
        let text = match self {
            Preset::UnitCircle => "x^2 + y^2 - 1",
            Preset::FigureEight => "x^2 - 4y^2 + 4y^4",
            Preset::CosSinCubed => "y^2 - 1 + 3x^2 - 3x^4 + x^6",
        };
        text.parse().expect("preset polynomial")
    }
}

/// The progenitor of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", try_from = "CurveFields")]
pub enum CurveSpec {
    Cayley { a: f64, b: f64 },
    Ellipse { a: f64, b: f64 },
    Preset { name: Preset },
}

/// Radius law for the circle-family envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", try_from = "RadiusFields")]
pub enum RadiusSpec {
    /// One constant-radius family per offset distance, `r = d`.
    OffsetDistance,
    Constant {
        r: f64,
    },
    /// `r(t) = |cos x_c(t)|`.
    AbsCosCenterX,
}

// Tagged enums are read through flat structs so that errors keep their field path.

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum CurveKind {
    Cayley,
    Ellipse,
    Preset,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFields {
    #[serde(rename = "type")]
    kind: CurveKind,
    a: Option<f64>,
    b: Option<f64>,
    name: Option<Preset>,
}

impl TryFrom<CurveFields> for CurveSpec {
    type Error = String;

    fn try_from(f: CurveFields) -> Result<Self, String> {
        let axes = |f: &CurveFields| match (f.a, f.b, f.name) {
            (Some(a), Some(b), None) => Ok((a, b)),
            (_, _, Some(_)) => Err("`name` only applies to presets".to_string()),
            _ => Err("needs both `a` and `b`".to_string()),
        };
        match f.kind {
            CurveKind::Cayley => axes(&f).map(|(a, b)| CurveSpec::Cayley { a, b }),
            CurveKind::Ellipse => axes(&f).map(|(a, b)| CurveSpec::Ellipse { a, b }),
            CurveKind::Preset => match (f.name, f.a, f.b) {
                (Some(name), None, None) => Ok(CurveSpec::Preset { name }),
                (None, _, _) => Err("needs `name`".into()),
                _ => Err("presets take no `a` or `b`".into()),
            },
        }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum RadiusLaw {
    OffsetDistance,
    Constant,
    AbsCosCenterX,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RadiusFields {
    law: RadiusLaw,
    r: Option<f64>,
}

impl TryFrom<RadiusFields> for RadiusSpec {
    type Error = String;

    fn try_from(f: RadiusFields) -> Result<Self, String> {
        match (f.law, f.r) {
            (RadiusLaw::Constant, Some(r)) => Ok(RadiusSpec::Constant { r }),
            (RadiusLaw::Constant, None) => Err("needs `r`".into()),
            (_, Some(_)) => Err("`r` only applies to the constant law".into()),
            (RadiusLaw::OffsetDistance, None) => Ok(RadiusSpec::OffsetDistance),
            (RadiusLaw::AbsCosCenterX, None) => Ok(RadiusSpec::AbsCosCenterX),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSpec {
    #[serde(default = "default_cells")]
    pub cells: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec { cells: ContourGrid::DEFAULT_CELLS }
    }
}

fn default_cells() -> usize {
    ContourGrid::DEFAULT_CELLS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Svg,
}

fn default_sides() -> Sides {
    Sides::Both
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn yes() -> bool {
    true
}

/// Everything needed to reproduce one result document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub curve: CurveSpec,
    /// Offset distances; each produces one layer.
    #[serde(default)]
    pub d: Vec<f64>,
    #[serde(default = "default_sides")]
    pub sides: Sides,
    /// Parameter range `[lo, hi]`; defaults to the progenitor's trace range.
    #[serde(default)]
    pub range: Option<[f64; 2]>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "yes")]
    pub offsets: bool,
    #[serde(default)]
    pub envelope: Option<RadiusSpec>,
    #[serde(default)]
    pub singular: bool,
    #[serde(default)]
    pub contour: Option<ContourSpec>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl Scenario {
    pub fn new(curve: CurveSpec) -> Self {
        Scenario {
            curve,
            d: Vec::new(),
            sides: Sides::Both,
            range: None,
            samples: DEFAULT_SAMPLES,
            offsets: true,
            envelope: None,
            singular: false,
            contour: None,
            format: OutputFormat::Json,
        }
    }

    /// Parse and validate. Syntax errors and shape errors are kept apart so the caller can map
    /// them to different statuses.
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioParseError> {
        let s = Self::deserialize_tracked(&mut serde_json::Deserializer::from_str(text))?;
        s.validate()?;
        Ok(s)
    }

    /// As [`Scenario::from_json`], from an already parsed value.
    pub fn from_value(value: serde_json::Value) -> Result<Scenario, ScenarioParseError> {
        let s = Self::deserialize_tracked(value)?;
        s.validate()?;
        Ok(s)
    }

    fn deserialize_tracked<'de, D>(de: D) -> Result<Scenario, ScenarioParseError>
    where
        D: serde::Deserializer<'de, Error = serde_json::Error>,
    {
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if inner.is_syntax() || inner.is_eof() {
                ScenarioParseError::Syntax(inner.to_string())
            } else {
                let path = if path == "." { "" } else { &path };
                ScenarioParseError::Invalid(ScenarioError::new(path, inner.to_string()))
            }
        })
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let positive = |path: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ScenarioError::new(path, format!("must be finite and positive, got {v}")))
            }
        };
        match self.curve {
            CurveSpec::Cayley { a, b } | CurveSpec::Ellipse { a, b } => {
                positive("curve.a", a)?;
                positive("curve.b", b)?;
            }
            CurveSpec::Preset { .. } => {}
        }
        for (i, &d) in self.d.iter().enumerate() {
            positive(&format!("d[{i}]"), d)?;
        }
        if let Some([lo, hi]) = self.range {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(ScenarioError::new("range", format!("needs finite lo < hi, got [{lo}, {hi}]")));
            }
        }
        let min_samples = if self.singular { SearchRange::MIN_RESOLUTION } else { 2 };
        if !(min_samples..=MAX_SAMPLES).contains(&self.samples) {
            return Err(ScenarioError::new(
                "samples",
                format!("must be in [{min_samples}, {MAX_SAMPLES}], got {}", self.samples),
            ));
        }
        if let Some(RadiusSpec::Constant { r }) = self.envelope {
            if !(r.is_finite() && r >= 0.0) {
                return Err(ScenarioError::new("envelope.r", format!("must be finite and non-negative, got {r}")));
            }
        }
        if let Some(c) = self.contour {
            if !(2..=MAX_CONTOUR_CELLS).contains(&c.cells) {
                return Err(ScenarioError::new(
                    "contour.cells",
                    format!("must be in [2, {MAX_CONTOUR_CELLS}], got {}", c.cells),
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serializes")
    }
}

/// A scenario rejected with the path of the offending field, e.g. `d[2]` or `curve.a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
pub struct ScenarioError {
    pub path: String,
    pub message: String,
}

impl ScenarioError {
    pub fn new(path: &str, message: impl Into<String>) -> Self {
        ScenarioError { path: path.to_string(), message: message.into() }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioParseError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("invalid scenario: {0}")]
    Invalid(#[from] ScenarioError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineInfo {
    pub name: String,
    pub version: String,
}

impl Default for EngineInfo {
    fn default() -> Self {
        EngineInfo { name: ENGINE_NAME.into(), version: ENGINE_VERSION.into() }
    }
}

/// Offsets and singular points at one distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub d: f64,
    pub offsets: Polyline,
    #[serde(default)]
    pub singular_points: Vec<SingularPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeLayer {
    pub radius: RadiusSpec,
    /// The offset distance used as radius, for [`RadiusSpec::OffsetDistance`].
    #[serde(default)]
    pub d: Option<f64>,
    pub envelope: Polyline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourLayer {
    pub grid: ContourGrid,
    pub loops: Vec<PolyArc>,
    /// Loops on the bifocal curve itself (Cayley progenitors only).
    #[serde(default)]
    pub true_oval: Option<Vec<PolyArc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSeedDiagnostic {
    pub d: f64,
    #[serde(flatten)]
    pub seed: SeedDiagnostic,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Crunode seeds Newton did not confirm.
    #[serde(default)]
    pub rejected_seeds: Vec<LayerSeedDiagnostic>,
    /// Cusp roots whose residual missed the tolerance.
    #[serde(default)]
    pub uncertified: Vec<SingularPoint>,
    #[serde(default)]
    pub notes: Vec<String>,
}

/// Output of [`run_scenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: String,
    pub engine: EngineInfo,
    pub scenario: Scenario,
    #[serde(default)]
    pub shape: Option<ShapeClass>,
    pub parameter_range: Interval,
    pub progenitor: Polyline,
    #[serde(default)]
    pub layers: Vec<Layer>,
    #[serde(default)]
    pub envelopes: Vec<EnvelopeLayer>,
    #[serde(default)]
    pub contours: Option<ContourLayer>,
    pub diagnostics: Diagnostics,
}

impl ResultDocument {
    /// Canonical JSON: fixed field order, shortest round-trip numbers, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn singular_points(&self) -> impl Iterator<Item = &SingularPoint> {
        self.layers.iter().flat_map(|l| l.singular_points.iter())
    }

    /// Every arc in drawing order: progenitor, offsets, envelopes, contours.
    pub fn arcs(&self) -> impl Iterator<Item = &PolyArc> {
        let contours = self
            .contours
            .iter()
            .flat_map(|c| c.loops.iter().filter(move |_| c.true_oval.is_none()).chain(c.true_oval.iter().flatten()));
        self.progenitor
            .arcs
            .iter()
            .chain(self.layers.iter().flat_map(|l| l.offsets.arcs.iter()))
            .chain(self.envelopes.iter().flat_map(|e| e.envelope.arcs.iter()))
            .chain(contours)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Invalid(#[from] ScenarioError),
    #[error("numerical failure: {message}")]
    Numerical { message: String, diagnostics: Diagnostics },
    #[error("cancelled")]
    Cancelled,
}

/// Progenitor strands: both y-branches for a Cayley oval, the curve itself otherwise.
fn strands(spec: &CurveSpec) -> Result<Vec<ParametricCurve>, ScenarioError> {
    Ok(match *spec {
        CurveSpec::Cayley { a, b } => {
            let p = cayley_params(a, b)?;
            vec![cayley_strand(&p, Branch::Upper), cayley_strand(&p, Branch::Lower)]
        }
        CurveSpec::Ellipse { a, b } => vec![curve::ellipse(a, b)],
        CurveSpec::Preset { name } => vec![name.curve()],
    })
}

fn cayley_params(a: f64, b: f64) -> Result<CayleyParams, ScenarioError> {
    CayleyParams::new(a, b).map_err(|e| ScenarioError::new("curve", e.to_string()))
}

fn family(spec: &CurveSpec, d: f64, sides: Sides) -> Result<OffsetFamily, ScenarioError> {
    let bad = |e: crate::offset::OffsetError| ScenarioError::new("d", e.to_string());
    match *spec {
        CurveSpec::Cayley { a, b } => OffsetFamily::cayley(&cayley_params(a, b)?, d, sides).map_err(bad),
        _ => {
            let c = strands(spec)?.remove(0);
            OffsetSpec::new(c, d, sides).map(|s| OffsetFamily::from_spec(&s)).map_err(bad)
        }
    }
}

fn implicit(spec: &CurveSpec) -> Result<(ImplicitPolynomial, ContourGrid), ScenarioError> {
    Ok(match *spec {
        CurveSpec::Cayley { a, b } => {
            let p = cayley_params(a, b)?;
            (cayley_implicit(&p), ContourGrid::for_cayley(&p))
        }
        CurveSpec::Ellipse { a, b } => {
            let (ra, rb) = (rational_from_f64(a), rational_from_f64(b));
            let (Some(ra), Some(rb)) = (ra, rb) else {
                return Err(ScenarioError::new("curve", "axes are not finite"));
            };
            let (a2, b2) = (&ra * &ra, &rb * &rb);
            let poly = ImplicitPolynomial::from_terms([(2, 0, b2.clone()), (0, 2, a2.clone()), (0, 0, -(a2 * b2))]);
            let half = 1.2 * a.max(b);
            (poly, ContourGrid::square(half, ContourGrid::DEFAULT_CELLS).expect("valid box"))
        }
        CurveSpec::Preset { name } => {
            (name.implicit(), ContourGrid::square(1.5, ContourGrid::DEFAULT_CELLS).expect("valid box"))
        }
    })
}

/// Closed outlines of the progenitor for internal/external labels, when it has a clear inside.
fn outlines(spec: &CurveSpec, progenitor: &Polyline) -> Vec<Vec<Vec2>> {
    match *spec {
        CurveSpec::Cayley { a, b } => {
            if CayleyParams::new(a, b).map(|p| p.is_lemniscate()).unwrap_or(true) {
                return Vec::new();
            }
            // Each upper arc closes with its mirror image traversed backwards.
            progenitor
                .arcs
                .iter()
                .filter(|arc| arc.label.contains("upper"))
                .map(|arc| {
                    let mut ring = arc.points.clone();
                    ring.extend(arc.points.iter().rev().map(|p| p.mirror_x()));
                    ring
                })
                .collect()
        }
        CurveSpec::Ellipse { .. } | CurveSpec::Preset { name: Preset::UnitCircle } => {
            progenitor.arcs.iter().map(|a| a.points.clone()).collect()
        }
        CurveSpec::Preset { .. } => Vec::new(),
    }
}

fn check_cancel(cancel: Option<&AtomicBool>) -> Result<(), RunError> {
    match cancel {
        Some(c) if c.load(Ordering::Relaxed) => Err(RunError::Cancelled),
        _ => Ok(()),
    }
}

/// Run a scenario. Identical scenarios give identical documents, and identical JSON bytes.
pub fn run_scenario(s: &Scenario) -> Result<ResultDocument, RunError> {
    run_scenario_with(s, None)
}

/// [`run_scenario`] with a flag checked between stages.
pub fn run_scenario_with(s: &Scenario, cancel: Option<&AtomicBool>) -> Result<ResultDocument, RunError> {
    s.validate()?;
    let curves = strands(&s.curve)?;
    let range = match s.range {
        Some([lo, hi]) => Interval::new(lo, hi),
        None => crate::offset::default_range(&curves[0]),
    };
    let opts = SampleOptions::default();
    let mut diagnostics = Diagnostics::default();

    let mut progenitor = Polyline::default();
    for c in &curves {
        let mut p = sample_curve(c, range, s.samples, &opts);
        let label = strand_label(&s.curve, c);
        for arc in &mut p.arcs {
            arc.label = label.clone();
        }
        progenitor.extend(p);
    }
    if progenitor.is_empty() {
        diagnostics.notes.push(format!("progenitor has no samples on [{}, {}]", range.lo, range.hi));
    }
    let rings = outlines(&s.curve, &progenitor);
    let shape = match s.curve {
        CurveSpec::Cayley { a, b } => Some(cayley_params(a, b)?.shape()),
        _ => None,
    };

    let mut layers = Vec::new();
    for &d in &s.d {
        check_cancel(cancel)?;
        let fam = family(&s.curve, d, s.sides)?;
        let mut offsets = Polyline::default();
        if s.offsets {
            for p in fam.sample(Some(range), s.samples, &opts) {
                offsets.extend(p);
            }
            for arc in &mut offsets.arcs {
                arc.placement = classify_placement(arc, &rings);
            }
        }
        let mut singular_points = Vec::new();
        if s.singular {
            let search =
                SearchRange::single(range, s.samples).map_err(|e| ScenarioError::new("samples", e.to_string()))?;
            let (points, report) = all_singular_points(&fam, &search);
            for p in points {
                if p.residual <= p.tolerance() {
                    singular_points.push(p);
                } else {
                    diagnostics.uncertified.push(p);
                }
            }
            diagnostics
                .rejected_seeds
                .extend(report.diagnostics.into_iter().map(|seed| LayerSeedDiagnostic { d, seed }));
        }
        layers.push(Layer { d, offsets, singular_points });
    }

    let mut envelopes = Vec::new();
    if let Some(radius) = s.envelope {
        let runs: Vec<(Option<f64>, Radius)> = match radius {
            RadiusSpec::OffsetDistance => s.d.iter().map(|&d| (Some(d), Radius::Constant(d))).collect(),
            RadiusSpec::Constant { r } => vec![(None, Radius::Constant(r))],
            RadiusSpec::AbsCosCenterX => vec![(None, Radius::AbsCosCenterX)],
        };
        for (d, law) in runs {
            check_cancel(cancel)?;
            let mut envelope = Polyline::default();
            for c in &curves {
                let mut p = sample_envelope(&CircleFamily::new(c.clone(), law.clone()), range, s.samples, &opts);
                let label = strand_label(&s.curve, c);
                for arc in &mut p.arcs {
                    arc.label = label.clone();
                }
                envelope.extend(p);
            }
            envelopes.push(EnvelopeLayer { radius, d, envelope });
        }
    }

    let mut contours = None;
    if let Some(cs) = s.contour {
        check_cancel(cancel)?;
        let (poly, mut grid) = implicit(&s.curve)?;
        grid.nx = cs.cells;
        grid.ny = cs.cells;
        let loops = contour(&poly, &grid);
        let true_oval = match s.curve {
            CurveSpec::Cayley { a, b } => Some(filter_true_oval(&loops, &cayley_params(a, b)?)),
            _ => None,
        };
        contours = Some(ContourLayer { grid, loops, true_oval });
    }

    let doc = ResultDocument {
        schema_version: SCHEMA_VERSION.into(),
        engine: EngineInfo::default(),
        scenario: s.clone(),
        shape,
        parameter_range: range,
        progenitor,
        layers,
        envelopes,
        contours,
        diagnostics,
    };
    let bad = doc.arcs().flat_map(|a| a.points.iter()).find(|p| !p.is_finite()).copied();
    if let Some(bad) = bad {
        return Err(RunError::Numerical {
            message: format!("non-finite sample {bad:?}"),
            diagnostics: doc.diagnostics,
        });
    }
    Ok(doc)
}

fn strand_label(spec: &CurveSpec, c: &ParametricCurve) -> String {
    match spec {
        CurveSpec::Cayley { .. } if c.name().contains("lower") => "lower".into(),
        CurveSpec::Cayley { .. } => "upper".into(),
        _ => c.name().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cayley(a: f64, b: f64) -> Scenario {
        Scenario::new(CurveSpec::Cayley { a, b })
    }

    #[test]
    fn empty_d_list_gives_progenitor_only() {
        let doc = run_scenario(&cayley(1.0, 1.5)).unwrap();
        assert!(doc.layers.is_empty());
        assert_eq!(doc.progenitor.arcs.len(), 2);
        assert_eq!(doc.shape, Some(ShapeClass::NonConvexOval));
    }

    #[test]
    fn field_paths_on_errors() {
        let mut s = cayley(1.0, 1.0);
        s.d = vec![0.5, -1.0];
        assert_eq!(s.validate().unwrap_err().path, "d[1]");
        let e = Scenario::from_json(r#"{"curve": {"type": "cayley", "a": "x", "b": 1}}"#).unwrap_err();
        match e {
            ScenarioParseError::Invalid(e) => assert_eq!(e.path, "curve.a"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Scenario::from_json("{"), Err(ScenarioParseError::Syntax(_))));
        let e = Scenario::from_json(r#"{"curve": {"type": "ellipse", "a": 0, "b": 1}}"#).unwrap_err();
        assert_eq!(e, ScenarioParseError::Invalid(ScenarioError::new("curve.a", "must be finite and positive, got 0")));
    }

    #[test]
    fn json_round_trip_and_determinism() {
        let mut s = cayley(1.0, 1.0);
        s.d = vec![0.5];
        s.samples = 300;
        s.singular = true;
        let a = run_scenario(&s).unwrap().to_json();
        let b = run_scenario(&s).unwrap().to_json();
        assert_eq!(a, b);
        let doc = ResultDocument::from_json(&a).unwrap();
        assert_eq!(doc.to_json(), a);
        assert_eq!(doc, run_scenario(&s).unwrap());
    }

    #[test]
    fn placement_labels_for_ellipse() {
        let mut s = Scenario::new(CurveSpec::Ellipse { a: 5.0, b: 3.0 });
        s.d = vec![1.0];
        s.samples = 400;
        let doc = run_scenario(&s).unwrap();
        let tags: Vec<_> = doc.layers[0].offsets.arcs.iter().map(|a| a.placement).collect();
        use crate::polyline::Placement::*;
        assert_eq!(tags, vec![Some(Internal), Some(External)]);
    }

    #[test]
    fn cancellation_is_observed() {
        let mut s = cayley(1.0, 2.0);
        s.d = vec![0.5];
        let flag = AtomicBool::new(true);
        assert_eq!(run_scenario_with(&s, Some(&flag)), Err(RunError::Cancelled));
    }
}
