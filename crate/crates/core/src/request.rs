//! Flat key/value scenario descriptions, shared by the command line and the HTTP query string.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::offset::Sides;
use crate::scenario::{ContourSpec, CurveSpec, OutputFormat, Preset, RadiusSpec, Scenario, ScenarioError};

/// What a request asks for. Each operation switches on its part of the scenario and leaves the
/// rest as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    Offset,
    Envelope,
    Singular,
    Contour,
}

impl Operation {
    pub const ALL: [Operation; 4] = [Operation::Offset, Operation::Envelope, Operation::Singular, Operation::Contour];

    pub fn as_str(self) -> &'static str {
        match self {
            Operation::Offset => "offset",
            Operation::Envelope => "envelope",
            Operation::Singular => "singular",
            Operation::Contour => "contour",
        }
    }

    pub fn apply(self, s: &mut Scenario) {
        match self {
            Operation::Offset => s.offsets = true,
            Operation::Envelope => {
                s.envelope.get_or_insert(RadiusSpec::OffsetDistance);
            }
            Operation::Singular => s.singular = true,
            Operation::Contour => {
                s.contour.get_or_insert_with(ContourSpec::default);
            }
        }
    }
}

/// Curve selector: `cayley`, `ellipse`, or a preset name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Cayley,
    Ellipse,
    Preset(Preset),
}

impl FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "cayley" => CurveKind::Cayley,
            "ellipse" => CurveKind::Ellipse,
            "unit_circle" | "circle" => CurveKind::Preset(Preset::UnitCircle),
            "figure_eight" => CurveKind::Preset(Preset::FigureEight),
            "cos_sin_cubed" => CurveKind::Preset(Preset::CosSinCubed),
            other => {
                return Err(format!(
                    "unknown curve `{other}`; expected cayley, ellipse, unit_circle, figure_eight or cos_sin_cubed"
                ))
            }
        })
    }
}

/// Radius-law selector for the envelope.
pub fn parse_radius(law: &str, r: Option<f64>) -> Result<RadiusSpec, String> {
    match (law, r) {
        ("offset_distance", None) => Ok(RadiusSpec::OffsetDistance),
        ("abs_cos_center_x", None) => Ok(RadiusSpec::AbsCosCenterX),
        ("constant", Some(r)) => Ok(RadiusSpec::Constant { r }),
        ("constant", None) => Err("the constant law needs `r`".into()),
        ("offset_distance" | "abs_cos_center_x", Some(_)) => Err("`r` only applies to the constant law".into()),
        (other, _) => {
            Err(format!("unknown radius law `{other}`; expected offset_distance, constant or abs_cos_center_x"))
        }
    }
}

pub fn parse_sides(s: &str) -> Result<Sides, String> {
    match s {
        "left" => Ok(Sides::Left),
        "right" => Ok(Sides::Right),
        "both" => Ok(Sides::Both),
        other => Err(format!("unknown side `{other}`; expected left, right or both")),
    }
}

pub fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "svg" => Ok(OutputFormat::Svg),
        other => Err(format!("unknown format `{other}`; expected json or svg")),
    }
}

/// Comma-separated list of numbers, e.g. `0.1,0.5,1`.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect()
}

/// `lo,hi`.
pub fn parse_range(s: &str) -> Result<[f64; 2], String> {
    match parse_list(s)?.as_slice() {
        &[lo, hi] => Ok([lo, hi]),
        other => Err(format!("expected two numbers `lo,hi`, got {}", other.len())),
    }
}

/// Scenario fields given one by one. Unset fields fall back to a base scenario, then to the
/// scenario defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioFlags {
    pub curve: Option<CurveKind>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub d: Option<Vec<f64>>,
    pub sides: Option<Sides>,
    pub samples: Option<usize>,
    pub range: Option<[f64; 2]>,
    pub format: Option<OutputFormat>,
    pub radius: Option<RadiusSpec>,
    pub cells: Option<usize>,
}

fn field<T>(key: &str, r: Result<T, String>) -> Result<T, ScenarioError> {
    r.map_err(|m| ScenarioError::new(key, m))
}

impl ScenarioFlags {
    /// Read query-string pairs. Unknown keys are rejected; `resolution` is left to the caller.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self, ScenarioError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut f = ScenarioFlags::default();
        let mut law: Option<String> = None;
        let mut r: Option<f64> = None;
        let num = |k: &str, v: &str| field(k, v.parse::<f64>().map_err(|e| format!("`{v}`: {e}")));
        let int = |k: &str, v: &str| field(k, v.parse::<usize>().map_err(|e| format!("`{v}`: {e}")));
        for (k, v) in pairs {
            match k {
                "curve" => f.curve = Some(field(k, v.parse())?),
                "a" => f.a = Some(num(k, v)?),
                "b" => f.b = Some(num(k, v)?),
                "d" => f.d = Some(field(k, parse_list(v))?),
                "side" | "sides" => f.sides = Some(field(k, parse_sides(v))?),
                "samples" => f.samples = Some(int(k, v)?),
                "range" => f.range = Some(field(k, parse_range(v))?),
                "format" => f.format = Some(field(k, parse_format(v))?),
                "law" => law = Some(v.to_string()),
                "r" => r = Some(num(k, v)?),
                "cells" => f.cells = Some(int(k, v)?),
                other => return Err(ScenarioError::new(other, "unknown parameter")),
            }
        }
        if law.is_some() || r.is_some() {
            let law = law.as_deref().unwrap_or("constant");
            f.radius = Some(field("law", parse_radius(law, r))?);
        }
        Ok(f)
    }

    /// Build and validate the scenario for `op`.
    pub fn build(&self, op: Operation, base: Option<Scenario>) -> Result<Scenario, ScenarioError> {
        let mut s = match base {
            Some(mut s) => {
                if let Some(kind) = self.curve {
                    s.curve = self.curve_spec(kind, Some(s.curve))?;
                } else {
                    s.curve = match s.curve {
                        CurveSpec::Cayley { a, b } => {
                            CurveSpec::Cayley { a: self.a.unwrap_or(a), b: self.b.unwrap_or(b) }
                        }
                        CurveSpec::Ellipse { a, b } => {
                            CurveSpec::Ellipse { a: self.a.unwrap_or(a), b: self.b.unwrap_or(b) }
                        }
                        p @ CurveSpec::Preset { .. } => {
                            if self.a.is_some() || self.b.is_some() {
                                return Err(ScenarioError::new("a", "presets take no axes"));
                            }
                            p
                        }
                    };
                }
                s
            }
            None => {
                let Some(kind) = self.curve else {
                    return Err(ScenarioError::new("curve", "required"));
                };
                Scenario::new(self.curve_spec(kind, None)?)
            }
        };
        if let Some(d) = &self.d {
            s.d = d.clone();
        }
        if let Some(x) = self.sides {
            s.sides = x;
        }
        if let Some(x) = self.samples {
            s.samples = x;
        }
        if let Some(x) = self.range {
            s.range = Some(x);
        }
        if let Some(x) = self.format {
            s.format = x;
        }
        if let Some(x) = self.radius {
            s.envelope = Some(x);
        }
        if let Some(cells) = self.cells {
            s.contour = Some(ContourSpec { cells });
        }
        op.apply(&mut s);
        s.validate()?;
        Ok(s)
    }

    fn curve_spec(&self, kind: CurveKind, base: Option<CurveSpec>) -> Result<CurveSpec, ScenarioError> {
        let base_axes = match base {
            Some(CurveSpec::Cayley { a, b } | CurveSpec::Ellipse { a, b }) => Some((a, b)),
            _ => None,
        };
        let axes = || -> Result<(f64, f64), ScenarioError> {
            let a = self.a.or(base_axes.map(|x| x.0)).ok_or_else(|| ScenarioError::new("a", "required"))?;
            let b = self.b.or(base_axes.map(|x| x.1)).ok_or_else(|| ScenarioError::new("b", "required"))?;
            Ok((a, b))
        };
        Ok(match kind {
            CurveKind::Cayley => {
                let (a, b) = axes()?;
                CurveSpec::Cayley { a, b }
            }
            CurveKind::Ellipse => {
                let (a, b) = axes()?;
                CurveSpec::Ellipse { a, b }
            }
            CurveKind::Preset(name) => {
                if self.a.is_some() || self.b.is_some() {
                    return Err(ScenarioError::new("a", "presets take no axes"));
                }
                CurveSpec::Preset { name }
            }
        })
    }
}
