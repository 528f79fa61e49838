//! The built-in figure gallery: a fixed list of named scenarios.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::offset::Sides;
use crate::scenario::{run_scenario, ContourSpec, CurveSpec, RadiusSpec, ResultDocument, RunError, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryEntry {
    pub name: String,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryConfig {
    pub entries: Vec<GalleryEntry>,
}

/// Distances for the offset series of the lemniscate `a = b = 1`.
pub const LEMNISCATE_SERIES: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

fn fmt_d(d: f64) -> String {
    format!("{d}").replace('.', "p")
}

impl GalleryConfig {
    pub fn builtin() -> Self {
        let mut entries = Vec::new();
        for d in LEMNISCATE_SERIES {
            let mut s = Scenario::new(CurveSpec::Cayley { a: 1.0, b: 1.0 });
            s.d = vec![d];
            s.samples = 4000;
            s.singular = true;
            entries.push(GalleryEntry { name: format!("lemniscate-d{}", fmt_d(d)), scenario: s });
        }
        for b in [2.0, 3.0, 4.0, 6.0] {
            let mut s = Scenario::new(CurveSpec::Cayley { a: 3.0, b });
            s.contour = Some(ContourSpec::default());
            entries.push(GalleryEntry { name: format!("cayley-3-{b}-contour"), scenario: s });
        }
        let mut s = Scenario::new(CurveSpec::Ellipse { a: 5.0, b: 3.0 });
        s.d = vec![1.0];
        s.envelope = Some(RadiusSpec::OffsetDistance);
        entries.push(GalleryEntry { name: "ellipse-5-3-envelope".into(), scenario: s });

        let mut s = Scenario::new(CurveSpec::Ellipse { a: 5.0, b: 3.0 });
        s.offsets = false;
        s.envelope = Some(RadiusSpec::AbsCosCenterX);
        entries.push(GalleryEntry { name: "ellipse-5-3-variable-radius".into(), scenario: s });

        let mut s = Scenario::new(CurveSpec::Ellipse { a: 17f64.sqrt(), b: 1.0 });
        s.d = vec![1.0];
        s.sides = Sides::Left;
        s.singular = true;
        entries.push(GalleryEntry { name: "ellipse-sqrt17-1-cusps".into(), scenario: s });

        GalleryConfig { entries }
    }

    pub fn get(&self, name: &str) -> Option<&GalleryEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Run every entry; scenarios run concurrently and results keep the entry order.
    pub fn run(&self) -> Vec<(String, Result<ResultDocument, RunError>)> {
        self.entries.par_iter().map(|e| (e.name.clone(), run_scenario(&e.scenario))).collect()
    }
}
