//! SVG rendering of result documents. Lossy: coordinates are rounded to six decimals.

use std::fmt::Write;

use crate::geom::Vec2;
use crate::polyline::{ArcKind, PolyArc, Side};
use crate::scenario::ResultDocument;
use crate::singular::{SingularKind, SingularPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    /// Output width in pixels; the height follows the aspect ratio of the geometry.
    pub width: f64,
    /// Stroke width as a fraction of the larger viewBox side.
    pub stroke: f64,
    /// Marker radius as a fraction of the larger viewBox side.
    pub marker: f64,
    pub progenitor: String,
    pub left: String,
    pub right: String,
    pub envelope: String,
    pub contour: String,
    pub cusp: String,
    pub crunode: String,
    pub background: Option<String>,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            width: 800.0,
            stroke: 0.002,
            marker: 0.006,
            progenitor: "#7b2fbf".into(),
            left: "#1a9641".into(),
            right: "#2b6cd4".into(),
            envelope: "#e08214".into(),
            contour: "#555555".into(),
            cusp: "#d7191c".into(),
            crunode: "#000000".into(),
            background: Some("#ffffff".into()),
        }
    }
}

impl SvgStyle {
    fn colour(&self, kind: ArcKind) -> &str {
        match kind {
            ArcKind::Progenitor => &self.progenitor,
            ArcKind::Offset(Side::Left) => &self.left,
            ArcKind::Offset(Side::Right) => &self.right,
            ArcKind::Envelope(_) => &self.envelope,
            ArcKind::Contour | ArcKind::TrueOval => &self.contour,
        }
    }
}

/// Six-decimal coordinate with trailing zeros dropped and no negative zero.
fn num(v: f64) -> String {
    let mut s = format!("{v:.6}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn class_of(kind: ArcKind) -> &'static str {
    match kind {
        ArcKind::Progenitor => "progenitor",
        ArcKind::Offset(Side::Left) => "offset left",
        ArcKind::Offset(Side::Right) => "offset right",
        ArcKind::Envelope(_) => "envelope",
        ArcKind::Contour => "contour",
        ArcKind::TrueOval => "contour true-oval",
    }
}

/// Bounding box of every drawn point, or the unit square when there is nothing to draw.
fn bounds(arcs: &[&PolyArc], points: &[&SingularPoint]) -> (Vec2, Vec2) {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let all = arcs.iter().flat_map(|a| a.points.iter().copied()).chain(points.iter().map(|p| p.location));
    for q in all {
        lo = Vec2::new(lo.x.min(q.x), lo.y.min(q.y));
        hi = Vec2::new(hi.x.max(q.x), hi.y.max(q.y));
    }
    if !(lo.x <= hi.x) {
        return (Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0));
    }
    let pad = |l: f64, h: f64| if h - l > 0.0 { (l, h) } else { (l - 0.5, h + 0.5) };
    let (x0, x1) = pad(lo.x, hi.x);
    let (y0, y1) = pad(lo.y, hi.y);
    (Vec2::new(x0, y0), Vec2::new(x1, y1))
}

/// One `<path>` per arc and one marker per singular point: triangles for cusps, circles for
/// crunodes. The y axis points up, as in the document.
pub fn emit_svg(doc: &ResultDocument, style: &SvgStyle) -> String {
    let arcs: Vec<&PolyArc> = doc.arcs().filter(|a| !a.is_empty()).collect();
    let points: Vec<&SingularPoint> = doc.singular_points().collect();
    let (lo, hi) = bounds(&arcs, &points);
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let margin = 0.05 * w.max(h);
    let (vx, vy, vw, vh) = (lo.x - margin, -hi.y - margin, w + 2.0 * margin, h + 2.0 * margin);
    let side = vw.max(vh);
    let height = style.width * vh / vw;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(style.width),
        num(height),
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );
    if let Some(bg) = &style.background {
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{bg}"/>"#,
            num(vx),
            num(vy),
            num(vw),
            num(vh)
        );
    }
    let _ = writeln!(
        out,
        r#"<g fill="none" stroke-width="{}" stroke-linejoin="round" stroke-linecap="round">"#,
        num(style.stroke * side)
    );
    for arc in &arcs {
        let mut d = String::new();
        for (k, q) in arc.points.iter().enumerate() {
            let _ = write!(d, "{}{} {}", if k == 0 { "M" } else { " L" }, num(q.x), num(-q.y));
        }
        let _ = writeln!(
            out,
            r#"<path class="{}" data-label="{}" stroke="{}" d="{d}"/>"#,
            class_of(arc.kind),
            escape(&arc.label),
            style.colour(arc.kind)
        );
    }
    let _ = writeln!(out, "</g>");

    let r = style.marker * side;
    let _ = writeln!(out, r#"<g class="singular-points" stroke="none">"#);
    for p in &points {
        let (x, y) = (p.location.x, -p.location.y);
        match p.kind {
            SingularKind::Cusp => {
                let _ = writeln!(
                    out,
                    r#"<polygon class="cusp" fill="{}" points="{},{} {},{} {},{}"/>"#,
                    style.cusp,
                    num(x),
                    num(y - r),
                    num(x - 0.866 * r),
                    num(y + 0.5 * r),
                    num(x + 0.866 * r),
                    num(y + 0.5 * r)
                );
            }
            SingularKind::Crunode => {
                let _ = writeln!(
                    out,
                    r#"<circle class="crunode" fill="{}" cx="{}" cy="{}" r="{}"/>"#,
                    style.crunode,
                    num(x),
                    num(y),
                    num(r)
                );
            }
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('"', "&quot;").replace('<', "&lt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{run_scenario, CurveSpec, Preset, Scenario};

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.0000001), "0");
        assert_eq!(num(0.1234567), "0.123457");
        assert_eq!(num(-2.5), "-2.5");
    }

    #[test]
    fn one_arc_no_markers() {
        let mut s = Scenario::new(CurveSpec::Preset { name: Preset::UnitCircle });
        s.samples = 100;
        let doc = run_scenario(&s).unwrap();
        let svg = emit_svg(&doc, &SvgStyle::default());
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<circle").count() + svg.matches("<polygon").count(), 0);
    }

    #[test]
    fn gaps_start_new_paths() {
        let mut s = Scenario::new(CurveSpec::Preset { name: Preset::CosSinCubed });
        s.samples = 200;
        s.d = vec![0.3];
        let doc = run_scenario(&s).unwrap();
        let arcs = doc.arcs().count();
        assert!(arcs > 3);
        let svg = emit_svg(&doc, &SvgStyle::default());
        assert_eq!(svg.matches("<path").count(), arcs);
        for line in svg.lines().filter(|l| l.starts_with("<path")) {
            assert_eq!(line.matches('M').count(), 1);
        }
    }
}
