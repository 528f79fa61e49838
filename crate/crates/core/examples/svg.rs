//! Render the d = 5 lemniscate offsets with their singular points. Writes `lemniscate-d5.svg`,
//! or the path given as the first argument.

use ovalkit::scenario::{run_scenario, CurveSpec, Scenario};
use ovalkit::svg::{emit_svg, SvgStyle};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "lemniscate-d5.svg".into());
    let mut s = Scenario::new(CurveSpec::Cayley { a: 1.0, b: 1.0 });
    s.d = vec![5.0];
    s.singular = true;
    let doc = run_scenario(&s).expect("valid scenario");
    std::fs::write(&out, emit_svg(&doc, &SvgStyle::default())).expect("writable output");
    println!("wrote {out}: {} arcs, {} singular points", doc.arcs().count(), doc.singular_points().count());
}
