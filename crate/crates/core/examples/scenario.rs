//! Build a scenario, run it, and print the JSON document.

use ovalkit::scenario::{run_scenario, CurveSpec, RadiusSpec, Scenario};

fn main() {
    let mut s = Scenario::new(CurveSpec::Ellipse { a: 5.0, b: 3.0 });
    s.d = vec![1.0];
    s.samples = 64;
    s.envelope = Some(RadiusSpec::OffsetDistance);
    match run_scenario(&s) {
        Ok(doc) => print!("{}", doc.to_json()),
        Err(e) => eprintln!("{e}"),
    }
}
