//! Circle-family envelopes along the ellipse x^2/25 + y^2/9 = 1.

use std::f64::consts::PI;

use ovalkit::curve::{ellipse, Interval};
use ovalkit::envelope::{sample_envelope, CircleFamily, Radius};
use ovalkit::geom::hausdorff;
use ovalkit::offset::{OffsetFamily, OffsetSpec, Sides};
use ovalkit::polyline::SampleOptions;

fn main() {
    let c = ellipse(5.0, 3.0);
    let range = Interval::new(0.0, 2.0 * PI);
    let opts = SampleOptions { endpoint_inset: None, ..SampleOptions::default() };

    let env = sample_envelope(&CircleFamily::constant(c.clone(), 1.0), range, 2000, &opts);
    let spec = OffsetSpec::new(c.clone(), 1.0, Sides::Both).unwrap();
    let offsets: Vec<_> = OffsetFamily::from_spec(&spec)
        .sample(Some(range), 2000, &opts)
        .iter()
        .flat_map(|p| p.points().collect::<Vec<_>>())
        .collect();
    let env_pts: Vec<_> = env.points().collect();
    println!("r = 1: {} points, distance to the offsets {:.2e}", env_pts.len(), hausdorff(&env_pts, &offsets));

    // r(t) = |cos x(t)| has a kink wherever cos x(t) = 0; those samples are skipped.
    let env = sample_envelope(&CircleFamily::new(c, Radius::AbsCosCenterX), range, 2000, &opts);
    println!("r = |cos x|: {} arcs, {} gaps", env.arcs.len(), env.gaps.len());
    for gap in env.gaps.iter().take(6) {
        println!("  t={:.5} {:?}", gap.t, gap.reason);
    }
}
