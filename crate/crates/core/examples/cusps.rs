//! Cusps on the inner offset of a thin ellipse, found two ways.

use std::f64::consts::PI;

use ovalkit::curve::{ellipse, Interval};
use ovalkit::offset::OffsetSpec;
use ovalkit::polyline::Side;
use ovalkit::singular::{find_cusps_curvature, find_cusps_stationary, SearchRange};

fn main() {
    let spec = OffsetSpec::new(ellipse(17f64.sqrt(), 1.0), 1.0, Side::Left).unwrap();
    let range = SearchRange::single(Interval::new(0.0, 2.0 * PI), 2000).unwrap();
    let by_curvature = find_cusps_curvature(&spec, &range);
    let by_velocity = find_cusps_stationary(&spec, &range);
    println!("{} cusps", by_curvature.len());
    for (a, b) in by_curvature.iter().zip(&by_velocity) {
        println!(
            "  t={:.12} ({:+.6}, {:+.6})  residual {:.1e}  |dt| between methods {:.1e}",
            a.params[0],
            a.location.x,
            a.location.y,
            a.residual,
            (a.params[0] - b.params[0]).abs()
        );
    }
}
