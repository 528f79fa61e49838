//! Sweep-based polyline crossing search against the quadratic reference.

use std::time::Instant;

use ovalkit::curve::figure_eight;
use ovalkit::curve::Interval;
use ovalkit::intersect::{polyline_oracle, polyline_oracle_brute};
use ovalkit::offset::{sample_offset, OffsetSpec, Sides};

fn main() {
    let spec = OffsetSpec::new(figure_eight(), 0.3, Sides::Left).unwrap();
    let poly = sample_offset(&spec, Interval::new(0.0, std::f64::consts::TAU), 4000);
    let t = Instant::now();
    let fast = polyline_oracle(&poly, &poly);
    let fast_time = t.elapsed();
    let t = Instant::now();
    let slow = polyline_oracle_brute(&poly, &poly);
    println!("sweep: {} crossings in {:?}", fast.len(), fast_time);
    println!("brute: {} crossings in {:?}", slow.len(), t.elapsed());
    for s in &fast {
        println!("  ({:+.6}, {:+.6}) at s={:.6}, t={:.6}", s.point.x, s.point.y, s.s, s.t);
    }
}
