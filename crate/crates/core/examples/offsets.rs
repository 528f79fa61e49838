//! Both offsets of the lemniscate and of a convex oval, split into arcs at gaps.

use ovalkit::cayley::CayleyParams;
use ovalkit::offset::{OffsetFamily, Sides};
use ovalkit::polyline::SampleOptions;

fn main() {
    for (a, b, d) in [(1.0, 1.0, 0.5), (1.0, 2.0, 0.3)] {
        let p = CayleyParams::new(a, b).unwrap();
        let fam = OffsetFamily::cayley(&p, d, Sides::Both).unwrap();
        println!("a={a} b={b} d={d} ({:?})", p.shape());
        for poly in fam.sample(None, 500, &SampleOptions::default()) {
            for arc in &poly.arcs {
                let first = arc.points[0];
                let last = arc.points[arc.len() - 1];
                println!(
                    "  {:<12} {:>4} points  ({:+.3}, {:+.3}) .. ({:+.3}, {:+.3})",
                    arc.label,
                    arc.len(),
                    first.x,
                    first.y,
                    last.x,
                    last.y
                );
            }
            for gap in &poly.gaps {
                println!("  gap at t={:.6}: {:?}", gap.t, gap.reason);
            }
        }
    }
}
