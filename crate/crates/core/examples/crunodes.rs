//! Self-crossings of the lemniscate offsets, seeded from sampled polylines and refined by Newton.

use ovalkit::cayley::CayleyParams;
use ovalkit::offset::{OffsetFamily, Sides};
use ovalkit::singular::{all_singular_points, SearchRange, SingularKind};

fn main() {
    let p = CayleyParams::new(1.0, 1.0).unwrap();
    for d in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let fam = OffsetFamily::cayley(&p, d, Sides::Both).unwrap();
        let range = SearchRange::trace(&fam.members[0].curve, 4000).unwrap();
        let (points, report) = all_singular_points(&fam, &range);
        println!("d={d}: {} seeds, {} rejected", report.seeds.len(), report.diagnostics.len());
        for q in points {
            let kind = match q.kind {
                SingularKind::Cusp => "cusp",
                SingularKind::Crunode => "crunode",
            };
            println!(
                "  {kind:<8} ({:+.9}, {:+.9})  {:?}  residual {:.1e}",
                q.location.x, q.location.y, q.sources, q.residual
            );
        }
    }
}
