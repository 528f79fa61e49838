//! Zero set of the Cayley octic, with the loops that are not on the oval filtered out.

use ovalkit::cayley::{cayley_implicit, CayleyParams};
use ovalkit::contour::{contour, filter_true_oval, median_bifocal_residual, ContourGrid};

fn main() {
    for b in [2, 3, 4, 6] {
        let p = CayleyParams::from_ints(3, b).unwrap();
        let grid = ContourGrid::for_cayley(&p);
        let loops = contour(&cayley_implicit(&p), &grid);
        let kept = filter_true_oval(&loops, &p);
        println!("a=3 b={b}: {} loops, {} on the oval", loops.len(), kept.len());
        for l in &loops {
            println!("  {:>5} vertices, median residual {:.2e}", l.len(), median_bifocal_residual(l, &p));
        }
    }
}
