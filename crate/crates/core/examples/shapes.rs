//! Shape classes and implicit equations of Cayley ovals with a = 3.

use num_rational::BigRational;
use ovalkit::cayley::{cayley_implicit, classify_shape, CayleyParams};

fn main() {
    let sixteenth = BigRational::new(1.into(), 16.into());
    for b in [2, 3, 4, 6] {
        let p = CayleyParams::from_ints(3, b).expect("positive axes");
        println!("a=3 b={b} e={:.4} {:?}", p.e(), classify_shape(&p));
        println!("  {} = 0", cayley_implicit(&p).scaled(&sixteenth));
    }
}
