//! Run the built-in gallery and write JSON and SVG for every entry into a directory
//! (default `gallery/`).

use ovalkit::gallery::GalleryConfig;
use ovalkit::svg::{emit_svg, SvgStyle};

fn main() {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "gallery".into()));
    std::fs::create_dir_all(&dir).expect("output directory");
    for (name, result) in GalleryConfig::builtin().run() {
        match result {
            Ok(doc) => {
                std::fs::write(dir.join(format!("{name}.json")), doc.to_json()).unwrap();
                std::fs::write(dir.join(format!("{name}.svg")), emit_svg(&doc, &SvgStyle::default())).unwrap();
                println!("{name}: {} arcs, {} singular points", doc.arcs().count(), doc.singular_points().count());
            }
            Err(e) => eprintln!("{name}: {e}"),
        }
    }
}
