//! Render a persistence diagram as a self-contained SVG: an annulus sample
//! with one prominent loop, written to `diagram.svg`.

use involuted::io::{self, DiagramDocument, OutputFormat};
use involuted::pipeline::Mode;
use involuted::{compute, datasets, DistanceMatrix, RipsConfig};

fn main() {
    let points = datasets::annulus_sample(40, 0.7, 1.0, 11);
    let dm = DistanceMatrix::from_points(&points).unwrap();
    let cfg = RipsConfig {
        max_dim: 1,
        threshold: None,
        modulus: 2,
    };
    let persistence = compute(&dm, &cfg).unwrap();
    let doc = DiagramDocument::from_persistence(&persistence, Mode::Involuted, true);
    let svg = io::emit(&doc, OutputFormat::Svg);
    std::fs::write("diagram.svg", &svg).unwrap();
    println!("wrote diagram.svg ({} bytes)", svg.len());
}
