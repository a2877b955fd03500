//! Parse a lower-distance matrix from text and print the diagram the same
//! way the command-line `run` verb would.

use involuted::io::{self, DiagramDocument, OutputFormat};
use involuted::pipeline::Mode;
use involuted::{compute, RipsConfig};

fn main() {
    // Unit square: sides 1, diagonals sqrt(2).
    // Order: d(1,0), d(2,0), d(2,1), d(3,0), d(3,1), d(3,2).
    let text = "1, 1.4142135623730951, 1, 1, 1.4142135623730951, 1";
    let dm = io::parse_lower_distance(text).unwrap();
    let cfg = RipsConfig {
        max_dim: 1,
        threshold: None,
        modulus: 2,
    };
    let persistence = compute(&dm, &cfg).unwrap();
    let doc = DiagramDocument::from_persistence(&persistence, Mode::Involuted, true);
    print!("{}", io::emit(&doc, OutputFormat::Text));
}
