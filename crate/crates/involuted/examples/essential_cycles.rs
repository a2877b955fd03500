//! Essential classes under a finite threshold: cap the unit square's Rips
//! scale at 1 so the loop never fills in, and print the tracked
//! zero-combination that represents it.

use involuted::{compute, io, DistanceMatrix, RipsConfig};

fn main() {
    let dm = DistanceMatrix::from_points(&[
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
        vec![0.0, 1.0],
    ])
    .unwrap();
    let cfg = RipsConfig {
        max_dim: 1,
        threshold: Some(1.0),
        modulus: 2,
    };
    let persistence = compute(&dm, &cfg).unwrap();
    for pair in &persistence.pairs {
        if !pair.is_essential() {
            continue;
        }
        println!(
            "dim {} class born at diameter {} never dies; representative: {}",
            pair.dim,
            pair.birth.diameter,
            io::format_chain(pair.representative.as_ref().unwrap(), &persistence.filtration)
        );
    }
}
