//! Representative cycles of a noisy circle: compute dimension-1 persistence
//! of 20 random points on the unit circle and print the most persistent
//! loop along with the cycle that witnesses it.

use involuted::{compute, datasets, io, DistanceMatrix, RipsConfig};

fn main() {
    let points = datasets::circle_sample(20, 1);
    let dm = DistanceMatrix::from_points(&points).unwrap();
    let cfg = RipsConfig {
        max_dim: 1,
        threshold: None,
        modulus: 2,
    };
    let persistence = compute(&dm, &cfg).unwrap();

    let mut loops: Vec<_> = persistence
        .pairs_in_dim(1)
        .filter(|p| !p.is_trivial())
        .collect();
    loops.sort_by(|a, b| {
        let pa = a.death.map_or(f64::INFINITY, |d| d.diameter) - a.birth.diameter;
        let pb = b.death.map_or(f64::INFINITY, |d| d.diameter) - b.birth.diameter;
        pb.total_cmp(&pa)
    });

    println!("dimension-1 intervals, most persistent first:");
    for pair in loops {
        let death = pair
            .death
            .map_or("inf".to_string(), |d| format!("{:.4}", d.diameter));
        println!(
            "  [{:.4}, {})  cycle: {}",
            pair.birth.diameter,
            death,
            io::format_chain(pair.representative.as_ref().unwrap(), &persistence.filtration)
        );
    }
}
