//! How much smaller the restricted matrices are: per dimension, compare the
//! column count of the restricted boundary matrix against the full boundary
//! and coboundary blocks, and check the death counts against the closed
//! formula for full filtrations.

use involuted::pipeline::{expected_death_count, phase_one};
use involuted::{datasets, Filtration, PrimeField, RipsConfig};

fn main() {
    let n = 25;
    let dm = datasets::cycle_graph_metric(n);
    let cfg = RipsConfig {
        max_dim: 2,
        threshold: None,
        modulus: 2,
    };
    let filtration = Filtration::build(&dm, &cfg).unwrap();
    let field = PrimeField::new(2).unwrap();
    let summary = phase_one(&filtration, field, cfg.max_dim, true, true);

    println!("cycle-graph metric on {n} points, full filtration");
    println!("{:>4} {:>12} {:>12} {:>12}", "dim", "d_k cols", "bd_k cols", "D_k cols");
    for k in 0..=cfg.max_dim + 1 {
        let restricted = summary.deaths(k).len() + summary.essentials(k).len();
        println!(
            "{:>4} {:>12} {:>12} {:>12}",
            k,
            filtration.simplex_count(k),
            if k >= 1 { filtration.simplex_count(k) } else { 0 },
            restricted
        );
        if k >= 1 {
            assert_eq!(summary.deaths(k).len() as u64, expected_death_count(n, k));
        }
    }
    println!("death counts match the alternating binomial formula");
}
