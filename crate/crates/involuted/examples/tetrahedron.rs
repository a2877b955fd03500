//! The four-point walkthrough: an explicitly ordered filtration of the full
//! simplex on {a,b,c,d}, the phase-1 death extraction, the restricted
//! matrix, and the representative cycles.

use involuted::pipeline::{assemble_restricted, phase_one, phase_two};
use involuted::{datasets, io, ColumnSource, PrimeField};

fn main() {
    let filtration = datasets::tetrahedron_filtration();
    let field = PrimeField::new(2).unwrap();
    let names = ["a", "b", "c", "d"];
    let label = |position: usize| -> String {
        filtration
            .vertices_of(position)
            .iter()
            .map(|&v| names[v as usize])
            .collect()
    };

    let summary = phase_one(&filtration, field, 1, true, false);
    println!("deaths found by reducing the edge coboundary matrix:");
    for &death in summary.deaths(2) {
        println!("  {}", label(death));
    }

    let restricted = assemble_restricted(&summary, 2, &filtration, field, false).unwrap();
    let columns: Vec<String> = restricted.owners().iter().map(|&p| label(p)).collect();
    println!("restricted boundary matrix columns: {}", columns.join(", "));

    let reps = phase_two(&summary, &filtration, field, false).unwrap();
    println!("persistence pairs with representatives:");
    for &(birth, death) in summary.pairs(1) {
        let rep = &reps.pair_representatives[&(birth, death)];
        println!(
            "  ({}, {})  representative {}",
            label(birth),
            label(death),
            io::format_chain(rep, &filtration)
        );
    }
}
