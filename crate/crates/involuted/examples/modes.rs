//! The three computation modes side by side on one dataset: phase-1-only
//! cohomology, the involuted pipeline, and the dense oracle, with wall
//! times. The diagrams are identical; only the cost differs.

use std::time::Instant;

use involuted::oracle::DEFAULT_MAX_COLUMNS;
use involuted::pipeline::{compute_with, ComputeOptions, Mode};
use involuted::{datasets, RipsConfig};

fn main() {
    let dm = datasets::cycle_graph_metric(24);
    let cfg = RipsConfig {
        max_dim: 1,
        threshold: None,
        modulus: 2,
    };
    let mut baseline = None;
    for mode in [Mode::Cohomology, Mode::Involuted, Mode::HomologyOracle] {
        let options = ComputeOptions {
            mode,
            oracle_max_columns: DEFAULT_MAX_COLUMNS,
            ..ComputeOptions::default()
        };
        let start = Instant::now();
        let persistence = compute_with(&dm, &cfg, &options).unwrap();
        let elapsed = start.elapsed();
        let points = persistence.diagram_points();
        match &baseline {
            None => baseline = Some(points),
            Some(b) => assert_eq!(b, &points, "modes must agree"),
        }
        println!(
            "{:<16} {:>10.3} ms   {} intervals",
            mode.as_str(),
            elapsed.as_secs_f64() * 1e3,
            persistence.pairs.len()
        );
    }
}
