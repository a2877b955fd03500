//! Built-in dataset generators and fixtures: a cycle-graph metric, seeded
//! random clouds, and the four-point demonstration filtration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rips::{DistanceMatrix, Filtration};

/// All-pairs shortest-path distances of the unweighted cycle graph on `n`
/// nodes: `d(i,j) = min(|i-j|, n-|i-j|)`. One loop, easy to scale, integer
/// distances with heavy ties.
pub fn cycle_graph_metric(n: usize) -> DistanceMatrix {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let around = i - j;
            let d = around.min(n - around) as f64;
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    DistanceMatrix::from_full(n, data).expect("cycle metric is symmetric by construction")
}

/// `n` points sampled uniformly from the unit cube `[0,1]^dim`.
pub fn uniform_cube(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect()
}

/// `n` points at random angles on the unit circle.
pub fn circle_sample(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            vec![theta.cos(), theta.sin()]
        })
        .collect()
}

/// `n` points uniform in area over the annulus with the given radii.
pub fn annulus_sample(n: usize, inner: f64, outer: f64, seed: u64) -> Vec<Vec<f64>> {
    assert!(0.0 <= inner && inner < outer, "need 0 <= inner < outer");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (rng.gen_range(inner * inner..outer * outer)).sqrt();
            vec![r * theta.cos(), r * theta.sin()]
        })
        .collect()
}

/// The demonstration filtration of the full simplex on four points
/// `a,b,c,d = 0,1,2,3`, with the bespoke order
/// edges `ab, ac, ad, bc, cd, bd` and triangles `abc, abd, acd, bcd`.
///
/// This order is not realizable as a Rips diameter order (it interleaves
/// `cd < bd` with `abd < acd`), which is exactly why it exercises the
/// explicit-filtration path. Filtration values are the positions themselves.
pub fn tetrahedron_filtration() -> Filtration {
    let order: Vec<Vec<u32>> = vec![
        vec![0],
        vec![1],
        vec![2],
        vec![3],
        vec![0, 1],
        vec![0, 2],
        vec![0, 3],
        vec![1, 2],
        vec![2, 3],
        vec![1, 3],
        vec![0, 1, 2],
        vec![0, 1, 3],
        vec![0, 2, 3],
        vec![1, 2, 3],
        vec![0, 1, 2, 3],
    ];
    let simplices: Vec<(Vec<u32>, f64)> = order
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i as f64))
        .collect();
    Filtration::from_explicit(4, &simplices).expect("fixture is a valid filtration")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_metric_values() {
        let dm = cycle_graph_metric(10);
        assert_eq!(dm.distance(0, 5), 5.0);
        assert_eq!(dm.distance(0, 7), 3.0);
        assert_eq!(dm.distance(7, 0), 3.0);
        assert_eq!(dm.distance(3, 3), 0.0);
    }

    #[test]
    fn seeded_generators_are_deterministic() {
        assert_eq!(uniform_cube(5, 3, 42), uniform_cube(5, 3, 42));
        assert_ne!(uniform_cube(5, 3, 42), uniform_cube(5, 3, 43));
        assert_eq!(circle_sample(4, 7), circle_sample(4, 7));
        assert_eq!(annulus_sample(4, 0.5, 1.0, 7), annulus_sample(4, 0.5, 1.0, 7));
    }

    #[test]
    fn circle_points_have_unit_norm() {
        for p in circle_sample(20, 3) {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn annulus_points_stay_in_the_annulus() {
        for p in annulus_sample(50, 0.6, 1.0, 9) {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((0.6..=1.0).contains(&r));
        }
    }

    #[test]
    fn fixture_orders_fifteen_simplices() {
        let filt = tetrahedron_filtration();
        assert_eq!(filt.len(), 15);
        assert_eq!(filt.simplex_count(1), 6);
        assert_eq!(filt.simplex_count(2), 4);
        // Edge order is the bespoke one: bc at position 7, cd at 8, bd at 9.
        assert_eq!(filt.vertices_of(7), vec![1, 2]);
        assert_eq!(filt.vertices_of(8), vec![2, 3]);
        assert_eq!(filt.vertices_of(9), vec![1, 3]);
    }
}
