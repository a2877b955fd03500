//! Vietoris-Rips filtrations: simplex diameters, threshold, and the global
//! injective filtration order.
//!
//! Simplices are ordered by diameter, then dimension, then combinatorial
//! rank. The rank tie-break is arbitrary as far as the diagram is concerned;
//! fixing it makes every run deterministic and lets golden tests pin exact
//! orders. One global order underlies both the boundary and the coboundary
//! matrices, which is what makes the homology and cohomology pairings agree.

use std::collections::HashMap;

use thiserror::Error;

use crate::simplex::{self, BinomialTable, SimplexError, SimplexIndex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RipsError {
    #[error("distance matrix must be square, got {0} entries")]
    NotSquare(usize),
    #[error("lower-triangular input of {count} entries is not n(n-1)/2 for any n")]
    NotTriangular { count: usize },
    #[error("d({i},{j}) = {value} is not a finite non-negative number")]
    BadDistance { i: usize, j: usize, value: f64 },
    #[error("matrix not symmetric at ({i},{j}): {a} vs {b}")]
    NotSymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("diagonal entry d({0},{0}) = {1} must be zero")]
    NonZeroDiagonal(usize, f64),
    #[error("points must all have the same dimension")]
    RaggedPoints,
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("explicit filtration invalid: {0}")]
    BadExplicitFiltration(String),
}

/// A finite symmetric dissimilarity matrix with zero diagonal.
///
/// The triangle inequality is deliberately not required: Rips filtrations are
/// well defined for arbitrary symmetric dissimilarities, and graph-derived
/// inputs routinely violate it.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// From a full row-major `n x n` grid.
    pub fn from_full(n: usize, data: Vec<f64>) -> Result<Self, RipsError> {
        if data.len() != n * n {
            return Err(RipsError::NotSquare(data.len()));
        }
        for i in 0..n {
            let dii = data[i * n + i];
            if dii != 0.0 {
                return Err(RipsError::NonZeroDiagonal(i, dii));
            }
            for j in 0..i {
                let a = data[i * n + j];
                let b = data[j * n + i];
                if !a.is_finite() || a < 0.0 {
                    return Err(RipsError::BadDistance { i, j, value: a });
                }
                if a != b {
                    return Err(RipsError::NotSymmetric { i, j, a, b });
                }
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    /// From the strict lower triangle in row-major order:
    /// `d(1,0), d(2,0), d(2,1), d(3,0), ...`
    pub fn from_lower_triangular(entries: &[f64]) -> Result<Self, RipsError> {
        let count = entries.len();
        let n = point_count_for_triangular(count).ok_or(RipsError::NotTriangular { count })?;
        let mut data = vec![0.0; n * n];
        let mut it = entries.iter();
        for i in 1..n {
            for j in 0..i {
                let v = *it.next().unwrap();
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        DistanceMatrix::from_full(n, data)
    }

    /// Euclidean distance matrix of a point cloud.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self, RipsError> {
        let n = points.len();
        if n > 0 {
            let d = points[0].len();
            if points.iter().any(|p| p.len() != d) {
                return Err(RipsError::RaggedPoints);
            }
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                let dist = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                data[i * n + j] = dist;
                data[j * n + i] = dist;
            }
        }
        DistanceMatrix::from_full(n, data)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Median of the `n(n-1)/2` pairwise distances (lower of the two middle
    /// values for even counts). Zero for fewer than two points.
    pub fn median_pairwise_distance(&self) -> f64 {
        let mut all: Vec<f64> = (0..self.n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| self.distance(i, j))
            .collect();
        if all.is_empty() {
            return 0.0;
        }
        all.sort_by(f64::total_cmp);
        all[(all.len() - 1) / 2]
    }

    /// The strict lower triangle in row-major order.
    pub fn lower_triangular(&self) -> Vec<f64> {
        (1..self.n)
            .flat_map(|i| (0..i).map(move |j| self.distance(i, j)))
            .collect()
    }
}

/// Finds `n` with `n(n-1)/2 == count`; `None` when no such `n` exists.
/// By convention zero entries decode to zero points.
pub fn point_count_for_triangular(count: usize) -> Option<usize> {
    if count == 0 {
        return Some(0);
    }
    let root = ((1 + 8 * count as u128) as f64).sqrt() as usize;
    let n = root.div_ceil(2);
    (n.saturating_sub(2).max(1)..=n + 2).find(|cand| cand * (cand - 1) / 2 == count)
}

/// Computation parameters: highest homology dimension, Rips scale bound, and
/// the coefficient field modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RipsConfig {
    pub max_dim: usize,
    /// `None` computes the full filtration.
    pub threshold: Option<f64>,
    pub modulus: u32,
}

impl Default for RipsConfig {
    fn default() -> Self {
        RipsConfig {
            max_dim: 1,
            threshold: None,
            modulus: 2,
        }
    }
}

/// One simplex of the filtration with its diameter and its global position
/// in the injective filtration order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiltrationEntry {
    pub simplex: SimplexIndex,
    pub diameter: f64,
    pub position: usize,
}

/// A fixed injective filtration: every simplex of every dimension in one
/// total order, with per-dimension lookup from combinatorial rank to global
/// position.
#[derive(Debug, Clone)]
pub struct Filtration {
    n: usize,
    entries: Vec<FiltrationEntry>,
    by_dim: Vec<Vec<usize>>,
    rank_to_position: Vec<HashMap<u64, usize>>,
    binomials: BinomialTable,
}

impl Filtration {
    /// Enumerates all simplices of dimension `0..=cfg.max_dim + 1` with
    /// diameter within the threshold and fixes the global order
    /// (diameter, dimension, rank).
    pub fn build(dm: &DistanceMatrix, cfg: &RipsConfig) -> Result<Self, RipsError> {
        let n = dm.len();
        let max_simplex_dim = (cfg.max_dim + 1).min(n.saturating_sub(1));
        let binomials = BinomialTable::new(n, max_simplex_dim + 2)?;
        let mut raw: Vec<(f64, usize, u64)> = Vec::new();
        for dim in 0..=max_simplex_dim {
            for_each_combination(n, dim + 1, |vertices| {
                let diam = diameter_of_vertices(vertices, dm);
                if cfg.threshold.is_none_or(|t| diam <= t) {
                    let rank = vertices
                        .iter()
                        .enumerate()
                        .map(|(j, &v)| binomials.binomial(v as usize, j + 1))
                        .sum();
                    raw.push((diam, dim, rank));
                }
            });
        }
        raw.sort_unstable_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        let entries = raw
            .into_iter()
            .enumerate()
            .map(|(position, (diameter, dim, rank))| FiltrationEntry {
                simplex: SimplexIndex::new(dim, rank),
                diameter,
                position,
            })
            .collect();
        Ok(Self::index(n, entries, binomials))
    }

    /// Builds a filtration from an explicit ordered list of
    /// `(vertices, filtration value)`. The list order is the filtration
    /// order; values must be non-decreasing and every proper face must
    /// appear before its cofaces.
    ///
    /// This is the entry point for hand-constructed fixtures and for
    /// filtrations that are not realizable as a Rips diameter order.
    pub fn from_explicit(n: usize, simplices: &[(Vec<u32>, f64)]) -> Result<Self, RipsError> {
        let max_dim = simplices
            .iter()
            .map(|(v, _)| v.len().saturating_sub(1))
            .max()
            .unwrap_or(0);
        let binomials = BinomialTable::new(n, max_dim + 2)?;
        let mut entries = Vec::with_capacity(simplices.len());
        let mut seen: Vec<HashMap<u64, usize>> = vec![HashMap::new(); max_dim + 1];
        let mut last_value = f64::NEG_INFINITY;
        for (position, (vertices, value)) in simplices.iter().enumerate() {
            let s = simplex::encode(vertices, &binomials)?;
            if *value < last_value {
                return Err(RipsError::BadExplicitFiltration(format!(
                    "filtration values must be non-decreasing, {value} after {last_value}"
                )));
            }
            last_value = *value;
            if seen[s.dim].contains_key(&s.rank) {
                return Err(RipsError::BadExplicitFiltration(format!(
                    "duplicate simplex {vertices:?}"
                )));
            }
            for (facet, _) in simplex::facets(s, &binomials) {
                if !seen[facet.dim].contains_key(&facet.rank) {
                    return Err(RipsError::BadExplicitFiltration(format!(
                        "simplex {vertices:?} appears before one of its facets"
                    )));
                }
            }
            seen[s.dim].insert(s.rank, position);
            entries.push(FiltrationEntry {
                simplex: s,
                diameter: *value,
                position,
            });
        }
        Ok(Self::index(n, entries, binomials))
    }

    fn index(n: usize, entries: Vec<FiltrationEntry>, binomials: BinomialTable) -> Self {
        let max_dim = entries.iter().map(|e| e.simplex.dim).max().map_or(0, |d| d);
        let mut by_dim = vec![Vec::new(); max_dim + 1];
        let mut rank_to_position = vec![HashMap::new(); max_dim + 1];
        for e in &entries {
            by_dim[e.simplex.dim].push(e.position);
            rank_to_position[e.simplex.dim].insert(e.simplex.rank, e.position);
        }
        Filtration {
            n,
            entries,
            by_dim,
            rank_to_position,
            binomials,
        }
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    /// Total number of simplices across all dimensions.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, position: usize) -> &FiltrationEntry {
        &self.entries[position]
    }

    pub fn entries(&self) -> &[FiltrationEntry] {
        &self.entries
    }

    /// Positions of all p-simplices in ascending filtration order.
    pub fn positions_of_dim(&self, dim: usize) -> &[usize] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn simplex_count(&self, dim: usize) -> usize {
        self.positions_of_dim(dim).len()
    }

    /// Highest simplex dimension present.
    pub fn max_simplex_dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn position_of(&self, dim: usize, rank: u64) -> Option<usize> {
        self.rank_to_position.get(dim)?.get(&rank).copied()
    }

    pub fn binomials(&self) -> &BinomialTable {
        &self.binomials
    }

    pub fn vertices_of(&self, position: usize) -> Vec<u32> {
        simplex::decode(self.entries[position].simplex, &self.binomials)
            .expect("filtration entries are valid simplices")
    }
}

/// Diameter of a simplex: the maximum pairwise distance of its vertex set,
/// zero for vertices.
pub fn diameter(s: SimplexIndex, dm: &DistanceMatrix, table: &BinomialTable) -> f64 {
    let vertices = simplex::decode(s, table).expect("simplex must be valid for its table");
    diameter_of_vertices(&vertices, dm)
}

fn diameter_of_vertices(vertices: &[u32], dm: &DistanceMatrix) -> f64 {
    let mut diam = 0.0f64;
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            diam = diam.max(dm.distance(a as usize, b as usize));
        }
    }
    diam
}

/// Calls `f` on every strictly increasing k-tuple over `0..n` in
/// lexicographic order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[u32])) {
    if k == 0 || k > n {
        return;
    }
    let mut idx: Vec<u32> = (0..k as u32).collect();
    loop {
        f(&idx);
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < (n - k + i) as u32 {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> DistanceMatrix {
        DistanceMatrix::from_points(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn diameter_examples() {
        let dm = unit_square();
        let t = dm_table(&dm);
        let v = simplex::encode(&[2], &t).unwrap();
        assert_eq!(diameter(v, &dm, &t), 0.0);
        let e = simplex::encode(&[0, 2], &t).unwrap();
        assert_eq!(diameter(e, &dm, &t), 2.0f64.sqrt());
        let all = simplex::encode(&[0, 1, 2, 3], &t).unwrap();
        assert_eq!(diameter(all, &dm, &t), 2.0f64.sqrt());
    }

    fn dm_table(dm: &DistanceMatrix) -> BinomialTable {
        BinomialTable::new(dm.len(), dm.len()).unwrap()
    }

    #[test]
    fn equilateral_triangle_edge_order_is_rank_order() {
        let dm = DistanceMatrix::from_lower_triangular(&[1.0, 1.0, 1.0]).unwrap();
        let cfg = RipsConfig {
            max_dim: 1,
            threshold: None,
            modulus: 2,
        };
        let filt = Filtration::build(&dm, &cfg).unwrap();
        let edges: Vec<u64> = filt
            .positions_of_dim(1)
            .iter()
            .map(|&p| filt.entry(p).simplex.rank)
            .collect();
        assert_eq!(edges, vec![0, 1, 2]);
        assert!(filt
            .positions_of_dim(1)
            .iter()
            .all(|&p| filt.entry(p).diameter == 1.0));
    }

    #[test]
    fn unit_square_threshold_one_keeps_only_sides() {
        let dm = unit_square();
        let cfg = RipsConfig {
            max_dim: 1,
            threshold: Some(1.0),
            modulus: 2,
        };
        let filt = Filtration::build(&dm, &cfg).unwrap();
        assert_eq!(filt.simplex_count(1), 4);
        assert!(filt
            .positions_of_dim(1)
            .iter()
            .all(|&p| filt.entry(p).diameter == 1.0));
        assert_eq!(filt.simplex_count(2), 0);
    }

    #[test]
    fn all_distinct_distances_sort_by_diameter() {
        // Distances chosen so the edge order is fully determined by diameter.
        let dm = DistanceMatrix::from_lower_triangular(&[1.0, 2.0, 4.0, 3.0, 5.0, 6.0]).unwrap();
        let cfg = RipsConfig {
            max_dim: 1,
            threshold: None,
            modulus: 2,
        };
        let filt = Filtration::build(&dm, &cfg).unwrap();
        let diameters: Vec<f64> = filt
            .positions_of_dim(1)
            .iter()
            .map(|&p| filt.entry(p).diameter)
            .collect();
        assert_eq!(diameters, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn unbounded_threshold_enumerates_all_simplices() {
        for n in [2usize, 5, 8, 12] {
            let mut data = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..i {
                    let v = 1.0 + ((i * 31 + j * 17) % 7) as f64;
                    data[i * n + j] = v;
                    data[j * n + i] = v;
                }
            }
            let dm = DistanceMatrix::from_full(n, data).unwrap();
            let cfg = RipsConfig {
                max_dim: 2,
                threshold: None,
                modulus: 2,
            };
            let filt = Filtration::build(&dm, &cfg).unwrap();
            let table = filt.binomials();
            for dim in 0..=3.min(n - 1) {
                assert_eq!(
                    filt.simplex_count(dim) as u64,
                    table.binomial(n, dim + 1),
                    "n={n} dim={dim}"
                );
            }
        }
    }

    #[test]
    fn every_facet_precedes_its_cofacet() {
        let dm = unit_square();
        let cfg = RipsConfig {
            max_dim: 2,
            threshold: None,
            modulus: 2,
        };
        let filt = Filtration::build(&dm, &cfg).unwrap();
        for e in filt.entries() {
            if e.simplex.dim == 0 {
                continue;
            }
            for (facet, _) in simplex::facets(e.simplex, filt.binomials()) {
                let fp = filt.position_of(facet.dim, facet.rank).unwrap();
                assert!(fp < e.position);
            }
        }
    }

    #[test]
    fn positions_are_a_total_order() {
        let dm = unit_square();
        let cfg = RipsConfig {
            max_dim: 2,
            threshold: None,
            modulus: 2,
        };
        let filt = Filtration::build(&dm, &cfg).unwrap();
        let mut positions: Vec<usize> = filt.entries().iter().map(|e| e.position).collect();
        positions.dedup();
        assert_eq!(positions, (0..filt.len()).collect::<Vec<_>>());
    }

    #[test]
    fn matrix_validation_errors() {
        assert!(matches!(
            DistanceMatrix::from_full(2, vec![0.0, 1.0, 2.0, 0.0]),
            Err(RipsError::NotSymmetric { .. })
        ));
        assert!(matches!(
            DistanceMatrix::from_full(2, vec![0.5, 1.0, 1.0, 0.0]),
            Err(RipsError::NonZeroDiagonal(0, _))
        ));
        assert!(matches!(
            DistanceMatrix::from_full(2, vec![0.0, -1.0, -1.0, 0.0]),
            Err(RipsError::BadDistance { .. })
        ));
        assert!(matches!(
            DistanceMatrix::from_full(2, vec![0.0, f64::NAN, f64::NAN, 0.0]),
            Err(RipsError::BadDistance { .. })
        ));
        assert!(matches!(
            DistanceMatrix::from_lower_triangular(&[1.0, 2.0]),
            Err(RipsError::NotTriangular { count: 2 })
        ));
    }

    #[test]
    fn explicit_filtration_rejects_missing_faces() {
        let bad = Filtration::from_explicit(3, &[(vec![0], 0.0), (vec![0, 1], 1.0)]);
        assert!(matches!(bad, Err(RipsError::BadExplicitFiltration(_))));
        let good = Filtration::from_explicit(
            3,
            &[(vec![0], 0.0), (vec![1], 0.0), (vec![0, 1], 1.0)],
        );
        assert!(good.is_ok());
    }

    #[test]
    fn median_pairwise() {
        let dm = DistanceMatrix::from_lower_triangular(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(dm.median_pairwise_distance(), 2.0);
        let dm = unit_square();
        assert_eq!(dm.median_pairwise_distance(), 1.0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Quantized entries force plenty of diameter ties.
        fn tied_matrix() -> impl Strategy<Value = DistanceMatrix> {
            (3usize..7).prop_flat_map(|n| {
                prop::collection::vec(1u32..6, n * (n - 1) / 2).prop_map(move |q| {
                    let entries: Vec<f64> = q.iter().map(|&v| f64::from(v) / 2.0).collect();
                    DistanceMatrix::from_lower_triangular(&entries).unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn filtration_is_a_filtration(dm in tied_matrix()) {
                let cfg = RipsConfig { max_dim: 2, threshold: None, modulus: 2 };
                let filt = Filtration::build(&dm, &cfg).unwrap();
                for e in filt.entries() {
                    prop_assert_eq!(filt.entry(e.position).position, e.position);
                    for (facet, _) in simplex::facets(e.simplex, filt.binomials()) {
                        let fpos = filt.position_of(facet.dim, facet.rank).unwrap();
                        prop_assert!(fpos < e.position);
                        prop_assert!(filt.entry(fpos).diameter <= e.diameter);
                    }
                }
            }

            #[test]
            fn threshold_enumeration_is_a_prefix_filter(dm in tied_matrix()) {
                let full = Filtration::build(
                    &dm,
                    &RipsConfig { max_dim: 1, threshold: None, modulus: 2 },
                )
                .unwrap();
                let t = dm.median_pairwise_distance();
                let capped = Filtration::build(
                    &dm,
                    &RipsConfig { max_dim: 1, threshold: Some(t), modulus: 2 },
                )
                .unwrap();
                let expected: Vec<(usize, u64)> = full
                    .entries()
                    .iter()
                    .filter(|e| e.diameter <= t)
                    .map(|e| (e.simplex.dim, e.simplex.rank))
                    .collect();
                let got: Vec<(usize, u64)> = capped
                    .entries()
                    .iter()
                    .map(|e| (e.simplex.dim, e.simplex.rank))
                    .collect();
                prop_assert_eq!(expected, got);
            }
        }
    }
}
