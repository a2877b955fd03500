//! Compact simplex encoding and facet/cofacet enumeration.
//!
//! A p-simplex over vertices `{v_0 < v_1 < ... < v_p}` is stored as its
//! dimension plus its rank in the combinatorial number system,
//! `rank = sum_j C(v_j, j+1)`. Ranking in colex order keeps facet and cofacet
//! ranks computable from prefix/suffix sums of binomials, so the boundary and
//! coboundary matrices never have to be materialized.
//!
//! Orientation is always the ascending-vertex orientation: removing the j-th
//! vertex contributes the sign `(-1)^j`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplexError {
    #[error("binomial table overflow at C({0}, {1}); instance too large for 64-bit ranks")]
    TableOverflow(usize, usize),
    #[error("vertices must be strictly increasing, got {0:?}")]
    NotIncreasing(Vec<u32>),
    #[error("vertex {vertex} out of range for {n} points")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("rank {rank} out of range for dimension {dim} over {n} points")]
    RankOutOfRange { rank: u64, dim: usize, n: usize },
}

/// A p-simplex as `(dimension, combinatorial rank)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimplexIndex {
    pub dim: usize,
    pub rank: u64,
}

impl SimplexIndex {
    pub fn new(dim: usize, rank: u64) -> Self {
        SimplexIndex { dim, rank }
    }

    /// Number of vertices, `dim + 1`.
    pub fn vertex_count(&self) -> usize {
        self.dim + 1
    }
}

/// Exact binomial coefficients `C(i, j)` for `0 <= i <= n`, `0 <= j <= max_j`.
///
/// Construction fails instead of overflowing; every later lookup is
/// bounds-checked so a table that is too small fails fast rather than
/// returning garbage.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n: usize,
    max_j: usize,
    table: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: usize, max_j: usize) -> Result<Self, SimplexError> {
        let mut table = vec![0u64; (n + 1) * (max_j + 1)];
        for i in 0..=n {
            for j in 0..=max_j.min(i) {
                let value = if j == 0 {
                    1
                } else {
                    let above = table[(i - 1) * (max_j + 1) + j];
                    let diag = table[(i - 1) * (max_j + 1) + j - 1];
                    above
                        .checked_add(diag)
                        .ok_or(SimplexError::TableOverflow(i, j))?
                };
                table[i * (max_j + 1) + j] = value;
            }
        }
        Ok(BinomialTable { n, max_j, table })
    }

    /// C(i, j); zero when j > i. Panics when the table was built too small.
    pub fn binomial(&self, i: usize, j: usize) -> u64 {
        assert!(
            i <= self.n && j <= self.max_j,
            "binomial table built for n={}, max_j={} cannot serve C({}, {})",
            self.n,
            self.max_j,
            i,
            j
        );
        if j > i {
            0
        } else {
            self.table[i * (self.max_j + 1) + j]
        }
    }

    /// Number of vertices the table was built for.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn max_subset_size(&self) -> usize {
        self.max_j
    }
}

/// Rank of a strictly increasing vertex tuple in the combinatorial number
/// system.
pub fn encode(vertices: &[u32], table: &BinomialTable) -> Result<SimplexIndex, SimplexError> {
    if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SimplexError::NotIncreasing(vertices.to_vec()));
    }
    let n = table.vertex_count();
    if let Some(&v) = vertices.iter().find(|&&v| v as usize >= n) {
        return Err(SimplexError::VertexOutOfRange { vertex: v, n });
    }
    let rank = vertices
        .iter()
        .enumerate()
        .map(|(j, &v)| table.binomial(v as usize, j + 1))
        .sum();
    Ok(SimplexIndex {
        dim: vertices.len() - 1,
        rank,
    })
}

/// Inverse of [`encode`]: the strictly increasing vertex tuple of a simplex.
pub fn decode(s: SimplexIndex, table: &BinomialTable) -> Result<Vec<u32>, SimplexError> {
    let n = table.vertex_count();
    if s.rank >= table.binomial(n, s.dim + 1) {
        return Err(SimplexError::RankOutOfRange {
            rank: s.rank,
            dim: s.dim,
            n,
        });
    }
    let mut vertices = vec![0u32; s.dim + 1];
    let mut remaining = s.rank;
    let mut upper = n;
    for j in (0..=s.dim).rev() {
        // Largest v with C(v, j+1) <= remaining; v < upper keeps tuples strict.
        let mut v = upper - 1;
        while table.binomial(v, j + 1) > remaining {
            v -= 1;
        }
        vertices[j] = v as u32;
        remaining -= table.binomial(v, j + 1);
        upper = v;
    }
    Ok(vertices)
}

/// The facets of `s` with their boundary signs: omitting the j-th vertex
/// contributes `(-1)^j`. A vertex has no facets.
pub fn facets(s: SimplexIndex, table: &BinomialTable) -> Vec<(SimplexIndex, i8)> {
    if s.dim == 0 {
        return Vec::new();
    }
    let vertices = decode(s, table).expect("simplex must be valid for its table");
    let k = vertices.len();
    // prefix[j] = sum_{i<j} C(v_i, i+1); suffix[j] = sum_{i>=j} C(v_i, i) --
    // the rank contributions of vertices kept below / above the omitted slot.
    let mut prefix = vec![0u64; k + 1];
    for j in 0..k {
        prefix[j + 1] = prefix[j] + table.binomial(vertices[j] as usize, j + 1);
    }
    let mut suffix = vec![0u64; k + 1];
    for j in (0..k).rev() {
        suffix[j] = suffix[j + 1] + table.binomial(vertices[j] as usize, j);
    }
    (0..k)
        .map(|j| {
            let rank = prefix[j] + suffix[j + 1];
            let sign = if j.is_multiple_of(2) { 1 } else { -1 };
            (SimplexIndex::new(s.dim - 1, rank), sign)
        })
        .collect()
}

/// All (dim+1)-simplices over `table.vertex_count()` vertices that contain
/// `s`, each with the sign `s` carries as their facet.
pub fn cofacets(s: SimplexIndex, table: &BinomialTable) -> Vec<(SimplexIndex, i8)> {
    assert!(
        s.dim + 2 <= table.max_subset_size(),
        "binomial table too small for cofacets of a {}-simplex",
        s.dim
    );
    let n = table.vertex_count();
    let vertices = decode(s, table).expect("simplex must be valid for its table");
    let k = vertices.len();
    let mut prefix = vec![0u64; k + 1];
    for j in 0..k {
        prefix[j + 1] = prefix[j] + table.binomial(vertices[j] as usize, j + 1);
    }
    let mut suffix = vec![0u64; k + 1];
    for j in (0..k).rev() {
        suffix[j] = suffix[j + 1] + table.binomial(vertices[j] as usize, j + 2);
    }
    let mut out = Vec::with_capacity(n - k);
    let mut slot = 0usize; // number of vertices of s below the new vertex
    for w in 0..n as u32 {
        if slot < k && vertices[slot] == w {
            slot += 1;
            continue;
        }
        let rank = prefix[slot] + table.binomial(w as usize, slot + 1) + suffix[slot];
        let sign = if slot.is_multiple_of(2) { 1 } else { -1 };
        out.push((SimplexIndex::new(s.dim + 1, rank), sign));
    }
    out
}
