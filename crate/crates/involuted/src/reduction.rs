//! Left-to-right column reduction with pivot bookkeeping and optional
//! coefficient tracking.
//!
//! The engine is index-agnostic: columns are identified by `usize` owners
//! processed in strictly ascending order, chains live over `usize` rows, and
//! the pivot of a chain is its entry of maximal row. Boundary-style
//! reductions feed filtration positions directly; coboundary-style
//! reductions feed reversed positions, which turns the anti-transpose into
//! the same max-pivot discipline.
//!
//! When tracking is on, each column carries a record chain over column
//! owners mirroring every subtraction, so that
//! `reduced(i) = sum_j record(i)[j] * original(j)` holds exactly. Records of
//! zeroed columns are kept only for owners registered up front as worth
//! retaining; this is what keeps witness memory bounded.

use std::collections::{HashMap, HashSet};

use crate::field::{FieldElement, PrimeField};

/// A sparse chain: distinct rows, ascending, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    terms: Vec<(usize, FieldElement)>,
}

impl Chain {
    pub fn new() -> Self {
        Chain { terms: Vec::new() }
    }

    /// A single-term chain.
    pub fn unit(row: usize, coefficient: FieldElement) -> Self {
        let mut c = Chain::new();
        if !coefficient.is_zero() {
            c.terms.push((row, coefficient));
        }
        c
    }

    /// Builds a chain from arbitrary terms: sorts, merges duplicate rows, and
    /// drops zeros.
    pub fn from_terms(mut terms: Vec<(usize, FieldElement)>) -> Self {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(usize, FieldElement)> = Vec::with_capacity(terms.len());
        for (row, coeff) in terms {
            match out.last_mut() {
                Some(last) if last.0 == row => last.1 = last.1 + coeff,
                _ => out.push((row, coeff)),
            }
            if let Some(last) = out.last() {
                if last.1.is_zero() {
                    out.pop();
                }
            }
        }
        Chain { terms: out }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// The entry with maximal row, i.e. Algorithm-style "low".
    pub fn pivot(&self) -> Option<(usize, FieldElement)> {
        self.terms.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, row: usize) -> Option<FieldElement> {
        self.terms
            .binary_search_by_key(&row, |t| t.0)
            .ok()
            .map(|i| self.terms[i].1)
    }

    /// `self += factor * other`, merging sorted term lists.
    pub fn add_scaled(&mut self, other: &Chain, factor: FieldElement) {
        if factor.is_zero() || other.is_empty() {
            return;
        }
        let mut merged = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ra, ca)), Some(&&(rb, cb))) => {
                    if ra < rb {
                        merged.push((ra, ca));
                        a.next();
                    } else if rb < ra {
                        merged.push((rb, cb * factor));
                        b.next();
                    } else {
                        let c = ca + cb * factor;
                        if !c.is_zero() {
                            merged.push((ra, c));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&(ra, ca)), None) => {
                    merged.push((ra, ca));
                    a.next();
                }
                (None, Some(&&(rb, cb))) => {
                    merged.push((rb, cb * factor));
                    b.next();
                }
                (None, None) => break,
            }
        }
        self.terms = merged;
    }
}

/// Provides the columns of one matrix in its processing order.
///
/// Implementations must yield owners strictly ascending and chains consistent
/// with the fixed global order; the engine relies on both.
pub trait ColumnSource {
    /// Column owners in processing order.
    fn owners(&self) -> &[usize];

    /// The unreduced column of `owner`.
    fn column(&self, owner: usize) -> Chain;

    /// The pivot the unreduced column would expose, without materializing the
    /// whole chain. Sources with a cheap way to answer this enable the
    /// emergent-pair shortcut.
    fn pivot_preview(&self, owner: usize) -> Option<(usize, FieldElement)> {
        self.column(owner).pivot()
    }
}

/// A fully materialized matrix; handy for tests and custom complexes.
#[derive(Debug, Clone, Default)]
pub struct VecColumns {
    owners: Vec<usize>,
    columns: HashMap<usize, Chain>,
}

impl VecColumns {
    /// Columns as `(owner, chain)` in processing order.
    pub fn new(columns: Vec<(usize, Chain)>) -> Self {
        let owners: Vec<usize> = columns.iter().map(|(o, _)| *o).collect();
        assert!(
            owners.windows(2).all(|w| w[0] < w[1]),
            "owners must be strictly ascending"
        );
        VecColumns {
            owners,
            columns: columns.into_iter().collect(),
        }
    }
}

impl ColumnSource for VecColumns {
    fn owners(&self) -> &[usize] {
        &self.owners
    }

    fn column(&self, owner: usize) -> Chain {
        self.columns[&owner].clone()
    }
}

/// Witness bookkeeping for a reduction run.
#[derive(Debug, Clone, Default)]
pub enum Tracking {
    #[default]
    Off,
    /// Track all columns; after a column reduces to zero, keep its record
    /// only if its owner is in `retain_zeroed`.
    On { retain_zeroed: HashSet<usize> },
}

#[derive(Debug, Clone, Default)]
pub struct ReduceOptions {
    pub tracking: Tracking,
    /// Register a column lazily when its unreduced pivot is unclaimed,
    /// deferring chain assembly until another column actually collides with
    /// it. Output-identical to the plain path; disabled automatically while
    /// tracking.
    pub emergent_shortcut: bool,
}

#[derive(Debug, Clone)]
struct PivotColumn {
    owner: usize,
    /// `None` for lazily registered columns; materialized on first collision.
    chain: Option<Chain>,
}

/// The result of reducing one matrix: the pivot-row map, the zeroed columns,
/// and (when tracking) the subtraction records.
#[derive(Debug, Clone)]
pub struct ReductionState {
    field: PrimeField,
    pivot_by_row: HashMap<usize, PivotColumn>,
    zeroed: Vec<usize>,
    records: Option<HashMap<usize, Chain>>,
    retain_zeroed: HashSet<usize>,
    last_owner: Option<usize>,
}

impl ReductionState {
    pub fn new(field: PrimeField, tracking: Tracking) -> Self {
        let (records, retain_zeroed) = match tracking {
            Tracking::Off => (None, HashSet::new()),
            Tracking::On { retain_zeroed } => (Some(HashMap::new()), retain_zeroed),
        };
        ReductionState {
            field,
            pivot_by_row: HashMap::new(),
            zeroed: Vec::new(),
            records,
            retain_zeroed,
            last_owner: None,
        }
    }

    /// Reduces one column against everything registered so far and registers
    /// the outcome. Owners must arrive strictly ascending.
    pub fn reduce_column(&mut self, chain: Chain, owner: usize) {
        self.reduce_with(chain, owner, &mut |_| {
            panic!("lazy column encountered without a source to materialize it")
        });
    }

    fn reduce_with(&mut self, mut chain: Chain, owner: usize, materialize: &mut dyn FnMut(usize) -> Chain) {
        assert!(
            self.last_owner.is_none_or(|last| owner > last),
            "columns must be reduced in strictly ascending owner order"
        );
        self.last_owner = Some(owner);
        if let Some(records) = &mut self.records {
            records.insert(owner, Chain::unit(owner, self.field.one()));
        }
        loop {
            let Some((row, coeff)) = chain.pivot() else {
                if let Some(records) = &mut self.records {
                    if !self.retain_zeroed.contains(&owner) {
                        records.remove(&owner);
                    }
                }
                self.zeroed.push(owner);
                return;
            };
            let Some(existing) = self.pivot_by_row.get_mut(&row) else {
                self.pivot_by_row.insert(row, PivotColumn {
                    owner,
                    chain: Some(chain),
                });
                return;
            };
            if existing.chain.is_none() {
                existing.chain = Some(materialize(existing.owner));
            }
            let other = existing.chain.as_ref().expect("just materialized");
            let other_owner = existing.owner;
            let (_, other_coeff) = other.pivot().expect("registered columns are non-trivial");
            let lambda = coeff * other_coeff.inverse().expect("pivot coefficients are nonzero");
            chain.add_scaled(other, -lambda);
            debug_assert!(chain.coefficient_of(row).is_none(), "pivot must cancel");
            if let Some(records) = &mut self.records {
                let other_record = records
                    .get(&other_owner)
                    .expect("pivot-bearing columns keep their records")
                    .clone();
                records
                    .get_mut(&owner)
                    .expect("seeded above")
                    .add_scaled(&other_record, -lambda);
            }
        }
    }

    /// `(pivot row, owner)` pairs, sorted by owner.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .pivot_by_row
            .iter()
            .map(|(&row, col)| (row, col.owner))
            .collect();
        pairs.sort_unstable_by_key(|&(_, owner)| owner);
        pairs
    }

    /// Pivot rows in ascending order.
    pub fn pivot_rows(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self.pivot_by_row.keys().copied().collect();
        rows.sort_unstable();
        rows
    }

    pub fn is_pivot_row(&self, row: usize) -> bool {
        self.pivot_by_row.contains_key(&row)
    }

    /// Owners whose columns reduced to the trivial column, in processing
    /// order.
    pub fn zeroed(&self) -> &[usize] {
        &self.zeroed
    }

    /// `(pivot row, owner, reduced chain)` for every non-trivial column.
    /// Chains registered lazily and never materialized are `None`.
    pub fn reduced_columns(&self) -> impl Iterator<Item = (usize, usize, Option<&Chain>)> {
        self.pivot_by_row
            .iter()
            .map(|(&row, col)| (row, col.owner, col.chain.as_ref()))
    }

    pub fn reduced_column_for_owner(&self, owner: usize) -> Option<&Chain> {
        self.pivot_by_row
            .values()
            .find(|c| c.owner == owner)
            .and_then(|c| c.chain.as_ref())
    }

    /// The tracked record of `owner`, when tracking retained it.
    pub fn record(&self, owner: usize) -> Option<&Chain> {
        self.records.as_ref()?.get(&owner)
    }
}

/// Reduces every column of `src` in source order.
pub fn reduce_all<S: ColumnSource>(
    src: &S,
    field: PrimeField,
    options: &ReduceOptions,
) -> ReductionState {
    let tracking_on = matches!(options.tracking, Tracking::On { .. });
    let lazy = options.emergent_shortcut && !tracking_on;
    let mut state = ReductionState::new(field, options.tracking.clone());
    for &owner in src.owners() {
        if lazy {
            match src.pivot_preview(owner) {
                None => {
                    state.last_owner = Some(owner);
                    state.zeroed.push(owner);
                    continue;
                }
                Some((row, _)) if !state.pivot_by_row.contains_key(&row) => {
                    state.last_owner = Some(owner);
                    state.pivot_by_row.insert(row, PivotColumn { owner, chain: None });
                    continue;
                }
                Some(_) => {}
            }
        }
        let chain = src.column(owner);
        state.reduce_with(chain, owner, &mut |o| src.column(o));
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn chain(field: &PrimeField, terms: &[(usize, i64)]) -> Chain {
        Chain::from_terms(terms.iter().map(|&(r, c)| (r, field.element(c))).collect())
    }

    #[test]
    fn first_column_is_registered_unchanged() {
        let f = PrimeField::new(2).unwrap();
        let c = chain(&f, &[(0, 1), (2, 1)]);
        let src = VecColumns::new(vec![(5, c.clone())]);
        let state = reduce_all(&src, f, &ReduceOptions::default());
        assert_eq!(state.pairs(), vec![(2, 5)]);
        assert_eq!(state.reduced_column_for_owner(5), Some(&c));
    }

    #[test]
    fn empty_source_yields_empty_state() {
        let src = VecColumns::new(vec![]);
        let state = reduce_all(&src, PrimeField::new(2).unwrap(), &ReduceOptions::default());
        assert!(state.pairs().is_empty());
        assert!(state.zeroed().is_empty());
    }

    #[test]
    fn dependent_column_reduces_to_zero() {
        let f = PrimeField::new(2).unwrap();
        // Boundary of a triangle's three edges: third column is the sum of
        // the first two.
        let src = VecColumns::new(vec![
            (3, chain(&f, &[(0, 1), (1, 1)])),
            (4, chain(&f, &[(1, 1), (2, 1)])),
            (5, chain(&f, &[(0, 1), (2, 1)])),
        ]);
        let state = reduce_all(&src, f, &ReduceOptions::default());
        assert_eq!(state.zeroed(), &[5]);
        assert_eq!(state.pairs(), vec![(1, 3), (2, 4)]);
    }

    #[test]
    fn pivots_are_distinct_and_columns_partition() {
        let f = PrimeField::new(3).unwrap();
        let src = VecColumns::new(vec![
            (10, chain(&f, &[(0, 1), (1, 2)])),
            (11, chain(&f, &[(0, 2), (1, 1)])),
            (12, chain(&f, &[(0, 1), (1, 1)])),
            (13, chain(&f, &[(1, 2)])),
        ]);
        let state = reduce_all(&src, f, &ReduceOptions::default());
        let rows = state.pivot_rows();
        let mut dedup = rows.clone();
        dedup.dedup();
        assert_eq!(rows, dedup);
        let total = state.pairs().len() + state.zeroed().len();
        assert_eq!(total, 4);
    }

    #[test]
    fn witness_records_replay_the_reduction() {
        let f = PrimeField::new(3).unwrap();
        let cols = vec![
            (4, chain(&f, &[(0, 1), (1, 2), (3, 1)])),
            (5, chain(&f, &[(1, 1), (3, 2)])),
            (6, chain(&f, &[(0, 2), (1, 1), (3, 2)])),
            (7, chain(&f, &[(0, 1), (1, 1)])),
        ];
        let src = VecColumns::new(cols.clone());
        let all: HashSet<usize> = cols.iter().map(|(o, _)| *o).collect();
        let state = reduce_all(
            &src,
            f,
            &ReduceOptions {
                tracking: Tracking::On {
                    retain_zeroed: all.clone(),
                },
                emergent_shortcut: false,
            },
        );
        for &owner in &all {
            let record = state.record(owner).expect("all records retained");
            assert_eq!(record.coefficient_of(owner), Some(f.one()));
            let mut replay = Chain::new();
            for (col_owner, coeff) in record.iter() {
                replay.add_scaled(&src.column(*col_owner), *coeff);
            }
            let reduced = state
                .reduced_column_for_owner(owner)
                .cloned()
                .unwrap_or_default();
            assert_eq!(replay, reduced, "witness mismatch for column {owner}");
        }
    }

    #[test]
    fn emergent_shortcut_is_output_identical() {
        let f = PrimeField::new(5).unwrap();
        let cols = vec![
            (4, chain(&f, &[(0, 1), (1, 4), (3, 2)])),
            (5, chain(&f, &[(1, 1), (3, 1)])),
            (6, chain(&f, &[(0, 2), (3, 4)])),
            (7, chain(&f, &[(0, 1), (1, 1), (3, 3)])),
        ];
        let src = VecColumns::new(cols);
        let plain = reduce_all(&src, f, &ReduceOptions::default());
        let lazy = reduce_all(
            &src,
            f,
            &ReduceOptions {
                tracking: Tracking::Off,
                emergent_shortcut: true,
            },
        );
        assert_eq!(plain.pairs(), lazy.pairs());
        assert_eq!(plain.zeroed(), lazy.zeroed());
    }

    /// A literal transcription of the textbook loop: scan earlier columns for
    /// a matching low instead of keeping a pivot map. Used as the
    /// strategy-independence oracle.
    fn naive_reduce(columns: &[(usize, Chain)]) -> (Vec<(usize, usize)>, Vec<usize>) {
        let mut reduced: Vec<(usize, Chain)> = Vec::new();
        for (owner, chain) in columns {
            let mut c = chain.clone();
            'outer: while let Some((low, coeff)) = c.pivot() {
                for (_, earlier) in reduced.iter() {
                    if let Some((elow, ecoeff)) = earlier.pivot() {
                        if elow == low {
                            let lambda = coeff * ecoeff.inverse().unwrap();
                            c.add_scaled(earlier, -lambda);
                            continue 'outer;
                        }
                    }
                }
                break;
            }
            reduced.push((*owner, c));
        }
        let mut pairs = Vec::new();
        let mut zeroed = Vec::new();
        for (owner, c) in &reduced {
            match c.pivot() {
                Some((row, _)) => pairs.push((row, *owner)),
                None => zeroed.push(*owner),
            }
        }
        pairs.sort_unstable_by_key(|&(_, o)| o);
        (pairs, zeroed)
    }

    #[test]
    fn pivot_map_agrees_with_naive_scan() {
        let f = PrimeField::new(5).unwrap();
        // Pseudo-random small matrices, deterministic seeds.
        for seed in 0..40u64 {
            let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut next = || {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                x
            };
            let ncols = 3 + (next() % 6) as usize;
            let nrows = 3 + (next() % 6) as usize;
            let mut cols = Vec::new();
            for c in 0..ncols {
                let mut terms = Vec::new();
                for r in 0..nrows {
                    let v = next() % 5;
                    if v != 0 {
                        terms.push((r, f.element(v as i64)));
                    }
                }
                cols.push((nrows + c, Chain::from_terms(terms)));
            }
            let src = VecColumns::new(cols.clone());
            let state = reduce_all(&src, f, &ReduceOptions::default());
            let (naive_pairs, naive_zeroed) = naive_reduce(&cols);
            assert_eq!(state.pairs(), naive_pairs, "seed {seed}");
            assert_eq!(state.zeroed(), naive_zeroed.as_slice(), "seed {seed}");
        }
    }

    #[test]
    fn owners_must_ascend() {
        let f = PrimeField::new(2).unwrap();
        let mut state = ReductionState::new(f, Tracking::Off);
        state.reduce_column(chain(&f, &[(0, 1)]), 3);
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            state.reduce_column(chain(&f, &[(1, 1)]), 2);
        }));
        assert!(result.is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn sparse_matrix(p: u32) -> impl Strategy<Value = Vec<(usize, Chain)>> {
            let field = PrimeField::new(p).unwrap();
            (2usize..7, 2usize..7).prop_flat_map(move |(nrows, ncols)| {
                prop::collection::vec(prop::collection::vec(0u32..p, nrows), ncols).prop_map(
                    move |grid| {
                        grid.into_iter()
                            .enumerate()
                            .map(|(c, col)| {
                                let terms = col
                                    .into_iter()
                                    .enumerate()
                                    .map(|(r, v)| (r, field.element(i64::from(v))))
                                    .collect();
                                (nrows + c, Chain::from_terms(terms))
                            })
                            .collect()
                    },
                )
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn pivots_distinct_and_owners_partition(cols in sparse_matrix(5)) {
                let f = PrimeField::new(5).unwrap();
                let src = VecColumns::new(cols.clone());
                let state = reduce_all(&src, f, &ReduceOptions::default());
                let rows = state.pivot_rows();
                let mut dedup = rows.clone();
                dedup.dedup();
                prop_assert_eq!(&rows, &dedup);
                prop_assert_eq!(state.pairs().len() + state.zeroed().len(), cols.len());
            }

            #[test]
            fn pairing_is_strategy_independent(cols in sparse_matrix(3)) {
                let f = PrimeField::new(3).unwrap();
                let src = VecColumns::new(cols.clone());
                let state = reduce_all(&src, f, &ReduceOptions::default());
                let (naive_pairs, naive_zeroed) = naive_reduce(&cols);
                prop_assert_eq!(state.pairs(), naive_pairs);
                prop_assert_eq!(state.zeroed(), naive_zeroed.as_slice());
            }

            #[test]
            fn witnesses_replay_exactly(cols in sparse_matrix(7)) {
                let f = PrimeField::new(7).unwrap();
                let src = VecColumns::new(cols.clone());
                let retain: HashSet<usize> = cols.iter().map(|(o, _)| *o).collect();
                let state = reduce_all(
                    &src,
                    f,
                    &ReduceOptions {
                        tracking: Tracking::On { retain_zeroed: retain.clone() },
                        emergent_shortcut: false,
                    },
                );
                for &owner in &retain {
                    let record = state.record(owner).unwrap();
                    let mut replay = Chain::new();
                    for (col_owner, coeff) in record.iter() {
                        replay.add_scaled(&src.column(*col_owner), *coeff);
                    }
                    let reduced = state
                        .reduced_column_for_owner(owner)
                        .cloned()
                        .unwrap_or_default();
                    prop_assert_eq!(replay, reduced);
                }
            }

            #[test]
            fn chain_add_scaled_matches_dense_arithmetic(
                a in prop::collection::vec(0u32..5, 6),
                b in prop::collection::vec(0u32..5, 6),
                factor in 0u32..5,
            ) {
                let f = PrimeField::new(5).unwrap();
                let to_chain = |v: &[u32]| {
                    Chain::from_terms(
                        v.iter()
                            .enumerate()
                            .map(|(r, &c)| (r, f.element(i64::from(c))))
                            .collect(),
                    )
                };
                let mut chain = to_chain(&a);
                chain.add_scaled(&to_chain(&b), f.element(i64::from(factor)));
                for r in 0..6 {
                    let expected = f.element(i64::from(a[r]) + i64::from(factor) * i64::from(b[r]));
                    let got = chain.coefficient_of(r).unwrap_or_else(|| f.zero());
                    prop_assert_eq!(got, expected);
                }
            }
        }
    }
}
