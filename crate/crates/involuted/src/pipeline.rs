//! The two-phase computation: coboundary reduction finds death and essential
//! simplices, then the boundary matrix restricted to exactly those columns is
//! reduced to extract representative cycles.
//!
//! Phase 1 reduces each coboundary matrix `d_k` (cofacet columns over the
//! reversed filtration order) with clearing. Its pivot rows are the death
//! (k+1)-simplices, its non-trivial columns the paired birth k-simplices, and
//! what reduces to zero without being a death is essential. Phase 2 reduces,
//! per dimension, the facet columns of just the death and essential
//! simplices, in ascending filtration order: pivot-bearing columns hand back
//! finite pairs with the reduced column as the representative cycle, and
//! essential columns reduce to zero with a tracked witness whose terms are
//! the essential representative. Dropping the paired-birth columns is sound
//! because zeroed columns are never subtracted into anything else, so the
//! surviving columns reduce exactly as they would inside the full matrix.

use std::collections::{HashMap, HashSet};

use crate::field::{FieldElement, PrimeField};
use crate::oracle;
use crate::reduction::{reduce_all, Chain, ColumnSource, ReduceOptions, ReductionState, Tracking};
use crate::rips::{DistanceMatrix, Filtration, FiltrationEntry, RipsConfig};
use crate::simplex;
use crate::Error;

/// Which computation path produces the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Phase 1 + phase 2: diagram and representative cycles.
    Involuted,
    /// Phase 1 only: the diagram, no representatives.
    Cohomology,
    /// Dense textbook reduction of the full boundary matrix. Slow,
    /// desk-scale only; exists as a cross-check.
    HomologyOracle,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Involuted => "involuted",
            Mode::Cohomology => "cohomology",
            Mode::HomologyOracle => "homology-oracle",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComputeOptions {
    pub mode: Mode,
    /// Attach representative cycles (involuted mode only; cohomology mode
    /// never has them).
    pub representatives: bool,
    /// Skip coboundary columns the adjacent dimension already proved zero.
    pub clearing: bool,
    /// Register coboundary columns lazily when their unreduced pivot is
    /// unclaimed. Output-identical; assembly of most columns never happens.
    pub emergent_shortcut: bool,
    /// Drop restricted death columns past the last non-trivial death of each
    /// dimension. Representatives of the suppressed trivial pairs are not
    /// computed.
    pub truncate: bool,
    /// Column cap for the oracle mode.
    pub oracle_max_columns: usize,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            mode: Mode::Involuted,
            representatives: true,
            clearing: true,
            emergent_shortcut: true,
            truncate: false,
            oracle_max_columns: oracle::DEFAULT_MAX_COLUMNS,
        }
    }
}

/// One interval of the diagram, with its witnessing simplices and, when
/// computed, a representative cycle over filtration positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: FiltrationEntry,
    pub death: Option<FiltrationEntry>,
    pub representative: Option<Chain>,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death.is_none()
    }

    /// A finite interval whose endpoints share a diameter is invisible in
    /// the diameter-scaled diagram.
    pub fn is_trivial(&self) -> bool {
        self.death
            .is_some_and(|d| d.diameter == self.birth.diameter)
    }
}

/// The full result of a run: every pair (trivial ones included) over the
/// filtration that produced them.
#[derive(Debug, Clone)]
pub struct Persistence {
    pub filtration: Filtration,
    pub modulus: u32,
    pub max_dim: usize,
    pub threshold: Option<f64>,
    pub pairs: Vec<PersistencePair>,
}

impl Persistence {
    pub fn pairs_in_dim(&self, dim: usize) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(move |p| p.dim == dim)
    }

    /// `(dim, birth diameter, death diameter)` multiset, sorted; `None`
    /// death marks an essential class. The canonical shape for comparing
    /// diagrams across computation paths.
    pub fn diagram_points(&self) -> Vec<(usize, f64, Option<f64>)> {
        let mut points: Vec<(usize, f64, Option<f64>)> = self
            .pairs
            .iter()
            .map(|p| (p.dim, p.birth.diameter, p.death.map(|d| d.diameter)))
            .collect();
        points.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then(a.1.total_cmp(&b.1))
                .then(match (a.2, b.2) {
                    (Some(x), Some(y)) => x.total_cmp(&y),
                    (Some(_), None) => std::cmp::Ordering::Less,
                    (None, Some(_)) => std::cmp::Ordering::Greater,
                    (None, None) => std::cmp::Ordering::Equal,
                })
        });
        points
    }

    /// Number of restricted-matrix columns this run implies: one per finite
    /// pair plus one per essential class.
    pub fn restricted_column_count(&self) -> usize {
        self.pairs.len()
    }
}

/// What phase 1 learned, per dimension: death simplices, essential
/// simplices, and the persistence pairs.
#[derive(Debug, Clone)]
pub struct PhaseOneSummary {
    max_dim: usize,
    /// `deaths[k]`: positions of death k-simplices, ascending. Index runs to
    /// `max_dim + 1`; `deaths[0]` is empty.
    deaths: Vec<Vec<usize>>,
    /// `essentials[k]`: positions of essential k-simplices, ascending, for
    /// `k <= max_dim`.
    essentials: Vec<Vec<usize>>,
    /// `pairs[q]`: dimension-q pairs `(birth position, death position)`,
    /// sorted by birth.
    pairs: Vec<Vec<(usize, usize)>>,
}

impl PhaseOneSummary {
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn deaths(&self, dim: usize) -> &[usize] {
        self.deaths.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn essentials(&self, dim: usize) -> &[usize] {
        self.essentials.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn pairs(&self, dim: usize) -> &[(usize, usize)] {
        self.pairs.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn all_essentials(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.essentials
            .iter()
            .enumerate()
            .flat_map(|(dim, v)| v.iter().map(move |&p| (dim, p)))
    }
}

/// Facet columns of a fixed set of simplex positions, processed in ascending
/// filtration order. Rows are filtration positions.
pub struct BoundaryColumns<'a> {
    filtration: &'a Filtration,
    field: PrimeField,
    owners: Vec<usize>,
}

impl<'a> BoundaryColumns<'a> {
    pub fn new(filtration: &'a Filtration, field: PrimeField, mut owners: Vec<usize>) -> Self {
        owners.sort_unstable();
        BoundaryColumns {
            filtration,
            field,
            owners,
        }
    }

    /// All p-simplex columns, the unrestricted boundary block.
    pub fn full_dim(filtration: &'a Filtration, field: PrimeField, dim: usize) -> Self {
        Self::new(filtration, field, filtration.positions_of_dim(dim).to_vec())
    }
}

impl ColumnSource for BoundaryColumns<'_> {
    fn owners(&self) -> &[usize] {
        &self.owners
    }

    fn column(&self, owner: usize) -> Chain {
        let entry = self.filtration.entry(owner);
        let terms = simplex::facets(entry.simplex, self.filtration.binomials())
            .into_iter()
            .map(|(facet, sign)| {
                let pos = self
                    .filtration
                    .position_of(facet.dim, facet.rank)
                    .expect("filtrations contain every face of their simplices");
                (pos, self.field.sign(sign))
            })
            .collect();
        Chain::from_terms(terms)
    }
}

/// Cofacet columns of the p-simplices over the globally reversed filtration
/// order: owner `r` stands for position `m - 1 - r`, and rows are reversed
/// the same way. Reducing these left-to-right is exactly the anti-transpose
/// reduction.
pub struct CoboundaryColumns<'a> {
    filtration: &'a Filtration,
    field: PrimeField,
    dim: usize,
    owners: Vec<usize>,
}

impl<'a> CoboundaryColumns<'a> {
    pub fn full_dim(filtration: &'a Filtration, field: PrimeField, dim: usize) -> Self {
        let m = filtration.len();
        let owners: Vec<usize> = filtration
            .positions_of_dim(dim)
            .iter()
            .rev()
            .map(|&p| m - 1 - p)
            .collect();
        CoboundaryColumns {
            filtration,
            field,
            dim,
            owners,
        }
    }

    /// Drops the columns a prior reduction already proved trivial: the
    /// clearing optimization. `prior` must be the reduction of the adjacent
    /// lower-dimensional coboundary matrix, whose pivot rows live in the same
    /// reversed index space as this matrix's columns.
    pub fn cleared_by(mut self, prior: &ReductionState) -> Self {
        self.owners.retain(|owner| !prior.is_pivot_row(*owner));
        self
    }

    pub fn position_of_owner(&self, owner: usize) -> usize {
        self.filtration.len() - 1 - owner
    }

    fn present_cofacets(&self, owner: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let entry = self.filtration.entry(self.position_of_owner(owner));
        let dim = self.dim;
        simplex::cofacets(entry.simplex, self.filtration.binomials())
            .into_iter()
            .filter_map(move |(cofacet, sign)| {
                self.filtration
                    .position_of(dim + 1, cofacet.rank)
                    .map(|pos| (pos, sign))
            })
    }
}

impl ColumnSource for CoboundaryColumns<'_> {
    fn owners(&self) -> &[usize] {
        &self.owners
    }

    fn column(&self, owner: usize) -> Chain {
        let m = self.filtration.len();
        let terms = self
            .present_cofacets(owner)
            .map(|(pos, sign)| (m - 1 - pos, self.field.sign(sign)))
            .collect();
        Chain::from_terms(terms)
    }

    fn pivot_preview(&self, owner: usize) -> Option<(usize, FieldElement)> {
        // Max reversed row = min filtration position among present cofacets.
        let m = self.filtration.len();
        self.present_cofacets(owner)
            .min_by_key(|&(pos, _)| pos)
            .map(|(pos, sign)| (m - 1 - pos, self.field.sign(sign)))
    }
}

/// Phase 1: reduce each coboundary matrix `d_k` for `k = 0..=max_dim` and
/// collect pairs, deaths, and essential simplices.
pub fn phase_one(
    filtration: &Filtration,
    field: PrimeField,
    max_dim: usize,
    clearing: bool,
    emergent_shortcut: bool,
) -> PhaseOneSummary {
    let m = filtration.len();
    let mut deaths: Vec<Vec<usize>> = vec![Vec::new(); max_dim + 2];
    let mut essentials: Vec<Vec<usize>> = vec![Vec::new(); max_dim + 1];
    let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); max_dim + 1];
    let mut prior_state: Option<ReductionState> = None;
    for k in 0..=max_dim {
        let mut src = CoboundaryColumns::full_dim(filtration, field, k);
        if clearing {
            if let Some(prior) = &prior_state {
                src = src.cleared_by(prior);
            }
        }
        let state = reduce_all(
            &src,
            field,
            &ReduceOptions {
                tracking: Tracking::Off,
                emergent_shortcut,
            },
        );

        let mut dim_pairs: Vec<(usize, usize)> = state
            .pairs()
            .into_iter()
            .map(|(row, owner)| (m - 1 - owner, m - 1 - row))
            .collect();
        dim_pairs.sort_unstable();
        deaths[k + 1] = dim_pairs.iter().map(|&(_, d)| d).collect();
        deaths[k + 1].sort_unstable();

        let known_deaths: HashSet<usize> = deaths[k].iter().copied().collect();
        let mut dim_essentials: Vec<usize> = state
            .zeroed()
            .iter()
            .map(|&owner| m - 1 - owner)
            .filter(|pos| !known_deaths.contains(pos))
            .collect();
        dim_essentials.sort_unstable();

        pairs[k] = dim_pairs;
        essentials[k] = dim_essentials;
        prior_state = Some(state);
    }
    PhaseOneSummary {
        max_dim,
        deaths,
        essentials,
        pairs,
    }
}

/// The restricted boundary matrix for dimension `k`: facet columns of the
/// death k-simplices and essential k-simplices only, all rows retained.
///
/// With `truncate`, death columns past the last non-trivial death of
/// dimension `k - 1` are dropped; the cutoff is extended when essential
/// columns sit beyond it, so their reductions keep every column they could
/// need.
pub fn assemble_restricted<'a>(
    summary: &PhaseOneSummary,
    k: usize,
    filtration: &'a Filtration,
    field: PrimeField,
    truncate: bool,
) -> Result<BoundaryColumns<'a>, Error> {
    if k > summary.max_dim + 1 {
        return Err(Error::Consistency(format!(
            "restricted matrix for dimension {k} requested, phase 1 covered {}",
            summary.max_dim + 1
        )));
    }
    let essentials = if k <= summary.max_dim {
        summary.essentials(k)
    } else {
        &[]
    };
    let mut columns: Vec<usize> = essentials.to_vec();
    if truncate && k >= 1 {
        let last_nontrivial = summary
            .pairs(k - 1)
            .iter()
            .filter(|&&(b, d)| filtration.entry(b).diameter != filtration.entry(d).diameter)
            .map(|&(_, d)| d)
            .max();
        let cutoff = match (last_nontrivial, essentials.last()) {
            (Some(d), Some(&e)) => Some(d.max(e)),
            (Some(d), None) => Some(d),
            (None, Some(&e)) => Some(e),
            (None, None) => None,
        };
        if let Some(cutoff) = cutoff {
            columns.extend(summary.deaths(k).iter().filter(|&&p| p <= cutoff));
        }
    } else {
        columns.extend(summary.deaths(k));
    }
    Ok(BoundaryColumns::new(filtration, field, columns))
}

/// Representatives extracted by phase 2.
#[derive(Debug, Clone, Default)]
pub struct PhaseTwoResult {
    /// `(birth position, death position)` -> representative cycle.
    pub pair_representatives: HashMap<(usize, usize), Chain>,
    /// essential position -> representative cycle.
    pub essential_representatives: HashMap<usize, Chain>,
}

/// Phase 2: reduce each restricted matrix `D_k`, read finite-pair
/// representatives off the pivot columns and essential representatives off
/// the tracked zero-witnesses, and cross-check the pairing against phase 1.
pub fn phase_two(
    summary: &PhaseOneSummary,
    filtration: &Filtration,
    field: PrimeField,
    truncate: bool,
) -> Result<PhaseTwoResult, Error> {
    let mut result = PhaseTwoResult::default();
    for k in 0..=summary.max_dim + 1 {
        let restricted = assemble_restricted(summary, k, filtration, field, truncate)?;
        if restricted.owners().is_empty() {
            continue;
        }
        let essential_set: HashSet<usize> = if k <= summary.max_dim {
            summary.essentials(k).iter().copied().collect()
        } else {
            HashSet::new()
        };
        let tracking = if essential_set.is_empty() {
            Tracking::Off
        } else {
            Tracking::On {
                retain_zeroed: essential_set.clone(),
            }
        };
        let state = reduce_all(
            &restricted,
            field,
            &ReduceOptions {
                tracking,
                emergent_shortcut: false,
            },
        );

        for &owner in state.zeroed() {
            if !essential_set.contains(&owner) {
                return Err(Error::Consistency(format!(
                    "death column at position {owner} reduced to zero in D_{k}"
                )));
            }
            let record = state.record(owner).ok_or_else(|| {
                Error::Consistency(format!("missing witness for essential column {owner}"))
            })?;
            result.essential_representatives.insert(owner, record.clone());
        }
        if state.zeroed().len() != essential_set.len() {
            return Err(Error::Consistency(format!(
                "essential column of D_{k} failed to reduce to zero"
            )));
        }

        if k >= 1 {
            let mut extracted: Vec<(usize, usize)> = state.pairs();
            extracted.sort_unstable();
            let expected = summary.pairs(k - 1);
            if truncate {
                let expected_set: HashSet<(usize, usize)> = expected.iter().copied().collect();
                if !extracted.iter().all(|p| expected_set.contains(p)) {
                    return Err(Error::Consistency(format!(
                        "phase 2 produced a pair unknown to phase 1 in dimension {}",
                        k - 1
                    )));
                }
            } else if extracted != expected {
                return Err(Error::Consistency(format!(
                    "phase 2 pairing disagrees with phase 1 in dimension {}",
                    k - 1
                )));
            }
            for (row, owner, chain) in state.reduced_columns() {
                let chain = chain.expect("phase 2 never registers lazily");
                debug_assert_eq!(chain.pivot().map(|(r, _)| r), Some(row));
                result.pair_representatives.insert((row, owner), chain.clone());
            }
        }
    }
    Ok(result)
}

/// Applies the boundary map to a chain of p-simplices, yielding a chain of
/// (p-1)-simplices. The zero chain certifies a cycle.
pub fn boundary_of(chain: &Chain, filtration: &Filtration, field: PrimeField) -> Chain {
    let mut terms = Vec::new();
    for &(pos, coeff) in chain.iter() {
        let entry = filtration.entry(pos);
        for (facet, sign) in simplex::facets(entry.simplex, filtration.binomials()) {
            let fpos = filtration
                .position_of(facet.dim, facet.rank)
                .expect("filtrations contain every face of their simplices");
            terms.push((fpos, coeff * field.sign(sign)));
        }
    }
    Chain::from_terms(terms)
}

/// The exact number of death k-simplices of a full filtration on `n` points:
/// the alternating binomial sum `C(n,k) - C(n,k-1) + ... +- C(n,0)`.
pub fn expected_death_count(n: usize, k: usize) -> u64 {
    assert!(k >= 1, "death counts are defined for dimension >= 1");
    let binomial = |j: usize| -> i128 {
        if j > n {
            return 0;
        }
        let mut acc: i128 = 1;
        for i in 0..j {
            acc = acc * (n - i) as i128 / (i + 1) as i128;
        }
        acc
    };
    let mut total: i128 = 0;
    let mut sign: i128 = 1;
    for j in (0..=k).rev() {
        total += sign * binomial(j);
        sign = -sign;
    }
    u64::try_from(total).expect("alternating death count is non-negative")
}

/// Computes persistence with the default options (involuted mode with
/// representatives).
pub fn compute(dm: &DistanceMatrix, cfg: &RipsConfig) -> Result<Persistence, Error> {
    compute_with(dm, cfg, &ComputeOptions::default())
}

pub fn compute_with(
    dm: &DistanceMatrix,
    cfg: &RipsConfig,
    options: &ComputeOptions,
) -> Result<Persistence, Error> {
    let field = PrimeField::new(cfg.modulus)?;
    let filtration = Filtration::build(dm, cfg)?;
    let mut persistence = compute_filtration(filtration, field, cfg.max_dim, options)?;
    persistence.threshold = cfg.threshold;
    Ok(persistence)
}

/// Runs the requested mode over an already-built filtration. This is the
/// entry point for explicitly ordered fixture filtrations.
pub fn compute_filtration(
    filtration: Filtration,
    field: PrimeField,
    max_dim: usize,
    options: &ComputeOptions,
) -> Result<Persistence, Error> {
    if options.mode == Mode::HomologyOracle {
        let reduction = oracle::full_reduce_filtration(
            filtration,
            field,
            max_dim,
            options.oracle_max_columns,
        )?;
        return Ok(reduction.persistence);
    }
    let summary = phase_one(
        &filtration,
        field,
        max_dim,
        options.clearing,
        options.emergent_shortcut,
    );
    let mut reps = PhaseTwoResult::default();
    if options.mode == Mode::Involuted && options.representatives {
        reps = phase_two(&summary, &filtration, field, options.truncate)?;
    }
    let pairs = assemble_pairs(&summary, &filtration, reps)?;
    Ok(Persistence {
        filtration,
        modulus: field.modulus(),
        max_dim,
        threshold: None,
        pairs,
    })
}

fn assemble_pairs(
    summary: &PhaseOneSummary,
    filtration: &Filtration,
    mut reps: PhaseTwoResult,
) -> Result<Vec<PersistencePair>, Error> {
    let mut out = Vec::new();
    for dim in 0..=summary.max_dim {
        for &(birth, death) in summary.pairs(dim) {
            let representative = reps.pair_representatives.remove(&(birth, death));
            if let Some(rep) = &representative {
                if rep.pivot().map(|(r, _)| r) != Some(birth) {
                    return Err(Error::Consistency(format!(
                        "representative of ({birth}, {death}) does not attain its birth position"
                    )));
                }
            }
            out.push(PersistencePair {
                dim,
                birth: *filtration.entry(birth),
                death: Some(*filtration.entry(death)),
                representative,
            });
        }
        for &position in summary.essentials(dim) {
            out.push(PersistencePair {
                dim,
                birth: *filtration.entry(position),
                death: None,
                representative: reps.essential_representatives.remove(&position),
            });
        }
    }
    out.sort_by_key(|p| (p.dim, p.birth.position, p.death.map(|d| d.position)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    fn field(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn fixture() -> Filtration {
        datasets::tetrahedron_filtration()
    }

    fn pos(filt: &Filtration, vertices: &[u32]) -> usize {
        let s = simplex::encode(vertices, filt.binomials()).unwrap();
        filt.position_of(s.dim, s.rank).unwrap()
    }

    #[test]
    fn fixture_phase_one_extracts_the_three_deaths() {
        let filt = fixture();
        let f = field(2);
        let summary = phase_one(&filt, f, 1, true, false);
        let expected: Vec<usize> = [
            pos(&filt, &[0, 1, 2]),
            pos(&filt, &[0, 1, 3]),
            pos(&filt, &[0, 2, 3]),
        ]
        .into_iter()
        .collect();
        assert_eq!(summary.deaths(2), expected.as_slice());
        assert!(summary.essentials(1).is_empty());
        assert_eq!(summary.essentials(0), &[pos(&filt, &[0])]);
    }

    #[test]
    fn fixture_pairs_and_flag_representative() {
        let filt = fixture();
        let f = field(2);
        let summary = phase_one(&filt, f, 1, true, false);
        let expected_pairs = vec![
            (pos(&filt, &[1, 2]), pos(&filt, &[0, 1, 2])),
            (pos(&filt, &[2, 3]), pos(&filt, &[0, 2, 3])),
            (pos(&filt, &[1, 3]), pos(&filt, &[0, 1, 3])),
        ];
        let mut sorted = expected_pairs.clone();
        sorted.sort_unstable();
        assert_eq!(summary.pairs(1), sorted.as_slice());

        let restricted = assemble_restricted(&summary, 2, &filt, f, false).unwrap();
        assert_eq!(restricted.owners().len(), 3);

        let reps = phase_two(&summary, &filt, f, false).unwrap();
        let bc_abc = (pos(&filt, &[1, 2]), pos(&filt, &[0, 1, 2]));
        let rep = &reps.pair_representatives[&bc_abc];
        let expected_rep = Chain::from_terms(vec![
            (pos(&filt, &[0, 1]), f.one()),
            (pos(&filt, &[0, 2]), f.one()),
            (pos(&filt, &[1, 2]), f.one()),
        ]);
        assert_eq!(rep, &expected_rep);
    }

    #[test]
    fn fixture_full_triangle_block_zeroes_only_the_last_column() {
        let filt = fixture();
        let f = field(2);
        let src = BoundaryColumns::full_dim(&filt, f, 2);
        let state = reduce_all(&src, f, &ReduceOptions::default());
        assert_eq!(state.zeroed(), &[pos(&filt, &[1, 2, 3])]);
        let mut pivots = state.pivot_rows();
        pivots.sort_unstable();
        assert_eq!(
            pivots,
            vec![pos(&filt, &[1, 2]), pos(&filt, &[2, 3]), pos(&filt, &[1, 3])]
        );
    }

    #[test]
    fn single_point_is_one_essential_vertex() {
        let dm = DistanceMatrix::from_points(&[vec![0.0]]).unwrap();
        let cfg = RipsConfig {
            max_dim: 1,
            threshold: None,
            modulus: 2,
        };
        let p = compute(&dm, &cfg).unwrap();
        assert_eq!(p.pairs.len(), 1);
        let pair = &p.pairs[0];
        assert!(pair.is_essential());
        assert_eq!(pair.dim, 0);
        let rep = pair.representative.as_ref().unwrap();
        assert_eq!(rep.len(), 1);
        assert_eq!(rep.pivot().unwrap().0, 0);
    }

    #[test]
    fn unit_square_thresholded_has_one_nontrivial_loop() {
        let dm = DistanceMatrix::from_points(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let cfg = RipsConfig {
            max_dim: 1,
            threshold: Some(2.0f64.sqrt()),
            modulus: 2,
        };
        let p = compute(&dm, &cfg).unwrap();
        let nontrivial: Vec<_> = p
            .pairs_in_dim(1)
            .filter(|pr| !pr.is_trivial() && !pr.is_essential())
            .collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].birth.diameter, 1.0);
        assert_eq!(nontrivial[0].death.unwrap().diameter, 2.0f64.sqrt());
        // Representative: the four sides.
        let rep = nontrivial[0].representative.as_ref().unwrap();
        assert_eq!(rep.len(), 4);
        assert!(rep
            .iter()
            .all(|&(pos, _)| p.filtration.entry(pos).diameter == 1.0));
    }

    #[test]
    fn unit_square_at_threshold_one_has_an_essential_loop() {
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
        let p = compute(&dm, &cfg).unwrap();
        let essential: Vec<_> = p.pairs_in_dim(1).filter(|pr| pr.is_essential()).collect();
        assert_eq!(essential.len(), 1);
        let rep = essential[0].representative.as_ref().unwrap();
        assert_eq!(rep.len(), 4, "the loop is the four sides");
        assert!(boundary_of(rep, &p.filtration, field(2)).is_empty());
        // The essential simplex itself carries a nonzero coefficient.
        assert!(rep.coefficient_of(essential[0].birth.position).is_some());
    }

    #[test]
    fn death_count_formula() {
        assert_eq!(expected_death_count(4, 1), 3);
        assert_eq!(expected_death_count(4, 2), 3);
        // 120 - 45 + 10 - 1
        assert_eq!(expected_death_count(10, 3), 84);
    }

    #[test]
    fn death_counts_match_phase_one_on_full_filtrations() {
        for n in 4..=8usize {
            let dm = datasets::cycle_graph_metric(n);
            let cfg = RipsConfig {
                max_dim: 2,
                threshold: None,
                modulus: 2,
            };
            let filt = Filtration::build(&dm, &cfg).unwrap();
            let summary = phase_one(&filt, field(2), 2, true, true);
            for k in 1..=3usize {
                assert_eq!(
                    summary.deaths(k).len() as u64,
                    expected_death_count(n, k),
                    "n={n} k={k}"
                );
            }
            let essentials: Vec<_> = summary.all_essentials().collect();
            assert_eq!(essentials, vec![(0, 0)], "only the first vertex survives");
        }
    }

    #[test]
    fn restricted_column_count_example() {
        // 8 points, full filtration: |D_2| = C(8,2) - C(8,1) + C(8,0) = 21.
        let dm = datasets::uniform_cube(8, 3, 77);
        let dm = DistanceMatrix::from_points(&dm).unwrap();
        let cfg = RipsConfig {
            max_dim: 2,
            threshold: None,
            modulus: 2,
        };
        let filt = Filtration::build(&dm, &cfg).unwrap();
        let f = field(2);
        let summary = phase_one(&filt, f, 2, true, true);
        let d2 = assemble_restricted(&summary, 2, &filt, f, false).unwrap();
        assert_eq!(d2.owners().len(), 21);
        assert!(summary.essentials(2).is_empty());
    }

    #[test]
    fn anti_transpose_duality_of_assembled_matrices() {
        // The coboundary column of s holds exactly the coefficients that the
        // boundary columns of its cofacets hold at s, modulo the global
        // order reversal.
        let dm = datasets::uniform_cube(6, 2, 3);
        let dm = DistanceMatrix::from_points(&dm).unwrap();
        let cfg = RipsConfig {
            max_dim: 1,
            threshold: None,
            modulus: 5,
        };
        let filt = Filtration::build(&dm, &cfg).unwrap();
        let f = field(5);
        let m = filt.len();
        for dim in 0..=1usize {
            let cob = CoboundaryColumns::full_dim(&filt, f, dim);
            let bnd = BoundaryColumns::full_dim(&filt, f, dim + 1);
            for &owner in cob.owners() {
                let pos = m - 1 - owner;
                for &(rev_row, coeff) in cob.column(owner).iter() {
                    let cofacet_pos = m - 1 - rev_row;
                    let down = bnd.column(cofacet_pos).coefficient_of(pos);
                    assert_eq!(down, Some(coeff));
                }
            }
            for &cpos in bnd.owners() {
                for &(row, coeff) in bnd.column(cpos).iter() {
                    let up = cob.column(m - 1 - row).coefficient_of(m - 1 - cpos);
                    assert_eq!(up, Some(coeff));
                }
            }
        }
    }

    #[test]
    fn duality_direct_boundary_vs_coboundary_pairs() {
        // Reducing the boundary blocks directly must give the same pairing
        // and the same essential set as the coboundary phase.
        for n in 4..=10usize {
            for p in [2u32, 3] {
                let pts = datasets::uniform_cube(n, 3, n as u64);
                let dm = DistanceMatrix::from_points(&pts).unwrap();
                let cfg = RipsConfig {
                    max_dim: 2,
                    threshold: None,
                    modulus: p,
                };
                let filt = Filtration::build(&dm, &cfg).unwrap();
                let f = field(p);
                let summary = phase_one(&filt, f, 2, false, false);

                let mut boundary_pairs: Vec<(usize, usize)> = Vec::new();
                let mut pivot_rows: HashSet<usize> = HashSet::new();
                let mut zeroed: HashSet<usize> = HashSet::new();
                for dim in 1..=3usize {
                    let src = BoundaryColumns::full_dim(&filt, f, dim);
                    let state = reduce_all(&src, f, &ReduceOptions::default());
                    boundary_pairs.extend(state.pairs());
                    pivot_rows.extend(state.pivot_rows());
                    zeroed.extend(state.zeroed().iter().copied());
                }
                zeroed.extend(filt.positions_of_dim(0).iter().copied());
                boundary_pairs.sort_unstable();

                let mut cohomology_pairs: Vec<(usize, usize)> = (0..=2)
                    .flat_map(|q| summary.pairs(q).iter().copied())
                    .collect();
                cohomology_pairs.sort_unstable();
                assert_eq!(boundary_pairs, cohomology_pairs, "n {n} p {p}");

                let direct_essentials: HashSet<usize> = zeroed
                    .difference(&pivot_rows)
                    .copied()
                    .filter(|&pos| filt.entry(pos).simplex.dim <= 2)
                    .collect();
                let summary_essentials: HashSet<usize> =
                    summary.all_essentials().map(|(_, p)| p).collect();
                assert_eq!(direct_essentials, summary_essentials);
            }
        }
    }

    #[test]
    fn clearing_changes_nothing_but_the_work() {
        for seed in [5u64, 11, 23] {
            let pts = datasets::uniform_cube(8, 2, seed);
            let dm = DistanceMatrix::from_points(&pts).unwrap();
            let cfg = RipsConfig {
                max_dim: 2,
                threshold: None,
                modulus: 3,
            };
            let filt = Filtration::build(&dm, &cfg).unwrap();
            let f = field(3);
            let with = phase_one(&filt, f, 2, true, false);
            let without = phase_one(&filt, f, 2, false, false);
            for q in 0..=2usize {
                assert_eq!(with.pairs(q), without.pairs(q));
                assert_eq!(with.essentials(q), without.essentials(q));
            }
        }
    }

    #[test]
    fn cleared_source_skips_exactly_the_prior_deaths() {
        let filt = fixture();
        let f = field(2);
        let d0 = CoboundaryColumns::full_dim(&filt, f, 0);
        let state0 = reduce_all(&d0, f, &ReduceOptions::default());
        let d1 = CoboundaryColumns::full_dim(&filt, f, 1);
        let full_count = d1.owners().len();
        let cleared = d1.cleared_by(&state0);
        assert_eq!(full_count - cleared.owners().len(), state0.pairs().len());
        let death_edges: HashSet<usize> = state0.pivot_rows().into_iter().collect();
        assert!(cleared.owners().iter().all(|o| !death_edges.contains(o)));
        // A reduction with no pairs clears nothing.
        let empty_state = ReductionState::new(f, Tracking::Off);
        let d0_again = CoboundaryColumns::full_dim(&filt, f, 0).cleared_by(&empty_state);
        assert_eq!(d0_again.owners().len(), 4);
    }

    #[test]
    fn truncation_keeps_nontrivial_representatives_intact() {
        for seed in [3u64, 8, 21] {
            let pts = datasets::uniform_cube(7, 2, seed);
            let dm = DistanceMatrix::from_points(&pts).unwrap();
            let cfg = RipsConfig {
                max_dim: 1,
                threshold: None,
                modulus: 2,
            };
            let plain = compute_with(&dm, &cfg, &ComputeOptions::default()).unwrap();
            let truncated = compute_with(
                &dm,
                &cfg,
                &ComputeOptions {
                    truncate: true,
                    ..ComputeOptions::default()
                },
            )
            .unwrap();
            assert_eq!(plain.diagram_points(), truncated.diagram_points());
            for (a, b) in plain.pairs.iter().zip(&truncated.pairs) {
                if !a.is_trivial() {
                    assert_eq!(a.representative, b.representative, "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn truncation_covers_essential_columns_past_the_cutoff() {
        // Square at threshold 1: the essential loop edge arrives after the
        // last (and only) non-trivial dim-0 deaths.
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
        let truncated = compute_with(
            &dm,
            &cfg,
            &ComputeOptions {
                truncate: true,
                ..ComputeOptions::default()
            },
        )
        .unwrap();
        let essential: Vec<_> = truncated
            .pairs_in_dim(1)
            .filter(|p| p.is_essential())
            .collect();
        assert_eq!(essential.len(), 1);
        assert_eq!(essential[0].representative.as_ref().unwrap().len(), 4);
    }

    #[test]
    fn cohomology_mode_has_pairs_but_no_representatives() {
        let dm = datasets::cycle_graph_metric(8);
        let cfg = RipsConfig {
            max_dim: 1,
            threshold: None,
            modulus: 2,
        };
        let involuted = compute_with(&dm, &cfg, &ComputeOptions::default()).unwrap();
        let cohomology = compute_with(
            &dm,
            &cfg,
            &ComputeOptions {
                mode: Mode::Cohomology,
                ..ComputeOptions::default()
            },
        )
        .unwrap();
        assert_eq!(involuted.diagram_points(), cohomology.diagram_points());
        assert!(cohomology.pairs.iter().all(|p| p.representative.is_none()));
        assert!(involuted
            .pairs
            .iter()
            .all(|p| p.representative.is_some()));
    }

    #[test]
    fn duplicate_points_produce_trivial_dim0_pairs() {
        let dm = DistanceMatrix::from_points(&[
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
        ])
        .unwrap();
        let cfg = RipsConfig {
            max_dim: 1,
            threshold: None,
            modulus: 2,
        };
        let p = compute(&dm, &cfg).unwrap();
        let trivial: Vec<_> = p.pairs_in_dim(0).filter(|pr| pr.is_trivial()).collect();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial[0].birth.diameter, 0.0);
        let oracle_out = crate::oracle::full_reduce(&dm, &cfg, 1000).unwrap();
        assert_eq!(p.diagram_points(), oracle_out.persistence.diagram_points());
    }

    #[test]
    fn representatives_are_cycles_born_at_their_birth() {
        for p in [2u32, 3, 5] {
            let pts = datasets::uniform_cube(8, 2, 13);
            let dm = DistanceMatrix::from_points(&pts).unwrap();
            let cfg = RipsConfig {
                max_dim: 1,
                threshold: None,
                modulus: p,
            };
            let f = field(p);
            let result = compute(&dm, &cfg).unwrap();
            for pair in &result.pairs {
                let rep = pair.representative.as_ref().unwrap();
                assert!(!rep.is_empty());
                assert!(boundary_of(rep, &result.filtration, f).is_empty());
                assert_eq!(rep.pivot().unwrap().0, pair.birth.position);
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Quantized distances so diameter ties are the norm, not the
        /// exception; ordering bugs live in the tie-break.
        fn tied_matrix() -> impl Strategy<Value = DistanceMatrix> {
            (3usize..7).prop_flat_map(|n| {
                prop::collection::vec(1u32..5, n * (n - 1) / 2).prop_map(move |q| {
                    let entries: Vec<f64> = q.iter().map(|&v| f64::from(v)).collect();
                    DistanceMatrix::from_lower_triangular(&entries).unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn involuted_matches_oracle_on_tie_heavy_inputs(
                dm in tied_matrix(),
                p in prop::sample::select(vec![2u32, 3, 5]),
                max_dim in 1usize..3,
            ) {
                let cfg = RipsConfig { max_dim, threshold: None, modulus: p };
                let fast = compute(&dm, &cfg).unwrap();
                let slow = crate::oracle::full_reduce(&dm, &cfg, 10_000).unwrap();
                prop_assert_eq!(fast.diagram_points(), slow.persistence.diagram_points());
                prop_assert_eq!(fast.pairs.len(), slow.persistence.pairs.len());
                for (a, b) in fast.pairs.iter().zip(&slow.persistence.pairs) {
                    prop_assert_eq!(&a.representative, &b.representative);
                }
            }

            #[test]
            fn thresholded_tie_heavy_inputs_agree_too(dm in tied_matrix()) {
                let cfg = RipsConfig {
                    max_dim: 1,
                    threshold: Some(dm.median_pairwise_distance()),
                    modulus: 3,
                };
                let fast = compute(&dm, &cfg).unwrap();
                let slow = crate::oracle::full_reduce(&dm, &cfg, 10_000).unwrap();
                prop_assert_eq!(fast.diagram_points(), slow.persistence.diagram_points());
                for (a, b) in fast.pairs.iter().zip(&slow.persistence.pairs) {
                    prop_assert_eq!(&a.representative, &b.representative);
                }
            }
        }
    }
}
