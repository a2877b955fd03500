//! Slow, independent ground truth: dense left-to-right reduction of the full
//! boundary matrix, column by column, with none of the engine's shortcuts.
//!
//! Deliberately simple enough to audit by eye. Storage is a dense
//! field-element grid per dimension block, the guard refuses instances past
//! a column cap, and nothing here is shared with the sparse engine except
//! the filtration itself.

use std::collections::HashMap;

use crate::field::{FieldElement, PrimeField};
use crate::pipeline::{Persistence, PersistencePair};
use crate::reduction::Chain;
use crate::rips::{DistanceMatrix, Filtration, RipsConfig};
use crate::simplex;
use crate::Error;

pub const DEFAULT_MAX_COLUMNS: usize = 20_000;

/// Everything the textbook reduction produces: the diagram with
/// representatives, plus the raw per-column outcomes for golden tests.
#[derive(Debug, Clone)]
pub struct FullReduction {
    pub persistence: Persistence,
    /// Positions whose boundary columns reduced to the trivial column
    /// (dimensions >= 1; vertex columns are zero by definition).
    pub zeroed: Vec<usize>,
    /// Position -> fully reduced column, for every non-trivial column.
    pub reduced_columns: HashMap<usize, Chain>,
}

/// One dimension block of the boundary matrix, dense.
struct DenseBlock {
    rows: Vec<usize>,
    row_index: HashMap<usize, usize>,
    columns: Vec<usize>,
}

impl DenseBlock {
    fn new(filtration: &Filtration, dim: usize) -> Self {
        let rows = filtration.positions_of_dim(dim - 1).to_vec();
        let row_index = rows.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let columns = filtration.positions_of_dim(dim).to_vec();
        DenseBlock {
            rows,
            row_index,
            columns,
        }
    }

    fn dense_column(
        &self,
        position: usize,
        filtration: &Filtration,
        field: PrimeField,
    ) -> Vec<FieldElement> {
        let mut col = vec![field.zero(); self.rows.len()];
        let entry = filtration.entry(position);
        for (facet, sign) in simplex::facets(entry.simplex, filtration.binomials()) {
            let pos = filtration
                .position_of(facet.dim, facet.rank)
                .expect("faces are present");
            col[self.row_index[&pos]] = field.sign(sign);
        }
        col
    }
}

fn dense_pivot(col: &[FieldElement]) -> Option<usize> {
    col.iter().rposition(|c| !c.is_zero())
}

fn subtract_scaled(col: &mut [FieldElement], other: &[FieldElement], lambda: FieldElement) {
    for (a, b) in col.iter_mut().zip(other) {
        *a = *a - *b * lambda;
    }
}

/// Reduces the full boundary matrix of the filtration, dimension block by
/// dimension block, tracking witnesses for every zeroed column so essential
/// representatives can be read off afterwards.
pub fn full_reduce_filtration(
    filtration: Filtration,
    field: PrimeField,
    max_dim: usize,
    max_columns: usize,
) -> Result<FullReduction, Error> {
    if filtration.len() > max_columns {
        return Err(Error::OracleRefused(format!(
            "{} columns exceed the oracle cap of {max_columns}",
            filtration.len()
        )));
    }
    let top_dim = (max_dim + 1).min(filtration.max_simplex_dim());
    let mut zeroed_all: Vec<usize> = Vec::new();
    let mut reduced_columns: HashMap<usize, Chain> = HashMap::new();
    // pairs_by_dim[q] and, per dimension, the set of paired birth positions.
    // Sized by max_dim, not top_dim: thresholded filtrations can be missing
    // the higher dimensions entirely.
    let mut pairs_by_dim: Vec<Vec<(usize, usize)>> = vec![Vec::new(); max_dim + 2];
    let mut paired_births: Vec<Vec<usize>> = vec![Vec::new(); max_dim + 2];
    // Witnesses of zeroed columns, per dimension, owner position -> record.
    let mut zero_records: Vec<HashMap<usize, Chain>> = vec![HashMap::new(); max_dim + 2];

    for dim in 1..=top_dim {
        let block = DenseBlock::new(&filtration, dim);
        let mut reduced: Vec<Vec<FieldElement>> = Vec::with_capacity(block.columns.len());
        let mut records: Vec<Chain> = Vec::with_capacity(block.columns.len());
        let mut pivot_claim: HashMap<usize, usize> = HashMap::new(); // row idx -> col idx
        for (ci, &position) in block.columns.iter().enumerate() {
            let mut col = block.dense_column(position, &filtration, field);
            let mut record = Chain::unit(position, field.one());
            while let Some(prow) = dense_pivot(&col) {
                let Some(&cj) = pivot_claim.get(&prow) else {
                    break;
                };
                let lambda = col[prow] * reduced[cj][prow].inverse().expect("pivot is nonzero");
                let other_record = records[cj].clone();
                subtract_scaled(&mut col, &reduced[cj], lambda);
                record.add_scaled(&other_record, -lambda);
            }
            match dense_pivot(&col) {
                Some(prow) => {
                    pivot_claim.insert(prow, ci);
                    let birth = block.rows[prow];
                    paired_births[dim - 1].push(birth);
                    pairs_by_dim[dim - 1].push((birth, position));
                    let chain = Chain::from_terms(
                        col.iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(ri, &c)| (block.rows[ri], c))
                            .collect(),
                    );
                    reduced_columns.insert(position, chain);
                }
                None => {
                    zeroed_all.push(position);
                    zero_records[dim].insert(position, record.clone());
                }
            }
            reduced.push(col);
            records.push(record);
        }
    }

    // Births in dimension k are the zeroed columns of the k-block (all
    // vertices for k = 0); essential ones are births never claimed as a
    // pivot row one dimension up.
    let mut pairs: Vec<PersistencePair> = Vec::new();
    for q in 0..=max_dim {
        for &(birth, death) in &pairs_by_dim[q] {
            pairs.push(PersistencePair {
                dim: q,
                birth: *filtration.entry(birth),
                death: Some(*filtration.entry(death)),
                representative: reduced_columns.get(&death).cloned(),
            });
        }
        let births: Vec<usize> = if q == 0 {
            filtration.positions_of_dim(0).to_vec()
        } else {
            let mut b: Vec<usize> = zero_records[q].keys().copied().collect();
            b.sort_unstable();
            b
        };
        let paired: std::collections::HashSet<usize> =
            paired_births[q].iter().copied().collect();
        for birth in births {
            if paired.contains(&birth) {
                continue;
            }
            let representative = if q == 0 {
                Chain::unit(birth, field.one())
            } else {
                zero_records[q][&birth].clone()
            };
            pairs.push(PersistencePair {
                dim: q,
                birth: *filtration.entry(birth),
                death: None,
                representative: Some(representative),
            });
        }
    }
    pairs.sort_by_key(|p| (p.dim, p.birth.position, p.death.map(|d| d.position)));
    zeroed_all.sort_unstable();

    let modulus = field.modulus();
    Ok(FullReduction {
        persistence: Persistence {
            filtration,
            modulus,
            max_dim,
            threshold: None,
            pairs,
        },
        zeroed: zeroed_all,
        reduced_columns,
    })
}

/// Textbook reduction of the full boundary matrix of a Rips filtration.
pub fn full_reduce(
    dm: &DistanceMatrix,
    cfg: &RipsConfig,
    max_columns: usize,
) -> Result<FullReduction, Error> {
    let field = PrimeField::new(cfg.modulus)?;
    let filtration = Filtration::build(dm, cfg)?;
    let mut out = full_reduce_filtration(filtration, field, cfg.max_dim, max_columns)?;
    out.persistence.threshold = cfg.threshold;
    Ok(out)
}

/// Is `chain` (a p-chain) a linear combination of the boundary columns of
/// the (p+1)-simplices with position `<= max_position`? Decided by Gaussian
/// elimination over the dense block.
pub fn in_boundary_span(
    chain: &Chain,
    dim: usize,
    max_position: usize,
    filtration: &Filtration,
    field: PrimeField,
    max_columns: usize,
) -> Result<bool, Error> {
    if filtration.len() > max_columns {
        return Err(Error::OracleRefused(format!(
            "{} columns exceed the oracle cap of {max_columns}",
            filtration.len()
        )));
    }
    if chain.is_empty() {
        return Ok(true);
    }
    if dim + 1 > filtration.max_simplex_dim() {
        return Ok(false);
    }
    let block = DenseBlock::new(filtration, dim + 1);
    let mut reduced: Vec<Vec<FieldElement>> = Vec::new();
    let mut pivot_claim: HashMap<usize, usize> = HashMap::new();
    for &position in block.columns.iter().filter(|&&p| p <= max_position) {
        let mut col = block.dense_column(position, filtration, field);
        while let Some(prow) = dense_pivot(&col) {
            let Some(&cj) = pivot_claim.get(&prow) else {
                break;
            };
            let lambda = col[prow] * reduced[cj][prow].inverse().expect("pivot is nonzero");
            subtract_scaled(&mut col, &reduced[cj], lambda);
        }
        if let Some(prow) = dense_pivot(&col) {
            pivot_claim.insert(prow, reduced.len());
        }
        reduced.push(col);
    }
    let mut target = vec![field.zero(); block.rows.len()];
    for &(pos, coeff) in chain.iter() {
        let Some(&ri) = block.row_index.get(&pos) else {
            return Ok(false);
        };
        target[ri] = target[ri] + coeff;
    }
    while let Some(prow) = dense_pivot(&target) {
        let Some(&cj) = pivot_claim.get(&prow) else {
            return Ok(false);
        };
        let lambda = target[prow] * reduced[cj][prow].inverse().expect("pivot is nonzero");
        subtract_scaled(&mut target, &reduced[cj], lambda);
    }
    Ok(true)
}
