//! Persistent homology of Vietoris-Rips filtrations with representative
//! cycles.
//!
//! The diagram is computed the fast way, by reducing coboundary matrices, and
//! the representatives the honest way, by reducing the boundary matrix
//! restricted to the death and essential columns the first phase identified.
//! Both phases share one column-reduction engine over a fixed injective
//! filtration order, so the pairings of the two phases agree exactly.
//!
//! ```
//! use involuted::{compute, DistanceMatrix, RipsConfig};
//!
//! let square = DistanceMatrix::from_points(&[
//!     vec![0.0, 0.0],
//!     vec![1.0, 0.0],
//!     vec![1.0, 1.0],
//!     vec![0.0, 1.0],
//! ])
//! .unwrap();
//! let persistence = compute(&square, &RipsConfig { max_dim: 1, threshold: None, modulus: 2 }).unwrap();
//! let loop_pair = persistence
//!     .pairs_in_dim(1)
//!     .find(|p| !p.is_trivial())
//!     .expect("the square has one loop");
//! assert_eq!(loop_pair.birth.diameter, 1.0);
//! assert_eq!(loop_pair.death.unwrap().diameter, 2.0f64.sqrt());
//! // The representative is the four sides of the square.
//! assert_eq!(loop_pair.representative.as_ref().unwrap().len(), 4);
//! ```
//!
//! See the crate examples for runnable walkthroughs of each capability, and
//! the `involuted` binary for the command-line surface.

pub mod cli;
pub mod datasets;
pub mod field;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod reduction;
pub mod rips;
pub mod simplex;

pub use field::{FieldElement, PrimeField};
pub use pipeline::{
    compute, compute_filtration, compute_with, expected_death_count, ComputeOptions, Mode,
    Persistence, PersistencePair, PhaseOneSummary,
};
pub use reduction::{Chain, ColumnSource, ReductionState};
pub use rips::{DistanceMatrix, Filtration, FiltrationEntry, RipsConfig};

use thiserror::Error;

/// Unified error type for the whole pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    Simplex(#[from] simplex::SimplexError),
    #[error(transparent)]
    Rips(#[from] rips::RipsError),
    #[error(transparent)]
    Parse(#[from] io::ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("oracle refused: {0}")]
    OracleRefused(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("{0}")]
    Usage(String),
}
