//! Clustering of Dempster-Shafer belief functions into independent subsets.
//!
//! Belief functions that concern different events repel each other through
//! the conflict of Dempster's rule, and may additionally attract each other
//! through externally supplied pairwise evidence. Both kinds of metalevel
//! evidence are combined per cluster and per partition into masses for and
//! against the proposition that a candidate partition is adequate; the two
//! terms are weighted by the entropy of each pooled evidence type and the
//! resulting metaconflict objective is minimized over set partitions.
//!
//! The pipeline, end to end:
//!
//! ```
//! use metaconflict::evidence::{AttractionMatrix, ConflictMatrix};
//! use metaconflict::weighting::entropy_report;
//! use metaconflict::search::{exact_search, SearchConfig};
//!
//! // Two blocks: conflict across them, attraction within them.
//! let c = ConflictMatrix::from_rows(vec![
//!     vec![0.0, 0.1, 0.9, 0.9],
//!     vec![0.1, 0.0, 0.9, 0.9],
//!     vec![0.9, 0.9, 0.0, 0.1],
//!     vec![0.9, 0.9, 0.1, 0.0],
//! ])?;
//! let p = AttractionMatrix::from_triplets(4, [(0, 1, 0.8), (2, 3, 0.8)])?;
//! let alpha = entropy_report(&c, &p)?.alpha;
//! let best = exact_search(&c, &p, alpha, &SearchConfig::default())?;
//! assert_eq!(best.partition.labels(), &[0, 0, 1, 1]);
//! # Ok::<(), metaconflict::Error>(())
//! ```
//!
//! All core types are generic over the scalar (`f32` or `f64`) via
//! [`scalar::Real`]; the `*64` aliases at the crate root fix `f64`, which is
//! what the CLI and the test suite use.

pub mod error;
pub mod evidence;
pub mod instance;
pub mod metalevel;
pub mod scalar;
pub mod scenario;
pub mod search;
mod subsets;
pub mod weighting;

pub use error::{Error, Result};
pub use evidence::{EvidenceItem, FocalSet, Frame};
pub use metalevel::Partition;
pub use scalar::Real;

/// `f64`-specialized aliases for the main domain types.
pub type MassFunction64 = evidence::MassFunction<f64>;
pub type ConflictMatrix64 = evidence::ConflictMatrix<f64>;
pub type AttractionMatrix64 = evidence::AttractionMatrix<f64>;
pub type MetaBpa64 = metalevel::MetaBpa<f64>;
pub type EntropyReport64 = weighting::EntropyReport<f64>;
pub type McfReport64 = search::McfReport<f64>;
pub type SearchConfig64 = search::SearchConfig<f64>;
