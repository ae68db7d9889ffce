//! Exact algebra of closed countable subsets of the plane whose accumulation
//! structure has depth at most two.
//!
//! A [`SpectrumModel`] is a finite set of points together with finitely many
//! [`Cluster`]s. A depth-1 cluster is a convergent injective sequence plus its
//! limit; a depth-2 cluster is a sequence of such families whose limits
//! themselves converge. That is the least structure for which
//! `acc(acc S)` can be nonempty, and it keeps every predicate decidable.

mod cluster;
mod json;
mod model;
mod selection;
mod tail;

pub use cluster::{ChildTemplate, Cluster};
pub use json::{ClusterJson, SpectrumJson, TailJson};
pub use model::{IsolatedSet, SpectralClass, SpectrumModel};
pub use selection::SpectralSetSelection;
pub use tail::{PointMap, TailSpec};

/// Cap on `boundary_moves` in a selection.
pub const MAX_BOUNDARY_MOVES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error("invalid tail: {0}")]
    InvalidTail(String),
    #[error("invalid cluster: {0}")]
    InvalidCluster(String),
    #[error("accumulation depth would exceed 2")]
    DepthOverflow,
    #[error("malformed selection: {0}")]
    MalformedSelection(String),
    #[error("invalid spectral set: {0}")]
    InvalidSpectralSet(String),
    #[error("map undefined on the set: {0}")]
    UndefinedMap(String),
}
