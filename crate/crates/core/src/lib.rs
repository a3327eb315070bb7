//! Small target sets for the linear threshold influence model.
//!
//! A node `v` with threshold `t(v)` activates once at least `t(v)` of its
//! incoming neighbors are active. A *target set* is a seed set whose
//! activation process eventually reaches every node. This crate provides:
//!
//! - [`graph`]: a compact digraph with both adjacency views, edge-list I/O,
//!   graph-class recognition and seeded instance generators;
//! - [`thresholds`]: the random / constant / proportional threshold families;
//! - [`activation`]: the activation process itself and target-set verification;
//! - [`solvers`]: the MTS heuristic with its limbo set, the earlier TSS
//!   pruning heuristic, a max-degree greedy and the TIP core decomposition;
//! - [`exact`]: brute-force optima for small instances, the closed-form DAG
//!   solution and the polytree-to-forest reduction;
//! - [`analysis`]: the target-set size certificate, modularity, label
//!   propagation communities, clustering coefficient and Pearson correlation.

pub mod activation;
pub mod analysis;
pub mod exact;
pub mod graph;
pub mod solvers;
pub mod thresholds;

use thiserror::Error;

/// Dense node index in `[0, n)`. External labels are remapped on load.
pub type NodeId = u32;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{op} requires a bidirected graph")]
    NotBidirected { op: &'static str },
    #[error("graph is not a DAG")]
    NotDag,
    #[error("underlying structure is not a tree")]
    NotPolytree,
    #[error("instance has {n} nodes, exceeding the brute-force limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("threshold list has {got} entries for a graph with {expected} nodes")]
    LengthMismatch { got: usize, expected: usize },
    #[error("zero variance in correlation input")]
    ZeroVariance,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
