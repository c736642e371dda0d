//! Exact combinatorics of k-local positive `±1` edge weighings of connected
//! graphs.
//!
//! A weighing `w: E(G) -> {-1, 1}` is *k-local positive* when every connected
//! subgraph with exactly `k` edges has strictly positive total weight. This
//! crate provides:
//!
//! - [`graph`]: a canonical weighted-graph type with the structural
//!   operations the subject needs (bridges, tree splitting, Y-Δ transform,
//!   positive-cycle peeling);
//! - [`oracle`]: exact decisions of k-local positivity and minimum-weight
//!   connected k-edge subgraphs;
//! - [`constructions`]: generators for the named witness families
//!   (subdivided stars, clipped stars, combs, alternating combs, dense-block
//!   graphs) and their canonical weighings;
//! - [`gnk`]: the arithmetic lower-bound function `g(n, k)` with overridable
//!   base cases, ratio certificates and closed-form slope bounds;
//! - [`trees`], [`extremal`]: exhaustive free-tree enumeration and exact
//!   branch-and-bound search for the minimum total weight over all k-local
//!   positive weighings;
//! - [`classifier`]: evidence verdicts (forcing / weakly forcing / collapse)
//!   over the computed extremal data.
//!
//! The `parallel` feature (on by default) runs the tree searches on a rayon
//! pool; without it the same APIs fall back to sequential execution.

pub mod classifier;
pub mod constructions;
pub mod extremal;
pub mod gnk;
pub mod graph;
pub mod oracle;
pub mod ratio;
pub mod trees;

pub use graph::{Edge, EdgeSubset, GraphError, WeightedGraph};
pub use oracle::{is_k_local_positive, KLocalStatus, OracleError, SubgraphWitness};
pub use ratio::{ratio_string, Rational};
