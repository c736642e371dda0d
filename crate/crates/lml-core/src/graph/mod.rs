//! Weighted-graph representation and the structural operations everything
//! else builds on: connectivity, bridges, tree splitting, the Y-Δ transform
//! and positive-cycle peeling.

mod interchange;
mod ops;

pub use interchange::{graph_to_json, parse_graph_json, InterchangeError};
pub use ops::{bridges, peel_positive_cycle_edges, split_tree, y_delta_transform};

use std::fmt;
use thiserror::Error;

use crate::ratio::Rational;

/// Edge weight. Only `-1` and `+1` are admitted by [`WeightedGraph`].
pub type Weight = i8;

/// A single undirected edge with endpoints in canonical order (`u < v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub w: Weight,
}

/// Errors raised by graph construction and the structural operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("vertex {vertex} out of range (vertex count {vertex_count})")]
    VertexOutOfRange { vertex: u32, vertex_count: usize },
    #[error("invalid weight {0}: must be -1 or 1")]
    InvalidWeight(i8),
    #[error("edge index {index} out of range (edge count {edge_count})")]
    EdgeIndexOutOfRange { index: usize, edge_count: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("tree split requires at least 2 edges, got {0}")]
    TooFewEdges(usize),
    #[error("edge subset is not a single cycle: {0}")]
    NotACycle(&'static str),
    #[error("cycle contains a positive edge at index {0}")]
    PositiveCycleEdge(usize),
}

/// An undirected simple graph with `-1`/`+1` edge weights.
///
/// Edges are stored in canonical order: each edge has `u < v` and the edge
/// list is sorted lexicographically, so two equal graphs always serialize
/// identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples, normalizing endpoint order
    /// and sorting the edge list.
    pub fn new(vertex_count: usize, edges: Vec<(u32, u32, Weight)>) -> Result<Self, GraphError> {
        let mut canon = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if w != 1 && w != -1 {
                return Err(GraphError::InvalidWeight(w));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if (v as usize) >= vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    vertex_count,
                });
            }
            canon.push(Edge { u, v, w });
        }
        canon.sort_by_key(|e| (e.u, e.v));
        for pair in canon.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(GraphError::DuplicateEdge(pair[0].u, pair[0].v));
            }
        }
        Ok(Self {
            vertex_count,
            edges: canon,
        })
    }

    /// Builds a graph with every edge weighted `+1`.
    pub fn from_unweighted(
        vertex_count: usize,
        pairs: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, GraphError> {
        Self::new(
            vertex_count,
            pairs.into_iter().map(|(u, v)| (u, v, 1)).collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Returns a copy of this graph with the weight vector replaced.
    /// `weights` is aligned to the canonical edge order.
    pub fn with_weights(&self, weights: &[Weight]) -> Result<Self, GraphError> {
        if weights.len() != self.edges.len() {
            return Err(GraphError::EdgeIndexOutOfRange {
                index: weights.len(),
                edge_count: self.edges.len(),
            });
        }
        let mut g = self.clone();
        for (e, &w) in g.edges.iter_mut().zip(weights) {
            if w != 1 && w != -1 {
                return Err(GraphError::InvalidWeight(w));
            }
            e.w = w;
        }
        Ok(g)
    }

    /// The weight vector aligned to the canonical edge order.
    pub fn weights(&self) -> Vec<Weight> {
        self.edges.iter().map(|e| e.w).collect()
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| i64::from(e.w)).sum()
    }

    /// Adjacency lists as `(neighbor, edge index)` pairs.
    pub fn adjacency(&self) -> Vec<Vec<(u32, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u as usize].push((e.v, i));
            adj[e.v as usize].push((e.u, i));
        }
        adj
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|e| e.u == v || e.v == v)
            .count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.vertex_count];
        for e in &self.edges {
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Average degree `2m / n` as an exact rational. Zero for the empty graph.
    pub fn average_degree(&self) -> Rational {
        if self.vertex_count == 0 {
            return Rational::new(0, 1);
        }
        Rational::new(2 * self.edges.len() as i64, self.vertex_count as i64)
    }

    /// Standard whole-graph connectivity (isolated vertices count).
    pub fn is_connected(&self) -> bool {
        if self.vertex_count <= 1 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for &(to, _) in &adj[v as usize] {
                if !seen[to as usize] {
                    seen[to as usize] = true;
                    visited += 1;
                    stack.push(to);
                }
            }
        }
        visited == self.vertex_count
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count >= 1
            && self.edges.len() == self.vertex_count - 1
            && self.is_connected()
    }

    /// Returns the graph with the edge at `index` removed. Vertex count is
    /// unchanged.
    pub fn remove_edge(&self, index: usize) -> Result<Self, GraphError> {
        if index >= self.edges.len() {
            return Err(GraphError::EdgeIndexOutOfRange {
                index,
                edge_count: self.edges.len(),
            });
        }
        let mut edges = self.edges.clone();
        edges.remove(index);
        Ok(Self {
            vertex_count: self.vertex_count,
            edges,
        })
    }
}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(n={}, m={})", self.vertex_count, self.edges.len())
    }
}

/// A sorted, duplicate-free set of indices into a graph's edge sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgeSubset(Vec<usize>);

impl EdgeSubset {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<usize>> for EdgeSubset {
    fn from(v: Vec<usize>) -> Self {
        Self::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path(n_edges: usize) -> WeightedGraph {
        WeightedGraph::from_unweighted(
            n_edges + 1,
            (0..n_edges as u32).map(|i| (i, i + 1)),
        )
        .unwrap()
    }

    #[test]
    fn canonical_order_is_enforced() {
        let g = WeightedGraph::new(4, vec![(3, 1, 1), (0, 1, -1), (2, 1, 1)]).unwrap();
        let got: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(got, vec![(0, 1), (1, 2), (1, 3)]);
    }

    #[test]
    fn rejects_invalid_graphs() {
        assert_eq!(
            WeightedGraph::new(3, vec![(1, 1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            WeightedGraph::new(3, vec![(0, 1, 1), (1, 0, -1)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            WeightedGraph::new(2, vec![(0, 2, 1)]),
            Err(GraphError::VertexOutOfRange {
                vertex: 2,
                vertex_count: 2
            })
        );
        assert_eq!(
            WeightedGraph::new(3, vec![(0, 1, 2)]),
            Err(GraphError::InvalidWeight(2))
        );
    }

    #[test]
    fn total_weight_examples() {
        // path of 3 edges, all positive
        assert_eq!(path(3).total_weight(), 3);
        // triangle all -1 plus pendant +1 edge
        let g = WeightedGraph::new(
            4,
            vec![(0, 1, -1), (1, 2, -1), (0, 2, -1), (0, 3, 1)],
        )
        .unwrap();
        assert_eq!(g.total_weight(), -2);
        // parity of total equals parity of edge count
        assert_eq!(g.total_weight().rem_euclid(2), (g.edge_count() as i64) % 2);
    }

    #[test]
    fn connectivity_and_tree_examples() {
        let single = WeightedGraph::from_unweighted(2, [(0, 1)]).unwrap();
        assert!(single.is_connected());
        assert!(single.is_tree());

        let matching = WeightedGraph::from_unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!matching.is_connected());
        assert!(!matching.is_tree());

        let triangle = WeightedGraph::from_unweighted(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(triangle.is_connected());
        assert!(!triangle.is_tree());
    }

    #[test]
    fn degrees() {
        let star = WeightedGraph::from_unweighted(5, (1..5).map(|v| (0, v))).unwrap();
        assert_eq!(star.max_degree(), 4);
        assert_eq!(star.degree(0), 4);
        assert_eq!(star.degree(3), 1);
        assert_eq!(star.average_degree(), Rational::new(8, 5));

        let triangle = WeightedGraph::from_unweighted(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(triangle.average_degree(), Rational::new(2, 1));
    }

    #[test]
    fn edge_subset_normalizes() {
        let s = EdgeSubset::new(vec![4, 1, 4, 0]);
        assert_eq!(s.indices(), &[0, 1, 4]);
        assert!(s.contains(4));
        assert!(!s.contains(2));
    }
}
