//! Decides k-local positivity and finds minimum-weight connected k-edge
//! subgraphs.
//!
//! Enumeration grows a connected edge set by frontier edges with an
//! exclusive-neighborhood rule (ESU on the line graph), so every subset is
//! produced exactly once and work is proportional to the output rather than
//! to all `C(m, k)` subsets. Trees additionally get a subtree-knapsack fast
//! path that must agree with enumeration; tests hold the two routes against
//! each other.

use thiserror::Error;

use crate::graph::{EdgeSubset, WeightedGraph};

/// Edge subsets are tracked as bitmasks.
pub(crate) type Mask = u128;

/// Enumeration is mask-based, so graphs are capped at 128 edges.
pub const MAX_ORACLE_EDGES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("k must be positive, got {0}")]
    InvalidK(usize),
    #[error("graph has {edges} edges; the subgraph oracle supports at most {max}")]
    TooManyEdges { edges: usize, max: usize },
    #[error("operation requires a tree")]
    NotATree,
}

/// A connected k-edge subgraph together with its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphWitness {
    pub weight: i64,
    pub edges: EdgeSubset,
}

/// Outcome of a k-local positivity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KLocalStatus {
    /// Every connected k-edge subgraph has weight > 0.
    Positive,
    /// No connected k-edge subgraph exists, so positivity holds vacuously.
    VacuouslyPositive,
    /// Some connected k-edge subgraph has weight <= 0 (first one found, in
    /// enumeration order).
    Violated(SubgraphWitness),
}

impl KLocalStatus {
    pub fn holds(&self) -> bool {
        !matches!(self, KLocalStatus::Violated(_))
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self, KLocalStatus::VacuouslyPositive)
    }
}

/// Edge adjacency ("line graph") with per-edge weights, mask encoded.
pub(crate) struct EdgeAdjacency {
    pub(crate) m: usize,
    pub(crate) nbr: Vec<Mask>,
    pub(crate) weight: Vec<i64>,
}

impl EdgeAdjacency {
    pub(crate) fn build(g: &WeightedGraph) -> Result<Self, OracleError> {
        let m = g.edge_count();
        if m > MAX_ORACLE_EDGES {
            return Err(OracleError::TooManyEdges {
                edges: m,
                max: MAX_ORACLE_EDGES,
            });
        }
        let mut by_vertex: Vec<Mask> = vec![0; g.vertex_count()];
        for (i, e) in g.edges().iter().enumerate() {
            by_vertex[e.u as usize] |= 1 << i;
            by_vertex[e.v as usize] |= 1 << i;
        }
        let mut nbr = vec![0 as Mask; m];
        for (i, e) in g.edges().iter().enumerate() {
            nbr[i] = (by_vertex[e.u as usize] | by_vertex[e.v as usize]) & !(1 << i);
        }
        Ok(Self {
            m,
            nbr,
            weight: g.edges().iter().map(|e| i64::from(e.w)).collect(),
        })
    }
}

/// Bits strictly above `i`; safe at the `i = 127` boundary.
fn mask_above(i: usize) -> Mask {
    if i + 1 >= MAX_ORACLE_EDGES {
        0
    } else {
        !((1 << (i + 1)) - 1)
    }
}

struct Frame {
    sub: Mask,
    weight: i64,
    ext: Mask,
    closed: Mask,
}

/// Streaming enumeration of connected k-edge subsets, duplicate free.
pub struct ConnectedEdgeSubsets {
    adj: EdgeAdjacency,
    k: usize,
    next_root: usize,
    stack: Vec<Frame>,
}

impl ConnectedEdgeSubsets {
    fn new(adj: EdgeAdjacency, k: usize) -> Self {
        Self {
            adj,
            k,
            next_root: 0,
            stack: Vec::new(),
        }
    }

    /// Core step over masks; the public iterator wraps this.
    pub(crate) fn next_mask(&mut self) -> Option<(Mask, i64)> {
        loop {
            if let Some(top) = self.stack.last_mut() {
                if top.ext == 0 {
                    self.stack.pop();
                    continue;
                }
                let w = top.ext.trailing_zeros() as usize;
                let wbit: Mask = 1 << w;
                top.ext &= !wbit;
                let root = top.sub.trailing_zeros() as usize;
                let gt_root = mask_above(root);
                let child_sub = top.sub | wbit;
                let child_weight = top.weight + self.adj.weight[w];
                if child_sub.count_ones() as usize == self.k {
                    return Some((child_sub, child_weight));
                }
                let child = Frame {
                    sub: child_sub,
                    weight: child_weight,
                    ext: top.ext | (self.adj.nbr[w] & gt_root & !top.closed),
                    closed: top.closed | self.adj.nbr[w] | wbit,
                };
                self.stack.push(child);
            } else {
                if self.next_root >= self.adj.m {
                    return None;
                }
                let r = self.next_root;
                self.next_root += 1;
                let rbit: Mask = 1 << r;
                if self.k == 1 {
                    return Some((rbit, self.adj.weight[r]));
                }
                let gt_root = mask_above(r);
                self.stack.push(Frame {
                    sub: rbit,
                    weight: self.adj.weight[r],
                    ext: self.adj.nbr[r] & gt_root,
                    closed: self.adj.nbr[r] | rbit,
                });
            }
        }
    }
}

impl Iterator for ConnectedEdgeSubsets {
    type Item = EdgeSubset;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_mask().map(|(mask, _)| mask_to_subset(mask))
    }
}

pub(crate) fn mask_to_subset(mask: Mask) -> EdgeSubset {
    let mut idx = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        idx.push(i);
        rest &= rest - 1;
    }
    EdgeSubset::new(idx)
}

/// Yields every edge subset of size `k` that induces a connected subgraph,
/// each exactly once. Empty stream when none exist.
pub fn enumerate_connected_edge_subsets(
    g: &WeightedGraph,
    k: usize,
) -> Result<ConnectedEdgeSubsets, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidK(k));
    }
    Ok(ConnectedEdgeSubsets::new(EdgeAdjacency::build(g)?, k))
}

/// True when `a` precedes `b` as a sorted index sequence (equal sizes).
fn mask_lex_less(a: Mask, b: Mask) -> bool {
    if a == b {
        return false;
    }
    let d = (a ^ b).trailing_zeros();
    a & (1 << d) != 0
}

/// Minimum-weight connected k-edge subgraph, or `None` when no connected
/// k-edge subgraph exists. Ties go to the lexicographically least edge set.
pub fn min_weight_connected_k_subgraph(
    g: &WeightedGraph,
    k: usize,
) -> Result<Option<SubgraphWitness>, OracleError> {
    let mut it = enumerate_connected_edge_subsets(g, k)?;
    let mut best: Option<(i64, Mask)> = None;
    while let Some((mask, weight)) = it.next_mask() {
        let better = match best {
            None => true,
            Some((bw, bm)) => weight < bw || (weight == bw && mask_lex_less(mask, bm)),
        };
        if better {
            best = Some((weight, mask));
        }
    }
    Ok(best.map(|(weight, mask)| SubgraphWitness {
        weight,
        edges: mask_to_subset(mask),
    }))
}

/// Tree fast path: minimum weight over connected k-edge subtrees via a
/// rooted subtree knapsack, `None` when `k` exceeds the edge count. Must
/// agree with [`min_weight_connected_k_subgraph`] on every tree.
pub fn tree_min_k_subtree_weight(
    g: &WeightedGraph,
    k: usize,
) -> Result<Option<i64>, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidK(k));
    }
    if !g.is_tree() {
        return Err(OracleError::NotATree);
    }
    if k > g.edge_count() {
        return Ok(None);
    }

    let n = g.vertex_count();
    let adj = g.adjacency();
    // BFS orientation from vertex 0.
    let mut parent = vec![u32::MAX; n];
    let mut parent_w = vec![0i64; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[0] = true;
    order.push(0u32);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &(to, eid) in &adj[v as usize] {
            if !seen[to as usize] {
                seen[to as usize] = true;
                parent[to as usize] = v;
                parent_w[to as usize] = i64::from(g.edges()[eid].w);
                order.push(to);
            }
        }
    }

    // dp[v][j]: min weight of a connected j-edge set inside v's subtree whose
    // top vertex is v. dp[v][0] = 0 (the empty set anchored at v).
    let mut dp: Vec<Vec<i64>> = vec![vec![0]; n];
    let mut best: Option<i64> = None;
    for &v in order.iter().rev() {
        let vd = std::mem::take(&mut dp[v as usize]);
        if let Some(&w) = vd.get(k) {
            best = Some(best.map_or(w, |b| b.min(w)));
        }
        let p = parent[v as usize];
        if p == u32::MAX {
            continue;
        }
        // fold v's table into its parent through the connecting edge
        let pw = parent_w[v as usize];
        let pd = std::mem::take(&mut dp[p as usize]);
        let new_len = (pd.len() + vd.len()).min(k + 1);
        let mut merged = vec![i64::MAX; new_len];
        for (j1, &a) in pd.iter().enumerate() {
            if j1 < new_len {
                merged[j1] = merged[j1].min(a);
            }
            for (j2, &b) in vd.iter().enumerate() {
                let j = j1 + 1 + j2;
                if j >= new_len {
                    break;
                }
                merged[j] = merged[j].min(a + pw + b);
            }
        }
        // unreachable sizes stay at i64::MAX; strip them so `get(k)` is honest
        while merged.last() == Some(&i64::MAX) {
            merged.pop();
        }
        dp[p as usize] = merged;
    }
    Ok(best)
}

/// Full k-local positivity verdict. Trees use the knapsack fast path for the
/// yes/no answer and fall back to enumeration only to extract a violating
/// witness.
pub fn k_local_positivity(g: &WeightedGraph, k: usize) -> Result<KLocalStatus, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidK(k));
    }
    if g.is_tree() {
        return match tree_min_k_subtree_weight(g, k)? {
            None => Ok(KLocalStatus::VacuouslyPositive),
            Some(w) if w > 0 => Ok(KLocalStatus::Positive),
            Some(_) => {
                let witness = first_non_positive(g, k)?
                    .expect("tree DP reported a non-positive subtree; enumeration must find one");
                Ok(KLocalStatus::Violated(witness))
            }
        };
    }
    let mut it = enumerate_connected_edge_subsets(g, k)?;
    let mut any = false;
    while let Some((mask, weight)) = it.next_mask() {
        any = true;
        if weight <= 0 {
            return Ok(KLocalStatus::Violated(SubgraphWitness {
                weight,
                edges: mask_to_subset(mask),
            }));
        }
    }
    if any {
        Ok(KLocalStatus::Positive)
    } else {
        Ok(KLocalStatus::VacuouslyPositive)
    }
}

fn first_non_positive(
    g: &WeightedGraph,
    k: usize,
) -> Result<Option<SubgraphWitness>, OracleError> {
    let mut it = enumerate_connected_edge_subsets(g, k)?;
    while let Some((mask, weight)) = it.next_mask() {
        if weight <= 0 {
            return Ok(Some(SubgraphWitness {
                weight,
                edges: mask_to_subset(mask),
            }));
        }
    }
    Ok(None)
}

/// True iff every connected k-edge subgraph has weight > 0; vacuously true
/// when no such subgraph exists. Note the parity consequence: for even k
/// "positive" forces weight >= 2, for odd k weight >= 1.
pub fn is_k_local_positive(g: &WeightedGraph, k: usize) -> Result<bool, OracleError> {
    Ok(k_local_positivity(g, k)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n_edges: usize) -> WeightedGraph {
        WeightedGraph::from_unweighted(n_edges + 1, (0..n_edges as u32).map(|i| (i, i + 1)))
            .unwrap()
    }

    /// Brute-force oracle: filter all C(m, k) index subsets by an independent
    /// connectivity check on the edge-induced subgraph.
    fn brute_force_subsets(g: &WeightedGraph, k: usize) -> Vec<EdgeSubset> {
        let m = g.edge_count();
        let mut out = Vec::new();
        for mask in 0u64..(1 << m) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let idx: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            if edge_subset_connected(g, &idx) {
                out.push(EdgeSubset::new(idx));
            }
        }
        out
    }

    fn edge_subset_connected(g: &WeightedGraph, idx: &[usize]) -> bool {
        if idx.is_empty() {
            return false;
        }
        let mut verts = std::collections::BTreeSet::new();
        for &i in idx {
            verts.insert(g.edges()[i].u);
            verts.insert(g.edges()[i].v);
        }
        let start = *verts.iter().next().unwrap();
        let mut seen = std::collections::BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &i in idx {
                let e = g.edges()[i];
                let other = if e.u == v {
                    e.v
                } else if e.v == v {
                    e.u
                } else {
                    continue;
                };
                if seen.insert(other) {
                    stack.push(other);
                }
            }
        }
        seen.len() == verts.len()
    }

    #[test]
    fn enumeration_examples() {
        let subs: Vec<_> = enumerate_connected_edge_subsets(&path(4), 2)
            .unwrap()
            .collect();
        assert_eq!(subs.len(), 3);

        let matching = WeightedGraph::from_unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            enumerate_connected_edge_subsets(&matching, 2).unwrap().count(),
            0
        );

        let triangle = WeightedGraph::from_unweighted(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            enumerate_connected_edge_subsets(&triangle, 2).unwrap().count(),
            3
        );

        assert!(enumerate_connected_edge_subsets(&path(3), 0).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force_and_has_no_duplicates() {
        let cases = vec![
            path(6),
            WeightedGraph::from_unweighted(5, (1..5).map(|v| (0, v))).unwrap(),
            WeightedGraph::from_unweighted(
                6,
                [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (3, 5), (4, 5)],
            )
            .unwrap(),
            WeightedGraph::from_unweighted(6, [(0, 1), (2, 3), (3, 4), (2, 4), (4, 5)])
                .unwrap(),
        ];
        for g in &cases {
            for k in 1..=g.edge_count() {
                let got: Vec<_> = enumerate_connected_edge_subsets(g, k).unwrap().collect();
                let mut dedup = got.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), got.len(), "duplicates for k={k} in {g}");
                let mut expected = brute_force_subsets(g, k);
                expected.sort();
                assert_eq!(dedup, expected, "subset mismatch for k={k} in {g}");
            }
        }
    }

    #[test]
    fn min_weight_on_all_positive_path() {
        for k in 1..=5 {
            let w = min_weight_connected_k_subgraph(&path(k), k).unwrap().unwrap();
            assert_eq!(w.weight, k as i64);
            assert_eq!(w.edges.len(), k);
        }
    }

    #[test]
    fn min_weight_tie_breaks_lexicographically() {
        // all-equal weights: every 2-subset of the path weighs 2; the least
        // index pair must win
        let w = min_weight_connected_k_subgraph(&path(5), 2).unwrap().unwrap();
        assert_eq!(w.edges.indices(), &[0, 1]);
    }

    #[test]
    fn tree_dp_agrees_with_enumeration() {
        let mut weights = vec![1, -1, 1, 1, -1, -1, 1, 1];
        let g = path(8).with_weights(&weights).unwrap();
        for k in 1..=8 {
            let dp = tree_min_k_subtree_weight(&g, k).unwrap();
            let enumerated = min_weight_connected_k_subgraph(&g, k)
                .unwrap()
                .map(|w| w.weight);
            assert_eq!(dp, enumerated, "k={k}");
        }
        // a branchier tree
        weights = vec![-1, 1, 1, -1, 1, 1, -1];
        let t = WeightedGraph::from_unweighted(
            8,
            [(0, 1), (0, 2), (0, 3), (2, 4), (2, 5), (5, 6), (3, 7)],
        )
        .unwrap()
        .with_weights(&weights)
        .unwrap();
        for k in 1..=7 {
            assert_eq!(
                tree_min_k_subtree_weight(&t, k).unwrap(),
                min_weight_connected_k_subgraph(&t, k).unwrap().map(|w| w.weight),
                "k={k}"
            );
        }
    }

    #[test]
    fn vacuous_positivity() {
        let matching = WeightedGraph::new(4, vec![(0, 1, -1), (2, 3, -1)]).unwrap();
        for k in 2..=4 {
            assert_eq!(
                k_local_positivity(&matching, k).unwrap(),
                KLocalStatus::VacuouslyPositive
            );
            assert!(is_k_local_positive(&matching, k).unwrap());
        }
        // k beyond the edge count of a tree is vacuous as well
        assert!(k_local_positivity(&path(3), 4).unwrap().is_vacuous());
    }

    #[test]
    fn violated_carries_a_witness() {
        let g = path(4).with_weights(&[1, -1, -1, 1]).unwrap();
        match k_local_positivity(&g, 2).unwrap() {
            KLocalStatus::Violated(w) => {
                assert!(w.weight <= 0);
                assert_eq!(w.edges.len(), 2);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }
}
