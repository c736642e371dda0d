//! Exact minimum total weight over all k-local positive weighings, for a
//! fixed graph and over all trees of a given size.
//!
//! [`min_weighing`] runs a complete branch-and-bound over the `2^m` sign
//! assignments: edges are assigned in order of how many connected k-subsets
//! contain them, partial assignments are pruned as soon as some k-subset can
//! no longer end up positive or the all-minus completion cannot beat the
//! incumbent, and a second pass pins the lexicographically least witness.
//! [`exhaustive_min_weighing`] is the unpruned reference the pruned solver
//! is held against.
//!
//! With the `parallel` feature (default) the per-size tree sweeps fan out
//! over a rayon pool; results merge by a deterministic key, so the outcome
//! is identical across worker counts and with the sequential fallback.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{GraphError, Weight, WeightedGraph};
use crate::oracle::{Mask, OracleError};
use crate::ratio::Rational;
use crate::trees::FreeTrees;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("k must be positive, got {0}")]
    InvalidK(usize),
    #[error("extremal search requires a connected graph")]
    NotConnected,
    #[error("no tree with {n_edges} edges satisfies the family constraint")]
    EmptyFamily { n_edges: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Desk-scale family filters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FamilyConstraint {
    pub max_degree: Option<usize>,
    pub min_avg_degree: Option<Rational>,
}

impl FamilyConstraint {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn with_max_degree(max_degree: usize) -> Self {
        Self {
            max_degree: Some(max_degree),
            ..Self::default()
        }
    }

    pub fn admits(&self, g: &WeightedGraph) -> bool {
        if let Some(cap) = self.max_degree {
            if g.max_degree() > cap {
                return false;
            }
        }
        if let Some(min_avg) = self.min_avg_degree {
            if g.average_degree() < min_avg {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    pub trees_searched: u64,
    pub elapsed: Duration,
}

/// Outcome of an exact search: the minimum achievable total weight, the
/// weighing (and weighted graph) attaining it, and search statistics.
#[derive(Debug, Clone)]
pub struct ExtremalResult {
    pub value: i64,
    pub witness_graph: WeightedGraph,
    pub witness_weighing: Vec<Weight>,
    /// Set when the instance has no connected k-edge subgraph at all; the
    /// witness is then the all-minus weighing.
    pub vacuous: bool,
    pub stats: SearchStats,
}

struct Instance {
    m: usize,
    subset_sum: Vec<i32>,
    subset_assigned: Vec<u16>,
    k: i32,
    by_edge: Vec<Vec<u32>>,
    nodes: u64,
    prunes: u64,
}

impl Instance {
    fn build(g: &WeightedGraph, k: usize) -> Result<Option<Self>, ExtremalError> {
        let mut it = crate::oracle::enumerate_connected_edge_subsets(g, k)?;
        let mut subsets: Vec<Mask> = Vec::new();
        while let Some((mask, _)) = it.next_mask() {
            subsets.push(mask);
        }
        if subsets.is_empty() {
            return Ok(None);
        }
        let m = g.edge_count();
        let mut by_edge = vec![Vec::new(); m];
        for (sid, &mask) in subsets.iter().enumerate() {
            let mut rest = mask;
            while rest != 0 {
                let e = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                by_edge[e].push(sid as u32);
            }
        }
        Ok(Some(Self {
            m,
            subset_sum: vec![0; subsets.len()],
            subset_assigned: vec![0; subsets.len()],
            k: k as i32,
            by_edge,
            nodes: 0,
            prunes: 0,
        }))
    }

    /// Applies weight `w` to edge `e`. Returns false when some k-subset can
    /// no longer be positive (every unassigned edge at +1 still gives a
    /// non-positive total). The caller must `unapply` either way.
    fn apply(&mut self, e: usize, w: i32) -> bool {
        let mut ok = true;
        for &sid in &self.by_edge[e] {
            let sid = sid as usize;
            self.subset_sum[sid] += w;
            self.subset_assigned[sid] += 1;
            if self.subset_sum[sid] + (self.k - i32::from(self.subset_assigned[sid])) <= 0 {
                ok = false;
            }
        }
        ok
    }

    fn unapply(&mut self, e: usize, w: i32) {
        for &sid in &self.by_edge[e] {
            let sid = sid as usize;
            self.subset_sum[sid] -= w;
            self.subset_assigned[sid] -= 1;
        }
    }

    /// Phase 1: the minimum total weight, branch and bound. `order` decides
    /// the assignment sequence; minus is explored first so low incumbents
    /// arrive early.
    fn search_value(&mut self, order: &[usize], depth: usize, sum: i64, incumbent: &mut i64) {
        self.nodes += 1;
        if depth == self.m {
            if sum < *incumbent {
                *incumbent = sum;
            }
            return;
        }
        let e = order[depth];
        let remaining_after = (self.m - depth - 1) as i64;
        for w in [-1i64, 1] {
            if sum + w - remaining_after >= *incumbent {
                self.prunes += 1;
                continue;
            }
            let ok = self.apply(e, w as i32);
            if ok {
                self.search_value(order, depth + 1, sum + w, incumbent);
            } else {
                self.prunes += 1;
            }
            self.unapply(e, w as i32);
        }
    }

    /// Phase 2: first (hence lexicographically least, with -1 before +1)
    /// assignment in natural edge order whose total is exactly `target`.
    fn search_witness(&mut self, depth: usize, sum: i64, target: i64, out: &mut Vec<Weight>) -> bool {
        self.nodes += 1;
        if depth == self.m {
            return true;
        }
        let remaining_after = (self.m - depth - 1) as i64;
        for w in [-1i64, 1] {
            let s = sum + w;
            if s - remaining_after > target || s + remaining_after < target {
                continue;
            }
            let ok = self.apply(depth, w as i32);
            if ok {
                out.push(w as Weight);
                if self.search_witness(depth + 1, s, target, out) {
                    self.unapply(depth, w as i32);
                    return true;
                }
                out.pop();
            } else {
                self.prunes += 1;
            }
            self.unapply(depth, w as i32);
        }
        false
    }
}

/// Exact minimum of `total_weight` over all k-local positive weighings of
/// `g`, with a canonical witness: among all minima, the weight vector that
/// is lexicographically least in edge order with `-1` before `+1`.
pub fn min_weighing(g: &WeightedGraph, k: usize) -> Result<ExtremalResult, ExtremalError> {
    let start = Instant::now();
    if k == 0 {
        return Err(ExtremalError::InvalidK(k));
    }
    if !g.is_connected() {
        return Err(ExtremalError::NotConnected);
    }
    let m = g.edge_count();
    let Some(mut inst) = Instance::build(g, k)? else {
        // no connected k-edge subgraph: positivity is vacuous, all-minus wins
        let weighing = vec![-1; m];
        return Ok(ExtremalResult {
            value: -(m as i64),
            witness_graph: g.with_weights(&weighing)?,
            witness_weighing: weighing,
            vacuous: true,
            stats: SearchStats {
                trees_searched: 1,
                elapsed: start.elapsed(),
                ..Default::default()
            },
        });
    };

    // front-load edges covered by many k-subsets
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&e| (std::cmp::Reverse(inst.by_edge[e].len()), e));

    let mut incumbent = i64::MAX;
    inst.search_value(&order, 0, 0, &mut incumbent);
    debug_assert!(incumbent < i64::MAX, "the all-plus weighing is always valid");

    let mut weighing = Vec::with_capacity(m);
    let found = inst.search_witness(0, 0, incumbent, &mut weighing);
    debug_assert!(found, "phase 2 must rediscover the phase 1 optimum");
    if !found {
        unreachable!("witness reconstruction failed for value {incumbent}");
    }

    Ok(ExtremalResult {
        value: incumbent,
        witness_graph: g.with_weights(&weighing)?,
        witness_weighing: weighing,
        vacuous: false,
        stats: SearchStats {
            nodes: inst.nodes,
            prunes: inst.prunes,
            trees_searched: 1,
            elapsed: start.elapsed(),
        },
    })
}

/// Unpruned reference solver: tries all `2^m` weighings, checking every
/// connected k-subset directly. Used to cross-check [`min_weighing`]; only
/// sensible for small graphs.
pub fn exhaustive_min_weighing(
    g: &WeightedGraph,
    k: usize,
) -> Result<ExtremalResult, ExtremalError> {
    let start = Instant::now();
    if k == 0 {
        return Err(ExtremalError::InvalidK(k));
    }
    if !g.is_connected() {
        return Err(ExtremalError::NotConnected);
    }
    let m = g.edge_count();
    assert!(m <= 24, "exhaustive solver is a reference for small graphs");
    let mut it = crate::oracle::enumerate_connected_edge_subsets(g, k)?;
    let mut subsets: Vec<u64> = Vec::new();
    while let Some((mask, _)) = it.next_mask() {
        subsets.push(mask as u64);
    }
    let vacuous = subsets.is_empty();
    let ki = k as i64;
    let mut best: Option<(i64, u64)> = None;
    for minus in 0u64..1 << m {
        let valid = subsets
            .iter()
            .all(|&s| ki - 2 * i64::from((s & minus).count_ones()) > 0);
        if !valid {
            continue;
        }
        let total = m as i64 - 2 * i64::from(minus.count_ones());
        // lex order on weight vectors: at the lowest differing edge, the
        // weighing carrying the minus sign is smaller
        let lex_less = |a: u64, b: u64| a != b && a >> (a ^ b).trailing_zeros() & 1 == 1;
        let better = match best {
            None => true,
            Some((bt, bm)) => total < bt || (total == bt && lex_less(minus, bm)),
        };
        if better {
            best = Some((total, minus));
        }
    }
    let (value, minus) = best.expect("the all-plus weighing is always k-local positive");
    let weighing: Vec<Weight> = (0..m).map(|e| if minus >> e & 1 == 1 { -1 } else { 1 }).collect();
    Ok(ExtremalResult {
        value,
        witness_graph: g.with_weights(&weighing)?,
        witness_weighing: weighing,
        vacuous,
        stats: SearchStats {
            nodes: 1 << m,
            trees_searched: 1,
            elapsed: start.elapsed(),
            ..Default::default()
        },
    })
}

/// One representative per isomorphism class of free trees with `n_edges`
/// edges satisfying the constraint. Degree filtering happens inside the
/// level-sequence generator, before any graph is materialized.
pub fn enumerate_free_trees(
    n_edges: usize,
    constraint: &FamilyConstraint,
) -> impl Iterator<Item = WeightedGraph> + '_ {
    FreeTrees::new(n_edges + 1, constraint.max_degree)
        .filter(move |t| constraint.admits(t))
}

fn merge_results(
    a: Option<(usize, ExtremalResult)>,
    b: Option<(usize, ExtremalResult)>,
) -> Option<(usize, ExtremalResult)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            // deterministic: value first, then canonical tree order
            let pick_x = (x.1.value, x.0) <= (y.1.value, y.0);
            Some(if pick_x { x } else { y })
        }
    }
}

fn finalize_over_trees(
    n_edges: usize,
    picked: Option<(usize, ExtremalResult)>,
    vacuous_fallback: Option<ExtremalResult>,
    trees_searched: u64,
    nodes: u64,
    prunes: u64,
    elapsed: Duration,
) -> Result<ExtremalResult, ExtremalError> {
    let mut result = match (picked, vacuous_fallback) {
        (Some((_, r)), _) => r,
        (None, Some(r)) => r,
        (None, None) => return Err(ExtremalError::EmptyFamily { n_edges }),
    };
    result.stats = SearchStats {
        nodes,
        prunes,
        trees_searched,
        elapsed,
    };
    Ok(result)
}

/// Sequential sweep: exact minimum of [`min_weighing`] over every free tree
/// with `n_edges` edges admitted by the constraint. Vacuous instances (only
/// possible when `n_edges < k`) are excluded from the minimum and reported
/// via the `vacuous` flag of the fallback result.
pub fn extremal_over_trees_seq(
    n_edges: usize,
    k: usize,
    constraint: &FamilyConstraint,
) -> Result<ExtremalResult, ExtremalError> {
    let start = Instant::now();
    let mut picked: Option<(usize, ExtremalResult)> = None;
    let mut vacuous_fallback = None;
    let (mut trees, mut nodes, mut prunes) = (0u64, 0u64, 0u64);
    for (idx, tree) in enumerate_free_trees(n_edges, constraint).enumerate() {
        let r = min_weighing(&tree, k)?;
        trees += 1;
        nodes += r.stats.nodes;
        prunes += r.stats.prunes;
        if r.vacuous {
            if vacuous_fallback.is_none() {
                vacuous_fallback = Some(r);
            }
        } else {
            picked = merge_results(picked, Some((idx, r)));
        }
    }
    finalize_over_trees(n_edges, picked, vacuous_fallback, trees, nodes, prunes, start.elapsed())
}

/// Parallel sweep over the tree stream; identical output to the sequential
/// version for any worker count.
#[cfg(feature = "parallel")]
pub fn extremal_over_trees_par(
    n_edges: usize,
    k: usize,
    constraint: &FamilyConstraint,
) -> Result<ExtremalResult, ExtremalError> {
    use rayon::prelude::*;

    let start = Instant::now();
    let trees: Vec<WeightedGraph> = enumerate_free_trees(n_edges, constraint).collect();
    let results: Result<Vec<(usize, ExtremalResult)>, ExtremalError> = trees
        .par_iter()
        .enumerate()
        .map(|(idx, tree)| min_weighing(tree, k).map(|r| (idx, r)))
        .collect();
    let results = results?;
    let trees_searched = results.len() as u64;
    let nodes = results.iter().map(|(_, r)| r.stats.nodes).sum();
    let prunes = results.iter().map(|(_, r)| r.stats.prunes).sum();
    let mut picked = None;
    let mut vacuous_fallback = None;
    for (idx, r) in results {
        if r.vacuous {
            if vacuous_fallback.is_none() {
                vacuous_fallback = Some(r);
            }
        } else {
            picked = merge_results(picked, Some((idx, r)));
        }
    }
    finalize_over_trees(n_edges, picked, vacuous_fallback, trees_searched, nodes, prunes, start.elapsed())
}

/// Exact `W(n, k)` over free trees: parallel when the `parallel` feature is
/// enabled, sequential otherwise.
pub fn extremal_over_trees(
    n_edges: usize,
    k: usize,
    constraint: &FamilyConstraint,
) -> Result<ExtremalResult, ExtremalError> {
    #[cfg(feature = "parallel")]
    {
        extremal_over_trees_par(n_edges, k, constraint)
    }
    #[cfg(not(feature = "parallel"))]
    {
        extremal_over_trees_seq(n_edges, k, constraint)
    }
}

/// Runs `f` on a dedicated pool with the requested worker count (all cores
/// when `None`); plain invocation without the `parallel` feature.
#[cfg(feature = "parallel")]
pub fn with_thread_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .expect("failed to build worker pool")
            .install(f),
        None => f(),
    }
}

/// Sequential fallback: the worker count is ignored.
#[cfg(not(feature = "parallel"))]
pub fn with_thread_pool<T>(_jobs: Option<usize>, f: impl FnOnce() -> T) -> T {
    f()
}

/// Finite-size slope proxy: `min over n in the range of W(n, k)/n`,
/// skipping vacuous sizes. `None` when every size in the range is vacuous.
pub fn estimate_slope(
    k: usize,
    constraint: &FamilyConstraint,
    n_range: std::ops::RangeInclusive<usize>,
) -> Result<Option<Rational>, ExtremalError> {
    let mut best: Option<Rational> = None;
    for n in n_range {
        let r = extremal_over_trees(n, k, constraint)?;
        if r.vacuous {
            continue;
        }
        let ratio = Rational::new(r.value, n as i64);
        best = Some(match best {
            None => ratio,
            Some(b) => b.min(ratio),
        });
    }
    Ok(best)
}
