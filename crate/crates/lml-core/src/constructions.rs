//! Generators for the named graph families and their canonical weighings.
//!
//! Five families, all with fixed deterministic vertex numbering (center or
//! path start is vertex 0, branches numbered in order) so outputs are
//! golden-testable:
//!
//! - subdivided star `S_{t,r}`: a star with `t` edges, each subdivided into a
//!   path of `r` edges;
//! - clipped star `R_{t,r}`: `S_{t,r}` with one leaf edge removed;
//! - comb `C_{t,r}`: central path on `t` vertices with a pendant path of
//!   length `r` at each vertex;
//! - alternating comb `A_{t,r}` (`t` odd): pendant lengths alternate `r`,
//!   `r+1` along the central path;
//! - dense-block graph `H_{k,t}`: `t` copies of a path-plus-dense-block
//!   gadget sharing one endpoint.
//!
//! [`paper_weighing`] dispatches `(family, k)` to the canonical `-1`/`+1`
//! assignment for that family and locality, keyed on `k mod 4`.

use thiserror::Error;

use crate::graph::{GraphError, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    SubdividedStar,
    ClippedStar,
    Comb,
    AlternatingComb,
    DenseBlock,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::SubdividedStar => "subdivided-star",
            Family::ClippedStar => "clipped-star",
            Family::Comb => "comb",
            Family::AlternatingComb => "alternating-comb",
            Family::DenseBlock => "dense-block",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("parameter {name} must be at least {min}, got {got}")]
    ParameterTooSmall {
        name: &'static str,
        min: u32,
        got: u32,
    },
    #[error("parameter {0} is required for this family")]
    MissingParameter(&'static str),
    #[error("parameter {name} does not apply to family {family}")]
    ParameterNotApplicable { name: &'static str, family: &'static str },
    #[error("alternating comb requires odd t, got {0}")]
    EvenAlternatingComb(u32),
    #[error("dense block requires k = 3 (mod 4) and k >= 11, got {0}")]
    InvalidDenseBlockK(u32),
    #[error("no canonical weighing is defined for family {family} at k = {k}")]
    UnsupportedWeighing { family: &'static str, k: u32 },
    #[error("r = {given} conflicts with the k = {k} weighing, which requires r = {required}")]
    MismatchedR { given: u32, required: u32, k: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A named family plus parameters. `r` is the branch/tooth length (not used
/// by the dense block); `k` is the locality consumed by the weighing and by
/// the dense block's shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub family: Family,
    pub t: u32,
    pub r: Option<u32>,
    pub k: Option<u32>,
}

impl ConstructionSpec {
    /// Builds the underlying graph with every edge weighted `+1`.
    pub fn build(&self) -> Result<WeightedGraph, ConstructError> {
        match self.family {
            Family::SubdividedStar => {
                let r = self.r.ok_or(ConstructError::MissingParameter("r"))?;
                subdivided_star(self.t, r)
            }
            Family::ClippedStar => {
                let r = self.r.ok_or(ConstructError::MissingParameter("r"))?;
                clipped_star(self.t, r)
            }
            Family::Comb => {
                let r = self.r.ok_or(ConstructError::MissingParameter("r"))?;
                comb(self.t, r)
            }
            Family::AlternatingComb => {
                let r = self.r.ok_or(ConstructError::MissingParameter("r"))?;
                alternating_comb(self.t, r)
            }
            Family::DenseBlock => {
                if self.r.is_some() {
                    return Err(ConstructError::ParameterNotApplicable {
                        name: "r",
                        family: self.family.name(),
                    });
                }
                let k = self.k.ok_or(ConstructError::MissingParameter("k"))?;
                dense_block_graph(k, self.t)
            }
        }
    }
}

fn require(name: &'static str, got: u32, min: u32) -> Result<(), ConstructError> {
    if got < min {
        Err(ConstructError::ParameterTooSmall { name, min, got })
    } else {
        Ok(())
    }
}

/// Spider tree: branches of the given lengths hanging off center vertex 0,
/// with the `neg_tail` edges closest to each leaf weighted `-1`.
fn spider(lengths: &[u32], neg_tail: u32) -> Result<WeightedGraph, ConstructError> {
    let mut edges = Vec::new();
    let mut next = 1u32;
    for &len in lengths {
        debug_assert!(neg_tail <= len);
        let mut prev = 0u32;
        for pos in 0..len {
            let w = if pos + neg_tail >= len { -1 } else { 1 };
            edges.push((prev, next, w));
            prev = next;
            next += 1;
        }
    }
    Ok(WeightedGraph::new(next as usize, edges)?)
}

/// Comb skeleton: central path on `tooth_lengths.len()` vertices, one pendant
/// path per vertex, with the `neg_tail` edges closest to each leaf `-1`.
fn comb_graph(tooth_lengths: &[u32], neg_tail: u32) -> Result<WeightedGraph, ConstructError> {
    let t = tooth_lengths.len() as u32;
    let mut edges = Vec::new();
    for i in 0..t.saturating_sub(1) {
        edges.push((i, i + 1, 1));
    }
    let mut next = t;
    for (i, &len) in tooth_lengths.iter().enumerate() {
        debug_assert!(neg_tail <= len);
        let mut prev = i as u32;
        for pos in 0..len {
            let w = if pos + neg_tail >= len { -1 } else { 1 };
            edges.push((prev, next, w));
            prev = next;
            next += 1;
        }
    }
    Ok(WeightedGraph::new(next as usize, edges)?)
}

/// `S_{t,r}`: star with `t` edges, each subdivided into a path of `r` edges.
/// `tr` edges total, all `+1`.
pub fn subdivided_star(t: u32, r: u32) -> Result<WeightedGraph, ConstructError> {
    require("t", t, 1)?;
    require("r", r, 1)?;
    spider(&vec![r; t as usize], 0)
}

/// `R_{t,r}`: `S_{t,r}` with one leaf edge removed, leaving one branch of
/// length `r-1` and `t-1` branches of length `r`. `tr - 1` edges.
pub fn clipped_star(t: u32, r: u32) -> Result<WeightedGraph, ConstructError> {
    require("t", t, 1)?;
    require("r", r, 2)?;
    let mut lengths = vec![r; t as usize];
    *lengths.last_mut().unwrap() = r - 1;
    spider(&lengths, 0)
}

/// `C_{t,r}`: central path on `t` vertices with a pendant path of length `r`
/// at each. `rt + t - 1` edges, maximum degree 3.
pub fn comb(t: u32, r: u32) -> Result<WeightedGraph, ConstructError> {
    require("t", t, 1)?;
    require("r", r, 1)?;
    comb_graph(&vec![r; t as usize], 0)
}

fn alternating_lengths(t: u32, r: u32) -> Vec<u32> {
    (0..t).map(|i| if i % 2 == 0 { r } else { r + 1 }).collect()
}

/// `A_{t,r}`: comb whose pendant lengths alternate `r` (odd positions,
/// 1-based) and `r+1` (even positions) along the central path. Only odd `t`
/// is admitted.
pub fn alternating_comb(t: u32, r: u32) -> Result<WeightedGraph, ConstructError> {
    require("t", t, 1)?;
    require("r", r, 1)?;
    if t.is_multiple_of(2) {
        return Err(ConstructError::EvenAlternatingComb(t));
    }
    comb_graph(&alternating_lengths(t, r), 0)
}

/// Least block order `q` with `q(q-1)/2 >= 3(k-3)/4`.
pub fn dense_block_order(k: u32) -> u32 {
    let target = 3 * (k - 3) / 4;
    (1..).find(|q| q * (q - 1) / 2 >= target).unwrap()
}

fn dense_block_weighted(k: u32, t: u32, neg: u32) -> Result<WeightedGraph, ConstructError> {
    if k % 4 != 3 || k < 11 {
        return Err(ConstructError::InvalidDenseBlockK(k));
    }
    require("t", t, 1)?;
    let q = dense_block_order(k);
    let path_len = (k + 1) / 4;
    let block_edges = 3 * (k - 3) / 4;
    let mut edges = Vec::new();
    let mut next = 1u32;
    for _ in 0..t {
        let mut prev = 0u32;
        for _ in 0..path_len {
            edges.push((prev, next, 1));
            prev = next;
            next += 1;
        }
        let y = prev;
        // Block vertex 0 is identified with y; the block itself is the
        // lexicographically first `block_edges` edges of K_q.
        let base = next;
        let bv = |i: u32| if i == 0 { y } else { base + i - 1 };
        let mut count = 0u32;
        'block: for a in 0..q {
            for b in a + 1..q {
                if count == block_edges {
                    break 'block;
                }
                let w = if count < neg { -1 } else { 1 };
                edges.push((bv(a), bv(b), w));
                count += 1;
            }
        }
        next += q - 1;
    }
    Ok(WeightedGraph::new(next as usize, edges)?)
}

/// `H_{k,t}` for `k = 3 (mod 4)`, `k >= 11`: `t` copies of a path of length
/// `(k+1)/4` ending in a `q`-vertex block holding `3(k-3)/4` edges, all
/// copies sharing the path start. `t(k-2)` edges, all `+1`.
pub fn dense_block_graph(k: u32, t: u32) -> Result<WeightedGraph, ConstructError> {
    dense_block_weighted(k, t, 0)
}

/// Shape and weighing parameters the `(family, k)` dispatch resolves to.
struct WeighingPlan {
    r: u32,
    neg_tail: u32,
}

fn star_plan(k: u32) -> Option<WeighingPlan> {
    if k < 3 {
        return None;
    }
    let (r, neg_tail) = match k % 4 {
        3 => {
            let m = (k - 3) / 4;
            (3 * m + 2, 2 * m + 1)
        }
        0 => {
            let m = k / 4;
            (3 * m, 2 * m - 1)
        }
        1 => {
            let m = (k - 1) / 4;
            (3 * m + 1, 2 * m)
        }
        _ => {
            let m = (k - 2) / 4;
            (3 * m + 1, 2 * m)
        }
    };
    Some(WeighingPlan { r, neg_tail })
}

fn comb_plan(k: u32) -> Option<WeighingPlan> {
    match k % 4 {
        0 if k >= 4 => {
            let m = k / 4;
            Some(WeighingPlan {
                r: 3 * m - 1,
                neg_tail: 2 * m - 1,
            })
        }
        1 if k >= 5 => {
            let m = (k - 1) / 4;
            Some(WeighingPlan {
                r: 3 * m,
                neg_tail: 2 * m,
            })
        }
        _ => None,
    }
}

fn alternating_comb_plan(k: u32) -> Option<WeighingPlan> {
    match k % 4 {
        2 if k >= 6 => {
            let m = (k - 2) / 4;
            Some(WeighingPlan {
                r: 3 * m,
                neg_tail: 2 * m,
            })
        }
        3 if k >= 7 => {
            let m = (k - 3) / 4;
            Some(WeighingPlan {
                r: 3 * m + 1,
                neg_tail: 2 * m + 1,
            })
        }
        _ => None,
    }
}

fn clipped_star_plan(k: u32) -> Option<WeighingPlan> {
    match k {
        5 => Some(WeighingPlan { r: 4, neg_tail: 2 }),
        8 => Some(WeighingPlan { r: 6, neg_tail: 3 }),
        _ => None,
    }
}

/// The canonical k-local positive weighing for `(spec.family, k)`.
///
/// Branch/tooth length is derived from `k`; a conflicting explicit `r` in the
/// spec is rejected. Pairs without a defined weighing are rejected.
pub fn paper_weighing(spec: &ConstructionSpec, k: u32) -> Result<WeightedGraph, ConstructError> {
    let unsupported = || ConstructError::UnsupportedWeighing {
        family: spec.family.name(),
        k,
    };
    let check_r = |required: u32| -> Result<(), ConstructError> {
        match spec.r {
            Some(given) if given != required => Err(ConstructError::MismatchedR {
                given,
                required,
                k,
            }),
            _ => Ok(()),
        }
    };
    match spec.family {
        Family::SubdividedStar => {
            let plan = star_plan(k).ok_or_else(unsupported)?;
            check_r(plan.r)?;
            require("t", spec.t, 1)?;
            spider(&vec![plan.r; spec.t as usize], plan.neg_tail)
        }
        Family::ClippedStar => {
            let plan = clipped_star_plan(k).ok_or_else(unsupported)?;
            check_r(plan.r)?;
            require("t", spec.t, 1)?;
            let mut lengths = vec![plan.r; spec.t as usize];
            *lengths.last_mut().unwrap() = plan.r - 1;
            spider(&lengths, plan.neg_tail)
        }
        Family::Comb => {
            let plan = comb_plan(k).ok_or_else(unsupported)?;
            check_r(plan.r)?;
            require("t", spec.t, 1)?;
            comb_graph(&vec![plan.r; spec.t as usize], plan.neg_tail)
        }
        Family::AlternatingComb => {
            let plan = alternating_comb_plan(k).ok_or_else(unsupported)?;
            check_r(plan.r)?;
            require("t", spec.t, 1)?;
            if spec.t.is_multiple_of(2) {
                return Err(ConstructError::EvenAlternatingComb(spec.t));
            }
            comb_graph(&alternating_lengths(spec.t, plan.r), plan.neg_tail)
        }
        Family::DenseBlock => {
            if spec.r.is_some() {
                return Err(ConstructError::ParameterNotApplicable {
                    name: "r",
                    family: spec.family.name(),
                });
            }
            if k % 4 != 3 || k < 11 {
                return Err(unsupported());
            }
            dense_block_weighted(k, spec.t, (k - 1) / 2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{is_k_local_positive, min_weight_connected_k_subgraph};
    use crate::ratio::Rational;

    fn weighing(family: Family, t: u32, k: u32) -> WeightedGraph {
        paper_weighing(
            &ConstructionSpec {
                family,
                t,
                r: None,
                k: Some(k),
            },
            k,
        )
        .unwrap()
    }

    #[test]
    fn subdivided_star_shapes() {
        let s = subdivided_star(3, 1).unwrap();
        assert_eq!(s.edge_count(), 3);
        assert_eq!(s.max_degree(), 3);

        let p = subdivided_star(2, 4).unwrap();
        assert_eq!(p.edge_count(), 8);
        assert_eq!(p.max_degree(), 2); // two branches from the center form a path

        let s42 = subdivided_star(4, 2).unwrap();
        assert_eq!(s42.edge_count(), 8);
        assert_eq!(s42.degree(0), 4);
        assert!(s42.is_tree());
    }

    #[test]
    fn clipped_star_shapes() {
        assert_eq!(clipped_star(2, 4).unwrap().edge_count(), 7);
        assert_eq!(clipped_star(2, 6).unwrap().edge_count(), 11);
        assert_eq!(clipped_star(1, 2).unwrap().edge_count(), 1);
    }

    #[test]
    fn comb_shapes() {
        let p = comb(1, 3).unwrap();
        assert_eq!(p.edge_count(), 3);
        assert_eq!(p.max_degree(), 2);

        let c = comb(4, 3).unwrap();
        assert_eq!(c.edge_count(), 15);
        assert_eq!(c.max_degree(), 3);
        assert!(c.is_tree());

        assert_eq!(comb(3, 5).unwrap().edge_count(), 17);
    }

    #[test]
    fn alternating_comb_shapes() {
        assert_eq!(alternating_comb(1, 4).unwrap().edge_count(), 4);
        assert_eq!(alternating_comb(3, 2).unwrap().edge_count(), 9);
        assert_eq!(alternating_comb(5, 6).unwrap().edge_count(), 36);
        assert_eq!(
            alternating_comb(4, 2),
            Err(ConstructError::EvenAlternatingComb(4))
        );
        assert!(alternating_comb(5, 6).unwrap().max_degree() <= 3);
    }

    #[test]
    fn dense_block_shapes() {
        let h1 = dense_block_graph(11, 1).unwrap();
        assert_eq!(dense_block_order(11), 4);
        assert_eq!(h1.vertex_count(), 7);
        assert_eq!(h1.edge_count(), 9);

        let h2 = dense_block_graph(11, 2).unwrap();
        assert_eq!(h2.vertex_count(), 13);
        assert_eq!(h2.edge_count(), 18);
        assert_eq!(h2.average_degree(), Rational::new(36, 13));

        let h15 = dense_block_graph(15, 1).unwrap();
        assert_eq!(dense_block_order(15), 5);
        assert_eq!(h15.vertex_count(), 9);
        assert_eq!(h15.edge_count(), 13);

        assert_eq!(
            dense_block_graph(12, 1),
            Err(ConstructError::InvalidDenseBlockK(12))
        );
        assert_eq!(
            dense_block_graph(7, 1),
            Err(ConstructError::InvalidDenseBlockK(7))
        );
    }

    #[test]
    fn star_weighing_totals() {
        // k = 7 (m = 1): S_{t,5} with total -mt
        let g = weighing(Family::SubdividedStar, 3, 7);
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.total_weight(), -3);

        // k = 6 (m = 1): S_{t,4}, leaf edge and its neighbor -1, total 0
        let g = weighing(Family::SubdividedStar, 3, 6);
        assert_eq!(g.total_weight(), 0);
        assert!(is_k_local_positive(&g, 6).unwrap());
        assert!(!is_k_local_positive(&g, 4).unwrap());

        // k = 3: S_{t,2} with leaf edges -1, total 0
        let g = weighing(Family::SubdividedStar, 4, 3);
        assert_eq!(g.total_weight(), 0);
        assert!(is_k_local_positive(&g, 3).unwrap());
    }

    #[test]
    fn star_weighing_min_subgraph_weights() {
        let s34 = weighing(Family::SubdividedStar, 3, 6);
        let w = min_weight_connected_k_subgraph(&s34, 6).unwrap().unwrap();
        assert_eq!(w.weight, 2);

        let r24 = weighing(Family::ClippedStar, 2, 5);
        assert_eq!(r24.total_weight(), -1);
        let w = min_weight_connected_k_subgraph(&r24, 5).unwrap().unwrap();
        assert_eq!(w.weight, 1);
        assert!(is_k_local_positive(&r24, 5).unwrap());
    }

    #[test]
    fn clipped_star_weighings() {
        let r26 = weighing(Family::ClippedStar, 2, 8);
        assert_eq!(r26.edge_count(), 11);
        assert_eq!(r26.total_weight(), -1);
        assert!(is_k_local_positive(&r26, 8).unwrap());
        assert!(matches!(
            paper_weighing(
                &ConstructionSpec {
                    family: Family::ClippedStar,
                    t: 2,
                    r: None,
                    k: Some(6)
                },
                6
            ),
            Err(ConstructError::UnsupportedWeighing { .. })
        ));
    }

    #[test]
    fn comb_weighings() {
        // k = 5, t = 4: C_{4,3} with total -1
        let c = weighing(Family::Comb, 4, 5);
        assert_eq!(c.edge_count(), 15);
        assert_eq!(c.total_weight(), -1);
        assert!(is_k_local_positive(&c, 5).unwrap());

        // k = 8, t = 2: C_{2,5} with total -1
        let c = weighing(Family::Comb, 2, 8);
        assert_eq!(c.total_weight(), -1);
        assert!(is_k_local_positive(&c, 8).unwrap());
    }

    #[test]
    fn alternating_comb_weighings() {
        // k = 10 (m = 2), q = 2: A_{5,6} with total -q(2m-3) - m = -4
        let a = weighing(Family::AlternatingComb, 5, 10);
        assert_eq!(a.edge_count(), 36);
        assert_eq!(a.total_weight(), -4);

        // k = 7 (m = 1), q = 1: A_{3,4} with total -q(2m-1) - m - 1 = -3
        let a = weighing(Family::AlternatingComb, 3, 7);
        assert_eq!(a.total_weight(), -3);
        assert!(is_k_local_positive(&a, 7).unwrap());
    }

    #[test]
    fn dense_block_weighings() {
        let h = weighing(Family::DenseBlock, 2, 11);
        assert_eq!(h.total_weight(), -2);
        assert!(is_k_local_positive(&h, 11).unwrap());

        let h = weighing(Family::DenseBlock, 1, 15);
        assert_eq!(h.total_weight(), -1);
    }

    #[test]
    fn mismatched_r_is_rejected() {
        let err = paper_weighing(
            &ConstructionSpec {
                family: Family::Comb,
                t: 4,
                r: Some(4),
                k: Some(5),
            },
            5,
        )
        .unwrap_err();
        assert_eq!(
            err,
            ConstructError::MismatchedR {
                given: 4,
                required: 3,
                k: 5
            }
        );
    }
}
