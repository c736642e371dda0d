//! Cross-module invariants: the dual routes held against each other and the
//! desk-scale sanity bands around the closed-form slope bounds.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lml_core::constructions::{paper_weighing, ConstructionSpec, Family};
use lml_core::extremal::{enumerate_free_trees, extremal_over_trees, FamilyConstraint};
use lml_core::gnk::{gnk_table, theorem_c_bounds, BoundsFamily};
use lml_core::graph::WeightedGraph;
use lml_core::oracle::{
    is_k_local_positive, min_weight_connected_k_subgraph, tree_min_k_subtree_weight,
};
use lml_core::ratio::Rational;

/// The subtree-knapsack fast path must agree with plain enumeration on every
/// tree with up to 12 edges and every k up to 9.
#[test]
fn tree_dp_equals_enumeration_exhaustively() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd9);
    for n in 1..=12 {
        for tree in enumerate_free_trees(n, &FamilyConstraint::none()) {
            // a random weighing makes the agreement check meaningful
            let weights: Vec<i8> = (0..n)
                .map(|_| if rng.gen_bool(0.4) { -1 } else { 1 })
                .collect();
            let t = tree.with_weights(&weights).unwrap();
            for k in 1..=9.min(n) {
                let dp = tree_min_k_subtree_weight(&t, k).unwrap();
                let enumerated = min_weight_connected_k_subgraph(&t, k)
                    .unwrap()
                    .map(|w| w.weight);
                assert_eq!(dp, enumerated, "n={n} k={k}");
            }
        }
    }
    println!("dp/enumeration agreement done in {:.2?}", t0.elapsed());
}

/// Removing edges can only shrink the candidate set, so the oracle minimum
/// never decreases on subgraphs.
#[test]
fn oracle_minimum_is_monotone_under_edge_removal() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..300 {
        let v: u32 = rng.gen_range(4..=8);
        let mut pairs: Vec<(u32, u32)> = (1..v).map(|i| (rng.gen_range(0..i), i)).collect();
        for _ in 0..rng.gen_range(0..=3u32) {
            let a = rng.gen_range(0..v);
            let b = rng.gen_range(0..v);
            let key = (a.min(b), a.max(b));
            if a != b && !pairs.contains(&key) {
                pairs.push(key);
            }
        }
        let edges: Vec<(u32, u32, i8)> = pairs
            .iter()
            .map(|&(a, b)| (a, b, if rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect();
        let g = WeightedGraph::new(v as usize, edges).unwrap();
        let drop_idx = rng.gen_range(0..g.edge_count());
        let h = g.remove_edge(drop_idx).unwrap();
        for k in 1..=g.edge_count().min(6) {
            let full = min_weight_connected_k_subgraph(&g, k).unwrap();
            let sub = min_weight_connected_k_subgraph(&h, k).unwrap();
            if let (Some(f), Some(s)) = (full, sub) {
                assert!(f.weight <= s.weight, "k={k}");
            }
        }
    }
}

/// Slope proxies behave per regime: positive for a forcing k, pinned at the
/// weakly-forcing plateau ratio for k = 5.
#[test]
fn slope_estimates_by_regime() {
    use lml_core::extremal::estimate_slope;
    let free = FamilyConstraint::none();
    let s4 = estimate_slope(4, &free, 5..=12).unwrap().unwrap();
    assert!(s4 > Rational::new(0, 1));
    let s5 = estimate_slope(5, &free, 7..=12).unwrap().unwrap();
    assert_eq!(s5, Rational::new(-1, 7));
}

/// The star witnesses realize the exact 4m+3 slope: the canonical weighing
/// of S_{t,3m+2} has total/edges equal to the theorem's lower bound.
#[test]
fn star_witnesses_realize_the_collapse_slope() {
    for m in 1..=3u32 {
        let k = 4 * m + 3;
        let bound = theorem_c_bounds(k, BoundsFamily::General).unwrap();
        for t in 1..=4u32 {
            let g = paper_weighing(
                &ConstructionSpec {
                    family: Family::SubdividedStar,
                    t,
                    r: None,
                    k: Some(k),
                },
                k,
            )
            .unwrap();
            let slope = Rational::new(g.total_weight(), g.edge_count() as i64);
            assert_eq!(slope, bound.lower, "k={k} t={t}");
        }
    }
}

/// The flagship collapse example: over the window [7, 15] the classifier
/// must call k = 7 collapse with the slope estimate pinned at -1/5, the
/// exact value the subdivided-star witnesses realize at n = 10 and 15.
#[test]
fn classifier_flags_k7_collapse_at_the_example_window() {
    use lml_core::classifier::{classify, ClassifierPolicy, Evidence};
    let report = classify(
        7,
        &FamilyConstraint::none(),
        7..=15,
        &ClassifierPolicy::default(),
    )
    .unwrap();
    assert_eq!(report.status, Evidence::Collapse);
    assert_eq!(report.c_estimate, Some(Rational::new(-1, 5)));
    assert_eq!(report.f_estimate, None);
    assert!(report.theorem_verdicts.iter().all(|v| v.pass));
}

/// Desk-scale slope bands for the first collapsing localities: exact W
/// sweeps to n = 13/14 must sit inside [theorem lower, 0] and reach at
/// least 75% of the lower bound's magnitude. (Larger k need window tops
/// beyond desk scale; see the decisions notes.)
#[test]
fn collapse_slopes_within_band_for_k_7_9_10() {
    let free = FamilyConstraint::none();
    for (k, window_top) in [(7usize, 13usize), (9, 13), (10, 14)] {
        let t0 = Instant::now();
        let bound = theorem_c_bounds(k as u32, BoundsFamily::General).unwrap();
        let table = gnk_table(k as u32, window_top as u32, &BTreeMap::new()).unwrap();
        let mut c_est: Option<Rational> = None;
        for n in k..=window_top {
            let r = extremal_over_trees(n, k, &free).unwrap();
            assert!(!r.vacuous);
            // W(n,k) >= g(n,k), and the witness must satisfy the oracle
            assert!(
                r.value >= table.get(n as u32).unwrap(),
                "W({n},{k}) below g"
            );
            assert!(is_k_local_positive(&r.witness_graph, k).unwrap());
            assert_eq!(r.witness_graph.total_weight(), r.value);
            let ratio = Rational::new(r.value, n as i64);
            c_est = Some(c_est.map_or(ratio, |c: Rational| c.min(ratio)));
        }
        let c = c_est.unwrap();
        assert!(c >= bound.lower && c <= Rational::new(0, 1), "k={k}: c={c}");
        // within 25% of the lower bound magnitude
        assert!(
            c <= bound.lower * Rational::new(3, 4),
            "k={k}: c_estimate {c} too far from {}",
            bound.lower
        );
        println!("k={k}: c_estimate={c}, lower={}, {:.2?}", bound.lower, t0.elapsed());
    }
}
