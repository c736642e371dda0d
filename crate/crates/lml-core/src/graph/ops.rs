//! Structural operations: bridges, tree splitting, the Y-Δ transform and
//! positive-cycle peeling.

use super::{EdgeSubset, GraphError, WeightedGraph};

/// All bridges of the graph, i.e. the edges whose removal disconnects their
/// component. Works per component, so disconnected input is fine.
pub fn bridges(g: &WeightedGraph) -> EdgeSubset {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![u32::MAX; n];
    let mut timer = 0u32;
    let mut out = Vec::new();

    // Iterative low-link DFS: frame = (vertex, parent vertex, parent edge, next adj slot).
    let mut stack: Vec<(u32, u32, usize, usize)> = Vec::new();
    for root in 0..n as u32 {
        if disc[root as usize] != u32::MAX {
            continue;
        }
        disc[root as usize] = timer;
        low[root as usize] = timer;
        timer += 1;
        stack.push((root, u32::MAX, usize::MAX, 0));
        while !stack.is_empty() {
            let top = stack.len() - 1;
            let (v, _, parent_edge, slot) = stack[top];
            if let Some(&(to, eid)) = adj[v as usize].get(slot) {
                stack[top].3 += 1;
                if eid == parent_edge {
                    continue; // the edge we arrived on
                }
                if disc[to as usize] != u32::MAX {
                    low[v as usize] = low[v as usize].min(disc[to as usize]);
                } else {
                    disc[to as usize] = timer;
                    low[to as usize] = timer;
                    timer += 1;
                    stack.push((to, v, eid, 0));
                }
            } else {
                let (v, parent, peid, _) = stack.pop().unwrap();
                if parent != u32::MAX {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                    if low[v as usize] > disc[parent as usize] {
                        out.push(peid);
                    }
                }
            }
        }
    }
    EdgeSubset::new(out)
}

/// Edge sets of the branches hanging off `v`: one per neighbor, each holding
/// the connecting edge plus every edge of that component of `T - v`.
fn branches_at(g: &WeightedGraph, adj: &[Vec<(u32, usize)>], v: u32) -> Vec<Vec<usize>> {
    let mut branches = Vec::with_capacity(adj[v as usize].len());
    for &(u, eid) in &adj[v as usize] {
        let mut seen = vec![false; g.vertex_count()];
        seen[v as usize] = true;
        seen[u as usize] = true;
        let mut edges = vec![eid];
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for &(y, e2) in &adj[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    edges.push(e2);
                    stack.push(y);
                }
            }
        }
        edges.sort_unstable();
        branches.push(edges);
    }
    branches
}

fn subset_sum_reachable(sizes: &[usize], max: usize) -> Vec<bool> {
    let mut reach = vec![false; max + 1];
    reach[0] = true;
    for &s in sizes {
        for j in (s..=max).rev() {
            if reach[j - s] {
                reach[j] = true;
            }
        }
    }
    reach
}

/// Splits a tree with `n >= 2` edges into two edge-disjoint connected
/// subtrees covering all edges, with the smaller part of size
/// `j ∈ [⌈n/3⌉, ⌊n/2⌋]`.
///
/// Among valid splits the one with the largest smaller part wins; remaining
/// ties go to the lexicographically least edge set, so output is fully
/// deterministic.
pub fn split_tree(g: &WeightedGraph) -> Result<(EdgeSubset, EdgeSubset), GraphError> {
    if !g.is_tree() {
        return Err(GraphError::NotATree);
    }
    let n = g.edge_count();
    if n < 2 {
        return Err(GraphError::TooFewEdges(n));
    }
    let lo = n.div_ceil(3);
    let hi = n / 2;
    let adj = g.adjacency();
    let all_branches: Vec<Vec<Vec<usize>>> = (0..g.vertex_count() as u32)
        .map(|v| branches_at(g, &adj, v))
        .collect();

    // Any split shares exactly one vertex, so candidate parts are exactly the
    // unions of branch subsets at a vertex. Find the best achievable size.
    let mut best = None;
    for branches in &all_branches {
        let sizes: Vec<usize> = branches.iter().map(Vec::len).collect();
        let reach = subset_sum_reachable(&sizes, hi);
        for j in (lo..=hi).rev() {
            if reach[j] {
                if best.is_none_or(|b| j > b) {
                    best = Some(j);
                }
                break;
            }
        }
    }
    let target = best.expect("every tree with >= 2 edges admits a valid split");

    // Grow the lexicographically least part of size `target` one edge index
    // at a time; feasibility of a prefix is checked against every vertex.
    let feasible = |prefix: &[usize]| -> bool {
        let max_p = *prefix.last().unwrap();
        'vertex: for branches in &all_branches {
            let mut in_sum = 0usize;
            let mut free = Vec::new();
            for b in branches {
                let has_prefix = b.iter().any(|e| prefix.binary_search(e).is_ok());
                let has_excluded = b
                    .iter()
                    .any(|&e| e <= max_p && prefix.binary_search(&e).is_err());
                match (has_prefix, has_excluded) {
                    (true, true) => continue 'vertex,
                    (true, false) => in_sum += b.len(),
                    (false, true) => {}
                    (false, false) => free.push(b.len()),
                }
            }
            if in_sum > target {
                continue;
            }
            let need = target - in_sum;
            if subset_sum_reachable(&free, need)[need] {
                return true;
            }
        }
        false
    };

    let mut part = Vec::with_capacity(target);
    for _ in 0..target {
        let start = part.last().map_or(0, |&e| e + 1);
        let mut placed = false;
        for e in start..n {
            part.push(e);
            if feasible(&part) {
                placed = true;
                break;
            }
            part.pop();
        }
        debug_assert!(placed, "greedy split construction must not dead-end");
        if !placed {
            unreachable!("feasible split of size {target} vanished while growing prefix");
        }
    }

    let complement: Vec<usize> = (0..n).filter(|e| part.binary_search(e).is_err()).collect();
    Ok((EdgeSubset::new(part), EdgeSubset::new(complement)))
}

/// Checks that `cycle` is a single simple cycle in `g` and returns its
/// vertices. Every touched vertex must have degree exactly 2 within the
/// subset and the subset must be connected.
fn cycle_vertices(g: &WeightedGraph, cycle: &EdgeSubset) -> Result<Vec<u32>, GraphError> {
    if cycle.is_empty() {
        return Err(GraphError::NotACycle("empty edge subset"));
    }
    for idx in cycle.iter() {
        if idx >= g.edge_count() {
            return Err(GraphError::EdgeIndexOutOfRange {
                index: idx,
                edge_count: g.edge_count(),
            });
        }
    }
    let mut deg = std::collections::BTreeMap::new();
    for idx in cycle.iter() {
        let e = g.edges()[idx];
        *deg.entry(e.u).or_insert(0u32) += 1;
        *deg.entry(e.v).or_insert(0u32) += 1;
    }
    if deg.values().any(|&d| d != 2) {
        return Err(GraphError::NotACycle("a touched vertex has degree != 2"));
    }
    if deg.len() != cycle.len() {
        return Err(GraphError::NotACycle("vertex and edge counts differ"));
    }
    // Degree-2 everywhere means a disjoint union of cycles; demand exactly one.
    let verts: Vec<u32> = deg.keys().copied().collect();
    let mut adj: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
    for idx in cycle.iter() {
        let e = g.edges()[idx];
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![verts[0]];
    seen.insert(verts[0]);
    while let Some(v) = stack.pop() {
        for &to in &adj[&v] {
            if seen.insert(to) {
                stack.push(to);
            }
        }
    }
    if seen.len() != verts.len() {
        return Err(GraphError::NotACycle("subset is not connected"));
    }
    Ok(verts)
}

/// Replaces an all-negative cycle of length `s` with a negative star
/// `K_{1,s}`: the cycle edges are deleted and a new center vertex is joined
/// to each cycle vertex by a `-1` edge. Total weight is unchanged and no
/// original vertex gains degree.
pub fn y_delta_transform(
    g: &WeightedGraph,
    cycle: &EdgeSubset,
) -> Result<WeightedGraph, GraphError> {
    let verts = cycle_vertices(g, cycle)?;
    for idx in cycle.iter() {
        if g.edges()[idx].w != -1 {
            return Err(GraphError::PositiveCycleEdge(idx));
        }
    }
    let center = g.vertex_count() as u32;
    let mut edges: Vec<(u32, u32, i8)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !cycle.contains(*i))
        .map(|(_, e)| (e.u, e.v, e.w))
        .collect();
    for v in verts {
        edges.push((v, center, -1));
    }
    WeightedGraph::new(g.vertex_count() + 1, edges)
}

/// Repeatedly removes the lexicographically least positive edge lying on a
/// cycle (i.e. a positive non-bridge) until every positive edge is a bridge.
/// Returns the peeled graph and the number of removed edges.
pub fn peel_positive_cycle_edges(
    g: &WeightedGraph,
) -> Result<(WeightedGraph, usize), GraphError> {
    if !g.is_connected() {
        return Err(GraphError::NotConnected);
    }
    let mut current = g.clone();
    let mut removed = 0;
    loop {
        let b = bridges(&current);
        let target = current
            .edges()
            .iter()
            .enumerate()
            .find(|(i, e)| e.w == 1 && !b.contains(*i))
            .map(|(i, _)| i);
        match target {
            Some(i) => {
                current = current.remove_edge(i)?;
                removed += 1;
            }
            None => return Ok((current, removed)),
        }
    }
}
