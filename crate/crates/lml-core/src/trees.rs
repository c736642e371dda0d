//! Free-tree enumeration and canonical forms.
//!
//! Rooted trees are represented by level sequences (root at level 1, each
//! subtree's children listed in lexicographically non-increasing order).
//! [`FreeTrees`] walks all canonical rooted sequences with the classic
//! constant-time successor rule and keeps exactly the sequences that are the
//! centroid-rooted canonical form of their underlying free tree, so every
//! isomorphism class is produced exactly once, with no visited-set memory.

use crate::graph::{GraphError, WeightedGraph};

/// Parent of each non-root position in a level sequence.
fn parents(seq: &[u32]) -> Vec<usize> {
    let mut last_at_level = vec![usize::MAX; seq.len() + 2];
    let mut out = vec![usize::MAX; seq.len()];
    for (i, &l) in seq.iter().enumerate() {
        if l > 1 {
            out[i] = last_at_level[l as usize - 1];
        }
        last_at_level[l as usize] = i;
    }
    out
}

fn graph_from_level_sequence(seq: &[u32]) -> WeightedGraph {
    let edges = parents(seq)
        .into_iter()
        .enumerate()
        .filter(|&(_, p)| p != usize::MAX)
        .map(|(i, p)| (p as u32, i as u32));
    WeightedGraph::from_unweighted(seq.len(), edges)
        .expect("level sequences always describe valid trees")
}

/// Canonical level sequence of the tree rooted at `root`: children ordered
/// by their sequences, largest first.
fn canonical_rooted_seq(adj: &[Vec<usize>], v: usize, parent: usize, level: u32) -> Vec<u32> {
    let mut children: Vec<Vec<u32>> = adj[v]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| canonical_rooted_seq(adj, u, v, level + 1))
        .collect();
    children.sort_by(|a, b| b.cmp(a));
    let mut seq = Vec::with_capacity(1 + children.iter().map(Vec::len).sum::<usize>());
    seq.push(level);
    for c in children {
        seq.extend(c);
    }
    seq
}

/// The one or two centroids of a tree (vertices minimizing the largest
/// component of `T - v`).
fn centroids(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n == 1 {
        return vec![0];
    }
    // subtree sizes from an orientation rooted at 0
    let mut order = vec![0usize];
    let mut parent = vec![usize::MAX; n];
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &u in &adj[v] {
            if u != parent[v] {
                parent[u] = v;
                order.push(u);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            size[parent[v]] += size[v];
        }
    }
    let heaviest = |v: usize| -> usize {
        adj[v]
            .iter()
            .map(|&u| if u == parent[v] { n - size[v] } else { size[u] })
            .max()
            .unwrap()
    };
    let best = (0..n).map(heaviest).min().unwrap();
    (0..n).filter(|&v| heaviest(v) == best).collect()
}

fn simple_adjacency(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for e in g.edges() {
        adj[e.u as usize].push(e.v as usize);
        adj[e.v as usize].push(e.u as usize);
    }
    adj
}

/// Centroid-rooted canonical form of a tree; equal forms mean isomorphic
/// trees. Weights are ignored.
pub fn tree_canonical_form(g: &WeightedGraph) -> Result<Vec<u32>, GraphError> {
    if !g.is_tree() {
        return Err(GraphError::NotATree);
    }
    let adj = simple_adjacency(g);
    Ok(centroids(&adj)
        .into_iter()
        .map(|c| canonical_rooted_seq(&adj, c, usize::MAX, 1))
        .max()
        .expect("a tree has at least one centroid"))
}

/// Structural tree isomorphism via canonical forms.
pub fn trees_isomorphic(a: &WeightedGraph, b: &WeightedGraph) -> Result<bool, GraphError> {
    Ok(tree_canonical_form(a)? == tree_canonical_form(b)?)
}

/// Iterator over one representative per isomorphism class of free trees on a
/// fixed vertex count, optionally restricted to a maximum degree. All edges
/// carry weight `+1`.
pub struct FreeTrees {
    seq: Vec<u32>,
    max_degree: Option<usize>,
    exhausted: bool,
    fresh: bool,
}

impl FreeTrees {
    pub fn new(n_vertices: usize, max_degree: Option<usize>) -> Self {
        Self {
            seq: (1..=n_vertices as u32).collect(),
            max_degree,
            exhausted: n_vertices == 0,
            fresh: true,
        }
    }

    /// Successor rule over canonical rooted level sequences: locate the last
    /// entry above 2 at or before `cap`, then tile the tail with the block
    /// starting at that entry's parent. Capping `cap` below the end skips
    /// every sequence sharing the current prefix `0..=cap`, which is how
    /// degree violations are pruned wholesale. Returns false once the star
    /// is passed.
    fn advance(&mut self, cap: usize) -> bool {
        let seq = &mut self.seq;
        let Some(p) = seq[..=cap].iter().rposition(|&l| l > 2) else {
            return false;
        };
        let q = seq[..p]
            .iter()
            .rposition(|&l| l == seq[p] - 1)
            .expect("a parent level precedes every deeper level");
        for i in p..seq.len() {
            seq[i] = seq[i - (p - q)];
        }
        true
    }

    /// First position whose attachment pushes some vertex past the degree
    /// cap. Degrees only grow as a prefix extends, so every completion of
    /// that prefix violates too.
    fn first_degree_violation(&self) -> Option<usize> {
        let cap = self.max_degree?;
        let seq = &self.seq;
        let mut child_count = vec![0usize; seq.len()];
        let mut last_at_level = vec![usize::MAX; seq.len() + 2];
        for (i, &l) in seq.iter().enumerate() {
            if l > 1 {
                let parent = last_at_level[l as usize - 1];
                child_count[parent] += 1;
                let degree = child_count[parent] + usize::from(parent != 0);
                if degree > cap {
                    return Some(i);
                }
            }
            last_at_level[l as usize] = i;
        }
        None
    }

    fn current_is_free_canonical(&self) -> bool {
        let g = graph_from_level_sequence(&self.seq);
        let adj = simple_adjacency(&g);
        let canon = centroids(&adj)
            .into_iter()
            .map(|c| canonical_rooted_seq(&adj, c, usize::MAX, 1))
            .max()
            .unwrap();
        canon == self.seq
    }
}

impl Iterator for FreeTrees {
    type Item = WeightedGraph;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.exhausted {
                return None;
            }
            if self.fresh {
                self.fresh = false;
            } else if !self.advance(self.seq.len() - 1) {
                self.exhausted = true;
                return None;
            }
            // jump past whole blocks of degree-violating sequences
            while let Some(at) = self.first_degree_violation() {
                if !self.advance(at) {
                    self.exhausted = true;
                    return None;
                }
            }
            if self.current_is_free_canonical() {
                return Some(graph_from_level_sequence(&self.seq));
            }
        }
    }
}
