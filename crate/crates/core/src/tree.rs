//! Distances and diameters on weighted trees.

use crate::error::{Error, Result};
use crate::graph::WeightedCompleteGraph;
use crate::subgraph::SpanningSubgraph;

/// A spanning tree with its edge weights, as adjacency lists.
#[derive(Clone, Debug)]
pub struct TreeView {
    adj: Vec<Vec<(usize, f64)>>,
}

impl TreeView {
    /// Checks that `edges` form a spanning tree of `0..n`.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::NotATree(format!("{} edges on {n} vertices", edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        let tree = TreeView { adj };
        if tree.hops_from(0).contains(&usize::MAX) {
            return Err(Error::NotATree("disconnected".into()));
        }
        Ok(tree)
    }

    pub fn new(g: &WeightedCompleteGraph, h: &SpanningSubgraph) -> Result<Self> {
        let edges: Vec<_> = h.edges().into_iter().map(|(u, v)| (u, v, g.weight(u, v))).collect();
        Self::from_weighted_edges(h.n(), &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    /// Weighted distance from `s` to every vertex.
    pub fn distances_from(&self, s: usize) -> Vec<f64> {
        let mut dist = vec![f64::NAN; self.n()];
        dist[s] = 0.0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(w, x) in &self.adj[v] {
                if dist[w].is_nan() {
                    dist[w] = dist[v] + x;
                    stack.push(w);
                }
            }
        }
        dist
    }

    /// Edge count from `s` to every vertex (`usize::MAX` if unreachable).
    pub fn hops_from(&self, s: usize) -> Vec<usize> {
        let mut hops = vec![usize::MAX; self.n()];
        hops[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adj[v] {
                if hops[w] == usize::MAX {
                    hops[w] = hops[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        hops
    }

    /// Parent of each vertex when the tree hangs from `root` (`root` maps to itself).
    pub fn parents(&self, root: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.n()];
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        parent
    }

    pub fn total_weight(&self) -> f64 {
        self.adj.iter().flatten().map(|&(_, w)| w).sum::<f64>() / 2.0
    }
}

fn farthest<T: PartialOrd + Copy>(values: &[T]) -> (usize, T) {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    (best, values[best])
}

/// Weighted diameter by double sweep.
pub fn wdiam(tree: &TreeView) -> f64 {
    let (a, _) = farthest(&tree.distances_from(0));
    farthest(&tree.distances_from(a)).1
}

/// Unweighted diameter by double BFS.
pub fn diam(tree: &TreeView) -> usize {
    let (a, _) = farthest(&tree.hops_from(0));
    farthest(&tree.hops_from(a)).1
}

/// The unique path from `u` to `v`, both endpoints included.
pub fn tree_path(tree: &TreeView, u: usize, v: usize) -> Result<Vec<usize>> {
    let n = tree.n();
    if u >= n || v >= n {
        return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
    }
    if u == v {
        return Err(Error::Precondition("tree_path needs distinct endpoints".into()));
    }
    let parent = tree.parents(v);
    let mut path = vec![u];
    let mut cur = u;
    while cur != v {
        cur = parent[cur];
        path.push(cur);
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let single = TreeView::from_weighted_edges(2, &[(0, 1, 0.7)]).unwrap();
        assert_eq!(wdiam(&single), 0.7);
        let path = TreeView::from_weighted_edges(3, &[(0, 1, 0.2), (1, 2, 0.3)]).unwrap();
        assert_eq!(wdiam(&path), 0.5);
        assert_eq!(diam(&path), 2);
        let star =
            TreeView::new(&WeightedCompleteGraph::from_weights(5, vec![1.0; 10]).unwrap(), &SpanningSubgraph::star(5))
                .unwrap();
        assert_eq!(diam(&star), 2);
        assert_eq!(tree_path(&star, 0, 2).unwrap(), vec![0, 4, 2]);
        assert!(tree_path(&star, 1, 1).is_err());
        let p4 =
            TreeView::new(&WeightedCompleteGraph::from_weights(4, vec![1.0; 6]).unwrap(), &SpanningSubgraph::path(4))
                .unwrap();
        assert_eq!(tree_path(&p4, 0, 3).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(diam(&p4), 3);
    }

    #[test]
    fn rejects_non_trees() {
        assert!(TreeView::from_weighted_edges(3, &[(0, 1, 1.0)]).is_err());
        assert!(TreeView::from_weighted_edges(4, &[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0)]).is_err());
    }
}
