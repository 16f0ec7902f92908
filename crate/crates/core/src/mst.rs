//! Minimum spanning trees, Kruskal traces and the random-graph coupling.
//!
//! Kruskal's algorithm run on `K_n` passes through the forests `F_i` (accepted
//! edges among the `i` lightest) and the graphs `G_i` (all of the `i` lightest
//! edges). Thresholding the weights at `p` gives the Erdős–Rényi graph
//! `G(n, p)` and its minimum spanning forest `F(n, p)`, which is simply the set
//! of MST edges of weight at most `p`.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{edge_count, edge_endpoints, edge_index, WeightedCompleteGraph};
use crate::subgraph::SpanningSubgraph;
use crate::tree::{wdiam, TreeView};

/// MST edges of the graph induced on `vertices`, by dense Prim in `O(k^2)`.
pub fn mst_edges_of_subset(g: &WeightedCompleteGraph, vertices: &[usize]) -> Vec<(usize, usize)> {
    let k = vertices.len();
    if k < 2 {
        return Vec::new();
    }
    let mut done = vec![false; k];
    let mut best_w = vec![f64::INFINITY; k];
    let mut best_idx = vec![usize::MAX; k];
    let mut best_from = vec![0usize; k];
    let mut out = Vec::with_capacity(k - 1);
    let mut cur = 0;
    done[0] = true;
    for _ in 1..k {
        let a = vertices[cur];
        let mut pick = usize::MAX;
        for j in 0..k {
            if done[j] {
                continue;
            }
            let idx = edge_index(a, vertices[j]);
            let w = g.weight_at(idx);
            if (w, idx) < (best_w[j], best_idx[j]) {
                best_w[j] = w;
                best_idx[j] = idx;
                best_from[j] = a;
            }
            if pick == usize::MAX || (best_w[j], best_idx[j]) < (best_w[pick], best_idx[pick]) {
                pick = j;
            }
        }
        done[pick] = true;
        out.push((best_from[pick], vertices[pick]));
        cur = pick;
    }
    out
}

/// The unique minimum spanning tree under the `(weight, index)` order.
pub fn mst(g: &WeightedCompleteGraph) -> SpanningSubgraph {
    let all: Vec<usize> = (0..g.n()).collect();
    SpanningSubgraph::from_pairs(g.n(), mst_edges_of_subset(g, &all)).expect("Prim output is in range")
}

/// Weighted diameter of the MST of the graph induced on `vertices`.
pub fn mst_wdiam_of_subset(g: &WeightedCompleteGraph, vertices: &[usize]) -> f64 {
    if vertices.len() < 2 {
        return 0.0;
    }
    let local: std::collections::HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<_> =
        mst_edges_of_subset(g, vertices).into_iter().map(|(u, v)| (local[&u], local[&v], g.weight(u, v))).collect();
    wdiam(&TreeView::from_weighted_edges(vertices.len(), &edges).expect("Prim returns a tree"))
}

/// The MST of a growing induced subgraph.
///
/// Adding a vertex `x` to `U` only needs the old tree plus the edges from `x`
/// into `U`, so each insertion costs `O(|U| log |U|)` instead of a fresh Prim run.
#[derive(Clone, Debug)]
pub struct IncrementalMst<'g> {
    g: &'g WeightedCompleteGraph,
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
    local: Vec<usize>,
}

impl<'g> IncrementalMst<'g> {
    pub fn new(g: &'g WeightedCompleteGraph, start: &[usize]) -> Self {
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in start.iter().enumerate() {
            local[v] = i;
        }
        IncrementalMst { g, vertices: start.to_vec(), edges: mst_edges_of_subset(g, start), local }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn insert(&mut self, x: usize) {
        let g = self.g;
        let mut candidates: Vec<usize> = self.edges.iter().map(|&(a, b)| edge_index(a, b)).collect();
        candidates.extend(self.vertices.iter().map(|&u| edge_index(u, x)));
        candidates.sort_unstable_by(|&a, &b| g.cmp_edges(a, b));
        self.local[x] = self.vertices.len();
        self.vertices.push(x);
        let mut dsu = DisjointSets::new(self.vertices.len());
        self.edges.clear();
        for idx in candidates {
            let (a, b) = edge_endpoints(idx);
            if dsu.union(self.local[a], self.local[b]) {
                self.edges.push((a, b));
            }
        }
    }

    pub fn wdiam(&self) -> f64 {
        if self.vertices.len() < 2 {
            return 0.0;
        }
        let edges: Vec<_> =
            self.edges.iter().map(|&(a, b)| (self.local[a], self.local[b], self.g.weight(a, b))).collect();
        wdiam(&TreeView::from_weighted_edges(self.vertices.len(), &edges).expect("spanning tree of the region"))
    }
}

/// Every edge of `K_n`, processed in the strict edge order, with Kruskal's verdicts.
#[derive(Clone, Debug)]
pub struct KruskalTrace {
    n: usize,
    sorted: Vec<u32>,
    accepted: FixedBitSet,
}

impl KruskalTrace {
    pub fn new(g: &WeightedCompleteGraph) -> Self {
        let n = g.n();
        let mut sorted: Vec<u32> = (0..edge_count(n) as u32).collect();
        sorted.sort_unstable_by(|&a, &b| g.cmp_edges(a as usize, b as usize));
        let mut accepted = FixedBitSet::with_capacity(sorted.len());
        let mut dsu = DisjointSets::new(n);
        for (step, &idx) in sorted.iter().enumerate() {
            let (u, v) = edge_endpoints(idx as usize);
            if dsu.union(u, v) {
                accepted.insert(step);
            }
        }
        KruskalTrace { n, sorted, accepted }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of steps, `n (n - 1) / 2`.
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Linear edge index processed at `step` (0-based).
    pub fn edge_at(&self, step: usize) -> usize {
        self.sorted[step] as usize
    }

    pub fn accepted_at(&self, step: usize) -> bool {
        self.accepted.contains(step)
    }

    pub fn accepted_count(&self) -> usize {
        self.accepted.count_ones(..)
    }

    pub fn sorted_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.sorted.iter().map(|&e| e as usize)
    }

    /// `F_i`: the accepted edges among the first `i` processed.
    pub fn forest_at(&self, i: usize) -> SpanningSubgraph {
        let picked = (0..i).filter(|&s| self.accepted.contains(s)).map(|s| self.edge_at(s));
        SpanningSubgraph::from_indices(self.n, picked).expect("trace indices are in range")
    }

    /// `G_i`: the first `i` processed edges.
    pub fn graph_at(&self, i: usize) -> SpanningSubgraph {
        SpanningSubgraph::from_indices(self.n, self.sorted_edges().take(i)).expect("trace indices are in range")
    }

    /// Component labels (smallest member) of `F_i` for every `i`, by replaying the acceptances.
    pub fn component_labels_at(&self, i: usize) -> Vec<usize> {
        let mut dsu = DisjointSets::new(self.n);
        for s in (0..i).filter(|&s| self.accepted.contains(s)) {
            let (u, v) = edge_endpoints(self.edge_at(s));
            dsu.union(u, v);
        }
        dsu.canonical_labels()
    }

    pub fn final_tree(&self) -> SpanningSubgraph {
        self.forest_at(self.len())
    }

    /// Replays the trace and checks at every step that `F_i` and `G_i` have the
    /// same components and that an edge is accepted exactly when it joins two of them.
    /// Returns the first failing step.
    pub fn check_coupling(&self) -> std::result::Result<(), usize> {
        let mut forest = DisjointSets::new(self.n);
        let mut graph = DisjointSets::new(self.n);
        for step in 0..self.len() {
            let (u, v) = edge_endpoints(self.edge_at(step));
            let joins = !forest.same(u, v);
            if joins != self.accepted_at(step) {
                return Err(step);
            }
            if joins {
                forest.union(u, v);
            }
            graph.union(u, v);
            if forest.canonical_labels() != graph.canonical_labels() {
                return Err(step);
            }
        }
        if self.accepted_count() + 1 != self.n {
            return Err(self.len());
        }
        Ok(())
    }
}

/// Component structure of `F(n, p)` together with the quantities that bound
/// the weighted diameter of the MST.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdSnapshot {
    pub p: f64,
    /// Number of edges of `K_n` with weight at most `p`.
    pub m_p: usize,
    pub components: Vec<Vec<usize>>,
    /// Largest component; ties go to the one holding the smallest vertex.
    pub t_max: Vec<usize>,
    pub runner_up_size: usize,
    /// Heaviest MST edge.
    pub w_n: f64,
    /// Longest MST path, in edges, with exactly one vertex in `t_max` and the
    /// rest in a single branch hanging off it.
    pub l_np: usize,
}

impl ThresholdSnapshot {
    /// The right-hand side `p (|t_max| - 1) + 2 W_n L_np`.
    pub fn mst_upper_rhs(&self) -> f64 {
        self.p * (self.t_max.len() as f64 - 1.0) + 2.0 * self.w_n * self.l_np as f64
    }
}

/// Snapshot at threshold `p` computed from the graph and its MST.
pub fn snapshot_from_mst(g: &WeightedCompleteGraph, tree: &SpanningSubgraph, p: f64) -> ThresholdSnapshot {
    let n = g.n();
    let m_p = g.weights().iter().filter(|&&w| w <= p).count();
    let tree_edges = tree.edges();
    let light: Vec<(usize, usize)> = tree_edges.iter().copied().filter(|&(u, v)| g.weight(u, v) <= p).collect();
    let forest = SpanningSubgraph::from_pairs(n, light).expect("tree edges are in range");
    let components = forest.components();
    let mut order: Vec<usize> = (0..components.len()).collect();
    // components are listed by smallest member, so a stable sort keeps the tie-break
    order.sort_by_key(|&i| std::cmp::Reverse(components[i].len()));
    let t_max = components[order[0]].clone();
    let runner_up_size = order.get(1).map_or(0, |&i| components[i].len());
    let w_n = tree_edges.iter().map(|&(u, v)| g.weight(u, v)).fold(0.0, f64::max);

    // Multi-source BFS from t_max along the MST gives each outside vertex its
    // edge distance to the attachment point of its branch.
    let mut hops = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for &v in &t_max {
        hops[v] = 0;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for w in tree.neighbors(v) {
            if hops[w] == usize::MAX {
                hops[w] = hops[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let l_np = hops.into_iter().filter(|&h| h != usize::MAX).max().unwrap_or(0);
    ThresholdSnapshot { p, m_p, components, t_max, runner_up_size, w_n, l_np }
}

/// Snapshot at threshold `p` from a Kruskal trace: `F(n, p)` is the accepted
/// prefix of edges with weight at most `p`.
pub fn snapshot_at(g: &WeightedCompleteGraph, trace: &KruskalTrace, p: f64) -> ThresholdSnapshot {
    snapshot_from_mst(g, &trace.final_tree(), p)
}

/// Threshold `1/n + 1/n^{11/10}` at which the MST diameter bound is evaluated.
pub fn supercritical_threshold(n: usize) -> f64 {
    let n = n as f64;
    1.0 / n + n.powf(-1.1)
}

/// Survival probability of a Poisson(`c`) branching process: the largest root
/// of `exp(-c x) = 1 - x`, found by bisection. Zero for `c <= 1`.
pub fn alpha(c: f64) -> f64 {
    if !(c > 1.0) {
        return 0.0;
    }
    let g = |x: f64| -(-c * x).exp_m1() - x;
    // g > 0 between 0 and the root; (c - 1) / c^2 sits below the root for every c > 1.
    let mut lo = (c - 1.0) / (c * c);
    let mut hi = 1.0;
    while g(lo) <= 0.0 {
        lo /= 2.0;
    }
    while hi - lo > 1e-15 * hi.max(1e-300) && hi - lo > 0.0 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Upper bound `exp(n exp(-n p / 2)) - 1` on the probability that `G(n, p)` is disconnected.
pub fn connectivity_probability_bound(n: usize, p: f64) -> f64 {
    let n = n as f64;
    (n * (-n * p / 2.0).exp()).exp_m1()
}

/// Fraction of `trials` samples of `G(n, p)` that are disconnected.
pub fn disconnection_frequency(n: usize, p: f64, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disconnected = 0;
    for _ in 0..trials {
        let mut dsu = DisjointSets::new(n);
        for v in 1..n {
            for u in 0..v {
                if rng.gen::<f64>() < p {
                    dsu.union(u, v);
                }
            }
        }
        if dsu.set_count() > 1 {
            disconnected += 1;
        }
    }
    disconnected as f64 / trials.max(1) as f64
}

/// Relative slack allowed when comparing sums of floating-point weights.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// `a <= b` up to rounding in sums of at most a few thousand terms.
pub fn le_tol(a: f64, b: f64) -> bool {
    a <= b + SUM_TOLERANCE * b.abs().max(1.0)
}

/// Outcome of lowering weights on a subtree and comparing MST diameters.
#[derive(Clone, Debug, Serialize)]
pub struct ReducedMstReport {
    /// Weighted diameter of the MST after the reduction.
    pub lhs: f64,
    /// Reduced weight of the subtree plus `|V(T)|` times the original MST diameter.
    pub rhs_general: f64,
    /// Reduced weight of the subtree plus twice the original MST diameter,
    /// present when the subtree lies inside the new MST.
    pub rhs_subtree_case: Option<f64>,
    pub holds: bool,
}

/// Lowers the weights of the subtree `tree_edges` to `reduced` (pairs of linear
/// index and new weight) and checks both diameter bounds.
pub fn check_reduced_mst_bound(
    g: &WeightedCompleteGraph,
    tree_edges: &[(usize, usize)],
    reduced: &[(usize, f64)],
) -> Result<ReducedMstReport> {
    let n = g.n();
    let mut vertices: Vec<usize> = tree_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    if tree_edges.is_empty() || vertices.len() != tree_edges.len() + 1 {
        return Err(Error::NotATree(format!("{} edges on {} vertices", tree_edges.len(), vertices.len())));
    }
    let t = SpanningSubgraph::from_pairs(n, tree_edges.iter().copied())?;
    if t.edge_count() != tree_edges.len() || t.reach_from(vertices[0]).count_ones(..) != vertices.len() {
        return Err(Error::NotATree("edges do not form a connected subtree".into()));
    }
    for &(idx, w) in reduced {
        if idx >= edge_count(n) || !t.contains_index(idx) {
            return Err(Error::Precondition(format!("edge index {idx} is not on the subtree")));
        }
        if w > g.weight_at(idx) {
            return Err(Error::Precondition(format!("weight raised on edge index {idx}")));
        }
    }
    let reduced_graph = g.with_weights_replaced(reduced)?;
    let new_mst = mst(&reduced_graph);
    let lhs = wdiam(&TreeView::new(&reduced_graph, &new_mst)?);
    let base = wdiam(&TreeView::new(g, &mst(g))?);
    let t_weight: f64 = tree_edges.iter().map(|&(u, v)| reduced_graph.weight(u, v)).sum();
    let rhs_general = t_weight + vertices.len() as f64 * base;
    let rhs_subtree_case = t.is_subgraph_of(&new_mst).then_some(t_weight + 2.0 * base);
    let holds = le_tol(lhs, rhs_general) && rhs_subtree_case.is_none_or(|r| le_tol(lhs, r));
    Ok(ReducedMstReport { lhs, rhs_general, rhs_subtree_case, holds })
}
