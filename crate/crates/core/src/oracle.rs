//! Exact cost on tiny instances by searching the space of spanning subgraphs.
//!
//! A state is an edge set of `K_n`, encoded as a bitmask over linear edge
//! indices. From each state there is one move per vertex subset `S` with
//! `H[S]` connected; it costs `w(H[S])`. The cost of `(G, H)` is the smallest
//! possible maximum move cost along a path to the MST state.

use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{edge_count, edge_index, WeightedCompleteGraph};
use crate::mst::{mst, mst_edges_of_subset};
use crate::subgraph::SpanningSubgraph;

/// Largest `n` searched by default. `K_6` has about 26 000 connected spanning subgraphs.
pub const DEFAULT_LIMIT: usize = 6;
/// Largest `n` accepted with `force`. `K_7` has about 1.9 million connected
/// spanning subgraphs; the search then needs on the order of 200 MB.
pub const FORCED_LIMIT: usize = 7;

struct Moves {
    n: usize,
    /// For each subset with at least two vertices: its vertex mask, the edges it
    /// induces in `K_n` and the MST of `G[S]`, both as edge masks.
    subsets: Vec<(u32, u64, u64)>,
    weights: Vec<f64>,
    target: u64,
}

fn mask_of(h: &SpanningSubgraph) -> u64 {
    h.edge_indices().into_iter().fold(0, |m, e| m | 1 << e)
}

impl Moves {
    fn new(g: &WeightedCompleteGraph) -> Self {
        let n = g.n();
        let mut subsets = Vec::new();
        for s in 0u32..1 << n {
            if s.count_ones() < 2 {
                continue;
            }
            let vertices: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            let mut induced = 0u64;
            for (i, &a) in vertices.iter().enumerate() {
                for &b in &vertices[i + 1..] {
                    induced |= 1 << edge_index(a, b);
                }
            }
            let tree = mst_edges_of_subset(g, &vertices).into_iter().fold(0u64, |m, (a, b)| m | 1 << edge_index(a, b));
            subsets.push((s, induced, tree));
        }
        Moves { n, subsets, weights: g.weights().to_vec(), target: mask_of(&mst(g)) }
    }

    fn weight(&self, mut edges: u64) -> f64 {
        let mut total = 0.0;
        while edges != 0 {
            total += self.weights[edges.trailing_zeros() as usize];
            edges &= edges - 1;
        }
        total
    }

    /// Whether the edges `edges` connect the vertex set `s`.
    fn connects(&self, s: u32, edges: u64) -> bool {
        let mut adj = [0u32; 8];
        let mut e = edges;
        while e != 0 {
            let idx = e.trailing_zeros() as usize;
            let (a, b) = crate::graph::edge_endpoints(idx);
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
            e &= e - 1;
        }
        let mut seen = 1u32 << s.trailing_zeros();
        loop {
            let mut next = seen;
            let mut f = seen;
            while f != 0 {
                next |= adj[f.trailing_zeros() as usize];
                f &= f - 1;
            }
            next &= s;
            if next == seen {
                return seen == s;
            }
            seen = next;
        }
    }

    /// Every non-trivial move from `state`: `(successor, cost)`.
    fn successors(&self, state: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.subsets.iter().filter_map(move |&(s, induced, tree)| {
            let inside = state & induced;
            let next = (state & !induced) | tree;
            (next != state && self.connects(s, inside)).then(|| (next, self.weight(inside)))
        })
    }
}

fn prepare(g: &WeightedCompleteGraph, h0: &SpanningSubgraph, force: bool) -> Result<(Moves, u64)> {
    let n = g.n();
    let limit = if force { FORCED_LIMIT } else { DEFAULT_LIMIT };
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    if h0.n() != n {
        return Err(Error::InvalidParameter(format!("subgraph on {} vertices, graph on {n}", h0.n())));
    }
    if !h0.is_connected() {
        return Err(Error::Disconnected);
    }
    debug_assert!(edge_count(n) <= 64);
    let moves = Moves::new(g);
    debug_assert_eq!(moves.n, n);
    Ok((moves, mask_of(h0)))
}

#[derive(PartialEq)]
struct Frontier(f64, u64);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `cost(G, H0)` by best-first bottleneck search, for `n <= 6`.
pub fn exact_cost(g: &WeightedCompleteGraph, h0: &SpanningSubgraph) -> Result<f64> {
    exact_cost_with(g, h0, false)
}

/// As [`exact_cost`]; `force` raises the size limit to 7.
pub fn exact_cost_with(g: &WeightedCompleteGraph, h0: &SpanningSubgraph, force: bool) -> Result<f64> {
    let (moves, start) = prepare(g, h0, force)?;
    let mut best: HashMap<u64, f64> = HashMap::from([(start, 0.0)]);
    let mut heap = BinaryHeap::from([Frontier(0.0, start)]);
    while let Some(Frontier(cost, state)) = heap.pop() {
        if state == moves.target {
            return Ok(cost);
        }
        if best.get(&state).is_some_and(|&b| b < cost) {
            continue;
        }
        for (next, w) in moves.successors(state) {
            let c = cost.max(w);
            if best.get(&next).is_none_or(|&b| c < b) {
                best.insert(next, c);
                heap.push(Frontier(c, next));
            }
        }
    }
    unreachable!("the one-step replacement on all vertices always reaches the MST")
}

/// Whether the MST state is reachable using only moves of cost at most `rho`.
pub fn reachable_under(g: &WeightedCompleteGraph, h0: &SpanningSubgraph, rho: f64) -> Result<bool> {
    let (moves, start) = prepare(g, h0, false)?;
    Ok(reachable(&moves, start, rho))
}

fn reachable(moves: &Moves, start: u64, rho: f64) -> bool {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        if state == moves.target {
            return true;
        }
        for (next, w) in moves.successors(state) {
            if w <= rho && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// `cost(G, H0)` by binary search over the move costs seen from `H0`, using
/// [`reachable_under`] as the test. Slower than [`exact_cost`]; kept as a cross-check.
pub fn exact_cost_by_threshold(g: &WeightedCompleteGraph, h0: &SpanningSubgraph) -> Result<f64> {
    let (moves, start) = prepare(g, h0, false)?;
    if start == moves.target {
        return Ok(0.0);
    }
    let mut costs = Vec::new();
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        for (next, w) in moves.successors(state) {
            costs.push(w);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    costs.sort_by(f64::total_cmp);
    costs.dedup();
    // smallest candidate that suffices; the largest always does
    let (mut lo, mut hi) = (0, costs.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if reachable(&moves, start, costs[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(costs[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedCompleteGraph {
        WeightedCompleteGraph::from_weights(3, vec![0.1, 0.5, 0.3]).unwrap()
    }

    #[test]
    fn triangle_cost() {
        let g = triangle();
        let k3 = SpanningSubgraph::complete(3);
        let c = exact_cost(&g, &k3).unwrap();
        assert!((c - 0.9).abs() < 1e-15);
        assert_eq!(exact_cost(&g, &mst(&g)).unwrap(), 0.0);
        assert!(!reachable_under(&g, &k3, 0.89).unwrap());
        assert!(reachable_under(&g, &k3, c).unwrap());
        assert_eq!(exact_cost_by_threshold(&g, &k3).unwrap(), c);
    }

    #[test]
    fn refuses_large_or_disconnected() {
        let g = WeightedCompleteGraph::from_weights(7, vec![1.0; 21]).unwrap();
        assert!(matches!(exact_cost(&g, &SpanningSubgraph::path(7)), Err(Error::TooLarge { n: 7, limit: 6 })));
        let t = triangle();
        assert!(matches!(exact_cost(&t, &SpanningSubgraph::empty(3)), Err(Error::Disconnected)));
    }
}
