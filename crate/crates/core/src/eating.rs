//! Growing a region on which the current subgraph already agrees with the MST,
//! one vertex at a time.
//!
//! Each routine comes in two forms: a public one that takes a whole graph,
//! checks its preconditions and returns a trace, and a region-restricted one
//! that drives a shared [`Search`] so larger constructions can be concatenated.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{edge_index, WeightedCompleteGraph};
use crate::local_search::{Search, SequenceTrace};
use crate::mst::{mst_edges_of_subset, mst_wdiam_of_subset};
use crate::subgraph::SpanningSubgraph;

fn mask_of(n: usize, vertices: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut m = FixedBitSet::with_capacity(n);
    m.extend(vertices);
    m
}

fn induced_edge_count(h: &SpanningSubgraph, region: &[usize], mask: &FixedBitSet) -> usize {
    region.iter().map(|&v| h.neighbor_set(v).intersection(mask).count()).sum::<usize>() / 2
}

/// Assignment of the vertices of a tree to their nearest source.
#[derive(Clone, Debug, Serialize)]
pub struct VoronoiPartition {
    /// Sources in increasing label order.
    pub sources: Vec<usize>,
    /// Index into `sources` for each vertex of the graph; `usize::MAX` outside the tree.
    pub cell_of: Vec<usize>,
    /// Members of each cell, sorted.
    pub cells: Vec<Vec<usize>>,
    /// Weighted distance from each vertex to its source.
    pub distance: Vec<f64>,
}

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    source: usize,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed for a min-heap; ties go to the smaller source index
        other.dist.total_cmp(&self.dist).then(other.source.cmp(&self.source)).then(other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra on `H[members]`. Sources must lie in `members`.
pub fn voronoi_partition(
    g: &WeightedCompleteGraph,
    h: &SpanningSubgraph,
    members: &FixedBitSet,
    sources: &[usize],
) -> VoronoiPartition {
    let n = h.n();
    let mut sources = sources.to_vec();
    sources.sort_unstable();
    sources.dedup();
    let mut cell_of = vec![usize::MAX; n];
    let mut distance = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for (i, &s) in sources.iter().enumerate() {
        heap.push(Entry { dist: 0.0, source: i, vertex: s });
    }
    let mut settled = FixedBitSet::with_capacity(n);
    while let Some(Entry { dist, source, vertex }) = heap.pop() {
        if settled.put(vertex) {
            continue;
        }
        cell_of[vertex] = source;
        distance[vertex] = dist;
        for w in h.neighbor_set(vertex).intersection(members) {
            if !settled.contains(w) {
                let d = dist + g.weight(vertex, w);
                if d <= distance[w] {
                    distance[w] = d;
                    heap.push(Entry { dist: d, source, vertex: w });
                }
            }
        }
    }
    let mut cells = vec![Vec::new(); sources.len()];
    for v in members.ones() {
        if cell_of[v] != usize::MAX {
            cells[cell_of[v]].push(v);
        }
    }
    VoronoiPartition { sources, cell_of, cells, distance }
}

/// Whether replacing the path `path` (ending at `x`) by the MST of its vertex
/// set changes anything. The part of the path inside the cell is an MST path,
/// so only chords at `x` can beat the heaviest edge between their endpoints.
fn replacement_changes(g: &WeightedCompleteGraph, x: usize, path: &[usize]) -> bool {
    let mut heaviest = usize::MAX;
    let mut prev = x;
    for (j, &v) in path.iter().rev().skip(1).enumerate() {
        let e = edge_index(prev, v);
        if heaviest == usize::MAX || g.lighter(heaviest, e) {
            heaviest = e;
        }
        if j >= 1 && g.lighter(edge_index(x, v), heaviest) {
            return true;
        }
        prev = v;
    }
    false
}

/// Absorbs `x`, a leaf of the tree `H[cell ∪ {x}]`, assuming `H[cell]` is the
/// MST of `G[cell]`. Visits the targets in `cell` nearest first (by distance
/// from `x` in the starting tree, ties by label) and applies the operator to
/// the vertices of the current path from `x` to each target. Steps that would
/// leave the subgraph unchanged are skipped.
pub(crate) fn absorb_leaf_in(search: &mut Search<'_>, cell: &[usize], x: usize) -> Result<()> {
    let n = search.graph().n();
    let mut region = mask_of(n, cell.iter().copied());
    region.insert(x);

    // parent pointers of H[cell ∪ {x}] hanging from x, with distances from x
    let g = search.graph();
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![0.0; n];
    parent[x] = x;
    let mut queue = VecDeque::from([x]);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for w in search.current().neighbor_set(v).intersection(&region) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                dist[w] = dist[v] + g.weight(v, w);
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    let h = search.current();
    if h.neighbor_set(x).intersection(&region).count() != 1 {
        return Err(Error::Precondition(format!("vertex {} is not a leaf of the region", x + 1)));
    }
    let edges = region.ones().map(|v| h.neighbor_set(v).intersection(&region).count()).sum::<usize>() / 2;
    if reached != cell.len() + 1 || edges != cell.len() {
        return Err(Error::Precondition("region does not induce a tree".into()));
    }

    let mut targets = cell.to_vec();
    targets.sort_unstable_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
    let mut path = Vec::new();
    for &target in &targets {
        path.clear();
        let mut cur = target;
        while cur != x {
            path.push(cur);
            cur = parent[cur];
        }
        path.push(x);
        if !replacement_changes(g, x, &path) {
            continue;
        }
        search.apply_unsorted(&mut path);

        // only edges inside the path changed; rehang its vertices from x
        let on_path = mask_of(n, path.iter().copied());
        let mut queue = VecDeque::from([x]);
        let mut seen = mask_of(n, [x]);
        while let Some(v) = queue.pop_front() {
            for w in search.current().neighbor_set(v).intersection(&on_path) {
                if !seen.put(w) {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(())
}

/// Removes the non-MST edges of `H[region]`, shortest MST detour first.
/// Requires `MST(G[region]) ⊆ H[region]`.
pub(crate) fn remove_cycles_in(search: &mut Search<'_>, region: &[usize]) -> Result<()> {
    let g = search.graph();
    let n = g.n();
    let mask = mask_of(n, region.iter().copied());
    if induced_edge_count(search.current(), region, &mask) + 1 == region.len() {
        // connected with |R| - 1 edges: already a tree
        if search.current().induced_connected(&mask) {
            return Ok(());
        }
    }
    let tree_edges = mst_edges_of_subset(g, region);
    let mut tree = SpanningSubgraph::empty(n);
    for &(a, b) in &tree_edges {
        if !search.current().contains(a, b) {
            return Err(Error::Precondition(format!("MST edge {}-{} missing from the subgraph", a + 1, b + 1)));
        }
        tree.insert(a, b);
    }
    let root = region[0];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in tree.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let hops = |mut a: usize, mut b: usize| {
        let mut len = 0;
        while depth[a] > depth[b] {
            a = parent[a];
            len += 1;
        }
        while depth[b] > depth[a] {
            b = parent[b];
            len += 1;
        }
        while a != b {
            a = parent[a];
            b = parent[b];
            len += 2;
        }
        len
    };
    let mut chords: Vec<(usize, usize, usize, usize)> = Vec::new();
    for &a in region {
        for b in search.current().neighbor_set(a).intersection(&mask) {
            if a < b && !tree.contains(a, b) {
                chords.push((hops(a, b), edge_index(a, b), a, b));
            }
        }
    }
    // Removing one chord never changes another chord's tree path, so the
    // shortest-first order can be fixed up front.
    chords.sort_unstable();
    let mut path = Vec::new();
    for &(_, _, a, b) in &chords {
        path.clear();
        let (mut x, mut y) = (a, b);
        let mut tail = Vec::new();
        while depth[x] > depth[y] {
            path.push(x);
            x = parent[x];
        }
        while depth[y] > depth[x] {
            tail.push(y);
            y = parent[y];
        }
        while x != y {
            path.push(x);
            tail.push(y);
            x = parent[x];
            y = parent[y];
        }
        path.push(x);
        path.extend(tail);
        search.apply_unsorted(&mut path);
        debug_assert!(!search.current().contains(a, b));
    }
    Ok(())
}

/// Absorbs `t` into `region ∖ {t}`, on which the subgraph must equal the MST.
pub(crate) fn absorb_vertex_in(search: &mut Search<'_>, region: &[usize], t: usize) -> Result<()> {
    let g = search.graph();
    let n = g.n();
    let mut rest = mask_of(n, region.iter().copied());
    rest.set(t, false);
    let sources: Vec<usize> = search.current().neighbor_set(t).intersection(&rest).collect();
    if sources.is_empty() {
        return Err(Error::Precondition(format!("vertex {} has no neighbor in the region", t + 1)));
    }
    let partition = voronoi_partition(g, search.current(), &rest, &sources);
    for cell in &partition.cells {
        absorb_leaf_in(search, cell, t)?;
    }
    remove_cycles_in(search, region)
}

/// Absorbs the vertices of `order` one at a time into the region `start`.
pub(crate) fn eat_in(search: &mut Search<'_>, start: &[usize], order: &[usize]) -> Result<()> {
    let n = search.graph().n();
    let mut region = start.to_vec();
    let mut mask = mask_of(n, start.iter().copied());
    for &x in order {
        if x >= n || mask.contains(x) {
            return Err(Error::Precondition(format!("increment {} is not a new vertex", x + 1)));
        }
        if search.current().neighbor_set(x).intersection(&mask).next().is_none() {
            return Err(Error::Precondition(format!("vertex {} is not adjacent to the region", x + 1)));
        }
        region.push(x);
        mask.insert(x);
        absorb_vertex_in(search, &region, x)?;
    }
    Ok(())
}

fn check_mst_on(g: &WeightedCompleteGraph, h: &SpanningSubgraph, region: &[usize]) -> Result<()> {
    let mask = mask_of(h.n(), region.iter().copied());
    let tree = mst_edges_of_subset(g, region);
    if induced_edge_count(h, region, &mask) != tree.len() || !tree.iter().all(|&(a, b)| h.contains(a, b)) {
        return Err(Error::Precondition("subgraph does not agree with the MST on the region".into()));
    }
    Ok(())
}

fn others(n: usize, x: usize) -> Vec<usize> {
    (0..n).filter(|&v| v != x).collect()
}

/// Absorbs the leaf `x` of the tree `h`, where `h` minus `x` is the MST of `G` minus `x`.
pub fn absorb_leaf(g: &WeightedCompleteGraph, h: &SpanningSubgraph, x: usize) -> Result<SequenceTrace> {
    if x >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: x, n: g.n() });
    }
    if !h.is_tree() {
        return Err(Error::NotATree("absorb_leaf needs a tree".into()));
    }
    let rest = others(g.n(), x);
    check_mst_on(g, h, &rest)?;
    let mut search = Search::new(g, h.clone())?;
    absorb_leaf_in(&mut search, &rest, x)?;
    Ok(search.finish())
}

/// Absorbs `t` into the rest of the graph, on which `h` must agree with the MST.
pub fn absorb_vertex(g: &WeightedCompleteGraph, h: &SpanningSubgraph, t: usize) -> Result<SequenceTrace> {
    if t >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: t, n: g.n() });
    }
    check_mst_on(g, h, &others(g.n(), t))?;
    let mut search = Search::new(g, h.clone())?;
    absorb_vertex_in(&mut search, &(0..g.n()).collect::<Vec<_>>(), t)?;
    Ok(search.finish())
}

/// Deletes every non-MST edge of `h`, which must contain the MST.
pub fn remove_cycles(g: &WeightedCompleteGraph, h: &SpanningSubgraph) -> Result<SequenceTrace> {
    if !crate::mst::mst(g).is_subgraph_of(h) {
        return Err(Error::Precondition("subgraph does not contain the MST".into()));
    }
    let mut search = Search::new(g, h.clone())?;
    remove_cycles_in(&mut search, &(0..g.n()).collect::<Vec<_>>())?;
    Ok(search.finish())
}

/// Runs the absorption for each vertex of `increments` in turn, starting from
/// the region `start`, on which `h` must agree with the MST.
pub fn eat(
    g: &WeightedCompleteGraph,
    h: &SpanningSubgraph,
    start: &[usize],
    increments: &[usize],
) -> Result<SequenceTrace> {
    let mut start = start.to_vec();
    start.sort_unstable();
    start.dedup();
    if start.is_empty() {
        return Err(Error::Precondition("empty starting region".into()));
    }
    if start.len() + increments.len() != g.n() {
        return Err(Error::Precondition("increments must cover the remaining vertices exactly".into()));
    }
    check_mst_on(g, h, &start)?;
    if !h.induced_connected(&mask_of(h.n(), start.iter().copied())) {
        return Err(Error::Disconnected);
    }
    let mut search = Search::new(g, h.clone())?;
    eat_in(&mut search, &start, increments)?;
    Ok(search.finish())
}

/// Vertices outside `start` in breadth-first order from it, ties by label.
pub fn bfs_increment_order(h: &SpanningSubgraph, start: &[usize]) -> Result<Vec<usize>> {
    if start.is_empty() {
        return Err(Error::Precondition("empty starting region".into()));
    }
    h.bfs_from(start)
}

/// `ρ* + max_i wdiam(MST(G[U_i]))` over the regions visited by [`eat`].
pub fn eat_bound(g: &WeightedCompleteGraph, start: &[usize], increments: &[usize]) -> f64 {
    let mut region = start.to_vec();
    let mut worst = mst_wdiam_of_subset(g, &region);
    for &x in increments {
        region.push(x);
        worst = worst.max(mst_wdiam_of_subset(g, &region));
    }
    g.weight_cap() + worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Distribution;
    use crate::local_search::max_weight;
    use crate::mst::mst;

    fn triangle() -> WeightedCompleteGraph {
        WeightedCompleteGraph::from_weights(3, vec![0.1, 0.5, 0.3]).unwrap()
    }

    #[test]
    fn remove_cycles_on_triangle() {
        let g = triangle();
        let t = remove_cycles(&g, &SpanningSubgraph::complete(3)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.steps[0].set, vec![0, 1, 2]);
        assert!((t.wt_max() - 0.9).abs() < 1e-15);
        assert!(t.reached_mst);
        assert!(remove_cycles(&g, &mst(&g)).unwrap().is_empty());
    }

    #[test]
    fn single_vertex_leaf() {
        let g = WeightedCompleteGraph::from_weights(2, vec![0.4]).unwrap();
        // the only step would replace the edge by itself
        let t = absorb_leaf(&g, &SpanningSubgraph::path(2), 1).unwrap();
        assert!(t.is_empty());
        assert!(t.reached_mst);
    }

    #[test]
    fn leaf_absorption_bound() {
        for seed in 0..20 {
            let g = WeightedCompleteGraph::sample(12, &Distribution::UNIFORM, seed).unwrap();
            let rest: Vec<usize> = (0..11).collect();
            let mut h = SpanningSubgraph::from_pairs(12, mst_edges_of_subset(&g, &rest)).unwrap();
            h.insert(11, (seed as usize * 7) % 11);
            let t = absorb_leaf(&g, &h, 11).unwrap();
            assert!(t.reached_mst);
            assert!(t.wt_max() <= 1.0 + mst_wdiam_of_subset(&g, &rest));
        }
    }

    #[test]
    fn voronoi_single_source() {
        let g = WeightedCompleteGraph::sample(8, &Distribution::UNIFORM, 5).unwrap();
        let tree = mst(&g);
        let all = mask_of(8, 0..8);
        let p = voronoi_partition(&g, &tree, &all, &[3]);
        assert_eq!(p.cells, vec![(0..8).collect::<Vec<_>>()]);
    }

    #[test]
    fn eat_from_everything_is_empty() {
        let g = WeightedCompleteGraph::sample(6, &Distribution::UNIFORM, 1).unwrap();
        let t = eat(&g, &mst(&g), &[0, 1, 2, 3, 4, 5], &[]).unwrap();
        assert!(t.is_empty() && t.reached_mst);
        assert_eq!(max_weight(&t.steps), 0.0);
    }

    #[test]
    fn bfs_order_on_path() {
        let order = bfs_increment_order(&SpanningSubgraph::path(5), &[2]).unwrap();
        assert_eq!(order, vec![1, 3, 0, 4]);
        assert!(bfs_increment_order(&SpanningSubgraph::empty(3), &[0]).is_err());
    }
}
