//! Spanning subgraphs of `K_n` and the start graphs used by the experiments.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{edge_count, edge_endpoints, edge_index, WeightedCompleteGraph};

/// An edge set on the vertex set `0..n`, stored as one adjacency bitset per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct SpanningSubgraph {
    adj: Vec<FixedBitSet>,
    edges: usize,
}

impl SpanningSubgraph {
    pub fn empty(n: usize) -> Self {
        SpanningSubgraph { adj: vec![FixedBitSet::with_capacity(n); n], edges: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for (v, row) in adj.iter_mut().enumerate() {
            row.insert_range(..);
            row.set(v, false);
        }
        SpanningSubgraph { adj, edges: edge_count(n) }
    }

    pub fn path(n: usize) -> Self {
        Self::from_pairs(n, (1..n).map(|v| (v - 1, v))).expect("path edges are in range")
    }

    /// Star with center `n - 1`.
    pub fn star(n: usize) -> Self {
        Self::from_pairs(n, (0..n.saturating_sub(1)).map(|v| (v, n - 1))).expect("star edges are in range")
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut h = Self::empty(n);
        for (u, v) in pairs {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::MalformedEdgeList(format!("loop at vertex {}", u + 1)));
            }
            h.insert(u, v);
        }
        Ok(h)
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut h = Self::empty(n);
        for idx in indices {
            if idx >= edge_count(n) {
                return Err(Error::InvalidParameter(format!("edge index {idx} out of range for n = {n}")));
            }
            let (u, v) = edge_endpoints(idx);
            h.insert(u, v);
        }
        Ok(h)
    }

    /// Parses `u v` lines with 1-based labels and rejects disconnected inputs.
    pub fn parse_edge_list(n: usize, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[u, v]) if u >= 1 && v >= 1 && u <= n && v <= n && u != v => pairs.push((u - 1, v - 1)),
                _ => {
                    return Err(Error::MalformedEdgeList(format!(
                        "line {}: expected two distinct labels in 1..={n}, got {line:?}",
                        lineno + 1
                    )))
                }
            }
        }
        let h = Self::from_pairs(n, pairs)?;
        if !h.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(h)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn contains_index(&self, index: usize) -> bool {
        let (u, v) = edge_endpoints(index);
        self.contains(u, v)
    }

    /// Adds `uv`; returns whether it was absent.
    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        debug_assert_ne!(u, v);
        if self.adj[u].put(v) {
            return false;
        }
        self.adj[v].insert(u);
        self.edges += 1;
        true
    }

    /// Removes `uv`; returns whether it was present.
    pub fn remove(&mut self, u: usize, v: usize) -> bool {
        if !self.adj[u].contains(v) {
            return false;
        }
        self.adj[u].set(v, false);
        self.adj[v].set(u, false);
        self.edges -= 1;
        true
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn neighbor_set(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in linear-index order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for v in 0..self.n() {
            for u in self.adj[v].ones().take_while(|&u| u < v) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_indices(&self) -> Vec<usize> {
        self.edges().into_iter().map(|(u, v)| edge_index(u, v)).collect()
    }

    pub fn weight(&self, g: &WeightedCompleteGraph) -> f64 {
        self.edges().into_iter().map(|(u, v)| g.weight(u, v)).sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        n <= 1 || self.reach_from(0).count_ones(..) == n
    }

    pub fn is_tree(&self) -> bool {
        self.edges + 1 == self.n() && self.is_connected()
    }

    pub fn is_subgraph_of(&self, other: &SpanningSubgraph) -> bool {
        self.adj.iter().zip(&other.adj).all(|(a, b)| a.is_subset(b))
    }

    /// Vertices reachable from `start`.
    pub fn reach_from(&self, start: usize) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.n());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.adj[v].ones() {
                if !seen.put(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.n());
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen.contains(s) {
                continue;
            }
            let comp = self.reach_from(s);
            seen.union_with(&comp);
            out.push(comp.ones().collect());
        }
        out
    }

    /// Whether the subgraph induced on `members` is connected. `members` must be nonempty.
    pub fn induced_connected(&self, members: &FixedBitSet) -> bool {
        let Some(start) = members.minimum() else { return false };
        let mut seen = FixedBitSet::with_capacity(self.n());
        seen.insert(start);
        let mut stack = vec![start];
        let mut count = 1;
        let mut scratch = FixedBitSet::with_capacity(self.n());
        while let Some(v) = stack.pop() {
            scratch.clone_from(&self.adj[v]);
            scratch.intersect_with(members);
            scratch.difference_with(&seen);
            for w in scratch.ones() {
                seen.insert(w);
                stack.push(w);
                count += 1;
            }
        }
        count == members.count_ones(..)
    }

    /// Breadth-first order from the sources, visiting neighbors by increasing label.
    /// Returns the vertices not in `sources`, or an error if some vertex is unreachable.
    pub fn bfs_from(&self, sources: &[usize]) -> Result<Vec<usize>> {
        let n = self.n();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut queue = VecDeque::new();
        let mut sorted = sources.to_vec();
        sorted.sort_unstable();
        for &s in &sorted {
            if s >= n {
                return Err(Error::VertexOutOfRange { vertex: s, n });
            }
            if !seen.put(s) {
                queue.push_back(s);
            }
        }
        let mut order = Vec::with_capacity(n - queue.len());
        while let Some(v) = queue.pop_front() {
            for w in self.adj[v].ones() {
                if !seen.put(w) {
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        if seen.count_ones(..) != n {
            return Err(Error::Disconnected);
        }
        Ok(order)
    }
}

impl fmt::Debug for SpanningSubgraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<(usize, usize)> = self.edges().into_iter().map(|(u, v)| (u + 1, v + 1)).collect();
        f.debug_struct("SpanningSubgraph").field("n", &self.n()).field("edges", &labels).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct SubgraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for SpanningSubgraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubgraphRepr { n: self.n(), edges: self.edges().into_iter().map(|(u, v)| [u + 1, v + 1]).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpanningSubgraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SubgraphRepr::deserialize(d)?;
        let pairs = repr.edges.iter().map(|[u, v]| (u.wrapping_sub(1), v.wrapping_sub(1)));
        SpanningSubgraph::from_pairs(repr.n, pairs).map_err(serde::de::Error::custom)
    }
}

/// Decodes a Prüfer sequence over `0..n` into the labeled tree it encodes.
pub fn prufer_decode(n: usize, seq: &[usize]) -> Result<SpanningSubgraph> {
    if n < 2 || seq.len() != n - 2 {
        return Err(Error::InvalidParameter(format!(
            "Prüfer sequence for n = {n} needs {} entries",
            n.saturating_sub(2)
        )));
    }
    let mut degree = vec![1usize; n];
    for &x in seq {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
        degree[x] += 1;
    }
    // Linear-time decoding: `ptr` scans for the smallest leaf, `leaf` follows chains.
    let mut h = SpanningSubgraph::empty(n);
    let mut ptr = degree.iter().position(|&d| d == 1).expect("some vertex is a leaf");
    let mut leaf = ptr;
    for &x in seq {
        h.insert(leaf, x);
        degree[x] -= 1;
        if degree[x] == 1 && x < ptr {
            leaf = x;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    h.insert(leaf, n - 1);
    Ok(h)
}

/// A uniformly random labeled tree on `n` vertices.
pub fn random_spanning_tree(n: usize, seed: u64) -> Result<SpanningSubgraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Separate stream so the tree is independent of edge weights drawn from the same seed.
    rng.set_stream(1);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(n, &seq)
}

/// The initial subgraph of a local-search run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    Path,
    Star,
    Clique,
    RandomTree,
    /// The minimum spanning tree of the weighted graph itself.
    Mst,
}

impl StartKind {
    pub const ALL_STRUCTURED: [StartKind; 4] =
        [StartKind::Path, StartKind::Star, StartKind::Clique, StartKind::RandomTree];

    pub fn name(&self) -> &'static str {
        match self {
            StartKind::Path => "path",
            StartKind::Star => "star",
            StartKind::Clique => "clique",
            StartKind::RandomTree => "random_tree",
            StartKind::Mst => "mst",
        }
    }
}

impl fmt::Display for StartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StartKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "path" => StartKind::Path,
            "star" => StartKind::Star,
            "clique" | "complete" => StartKind::Clique,
            "random_tree" | "random_spanning_tree" | "tree" => StartKind::RandomTree,
            "mst" => StartKind::Mst,
            other => return Err(Error::Parse(format!("unknown start graph {other:?}"))),
        })
    }
}

/// Builds a start graph. `Mst` needs the weighted graph and is handled by
/// [`crate::mst::mst`]; asking for it here is an error.
pub fn make_start_graph(kind: &StartKind, n: usize, seed: u64) -> Result<SpanningSubgraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    match kind {
        StartKind::Path => Ok(SpanningSubgraph::path(n)),
        StartKind::Star => Ok(SpanningSubgraph::star(n)),
        StartKind::Clique => Ok(SpanningSubgraph::complete(n)),
        StartKind::RandomTree => random_spanning_tree(n, seed),
        StartKind::Mst => Err(Error::InvalidParameter("the MST start depends on the weights".into())),
    }
}
