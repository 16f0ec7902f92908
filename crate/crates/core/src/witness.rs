//! Extracting a large induced clique, star or path from a connected graph.
//!
//! A connected graph of small maximum degree has large diameter, and a
//! shortest path between far-apart vertices is an induced path. Otherwise some
//! vertex has a large neighbourhood, and the pivot argument behind the diagonal
//! Ramsey bound finds a clique or an independent set inside it; an independent
//! set of neighbours plus their common neighbour is an induced star.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::subgraph::SpanningSubgraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Clique,
    Star,
    Path,
}

/// An induced clique, star or path.
///
/// Path vertices are listed in path order; a star lists its leaves by
/// increasing label followed by its center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralWitness {
    pub kind: WitnessKind,
    pub vertices: Vec<usize>,
}

impl StructuralWitness {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn center(&self) -> Option<usize> {
        (self.kind == WitnessKind::Star).then(|| *self.vertices.last().expect("stars are nonempty"))
    }

    /// Checks every required and every forbidden edge of the claimed induced structure.
    pub fn certify(&self, h: &SpanningSubgraph) -> bool {
        let v = &self.vertices;
        if v.is_empty() || v.iter().any(|&x| x >= h.n()) {
            return false;
        }
        let mut sorted = v.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != v.len() {
            return false;
        }
        let k = v.len();
        let required = |i: usize, j: usize| match self.kind {
            WitnessKind::Clique => true,
            WitnessKind::Star => i == k - 1 || j == k - 1,
            WitnessKind::Path => i.abs_diff(j) == 1,
        };
        (0..k).all(|i| (i + 1..k).all(|j| h.contains(v[i], v[j]) == required(i, j)))
    }
}

/// Guaranteed witness size `⌈½ √(log₂ n)⌉`.
pub fn min_witness_size(n: usize) -> usize {
    if n < 2 {
        return n;
    }
    (0.5 * (n as f64).log2().sqrt()).ceil() as usize
}

/// Degree threshold `n^{1/√(log₂ n)}` separating the path case from the Ramsey case.
pub fn degree_threshold(n: usize) -> f64 {
    if n < 2 {
        return 1.0;
    }
    let n = n as f64;
    n.powf(1.0 / n.log2().sqrt())
}

/// Result of the pivot argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RamseyOutcome {
    Clique(Vec<usize>),
    Independent(Vec<usize>),
}

impl RamseyOutcome {
    pub fn vertices(&self) -> &[usize] {
        match self {
            RamseyOutcome::Clique(v) | RamseyOutcome::Independent(v) => v,
        }
    }
}

/// Pivot recursion on the graph `h` induced on `vertices`: repeatedly take the
/// smallest remaining vertex as pivot and keep the larger of its neighbours and
/// non-neighbours. Pivots that kept their neighbours form a clique, the others
/// an independent set; the larger group is returned (a clique on ties).
pub fn pivot_ramsey(h: &SpanningSubgraph, vertices: &[usize]) -> RamseyOutcome {
    let mut candidates = FixedBitSet::with_capacity(h.n());
    candidates.extend(vertices.iter().copied());
    let mut clique = Vec::new();
    let mut independent = Vec::new();
    while let Some(p) = candidates.minimum() {
        candidates.set(p, false);
        let mut nbrs = candidates.clone();
        nbrs.intersect_with(h.neighbor_set(p));
        let mut non = candidates.clone();
        non.difference_with(h.neighbor_set(p));
        let (nc, ic) = (nbrs.count_ones(..), non.count_ones(..));
        if nc == 0 && ic == 0 {
            // the last pivot is unconstrained and joins the larger group
            if clique.len() >= independent.len() {
                clique.push(p);
            } else {
                independent.push(p);
            }
        } else if nc >= ic {
            clique.push(p);
            candidates = nbrs;
        } else {
            independent.push(p);
            candidates = non;
        }
    }
    if clique.len() >= independent.len() {
        RamseyOutcome::Clique(clique)
    } else {
        RamseyOutcome::Independent(independent)
    }
}

fn bfs_far(h: &SpanningSubgraph, s: usize) -> (usize, Vec<usize>) {
    let mut parent = vec![usize::MAX; h.n()];
    parent[s] = s;
    let mut queue = std::collections::VecDeque::from([s]);
    let mut last = s;
    while let Some(v) = queue.pop_front() {
        last = v;
        for w in h.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    (last, parent)
}

/// A shortest path between the ends of a double BFS sweep.
fn eccentric_path(h: &SpanningSubgraph) -> StructuralWitness {
    let (a, _) = bfs_far(h, 0);
    let (b, parent) = bfs_far(h, a);
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = parent[cur];
        path.push(cur);
    }
    StructuralWitness { kind: WitnessKind::Path, vertices: path }
}

fn max_degree_vertex(h: &SpanningSubgraph) -> usize {
    (0..h.n()).max_by_key(|&v| (h.degree(v), std::cmp::Reverse(v))).unwrap_or(0)
}

fn star_from(center: usize, mut leaves: Vec<usize>) -> StructuralWitness {
    leaves.sort_unstable();
    leaves.push(center);
    StructuralWitness { kind: WitnessKind::Star, vertices: leaves }
}

fn greedy_star(h: &SpanningSubgraph, center: usize) -> StructuralWitness {
    let mut leaves: Vec<usize> = Vec::new();
    for v in h.neighbors(center) {
        if leaves.iter().all(|&l| !h.contains(l, v)) {
            leaves.push(v);
        }
    }
    star_from(center, leaves)
}

fn greedy_clique(h: &SpanningSubgraph, seed: usize) -> StructuralWitness {
    let mut clique = vec![seed];
    for v in h.neighbors(seed) {
        if clique.iter().all(|&c| h.contains(c, v)) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    StructuralWitness { kind: WitnessKind::Clique, vertices: clique }
}

/// Finds an induced clique, star or path with at least [`min_witness_size`] vertices.
pub fn find_witness(h: &SpanningSubgraph) -> Result<StructuralWitness> {
    let n = h.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut candidates = Vec::new();
    let hub = max_degree_vertex(h);
    if h.degree(hub) >= degree_threshold(n).ceil() as usize {
        let nbrs: Vec<usize> = h.neighbors(hub).collect();
        candidates.push(match pivot_ramsey(h, &nbrs) {
            RamseyOutcome::Clique(mut c) => {
                c.push(hub);
                c.sort_unstable();
                StructuralWitness { kind: WitnessKind::Clique, vertices: c }
            }
            RamseyOutcome::Independent(leaves) => star_from(hub, leaves),
        });
    }
    candidates.push(eccentric_path(h));
    if min_witness_size(n) <= 2 {
        candidates.push(greedy_star(h, hub));
        candidates.push(greedy_clique(h, hub));
    }
    let best = candidates.iter().map(StructuralWitness::len).max().expect("at least one candidate");
    let witness = candidates.into_iter().find(|w| w.len() == best).expect("maximum is attained");
    debug_assert!(witness.certify(h));
    if witness.len() < min_witness_size(n) {
        return Err(Error::Precondition(format!("witness of size {} below the guarantee", witness.len())));
    }
    Ok(witness)
}
