//! The local-improvement operator and the bookkeeping around optimizing sequences.
//!
//! `phi(H, S)` replaces the induced subgraph `H[S]` by the minimum spanning tree
//! of `G[S]` when `H[S]` is connected, and leaves `H` alone otherwise. A step
//! costs the total weight of the `H[S]` it replaced; a sequence costs its most
//! expensive step.

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{edge_index, WeightedCompleteGraph};
use crate::mst::{mst, mst_edges_of_subset};
use crate::subgraph::SpanningSubgraph;

/// A list of vertex subsets `S_1, ..., S_m`, each sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OptimizingSequence {
    sets: Vec<Vec<usize>>,
}

impl OptimizingSequence {
    pub fn new(sets: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let sets = sets.into_iter().map(|s| normalize_set(s, n)).collect::<Result<_>>()?;
        Ok(OptimizingSequence { sets })
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

fn normalize_set(mut s: Vec<usize>, n: usize) -> Result<Vec<usize>> {
    s.sort_unstable();
    s.dedup();
    if s.is_empty() {
        return Err(Error::InvalidParameter("empty vertex subset".into()));
    }
    if let Some(&v) = s.last().filter(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    Ok(s)
}

fn one_based<S: Serializer>(set: &[u32], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.iter().map(|&v| v + 1))
}

/// One application of the operator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Step {
    #[serde(serialize_with = "one_based")]
    pub set: Vec<u32>,
    /// `w(H[S])` before the step, or 0 for a no-op.
    pub weight: f64,
    /// `false` when `H[S]` was disconnected and nothing changed.
    pub applied: bool,
}

impl Step {
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.set.iter().map(|&v| v as usize)
    }
}

/// A run of the operator: the start and end subgraphs and every step in between.
///
/// Intermediate subgraphs are not stored; [`SequenceTrace::replay`] regenerates them.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceTrace {
    pub initial: SpanningSubgraph,
    #[serde(rename = "final")]
    pub last: SpanningSubgraph,
    pub steps: Vec<Step>,
    pub reached_mst: bool,
}

impl SequenceTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn step_weights(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.weight).collect()
    }

    /// Largest step weight, 0 for the empty sequence.
    pub fn wt_max(&self) -> f64 {
        max_weight(&self.steps)
    }

    pub fn sequence(&self) -> OptimizingSequence {
        OptimizingSequence { sets: self.steps.iter().map(|s| s.vertices().collect()).collect() }
    }

    /// Re-applies every step from the initial subgraph, calling `visit(i, before, after)`
    /// for step `i` (0-based). Returns the final subgraph.
    pub fn replay_with(
        &self,
        g: &WeightedCompleteGraph,
        mut visit: impl FnMut(usize, &SpanningSubgraph, &SpanningSubgraph),
    ) -> SpanningSubgraph {
        let mut h = self.initial.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let set: Vec<usize> = step.vertices().collect();
            let before = h.clone();
            phi_in_place(g, &mut h, &set);
            visit(i, &before, &h);
        }
        h
    }

    /// All subgraphs `H_0, ..., H_m`.
    pub fn replay(&self, g: &WeightedCompleteGraph) -> Vec<SpanningSubgraph> {
        let mut out = vec![self.initial.clone()];
        self.replay_with(g, |_, _, after| out.push(after.clone()));
        out
    }
}

pub(crate) fn max_weight(steps: &[Step]) -> f64 {
    steps.iter().map(|s| s.weight).fold(0.0, f64::max)
}

/// Applies the operator to `h` in place. `set` must be sorted, deduplicated
/// and in range. Returns the weight of the replaced `H[S]`, or `None` for a no-op.
pub(crate) fn phi_in_place(g: &WeightedCompleteGraph, h: &mut SpanningSubgraph, set: &[usize]) -> Option<f64> {
    let n = h.n();
    let mut members = FixedBitSet::with_capacity(n);
    members.extend(set.iter().copied());
    if !h.induced_connected(&members) {
        return None;
    }
    let mut inside = Vec::new();
    if set.len() * set.len() <= 2 * n {
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                if h.contains(a, b) {
                    inside.push((a, b));
                }
            }
        }
    } else {
        for &a in set {
            for b in h.neighbor_set(a).intersection(&members) {
                if a < b {
                    inside.push((a, b));
                }
            }
        }
    }
    let weight: f64 = inside.iter().map(|&(a, b)| g.weight(a, b)).sum();
    for &(a, b) in &inside {
        h.remove(a, b);
    }
    for (a, b) in mst_edges_of_subset(g, set) {
        h.insert(a, b);
    }
    Some(weight)
}

/// `phi(H, S)` as a pure function.
pub fn phi(g: &WeightedCompleteGraph, h: &SpanningSubgraph, set: &[usize]) -> Result<SpanningSubgraph> {
    if h.n() != g.n() {
        return Err(Error::InvalidParameter(format!("subgraph on {} vertices, graph on {}", h.n(), g.n())));
    }
    let set = normalize_set(set.to_vec(), g.n())?;
    let mut out = h.clone();
    phi_in_place(g, &mut out, &set);
    Ok(out)
}

/// Applies the steps of `seq` to `h0` and records the trace.
pub fn run_sequence(
    g: &WeightedCompleteGraph,
    h0: &SpanningSubgraph,
    seq: &OptimizingSequence,
) -> Result<SequenceTrace> {
    let mut search = Search::new(g, h0.clone())?;
    for s in seq.sets() {
        search.apply(s)?;
    }
    Ok(search.finish())
}

/// A local-search state that records every step applied to it.
///
/// The constructions in [`crate::eating`] and [`crate::starpath`] drive one of
/// these so that a whole pipeline shares a single trace.
#[derive(Clone, Debug)]
pub struct Search<'g> {
    g: &'g WeightedCompleteGraph,
    initial: SpanningSubgraph,
    h: SpanningSubgraph,
    steps: Vec<Step>,
}

impl<'g> Search<'g> {
    pub fn new(g: &'g WeightedCompleteGraph, h0: SpanningSubgraph) -> Result<Self> {
        if h0.n() != g.n() {
            return Err(Error::InvalidParameter(format!("subgraph on {} vertices, graph on {}", h0.n(), g.n())));
        }
        Ok(Search { g, initial: h0.clone(), h: h0, steps: Vec::new() })
    }

    pub fn graph(&self) -> &'g WeightedCompleteGraph {
        self.g
    }

    pub fn current(&self) -> &SpanningSubgraph {
        &self.h
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Applies the operator with a validated set; returns the step weight.
    pub fn apply(&mut self, set: &[usize]) -> Result<f64> {
        let set = normalize_set(set.to_vec(), self.g.n())?;
        Ok(self.apply_sorted(&set))
    }

    /// Applies the operator; `set` must already be sorted, unique and in range.
    pub(crate) fn apply_sorted(&mut self, set: &[usize]) -> f64 {
        debug_assert!(set.windows(2).all(|w| w[0] < w[1]));
        let outcome = phi_in_place(self.g, &mut self.h, set);
        let step = Step {
            set: set.iter().map(|&v| v as u32).collect(),
            weight: outcome.unwrap_or(0.0),
            applied: outcome.is_some(),
        };
        let w = step.weight;
        self.steps.push(step);
        w
    }

    pub(crate) fn apply_unsorted(&mut self, set: &mut [usize]) -> f64 {
        set.sort_unstable();
        self.apply_sorted(set)
    }

    pub fn finish(self) -> SequenceTrace {
        let reached_mst = self.h == mst(self.g);
        SequenceTrace { initial: self.initial, last: self.h, steps: self.steps, reached_mst }
    }
}

/// First breach of the persistence properties along a trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PersistenceViolation {
    /// An MST edge present before step `step` (1-based) was removed by it.
    MstEdgeLost { step: usize, edge: (usize, usize) },
    /// The subgraph was a tree before step `step` and not after it.
    TreeLost { step: usize },
}

/// Checks that MST edges and tree-ness, once present, are never lost.
pub fn check_persistence(trace: &SequenceTrace, g: &WeightedCompleteGraph) -> Option<PersistenceViolation> {
    let target = mst(g);
    let mut violation = None;
    let last = trace.replay_with(g, |i, before, after| {
        if violation.is_some() {
            return;
        }
        let step = &trace.steps[i];
        let set: Vec<usize> = step.vertices().collect();
        for (k, &a) in set.iter().enumerate() {
            for &b in &set[k + 1..] {
                if before.contains(a, b) && !after.contains(a, b) && target.contains(a, b) {
                    violation = Some(PersistenceViolation::MstEdgeLost { step: i + 1, edge: (a + 1, b + 1) });
                    return;
                }
            }
        }
        if before.is_tree() && !after.is_tree() {
            violation = Some(PersistenceViolation::TreeLost { step: i + 1 });
        }
    });
    debug_assert_eq!(last, trace.last);
    violation
}

/// `(total weight of the non-MST edges of H, w(H))`.
pub fn cost1_bounds(g: &WeightedCompleteGraph, h: &SpanningSubgraph) -> Result<(f64, f64)> {
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let target = mst(g);
    let mut lower = 0.0;
    let mut upper = 0.0;
    for (u, v) in h.edges() {
        let w = g.weight(u, v);
        upper += w;
        if !target.contains(u, v) {
            lower += w;
        }
    }
    Ok((lower, upper))
}

/// Edges of `H` heavier than `ρ* - ε`. A sequence whose steps all weigh at most
/// `ρ* - ε` can never place both endpoints of such an edge in one connected
/// `H[S]`, so all of them survive to its final subgraph.
#[derive(Clone, Debug, Serialize)]
pub struct HeavyEdgeFloor {
    pub threshold: f64,
    pub count: usize,
    /// `count · (ρ* - ε)`, a lower bound on the final weight of such a sequence.
    pub weight_floor: f64,
    pub edges: Vec<usize>,
}

pub fn heavy_edge_floor(g: &WeightedCompleteGraph, h: &SpanningSubgraph, epsilon: f64) -> Result<HeavyEdgeFloor> {
    let rho = g.weight_cap();
    if !(epsilon > 0.0 && epsilon <= rho) {
        return Err(Error::InvalidParameter(format!("need 0 < epsilon <= {rho}, got {epsilon}")));
    }
    let threshold = rho - epsilon;
    let edges: Vec<usize> =
        h.edges().into_iter().map(|(u, v)| edge_index(u, v)).filter(|&e| g.weight_at(e) > threshold).collect();
    let count = edges.len();
    Ok(HeavyEdgeFloor { threshold, count, weight_floor: count as f64 * threshold, edges })
}

impl HeavyEdgeFloor {
    /// For a trace started from the same subgraph: `true` unless its steps all
    /// stay at or below the threshold and some heavy edge is missing at the end.
    pub fn retained_by(&self, trace: &SequenceTrace) -> bool {
        trace.wt_max() > self.threshold || self.edges.iter().all(|&e| trace.last.contains_index(e))
    }
}
