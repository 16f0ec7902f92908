//! MST sequences for star and path starts, and the full pipeline for any start.
//!
//! Positions in this module follow the canonical labeling of a star or path:
//! edges are `e_1, ..., e_{n-1}` and vertices carry labels `1..=n`. On a path
//! `e_i` joins `i` and `i + 1`; on a star `e_i` joins leaf `i` to the center `n`.
//! [`CanonicalLabeling::vertex`] maps a label back to a graph vertex.
//!
//! The construction looks for the first run of `L` consecutive edges that all
//! weigh at most `W`. Collapsing that run costs at most `W L`; from there the
//! region grows one edge at a time, first rightwards then leftwards, and each
//! new vertex is absorbed by the eating routine.

use std::ops::Range;

use serde::Serialize;

use crate::dist::Distribution;
use crate::eating::{bfs_increment_order, eat_in, remove_cycles_in};
use crate::error::{Error, Result};
use crate::experiments::trial_seed;
use crate::graph::{edge_index, edge_weight, WeightedCompleteGraph};
use crate::local_search::{max_weight, Search, SequenceTrace};
use crate::mst::IncrementalMst;
use crate::subgraph::SpanningSubgraph;
use crate::witness::{find_witness, StructuralWitness, WitnessKind};

/// A star or path with its vertices listed in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalLabeling {
    pub kind: WitnessKind,
    /// `order[k]` is the graph vertex with label `k + 1`.
    pub order: Vec<usize>,
}

impl CanonicalLabeling {
    /// Labels the star or path `h` on all of its vertices. A path is read from
    /// its endpoint with the smaller index; a star lists leaves by index, center last.
    pub fn of(h: &SpanningSubgraph) -> Result<Self> {
        let n = h.n();
        if n < 2 || !h.is_tree() {
            return Err(Error::Precondition("expected a star or a path".into()));
        }
        if h.max_degree() <= 2 {
            let start = (0..n).find(|&v| h.degree(v) == 1).expect("paths have endpoints");
            let mut order = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            while let Some(next) = h.neighbors(cur).find(|&w| w != prev) {
                prev = cur;
                cur = next;
                order.push(cur);
            }
            return Ok(CanonicalLabeling { kind: WitnessKind::Path, order });
        }
        match (0..n).find(|&v| h.degree(v) == n - 1) {
            Some(center) => {
                let mut order: Vec<usize> = (0..n).filter(|&v| v != center).collect();
                order.push(center);
                Ok(CanonicalLabeling { kind: WitnessKind::Star, order })
            }
            None => Err(Error::Precondition("expected a star or a path".into())),
        }
    }

    /// Labeling of a star or path witness (whose vertex list is already canonical).
    pub fn of_witness(w: &StructuralWitness) -> Result<Self> {
        match w.kind {
            WitnessKind::Clique => Err(Error::Precondition("cliques have no edge labeling".into())),
            kind => Ok(CanonicalLabeling { kind, order: w.vertices.clone() }),
        }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Graph vertex carrying `label` (1-based).
    pub fn vertex(&self, label: usize) -> usize {
        self.order[label - 1]
    }

    /// Endpoints of edge `e_i` (1-based) as graph vertices.
    pub fn edge(&self, i: usize) -> (usize, usize) {
        match self.kind {
            WitnessKind::Path => (self.vertex(i), self.vertex(i + 1)),
            _ => (self.vertex(i), self.vertex(self.n())),
        }
    }

    /// Labels of the endpoints of `e_i, ..., e_{j-1}`, for `1 <= i < j <= n`.
    pub fn v_set(&self, i: usize, j: usize) -> Vec<usize> {
        match self.kind {
            WitnessKind::Path => (i..=j).collect(),
            _ => (i..j).chain([self.n()]).collect(),
        }
    }

    /// The label added when `V(i, j)` grows to `V(i, j + 1)`.
    fn right_addition(&self, j: usize) -> usize {
        match self.kind {
            WitnessKind::Path => j + 1,
            _ => j,
        }
    }
}

/// `I(W, L)`: the first position of `L` consecutive edges all weighing at most `W`, capped at `n - L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunIndex {
    pub w: f64,
    pub l: usize,
    /// 1-based edge position.
    pub i: usize,
    pub n: usize,
}

impl RunIndex {
    /// `true` when a run was found, so that `I < n - L`.
    pub fn found(&self) -> bool {
        self.i < self.n - self.l
    }
}

fn check_run_parameters(n: usize, w: f64, l: usize) -> Result<()> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::InvalidParameter(format!("run threshold must be positive, got {w}")));
    }
    if l < 2 || l + 1 >= n {
        return Err(Error::InvalidParameter(format!("need 2 <= L < n - 1, got L = {l}, n = {n}")));
    }
    Ok(())
}

/// First run position given edge weights by position (`weight_of(i)` for `1 <= i <= n - 1`).
pub fn run_index_by(n: usize, w: f64, l: usize, mut weight_of: impl FnMut(usize) -> f64) -> Result<RunIndex> {
    check_run_parameters(n, w, l)?;
    let cap = n - l;
    let mut streak = 0;
    for j in 1..n {
        if weight_of(j) <= w {
            streak += 1;
            if streak == l {
                return Ok(RunIndex { w, l, i: (j + 1 - l).min(cap), n });
            }
        } else {
            streak = 0;
        }
        if j + 1 - streak > cap {
            break;
        }
    }
    Ok(RunIndex { w, l, i: cap, n })
}

pub fn run_index(g: &WeightedCompleteGraph, labeling: &CanonicalLabeling, w: f64, l: usize) -> Result<RunIndex> {
    run_index_by(labeling.n(), w, l, |i| {
        let (a, b) = labeling.edge(i);
        g.weight(a, b)
    })
}

/// `W = 1 / ln k` and `L = max(2, ⌊ln ln k⌋)` for a region of `k` vertices.
pub fn default_parameters(k: usize) -> (f64, usize) {
    let ln = (k.max(3) as f64).ln();
    (1.0 / ln, (ln.ln().floor() as usize).max(2))
}

/// The growing regions `U_0 ⊂ U_1 ⊂ ... ⊂ U_{n-L-1}`, stored as `U_0` plus the added labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct USequence {
    pub base: Vec<usize>,
    pub additions: Vec<usize>,
    /// Additions `0..right_minor_end` form the first block of right additions
    /// (at most `L^20` of them), `right_minor_end..right_end` the rest of the right
    /// additions and `right_end..` the left additions. Informational only.
    pub right_minor_end: usize,
    pub right_end: usize,
}

impl USequence {
    pub fn len(&self) -> usize {
        self.additions.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Labels of `U_k`.
    pub fn set(&self, k: usize) -> Vec<usize> {
        let mut s = self.base.clone();
        s.extend_from_slice(&self.additions[..k]);
        s
    }
}

fn build_u_sequence(run: &RunIndex, labeling: &CanonicalLabeling) -> USequence {
    let (n, i, l) = (run.n, run.i, run.l);
    let base = labeling.v_set(i, i + l);
    let mut additions: Vec<usize> = (i + l..n).map(|j| labeling.right_addition(j)).collect();
    let right_end = additions.len();
    additions.extend((1..i).rev());
    let right_minor_end = right_end.min(l.checked_pow(20).unwrap_or(usize::MAX));
    USequence { base, additions, right_minor_end, right_end }
}

pub fn u_sequence(run: &RunIndex, labeling: &CanonicalLabeling) -> Result<USequence> {
    if !run.found() {
        return Err(Error::NoRun { len: run.l });
    }
    Ok(build_u_sequence(run, labeling))
}

fn to_vertices(labeling: &CanonicalLabeling, labels: &[usize]) -> Vec<usize> {
    labels.iter().map(|&x| labeling.vertex(x)).collect()
}

/// Collapses the run, then absorbs the remaining vertices of the region in
/// U-sequence order. Returns the run; errors with `NoRun` if there is none.
fn solve_region_in(search: &mut Search<'_>, labeling: &CanonicalLabeling, w: f64, l: usize) -> Result<RunIndex> {
    let run = run_index(search.graph(), labeling, w, l)?;
    let seq = u_sequence(&run, labeling)?;
    let mut base = to_vertices(labeling, &seq.base);
    search.apply_unsorted(&mut base);
    eat_in(search, &base, &to_vertices(labeling, &seq.additions))?;
    Ok(run)
}

/// MST sequence for a star or path `h` using the run-based construction.
pub fn solve_star_or_path(g: &WeightedCompleteGraph, h: &SpanningSubgraph, w: f64, l: usize) -> Result<SequenceTrace> {
    let labeling = CanonicalLabeling::of(h)?;
    let mut search = Search::new(g, h.clone())?;
    solve_region_in(&mut search, &labeling, w, l)?;
    Ok(search.finish())
}

/// A contiguous block of steps in a pipeline trace.
#[derive(Clone, Debug, Serialize)]
pub struct Phase {
    pub name: &'static str,
    pub steps: Range<usize>,
    pub wt_max: f64,
}

/// Output of [`full_pipeline`].
#[derive(Clone, Debug, Serialize)]
pub struct PipelineTrace {
    pub witness: StructuralWitness,
    /// Run used for a star or path witness; `None` for cliques and fallbacks.
    pub run: Option<RunIndex>,
    /// Whether the witness region was replaced in one step for lack of a run.
    pub fallback: bool,
    pub phases: Vec<Phase>,
    pub trace: SequenceTrace,
}

impl PipelineTrace {
    pub fn wt_max(&self) -> f64 {
        self.trace.wt_max()
    }

    pub fn reached_mst(&self) -> bool {
        self.trace.reached_mst
    }
}

/// Finds a witness, turns the subgraph on it into the MST there, then eats the
/// rest of the graph in breadth-first order.
///
/// Cliques are cleaned by cycle removal. Stars and paths use the run
/// construction with [`default_parameters`] for the witness size; when no run
/// exists the witness region is replaced in a single step.
pub fn full_pipeline(g: &WeightedCompleteGraph, h: &SpanningSubgraph) -> Result<PipelineTrace> {
    let witness = find_witness(h)?;
    let mut search = Search::new(g, h.clone())?;
    let mut phases = Vec::new();
    let mut run = None;
    let mut fallback = false;
    let mark = |search: &Search<'_>, name: &'static str, start: usize, phases: &mut Vec<Phase>| {
        let end = search.steps().len();
        phases.push(Phase { name, steps: start..end, wt_max: max_weight(&search.steps()[start..end]) });
        end
    };

    let mut region = witness.vertices.clone();
    region.sort_unstable();
    let mut at = 0;
    match witness.kind {
        WitnessKind::Clique => {
            remove_cycles_in(&mut search, &region)?;
            at = mark(&search, "witness", at, &mut phases);
        }
        WitnessKind::Star | WitnessKind::Path => {
            let labeling = CanonicalLabeling::of_witness(&witness)?;
            let (w, l) = default_parameters(witness.len());
            let solved = if l + 1 < witness.len() {
                solve_region_in(&mut search, &labeling, w, l)
            } else {
                Err(Error::NoRun { len: l })
            };
            match solved {
                Ok(r) => run = Some(r),
                Err(Error::NoRun { .. }) => {
                    fallback = true;
                    search.apply_sorted(&region);
                }
                Err(e) => return Err(e),
            }
            at = mark(&search, "witness", at, &mut phases);
        }
    }
    let order = bfs_increment_order(search.current(), &region)?;
    eat_in(&mut search, &region, &order)?;
    mark(&search, "rest", at, &mut phases);
    Ok(PipelineTrace { witness, run, fallback, phases, trace: search.finish() })
}

/// Per-phase upper bounds: `max(W L, ρ* + max_i wdiam(MST(G[U_i])))` over every region
/// the pipeline grows through. Costs `O(n^2 log n)`.
pub fn pipeline_bound(g: &WeightedCompleteGraph, p: &PipelineTrace) -> f64 {
    let rho = g.weight_cap();
    let mut region: Vec<usize>;
    let mut worst = 0.0f64;
    let mut initial_cost = 0.0;
    match (&p.witness.kind, &p.run) {
        (WitnessKind::Clique, _) => {
            region = p.witness.vertices.clone();
        }
        (_, Some(run)) => {
            let labeling = CanonicalLabeling::of_witness(&p.witness).expect("star or path");
            let seq = build_u_sequence(run, &labeling);
            initial_cost = run.w * run.l as f64;
            let mut inc = IncrementalMst::new(g, &to_vertices(&labeling, &seq.base));
            worst = worst.max(inc.wdiam());
            for &x in &seq.additions {
                inc.insert(labeling.vertex(x));
                worst = worst.max(inc.wdiam());
            }
            region = inc.vertices().to_vec();
        }
        (_, None) => {
            region = p.witness.vertices.clone();
            let h = &p.trace.initial;
            for (k, &a) in region.iter().enumerate() {
                for &b in &region[k + 1..] {
                    if h.contains(a, b) {
                        initial_cost += g.weight(a, b);
                    }
                }
            }
        }
    }
    let mut inc = IncrementalMst::new(g, &region);
    worst = worst.max(inc.wdiam());
    region.sort_unstable();
    // The witness phase only rewires edges inside the region, so the
    // breadth-first order from it is the same on the initial subgraph.
    for x in p.trace.initial.bfs_from(&region).unwrap_or_default() {
        inc.insert(x);
        worst = worst.max(inc.wdiam());
    }
    initial_cost.max(rho + worst)
}

/// Result of [`run_index_tail_check`] at one grid point.
#[derive(Clone, Debug, Serialize)]
pub struct TailPoint {
    pub k: usize,
    pub empirical: f64,
    pub bound: f64,
    pub sigma: f64,
    pub within: bool,
}

/// Run index on the canonical path of the uniform graph with seed `seed`.
/// Only the path edges are drawn, so `n` can be large.
pub fn path_run_index(n: usize, w: f64, l: usize, seed: u64) -> Result<RunIndex> {
    let dist = Distribution::UNIFORM;
    run_index_by(n, w, l, |i| edge_weight(&dist, seed, edge_index(i - 1, i)))
}

/// Empirical `P(I >= k L + 1)` over the observed run indices `runs`, against `exp(-k W^L)`.
pub fn tail_points(runs: &[usize], w: f64, l: usize, ks: &[usize]) -> Vec<TailPoint> {
    let trials = runs.len().max(1) as f64;
    let wl = w.powi(l as i32);
    ks.iter()
        .map(|&k| {
            let hits = runs.iter().filter(|&&i| i > k * l).count();
            let empirical = hits as f64 / trials;
            let bound = (-(k as f64) * wl).exp();
            let sigma = (bound * (1.0 - bound) / trials).sqrt();
            TailPoint { k, empirical, bound, sigma, within: empirical <= bound + 3.0 * sigma }
        })
        .collect()
}

/// [`tail_points`] for `trials` graphs with seeds derived from `seed`.
pub fn run_index_tail_check(
    n: usize,
    w: f64,
    l: usize,
    trials: usize,
    seed: u64,
    ks: &[usize],
) -> Result<Vec<TailPoint>> {
    check_run_parameters(n, w, l)?;
    let runs = (0..trials)
        .map(|t| path_run_index(n, w, l, trial_seed(seed, t as u64)).map(|r| r.i))
        .collect::<Result<Vec<_>>>()?;
    Ok(tail_points(&runs, w, l, ks))
}

/// One good-sets trial on the uniform graph with seed `seed` and the canonical
/// path as start: the run, and whether some region of the U-sequence has an
/// MST of weighted diameter above `epsilon`.
pub fn good_sets_trial(n: usize, w: f64, l: usize, epsilon: f64, seed: u64) -> Result<(RunIndex, bool)> {
    check_run_parameters(n, w, l)?;
    let labeling = CanonicalLabeling::of(&SpanningSubgraph::path(n))?;
    let g = WeightedCompleteGraph::sample(n, &Distribution::UNIFORM, seed)?;
    let run = run_index(&g, &labeling, w, l)?;
    let seq = build_u_sequence(&run, &labeling);
    let mut inc = IncrementalMst::new(&g, &to_vertices(&labeling, &seq.base));
    let mut exceeded = inc.wdiam() > epsilon;
    for &x in &seq.additions {
        if exceeded {
            break;
        }
        inc.insert(labeling.vertex(x));
        exceeded = inc.wdiam() > epsilon;
    }
    Ok((run, exceeded))
}

/// Frequency of bad trials of [`good_sets_trial`].
#[derive(Clone, Debug, Serialize)]
pub struct GoodSetsReport {
    pub n: usize,
    pub trials: usize,
    pub bad: usize,
    pub frequency: f64,
    pub no_run: usize,
}

pub fn good_sets_scan(n: usize, w: f64, l: usize, epsilon: f64, trials: usize, seed: u64) -> Result<GoodSetsReport> {
    let mut bad = 0;
    let mut no_run = 0;
    for t in 0..trials {
        let (run, exceeded) = good_sets_trial(n, w, l, epsilon, trial_seed(seed, t as u64))?;
        no_run += usize::from(!run.found());
        bad += usize::from(exceeded);
    }
    Ok(GoodSetsReport { n, trials, bad, frequency: bad as f64 / trials.max(1) as f64, no_run })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeling_shapes() {
        let p = CanonicalLabeling::of(&SpanningSubgraph::path(6)).unwrap();
        assert_eq!(p.order, (0..6).collect::<Vec<_>>());
        let star = SpanningSubgraph::from_pairs(4, [(0, 2), (1, 2), (3, 2)]).unwrap();
        let s = CanonicalLabeling::of(&star).unwrap();
        assert_eq!(s.kind, WitnessKind::Star);
        assert_eq!(s.order, vec![0, 1, 3, 2]);
        assert!(CanonicalLabeling::of(&SpanningSubgraph::complete(4)).is_err());
    }

    #[test]
    fn v_sets() {
        let p = CanonicalLabeling::of(&SpanningSubgraph::path(9)).unwrap();
        assert_eq!(p.v_set(4, 7), vec![4, 5, 6, 7]);
        let s = CanonicalLabeling::of(&SpanningSubgraph::star(9)).unwrap();
        assert_eq!(s.v_set(4, 7), vec![4, 5, 6, 9]);
        for (i, j) in [(1, 2), (2, 9), (3, 5)] {
            assert_eq!(p.v_set(i, j).len(), j - i + 1);
            assert_eq!(s.v_set(i, j).len(), j - i + 1);
        }
    }

    #[test]
    fn run_index_edge_cases() {
        let all_light = run_index_by(10, 0.5, 3, |_| 0.1).unwrap();
        assert_eq!(all_light.i, 1);
        let none = run_index_by(10, 0.5, 3, |_| 0.9).unwrap();
        assert_eq!(none.i, 7);
        assert!(!none.found());
        assert!(run_index_by(10, 0.5, 1, |_| 0.1).is_err());
        assert!(run_index_by(10, 0.5, 9, |_| 0.1).is_err());
    }

    #[test]
    fn default_parameter_values() {
        let (w, l) = default_parameters(100);
        assert!((w - 1.0 / 100f64.ln()).abs() < 1e-15);
        assert_eq!(l, 2);
        assert_eq!(default_parameters(10_000).1, 2);
        assert_eq!(default_parameters(1_000_000).1, 2);
        assert_eq!(default_parameters(100_000_000).1, 2);
        assert_eq!(default_parameters(1usize << 40).1, 3);
    }
}
