//! Seeded Monte Carlo campaigns.
//!
//! Every command runs `trials` independent trials for each `n` in the grid and
//! produces one [`TrialRecord`] per trial plus a JSON summary. Trial seeds
//! depend only on the base seed, `n` and the trial index, and records are
//! collected in trial order, so a run is reproducible byte for byte
//! regardless of thread scheduling.
//!
//! CSV columns, in order:
//!
//! | column | meaning |
//! |---|---|
//! | `trial` | trial index within its `n` |
//! | `seed` | seed of the weighted graph |
//! | `n` | number of vertices |
//! | `mst_weight` | total MST weight |
//! | `max_mst_edge` | heaviest MST edge |
//! | `wdiam` | weighted diameter of the MST |
//! | `wt_max` | heaviest step of the constructed MST sequence |
//! | `exact_cost` | optimal cost from the exact search |
//! | `heavy_count` | edges of the start graph above `ρ* - ε` |
//! | `floor_ratio` | `heavy_count · (ρ* - ε) / (n · mst_weight)` |
//! | `run_index` | `I(W, L)` on the canonical labeling |
//! | `reached_mst` | whether the constructed sequence ends at the MST |
//! | `holds` | the command's per-trial check (see [`Command`]) |
//!
//! Columns a command does not measure are left empty. Wall-clock time is kept
//! out of the CSV and reported in the summary.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::graph::WeightedCompleteGraph;
use crate::local_search::heavy_edge_floor;
use crate::mst::{
    connectivity_probability_bound, disconnection_frequency, le_tol, mst, snapshot_from_mst, supercritical_threshold,
    KruskalTrace,
};
use crate::oracle::exact_cost_with;
use crate::starpath::{
    default_parameters, full_pipeline, good_sets_trial, path_run_index, pipeline_bound, tail_points,
};
use crate::subgraph::{make_start_graph, SpanningSubgraph, StartKind};
use crate::tree::{wdiam, TreeView};

/// Apéry's constant `ζ(3)`, the limiting MST weight for uniform weights.
#[allow(clippy::excessive_precision)]
pub const ZETA3: f64 = 1.202_056_903_159_594_285_4;

/// `δ = (1 - ε) ε / (4 ζ(3))`.
pub fn delta(epsilon: f64) -> f64 {
    (1.0 - epsilon) * epsilon / (4.0 * ZETA3)
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` under base seed `base`.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    mix(base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Seed of trial `t` at size `n`; distinct sizes draw independent graphs.
pub fn grid_seed(base: u64, n: usize, t: usize) -> u64 {
    trial_seed(trial_seed(base, n as u64), t as u64)
}

/// Experiment commands. The `holds` column records:
///
/// - `zeta3`: nothing;
/// - `upper`: `wt_max <= ρ* + ε`;
/// - `lower`: the floor audit, `floor_ratio >= δ` unless `heavy_count < ε n / 2`
///   or `mst_weight > 2 ζ(3)`;
/// - `wdiam-scan` and `appendix`: `wdiam <= p (|T_max| - 1) + 2 W_n L_np`;
/// - `coupling`: the Kruskal trace keeps forest and graph components equal at every step;
/// - `run-index`: a run was found;
/// - `good-sets`: every region of the U-sequence has MST diameter at most `ε`;
/// - `oracle`: `exact_cost <= wt_max` and the pipeline reached the MST;
/// - `pipeline`: `wt_max` is within the per-phase bound of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Zeta3,
    Upper,
    Lower,
    WdiamScan,
    Coupling,
    Appendix,
    RunIndex,
    GoodSets,
    Oracle,
    Pipeline,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Zeta3,
        Command::Upper,
        Command::Lower,
        Command::WdiamScan,
        Command::Coupling,
        Command::Appendix,
        Command::RunIndex,
        Command::GoodSets,
        Command::Oracle,
        Command::Pipeline,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Zeta3 => "zeta3",
            Command::Upper => "upper",
            Command::Lower => "lower",
            Command::WdiamScan => "wdiam-scan",
            Command::Coupling => "coupling",
            Command::Appendix => "appendix",
            Command::RunIndex => "run-index",
            Command::GoodSets => "good-sets",
            Command::Oracle => "oracle",
            Command::Pipeline => "pipeline",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown command {s:?}")))
    }
}

/// Parameters of one campaign. The file form is one `key = value` per line,
/// with the keys named like the fields; `#` starts a comment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Distribution in the syntax accepted by [`Distribution::from_str`], kept verbatim.
    pub dist: String,
    pub epsilon: f64,
    pub start: StartKind,
    /// Threshold for `appendix`; defaults to `1/n + 1/n^{11/10}`.
    pub p: Option<f64>,
    /// Run parameters for `run-index` and `good-sets`; default to `1/ln n` and `max(2, ⌊ln ln n⌋)`.
    pub w: Option<f64>,
    pub l: Option<usize>,
    /// Lets `oracle` search `n = 7`.
    pub force: bool,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Defaults for everything except the seed, which must always be given.
    pub fn new(command: Command, seed: u64) -> Self {
        ExperimentConfig {
            command,
            n: vec![100],
            trials: 100,
            seed,
            dist: "uniform".into(),
            epsilon: 0.2,
            start: StartKind::Path,
            p: None,
            w: None,
            l: None,
            force: false,
            out: None,
            summary: None,
        }
    }

    pub fn distribution(&self) -> Result<Distribution> {
        self.dist.parse()
    }

    /// Sets `key` from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let bad = |what: &str| Error::Parse(format!("bad {what} {value:?}"));
        match key.trim() {
            "command" => self.command = value.parse()?,
            "n" => {
                self.n = value
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| bad("n")))
                    .collect::<Result<Vec<_>>>()?
            }
            "trials" => self.trials = value.parse().map_err(|_| bad("trials"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "dist" => {
                value.parse::<Distribution>()?;
                self.dist = value.to_string();
            }
            "epsilon" => self.epsilon = value.parse().map_err(|_| bad("epsilon"))?,
            "start" => self.start = value.parse()?,
            "p" => self.p = Some(value.parse().map_err(|_| bad("p"))?),
            "w" => self.w = Some(value.parse().map_err(|_| bad("w"))?),
            "l" => self.l = Some(value.parse().map_err(|_| bad("l"))?),
            "force" => self.force = value.parse().map_err(|_| bad("force"))?,
            "out" => self.out = Some(value.into()),
            "summary" => self.summary = Some(value.into()),
            other => return Err(Error::Parse(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Parses the file form. `command` and `seed` are required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            pairs.push((k.trim(), v.trim()));
        }
        let find = |key: &str| pairs.iter().rev().find(|(k, _)| *k == key).map(|&(_, v)| v);
        let command = find("command").ok_or_else(|| Error::Parse("missing command".into()))?.parse()?;
        let seed = find("seed")
            .ok_or_else(|| Error::Parse("missing seed".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad seed".into()))?;
        let mut cfg = ExperimentConfig::new(command, seed);
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let n: Vec<String> = self.n.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "n = {}", n.join(","));
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "dist = {}", self.dist);
        let _ = writeln!(s, "epsilon = {}", self.epsilon);
        let _ = writeln!(s, "start = {}", self.start);
        if let Some(p) = self.p {
            let _ = writeln!(s, "p = {p}");
        }
        if let Some(w) = self.w {
            let _ = writeln!(s, "w = {w}");
        }
        if let Some(l) = self.l {
            let _ = writeln!(s, "l = {l}");
        }
        if self.force {
            let _ = writeln!(s, "force = true");
        }
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        if let Some(summary) = &self.summary {
            let _ = writeln!(s, "summary = {}", summary.display());
        }
        s
    }

    fn validate(&self) -> Result<()> {
        if self.n.is_empty() || self.n.iter().any(|&n| n < 2) {
            return Err(Error::InvalidParameter(format!("every n must be at least 2, got {:?}", self.n)));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        self.distribution()?;
        Ok(())
    }

    fn run_parameters(&self, n: usize) -> (f64, usize) {
        let (w, l) = default_parameters(n);
        (self.w.unwrap_or(w), self.l.unwrap_or(l))
    }
}

/// One Monte Carlo observation. `None` fields were not measured by the command.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub mst_weight: Option<f64>,
    pub max_mst_edge: Option<f64>,
    pub wdiam: Option<f64>,
    pub wt_max: Option<f64>,
    pub exact_cost: Option<f64>,
    pub heavy_count: Option<usize>,
    pub floor_ratio: Option<f64>,
    pub run_index: Option<usize>,
    pub reached_mst: Option<bool>,
    pub holds: Option<bool>,
    /// Wall-clock seconds; not part of the CSV.
    #[serde(skip)]
    pub seconds: f64,
}

pub const CSV_HEADER: &str =
    "trial,seed,n,mst_weight,max_mst_edge,wdiam,wt_max,exact_cost,heavy_count,floor_ratio,run_index,reached_mst,holds";

fn cell<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, T::to_string)
}

impl TrialRecord {
    pub fn csv_row(&self) -> String {
        [
            self.trial.to_string(),
            self.seed.to_string(),
            self.n.to_string(),
            cell(&self.mst_weight),
            cell(&self.max_mst_edge),
            cell(&self.wdiam),
            cell(&self.wt_max),
            cell(&self.exact_cost),
            cell(&self.heavy_count),
            cell(&self.floor_ratio),
            cell(&self.run_index),
            cell(&self.reached_mst),
            cell(&self.holds),
        ]
        .join(",")
    }

    fn with_mst(mut self, g: &WeightedCompleteGraph, tree: &SpanningSubgraph) -> Result<Self> {
        let view = TreeView::new(g, tree)?;
        self.mst_weight = Some(view.total_weight());
        self.max_mst_edge = Some(tree.edges().into_iter().map(|(u, v)| g.weight(u, v)).fold(0.0, f64::max));
        self.wdiam = Some(wdiam(&view));
        Ok(self)
    }
}

/// The records of a campaign and its JSON summary.
#[derive(Clone, Debug)]
pub struct Report {
    pub records: Vec<TrialRecord>,
    pub summary: Value,
}

impl Report {
    pub fn csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.records.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        s
    }
}

fn start_graph(kind: StartKind, g: &WeightedCompleteGraph, seed: u64) -> Result<SpanningSubgraph> {
    match kind {
        StartKind::Mst => Ok(mst(g)),
        // the random tree uses its own stream of the trial seed
        k => make_start_graph(&k, g.n(), seed),
    }
}

fn run_trial(cfg: &ExperimentConfig, dist: &Distribution, n: usize, trial: usize) -> Result<TrialRecord> {
    let clock = Instant::now();
    let seed = grid_seed(cfg.seed, n, trial);
    let base = TrialRecord { trial, seed, n, ..TrialRecord::default() };
    let eps = cfg.epsilon;
    let mut r = match cfg.command {
        Command::RunIndex => {
            let (w, l) = cfg.run_parameters(n);
            let run = path_run_index(n, w, l, seed)?;
            TrialRecord { run_index: Some(run.i), holds: Some(run.found()), ..base }
        }
        Command::GoodSets => {
            let (w, l) = cfg.run_parameters(n);
            let (run, exceeded) = good_sets_trial(n, w, l, eps, seed)?;
            TrialRecord { run_index: Some(run.i), holds: Some(!exceeded), ..base }
        }
        command => {
            let g = WeightedCompleteGraph::sample(n, dist, seed)?;
            let rho = g.weight_cap();
            let tree = mst(&g);
            let r = base.with_mst(&g, &tree)?;
            match command {
                Command::Zeta3 => r,
                Command::Upper | Command::Pipeline => {
                    let h = start_graph(cfg.start, &g, seed)?;
                    let p = full_pipeline(&g, &h)?;
                    let wt = p.wt_max();
                    let holds =
                        if command == Command::Upper { wt <= rho + eps } else { le_tol(wt, pipeline_bound(&g, &p)) };
                    TrialRecord {
                        wt_max: Some(wt),
                        run_index: p.run.map(|run| run.i),
                        reached_mst: Some(p.reached_mst()),
                        holds: Some(holds),
                        ..r
                    }
                }
                Command::Lower => {
                    let h = start_graph(cfg.start, &g, seed)?;
                    let floor = heavy_edge_floor(&g, &h, eps)?;
                    let mst_weight = r.mst_weight.expect("measured");
                    let ratio = floor.weight_floor / (n as f64 * mst_weight);
                    let premise = floor.count as f64 >= eps * n as f64 / 2.0 && mst_weight <= 2.0 * ZETA3;
                    TrialRecord {
                        heavy_count: Some(floor.count),
                        floor_ratio: Some(ratio),
                        holds: Some(!premise || ratio >= delta(eps)),
                        ..r
                    }
                }
                Command::WdiamScan | Command::Appendix => {
                    let p = cfg.p.unwrap_or_else(|| supercritical_threshold(n));
                    let snap = snapshot_from_mst(&g, &tree, p);
                    let holds = r.wdiam.expect("measured") <= snap.mst_upper_rhs();
                    TrialRecord { holds: Some(holds), ..r }
                }
                Command::Coupling => {
                    let trace = KruskalTrace::new(&g);
                    TrialRecord { holds: Some(trace.check_coupling().is_ok() && trace.final_tree() == tree), ..r }
                }
                Command::Oracle => {
                    let h = start_graph(cfg.start, &g, seed)?;
                    let exact = exact_cost_with(&g, &h, cfg.force)?;
                    let p = full_pipeline(&g, &h)?;
                    let wt = p.wt_max();
                    TrialRecord {
                        wt_max: Some(wt),
                        exact_cost: Some(exact),
                        run_index: p.run.map(|run| run.i),
                        reached_mst: Some(p.reached_mst()),
                        holds: Some(p.reached_mst() && le_tol(exact, wt)),
                        ..r
                    }
                }
                Command::RunIndex | Command::GoodSets => unreachable!(),
            }
        }
    };
    r.seconds = clock.elapsed().as_secs_f64();
    Ok(r)
}

/// Order statistics of a sample.
#[derive(Clone, Debug, Serialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub median: f64,
    pub p95: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Stats> {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let count = v.len();
        let mean = v.iter().sum::<f64>() / count as f64;
        let var = if count > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64 } else { 0.0 };
        let q = |f: f64| v[((f * count as f64).ceil() as usize).clamp(1, count) - 1];
        let median = if count % 2 == 1 { v[count / 2] } else { 0.5 * (v[count / 2 - 1] + v[count / 2]) };
        Some(Stats { count, mean, sd: var.sqrt(), min: v[0], median, p95: q(0.95), max: v[count - 1] })
    }
}

fn column_stats(records: &[&TrialRecord], f: impl Fn(&TrialRecord) -> Option<f64>) -> Value {
    json!(Stats::of(records.iter().filter_map(|r| f(r))))
}

fn count_true(records: &[&TrialRecord], f: impl Fn(&TrialRecord) -> Option<bool>) -> usize {
    records.iter().filter(|r| f(r) == Some(true)).count()
}

/// The `k` grid for the run-index tail: powers of two up to the largest
/// meaningful `k`, since `I <= n - L`.
fn tail_grid(n: usize, l: usize) -> Vec<usize> {
    let kmax = (n - l).saturating_sub(1) / l;
    std::iter::successors(Some(1usize), |k| Some(k * 2)).take_while(|&k| k <= kmax).collect()
}

fn summarize_n(cfg: &ExperimentConfig, dist: &Distribution, n: usize, records: &[&TrialRecord]) -> Value {
    let trials = records.len();
    let holds = count_true(records, |r| r.holds);
    let mut v = json!({
        "n": n,
        "trials": trials,
        "holds": holds,
        "holds_fraction": holds as f64 / trials.max(1) as f64,
        "mst_weight": column_stats(records, |r| r.mst_weight),
        "max_mst_edge": column_stats(records, |r| r.max_mst_edge),
        "wdiam": column_stats(records, |r| r.wdiam),
    });
    let obj = v.as_object_mut().expect("object");
    let ln = (n as f64).ln();
    match cfg.command {
        Command::Zeta3 => {
            obj.insert("limit".into(), json!(ZETA3 / dist.density_at_zero()));
        }
        Command::Upper | Command::Pipeline | Command::Oracle => {
            let fraction = holds as f64 / trials.max(1) as f64;
            obj.insert("wt_max".into(), column_stats(records, |r| r.wt_max));
            obj.insert("binomial_sigma".into(), json!((fraction * (1.0 - fraction) / trials.max(1) as f64).sqrt()));
            obj.insert("reached_mst".into(), json!(count_true(records, |r| r.reached_mst)));
            obj.insert("run_found".into(), json!(records.iter().filter(|r| r.run_index.is_some()).count()));
            if cfg.command == Command::Oracle {
                obj.insert("exact_cost".into(), column_stats(records, |r| r.exact_cost));
            }
        }
        Command::Lower => {
            let need = cfg.epsilon * n as f64 / 2.0;
            let enough = records.iter().filter(|r| r.heavy_count.is_some_and(|c| c as f64 >= need)).count();
            obj.insert("heavy_count".into(), column_stats(records, |r| r.heavy_count.map(|c| c as f64)));
            obj.insert("count_threshold".into(), json!(need));
            obj.insert("count_at_least_threshold".into(), json!(enough));
            obj.insert("count_fraction".into(), json!(enough as f64 / trials.max(1) as f64));
            obj.insert("delta".into(), json!(delta(cfg.epsilon)));
            obj.insert("floor_ratio".into(), column_stats(records, |r| r.floor_ratio));
        }
        Command::WdiamScan => {
            obj.insert("tail_bound".into(), json!(7.0 * ln.powi(4) / (n as f64).powf(0.1)));
        }
        Command::Appendix => {
            let cutoff = 3.0 * ln * ln / n as f64;
            let over = records.iter().filter(|r| r.max_mst_edge.is_some_and(|w| w > cutoff)).count();
            // G(n, p) at 4 ln n / n, where the disconnection bound is about 1/n
            let pc = 4.0 * ln / n as f64;
            obj.insert("p".into(), json!(cfg.p.unwrap_or_else(|| supercritical_threshold(n))));
            obj.insert("w_n_cutoff".into(), json!(cutoff));
            obj.insert("w_n_above_cutoff".into(), json!(over as f64 / trials.max(1) as f64));
            obj.insert(
                "connectivity".into(),
                json!({
                    "p": pc,
                    "bound": connectivity_probability_bound(n, pc),
                    "disconnected_fraction": disconnection_frequency(n, pc, trials, trial_seed(cfg.seed, n as u64)),
                }),
            );
        }
        Command::Coupling => {}
        Command::RunIndex | Command::GoodSets => {
            let (w, l) = cfg.run_parameters(n);
            obj.insert("w".into(), json!(w));
            obj.insert("l".into(), json!(l));
            obj.insert("run_index".into(), column_stats(records, |r| r.run_index.map(|i| i as f64)));
            if cfg.command == Command::RunIndex {
                let runs: Vec<usize> = records.iter().filter_map(|r| r.run_index).collect();
                obj.insert("tail".into(), json!(tail_points(&runs, w, l, &tail_grid(n, l))));
            } else {
                obj.insert("bad_fraction".into(), json!((trials - holds) as f64 / trials.max(1) as f64));
            }
        }
    }
    v
}

/// Runs a campaign. Trials run in parallel; records come back in `(n, trial)` order.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let dist = cfg.distribution()?;
    let clock = Instant::now();
    let jobs: Vec<(usize, usize)> = cfg.n.iter().flat_map(|&n| (0..cfg.trials).map(move |t| (n, t))).collect();
    let records = jobs.par_iter().map(|&(n, t)| run_trial(cfg, &dist, n, t)).collect::<Result<Vec<_>>>()?;
    let per_n: Vec<Value> = cfg
        .n
        .iter()
        .map(|&n| {
            let rs: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
            summarize_n(cfg, &dist, n, &rs)
        })
        .collect();
    let summary = json!({
        "config": cfg,
        "build": env!("LOCALMST_GIT_DESCRIBE"),
        "csv_columns": CSV_HEADER.split(',').collect::<Vec<_>>(),
        "trials_run": records.len(),
        "trial_seconds_total": records.iter().map(|r| r.seconds).sum::<f64>(),
        "wall_seconds": clock.elapsed().as_secs_f64(),
        "per_n": per_n,
    });
    Ok(Report { records, summary })
}

/// Runs a campaign and writes the CSV and summary to the configured paths.
pub fn run_and_write(cfg: &ExperimentConfig) -> Result<Report> {
    let report = run(cfg)?;
    if let Some(out) = &cfg.out {
        std::fs::write(out, report.csv())?;
    }
    if let Some(path) = &cfg.summary {
        let text = serde_json::to_string_pretty(&report.summary).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
    }
    Ok(report)
}
