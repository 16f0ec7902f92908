//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::VecDeque;
use std::process::{Command as Process, ExitCode};
use std::time::Instant;

use localmst::dist::Distribution;
use localmst::eating::{absorb_vertex, bfs_increment_order, eat, remove_cycles};
use localmst::experiments::{run, Command, ExperimentConfig};
use localmst::local_search::{check_persistence, phi, run_sequence, OptimizingSequence, SequenceTrace};
use localmst::mst::{alpha, check_reduced_mst_bound, le_tol, mst, mst_edges_of_subset, KruskalTrace};
use localmst::oracle::exact_cost;
use localmst::starpath::full_pipeline;
use localmst::subgraph::{random_spanning_tree, StartKind};
use localmst::tree::{wdiam, TreeView};
use localmst::witness::{find_witness, min_witness_size};
use localmst::{edge_endpoints, SpanningSubgraph, WeightedCompleteGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn uniform(n: usize, seed: u64) -> WeightedCompleteGraph {
    WeightedCompleteGraph::sample(n, &Distribution::UNIFORM, seed).unwrap()
}

fn add_random_edges(h: &mut SpanningSubgraph, rng: &mut ChaCha8Rng, count: usize) {
    let n = h.n();
    for _ in 0..count {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            h.insert(u, v);
        }
    }
}

fn per_n(summary: &Value) -> &Vec<Value> {
    summary["per_n"].as_array().expect("per_n")
}

/// Every construction ends at the MST and never beats the exact cost.
fn oracle_equivalence() -> Outcome {
    let clock = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for (n, count) in [(5usize, 200u64), (6, 50)] {
        for i in 0..count {
            let seed = SEED ^ (n as u64) << 32 ^ i;
            let g = uniform(n, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let target = mst(&g);
            let mut check = |name: &str, h: &SpanningSubgraph, trace: &SequenceTrace| {
                checked += 1;
                let exact = exact_cost(&g, h).unwrap();
                if !trace.reached_mst || trace.last != target || !le_tol(exact, trace.wt_max()) {
                    failures.push(format!("{name} n={n} seed={seed}: exact {exact} vs wt {}", trace.wt_max()));
                }
            };

            let mut start = random_spanning_tree(n, seed).unwrap();
            add_random_edges(&mut start, &mut rng, n);
            check("full_pipeline", &start, &full_pipeline(&g, &start).unwrap().trace);

            let root = rng.gen_range(0..n);
            let order = bfs_increment_order(&start, &[root]).unwrap();
            check("eat", &start, &eat(&g, &start, &[root], &order).unwrap());

            // MST on all but one vertex, joined to it by one or more edges
            let t = rng.gen_range(0..n);
            let rest: Vec<usize> = (0..n).filter(|&v| v != t).collect();
            let mut h = SpanningSubgraph::from_pairs(n, mst_edges_of_subset(&g, &rest)).unwrap();
            for _ in 0..rng.gen_range(1..n) {
                h.insert(t, rest[rng.gen_range(0..rest.len())]);
            }
            check("absorb_vertex", &h, &absorb_vertex(&g, &h, t).unwrap());

            let mut h = target.clone();
            add_random_edges(&mut h, &mut rng, 2 * n);
            check("remove_cycles", &h, &remove_cycles(&g, &h).unwrap());
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    let pass = failures.is_empty() && secs <= 120.0;
    let mut detail = format!("{checked} traces, {} violations, {secs:.1}s (limit 120s)", failures.len());
    if let Some(f) = failures.first() {
        detail += &format!("; first: {f}");
    }
    outcome(pass, detail)
}

fn bfs_labels(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    let mut label = vec![usize::MAX; n];
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &adj[v] {
                if label[w] == usize::MAX {
                    label[w] = s;
                    q.push_back(w);
                }
            }
        }
    }
    label
}

fn forest_labels(f: &SpanningSubgraph) -> Vec<usize> {
    let adj: Vec<Vec<usize>> = (0..f.n()).map(|v| f.neighbors(v).collect()).collect();
    bfs_labels(f.n(), &adj)
}

/// Kruskal's forest against an independently grown threshold graph, step by step.
fn coupling() -> Outcome {
    let n = 50;
    let mut steps = 0;
    let mut violations = 0;
    for s in 0..20u64 {
        let g = uniform(n, SEED + s);
        let trace = KruskalTrace::new(&g);
        let mut sorted: Vec<usize> = (0..n * (n - 1) / 2).collect();
        sorted.sort_by(|&a, &b| g.weight_at(a).total_cmp(&g.weight_at(b)).then(a.cmp(&b)));
        let mut adj = vec![Vec::new(); n];
        let mut expected = SpanningSubgraph::empty(n);
        for i in 1..=sorted.len() {
            // an edge enters the forest iff lighter edges do not already join its ends
            let (u, v) = edge_endpoints(sorted[i - 1]);
            if bfs_labels(n, &adj)[u] != bfs_labels(n, &adj)[v] {
                expected.insert(u, v);
            }
            adj[u].push(v);
            adj[v].push(u);
            let forest = trace.forest_at(i);
            steps += 1;
            if forest != expected || forest_labels(&forest) != bfs_labels(n, &adj) {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("{steps} steps over 20 seeds at n={n}, {violations} violations"))
}

fn zeta3() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (dist, limit) in [("uniform", 1.20206), ("uniform:0.5", 0.60103)] {
        let mut cfg = ExperimentConfig::new(Command::Zeta3, SEED);
        cfg.n = vec![1000];
        cfg.trials = 50;
        cfg.dist = dist.into();
        let report = run(&cfg).unwrap();
        let mean = per_n(&report.summary)[0]["mst_weight"]["mean"].as_f64().unwrap();
        pass &= (mean - limit).abs() <= 0.05;
        parts.push(format!("{dist}: mean {mean:.4} vs {limit}"));
    }
    outcome(pass, parts.join("; "))
}

fn upper_trend() -> Outcome {
    let clock = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for start in StartKind::ALL_STRUCTURED {
        let mut cfg = ExperimentConfig::new(Command::Upper, SEED);
        cfg.n = vec![50, 100, 200, 400];
        cfg.trials = 100;
        cfg.epsilon = 0.2;
        cfg.start = start;
        let report = run(&cfg).unwrap();
        let rows = per_n(&report.summary);
        let frac: Vec<f64> = rows.iter().map(|r| r["holds_fraction"].as_f64().unwrap()).collect();
        let sigma: Vec<f64> = rows.iter().map(|r| r["binomial_sigma"].as_f64().unwrap()).collect();
        let monotone = (1..frac.len()).all(|k| frac[k] >= frac[k - 1] - 2.0 * sigma[k].hypot(sigma[k - 1]));
        let ok = frac[3] >= 0.9 && monotone;
        pass &= ok;
        let shown: Vec<String> = frac.iter().map(|f| format!("{f:.2}")).collect();
        parts.push(format!("{start}: [{}]{}", shown.join(" "), if ok { "" } else { " x" }));
    }
    let secs = clock.elapsed().as_secs_f64();
    pass &= secs <= 600.0;
    outcome(pass, format!("success at n=50..400: {}; {secs:.0}s (limit 600s)", parts.join(", ")))
}

fn lower_floor() -> Outcome {
    let mut cfg = ExperimentConfig::new(Command::Lower, SEED);
    cfg.n = vec![400];
    cfg.trials = 1000;
    cfg.epsilon = 0.2;
    let report = run(&cfg).unwrap();
    let row = &per_n(&report.summary)[0];
    let fraction = row["count_fraction"].as_f64().unwrap();
    let audited = report.records.iter().all(|r| r.holds == Some(true));
    outcome(
        fraction >= 0.95 && audited,
        format!(
            "count >= 40 in {:.1}% of trials, ratio >= delta={:.4} in every qualifying trial: {audited}",
            100.0 * fraction,
            row["delta"].as_f64().unwrap()
        ),
    )
}

fn wdiam_decay() -> Outcome {
    let mut cfg = ExperimentConfig::new(Command::WdiamScan, SEED);
    cfg.n = vec![200, 1000, 5000];
    cfg.trials = 50;
    let report = run(&cfg).unwrap();
    let medians: Vec<f64> = per_n(&report.summary).iter().map(|r| r["wdiam"]["median"].as_f64().unwrap()).collect();
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    let violations = report.records.iter().filter(|r| r.holds != Some(true)).count();
    outcome(
        decreasing && violations == 0,
        format!("medians {medians:.4?}, {violations} inequality violations in {} trials", report.records.len()),
    )
}

fn run_index_tail() -> Outcome {
    let mut cfg = ExperimentConfig::new(Command::RunIndex, SEED);
    cfg.n = vec![10_000];
    cfg.trials = 10_000;
    let report = run(&cfg).unwrap();
    let row = &per_n(&report.summary)[0];
    let tail = row["tail"].as_array().unwrap();
    let bad: Vec<u64> = tail.iter().filter(|t| t["within"] != true).map(|t| t["k"].as_u64().unwrap()).collect();
    outcome(
        bad.is_empty() && !tail.is_empty(),
        format!(
            "W={:.4}, L={}, {} grid points, exceeding k: {bad:?}",
            row["w"].as_f64().unwrap(),
            row["l"],
            tail.len()
        ),
    )
}

fn random_set(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..rng.gen_range(1..=n)).map(|_| rng.gen_range(0..n)).collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Randomized property suites, 1000 cases each.
fn properties() -> Outcome {
    const CASES: u64 = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failed: Vec<&str> = Vec::new();
    let mut fail = |name: &'static str, ok: bool| {
        if !ok && !failed.contains(&name) {
            failed.push(name);
        }
    };
    let mut subtree_cases = 0;
    for case in 0..CASES {
        let seed = SEED.wrapping_mul(31).wrapping_add(case);
        let n = rng.gen_range(3..20);
        let g = uniform(n, seed);
        let mut h = random_spanning_tree(n, seed).unwrap();
        let extra = rng.gen_range(0..2 * n);
        add_random_edges(&mut h, &mut rng, extra);

        let s = random_set(&mut rng, n);
        let once = phi(&g, &h, &s).unwrap();
        fail("phi idempotent", phi(&g, &once, &s).unwrap() == once);
        fail("phi monotone", once.weight(&g) <= h.weight(&g) + 1e-12);

        let sets: Vec<Vec<usize>> = (0..2 * n).map(|_| random_set(&mut rng, n)).collect();
        let trace = run_sequence(&g, &h, &OptimizingSequence::new(sets, n).unwrap()).unwrap();
        fail("persistence", check_persistence(&trace, &g).is_none());
        let p = full_pipeline(&g, &h).unwrap();
        fail("persistence", check_persistence(&p.trace, &g).is_none());

        // a random subtree of a random spanning tree, with some weights lowered
        let tree = random_spanning_tree(n, seed ^ 1).unwrap();
        let root = rng.gen_range(0..n);
        let size = rng.gen_range(2..=n);
        let mut inside = vec![root];
        let mut edges = Vec::new();
        while inside.len() < size {
            let cand: Vec<(usize, usize)> = inside
                .iter()
                .flat_map(|&a| tree.neighbors(a).map(move |b| (a, b)))
                .filter(|(_, b)| !inside.contains(b))
                .collect();
            let (a, b) = cand[rng.gen_range(0..cand.len())];
            inside.push(b);
            edges.push((a.min(b), a.max(b)));
        }
        let mut reduced = Vec::new();
        for &(a, b) in &edges {
            if rng.gen_bool(0.6) {
                reduced.push((localmst::edge_index(a, b), g.weight(a, b) * rng.gen::<f64>()));
            }
        }
        let report = check_reduced_mst_bound(&g, &edges, &reduced).unwrap();
        subtree_cases += usize::from(report.rhs_subtree_case.is_some());
        fail("reduced MST", report.holds);

        let eps = 10f64.powf(-4.0 + 2.0 * case as f64 / (CASES - 1) as f64);
        let a = alpha(1.0 + eps);
        fail("alpha bracket", 1.5 * eps <= a && a <= 2.0 * eps);

        let w = find_witness(&h).unwrap();
        fail("witness", w.certify(&h) && w.len() >= min_witness_size(n));

        let m = rng.gen_range(2..=64);
        let gm = uniform(m, seed);
        let t = if case % 2 == 0 { mst(&gm) } else { random_spanning_tree(m, seed).unwrap() };
        let view = TreeView::new(&gm, &t).unwrap();
        let slow = (0..m).flat_map(|s| view.distances_from(s)).fold(0.0, f64::max);
        fail("double sweep", (wdiam(&view) - slow).abs() <= 1e-12 * slow.max(1.0));
    }
    outcome(
        failed.is_empty(),
        format!("{CASES} cases per suite ({subtree_cases} with the subtree form), failing suites: {failed:?}"),
    )
}

/// Runs every command twice through the binary from one config file.
fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_localmst");
    let mut differing = Vec::new();
    for command in Command::ALL {
        let mut cfg = ExperimentConfig::new(command, SEED);
        cfg.n = if command == Command::Oracle { vec![4, 5] } else { vec![30, 60] };
        cfg.trials = 10;
        let path = dir.path().join(format!("{command}.conf"));
        std::fs::write(&path, cfg.to_text()).unwrap();
        let mut outputs = Vec::new();
        for attempt in 0..2 {
            let out = dir.path().join(format!("{command}-{attempt}.csv"));
            let status = Process::new(bin)
                .arg(command.name())
                .arg("--config")
                .arg(&path)
                .arg("--out")
                .arg(&out)
                .arg("--summary")
                .arg(dir.path().join("summary.json"))
                .status()
                .unwrap();
            outputs.push(if status.success() { std::fs::read(&out).ok() } else { None });
        }
        if outputs[0].is_none() || outputs[0] != outputs[1] {
            differing.push(command.name());
        }
    }
    outcome(differing.is_empty(), format!("{} commands, differing or failing: {differing:?}", Command::ALL.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 Kruskal/ER coupling", coupling),
        ("3 zeta(3) limit", zeta3),
        ("4 upper-bound trend", upper_trend),
        ("5 heavy-edge floor", lower_floor),
        ("6 wdiam decay", wdiam_decay),
        ("7 run-index tail", run_index_tail),
        ("8 property suites", properties),
        ("9 reproducibility", reproducibility),
    ];
    let mut all = true;
    for (name, check) in criteria {
        let o = check();
        all &= o.pass;
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
