use localmst::dist::Distribution;
use localmst::local_search::{check_persistence, cost1_bounds, heavy_edge_floor, phi, run_sequence};
use localmst::mst::mst;
use localmst::subgraph::random_spanning_tree;
use localmst::{OptimizingSequence, SpanningSubgraph, WeightedCompleteGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform(n: usize, seed: u64) -> WeightedCompleteGraph {
    WeightedCompleteGraph::sample(n, &Distribution::UNIFORM, seed).unwrap()
}

/// A connected subgraph: a random spanning tree plus `extra` random edges.
fn connected(n: usize, seed: u64, extra: usize) -> SpanningSubgraph {
    let mut h = random_spanning_tree(n, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            h.insert(u, v);
        }
    }
    h
}

fn random_set(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=n);
    let mut s: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
    s.sort_unstable();
    s.dedup();
    s
}

#[test]
fn one_shot_replacement_of_everything_reaches_the_mst() {
    for seed in 0..20 {
        let g = uniform(15, seed);
        let h = connected(15, seed, 20);
        let all: Vec<usize> = (0..15).collect();
        let trace = run_sequence(&g, &h, &OptimizingSequence::new(vec![all], 15).unwrap()).unwrap();
        assert!(trace.reached_mst);
        assert!((trace.wt_max() - h.weight(&g)).abs() < 1e-12);
    }
}

#[test]
fn disconnected_sets_are_skipped() {
    let g = uniform(5, 0);
    let h = SpanningSubgraph::path(5);
    let out = phi(&g, &h, &[0, 2]).unwrap();
    assert_eq!(out, h);
    let trace = run_sequence(&g, &h, &OptimizingSequence::new(vec![vec![0, 2]], 5).unwrap()).unwrap();
    assert!(!trace.steps[0].applied);
    assert_eq!(trace.steps[0].weight, 0.0);
}

#[test]
fn cost1_bounds_bracket_a_single_shot() {
    for seed in 0..20 {
        let g = uniform(10, seed);
        let h = connected(10, seed, 10);
        let (lo, hi) = cost1_bounds(&g, &h).unwrap();
        assert!(lo <= hi);
        assert!((hi - h.weight(&g)).abs() < 1e-12);
    }
}

#[test]
fn heavy_edges_survive_light_sequences() {
    let n = 60;
    let eps = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..20 {
        let g = uniform(n, seed);
        let h = connected(n, seed, 30);
        let floor = heavy_edge_floor(&g, &h, eps).unwrap();
        let sets: Vec<Vec<usize>> =
            (0..200).map(|_| random_set(&mut rng, 6)).map(|s| s.iter().map(|&v| v * 9 % n).collect()).collect();
        let trace = run_sequence(&g, &h, &OptimizingSequence::new(sets, n).unwrap()).unwrap();
        assert!(floor.retained_by(&trace));
        // the floor counts every heavy edge, each at least the threshold
        assert!(floor.edges.iter().all(|&e| g.weight_at(e) > floor.threshold));
        assert!(floor.weight_floor <= floor.edges.iter().map(|&e| g.weight_at(e)).sum::<f64>());
    }
    // with epsilon at the cap every edge of H counts
    let g = uniform(20, 9);
    let h = connected(20, 9, 5);
    let all = heavy_edge_floor(&g, &h, g.weight_cap()).unwrap();
    assert_eq!(all.count, h.edge_count());
    assert!(heavy_edge_floor(&g, &h, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn phi_is_idempotent_and_never_heavier(n in 2usize..20, seed in any::<u64>(), extra in 0usize..30, pick in any::<u64>()) {
        let g = uniform(n, seed);
        let h = connected(n, seed, extra);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let s = random_set(&mut rng, n);
        let once = phi(&g, &h, &s).unwrap();
        let twice = phi(&g, &once, &s).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.weight(&g) <= h.weight(&g) + 1e-12);
        prop_assert!(once.is_connected());
    }

    #[test]
    fn random_sequences_keep_mst_edges_and_trees(n in 3usize..16, seed in any::<u64>(), extra in 0usize..20, tree in any::<bool>()) {
        let g = uniform(n, seed);
        let h = if tree { random_spanning_tree(n, seed).unwrap() } else { connected(n, seed, extra) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
        let sets: Vec<Vec<usize>> = (0..3 * n).map(|_| random_set(&mut rng, n)).collect();
        let trace = run_sequence(&g, &h, &OptimizingSequence::new(sets, n).unwrap()).unwrap();
        prop_assert_eq!(check_persistence(&trace, &g), None);
        let target = mst(&g);
        // MST edges of the start are all still there
        for (u, v) in h.edges() {
            if target.contains(u, v) {
                prop_assert!(trace.last.contains(u, v));
            }
        }
    }
}
