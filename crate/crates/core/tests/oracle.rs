use localmst::dist::Distribution;
use localmst::eating::{absorb_vertex, bfs_increment_order, eat, remove_cycles};
use localmst::mst::{le_tol, mst};
use localmst::oracle::{exact_cost, exact_cost_by_threshold, exact_cost_with, reachable_under};
use localmst::starpath::full_pipeline;
use localmst::subgraph::random_spanning_tree;
use localmst::{SpanningSubgraph, WeightedCompleteGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform(n: usize, seed: u64) -> WeightedCompleteGraph {
    WeightedCompleteGraph::sample(n, &Distribution::UNIFORM, seed).unwrap()
}

/// A connected start: random tree plus a few random extra edges.
fn start(n: usize, seed: u64) -> SpanningSubgraph {
    let mut h = random_spanning_tree(n, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(!seed);
    for _ in 0..rng.gen_range(0..n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            h.insert(u, v);
        }
    }
    h
}

#[test]
fn triangle_threshold() {
    // path 1-2-3 with the chord lightest: the only useful step replaces the whole triangle
    let g = WeightedCompleteGraph::from_weights(3, vec![0.5, 0.1, 0.4]).unwrap();
    let h = SpanningSubgraph::path(3);
    let c = exact_cost(&g, &h).unwrap();
    assert!((c - 0.9).abs() < 1e-12);
    assert!(!reachable_under(&g, &h, c - 1e-9).unwrap());
    assert!(reachable_under(&g, &h, c).unwrap());
}

#[test]
fn exact_cost_of_the_mst_is_zero() {
    for seed in 0..20 {
        let g = uniform(6, seed);
        assert_eq!(exact_cost(&g, &mst(&g)).unwrap(), 0.0);
    }
}

#[test]
fn searches_agree_and_bound_every_construction() {
    for seed in 0..100 {
        let g = uniform(5, seed);
        let h = start(5, seed);
        let c = exact_cost(&g, &h).unwrap();
        assert_eq!(c, exact_cost_by_threshold(&g, &h).unwrap(), "seed {seed}");
        assert!(reachable_under(&g, &h, h.weight(&g)).unwrap());
        let p = full_pipeline(&g, &h).unwrap();
        assert!(p.reached_mst());
        assert!(le_tol(c, p.wt_max()));
    }
}

#[test]
fn constructions_on_complete_starts() {
    for seed in 0..50 {
        let g = uniform(6, seed);
        let c = exact_cost(&g, &SpanningSubgraph::complete(6)).unwrap();
        let t = remove_cycles(&g, &SpanningSubgraph::complete(6)).unwrap();
        assert!(t.reached_mst);
        assert!(le_tol(c, t.wt_max()));
        let tree = random_spanning_tree(6, seed).unwrap();
        let order = bfs_increment_order(&tree, &[0]).unwrap();
        let e = eat(&g, &tree, &[0], &order).unwrap();
        assert!(e.reached_mst);
        assert!(le_tol(exact_cost(&g, &tree).unwrap(), e.wt_max()));
    }
}

#[test]
fn absorbing_the_last_vertex() {
    for seed in 0..50 {
        let g = uniform(6, seed);
        // MST on the first five vertices plus two edges to the sixth
        let mut h = SpanningSubgraph::empty(6);
        let sub = mst(&WeightedCompleteGraph::from_weights(5, (0..10).map(|e| g.weight_at(e)).collect()).unwrap());
        for (u, v) in sub.edges() {
            h.insert(u, v);
        }
        h.insert(5, seed as usize % 5);
        h.insert(5, (seed as usize + 2) % 5);
        let t = absorb_vertex(&g, &h, 5).unwrap();
        assert!(t.reached_mst);
        assert!(le_tol(exact_cost(&g, &h).unwrap(), t.wt_max()));
    }
}

#[test]
fn size_limits() {
    let g = uniform(7, 1);
    assert!(exact_cost(&g, &SpanningSubgraph::path(7)).is_err());
    let forced = exact_cost_with(&g, &SpanningSubgraph::path(7), true).unwrap();
    assert!(forced <= SpanningSubgraph::path(7).weight(&g) + 1e-12);
}
