use localmst::subgraph::random_spanning_tree;
use localmst::witness::{degree_threshold, find_witness, min_witness_size, pivot_ramsey, RamseyOutcome, WitnessKind};
use localmst::SpanningSubgraph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gnp(n: usize, p: f64, seed: u64) -> SpanningSubgraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = SpanningSubgraph::empty(n);
    for v in 1..n {
        for u in 0..v {
            if rng.gen_bool(p) {
                h.insert(u, v);
            }
        }
    }
    h
}

fn is_clique(h: &SpanningSubgraph, vs: &[usize]) -> bool {
    vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| h.contains(a, b)))
}

fn is_independent(h: &SpanningSubgraph, vs: &[usize]) -> bool {
    vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| !h.contains(a, b)))
}

#[test]
fn pivot_argument_on_random_graphs() {
    let all: Vec<usize> = (0..64).collect();
    for seed in 0..300 {
        let p = [0.1, 0.5, 0.9][seed as usize % 3];
        let h = gnp(64, p, seed);
        let out = pivot_ramsey(&h, &all);
        // each pivot keeps at least half of the remaining candidates
        assert!(out.vertices().len() >= 4, "seed {seed}: {out:?}");
        match &out {
            RamseyOutcome::Clique(c) => assert!(is_clique(&h, c)),
            RamseyOutcome::Independent(s) => assert!(is_independent(&h, s)),
        }
    }
}

#[test]
fn threshold_values() {
    assert!((degree_threshold(1 << 16) - 16.0).abs() < 1e-9);
    assert!((degree_threshold(256) - 2f64.powf(8.0 / 8f64.sqrt())).abs() < 1e-9);
    assert_eq!(min_witness_size(1 << 16), 2);
    assert_eq!(min_witness_size((1 << 16) + 1), 3);
}

#[test]
fn witness_kinds_on_canonical_shapes() {
    for n in [2, 3, 10, 50] {
        let w = find_witness(&SpanningSubgraph::path(n)).unwrap();
        assert_eq!((w.kind, w.len()), (WitnessKind::Path, n));
        let k = find_witness(&SpanningSubgraph::complete(n)).unwrap();
        assert_eq!(k.len(), n);
    }
    let s = find_witness(&SpanningSubgraph::star(40)).unwrap();
    assert_eq!(s.kind, WitnessKind::Star);
    assert_eq!(s.vertices, (0..40).collect::<Vec<_>>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn witnesses_are_certified_and_large_enough(n in 2usize..80, seed in any::<u64>(), dense in 0.0f64..0.6) {
        let mut h = random_spanning_tree(n, seed).unwrap();
        let extra = gnp(n, dense, seed);
        for (u, v) in extra.edges() {
            h.insert(u, v);
        }
        let w = find_witness(&h).unwrap();
        prop_assert!(w.certify(&h));
        prop_assert!(w.len() >= min_witness_size(n));
        if w.kind == WitnessKind::Star {
            prop_assert_eq!(w.center(), w.vertices.last().copied());
        }
    }

    #[test]
    fn ramsey_outcome_is_valid(m in 1usize..64, seed in any::<u64>(), p in 0.0f64..1.0) {
        let h = gnp(64, p, seed);
        let vs: Vec<usize> = (0..m).collect();
        let out = pivot_ramsey(&h, &vs);
        let size = out.vertices().len();
        prop_assert!(size as f64 >= 0.5 * ((m + 1) as f64).log2());
        match &out {
            RamseyOutcome::Clique(c) => prop_assert!(is_clique(&h, c)),
            RamseyOutcome::Independent(s) => prop_assert!(is_independent(&h, s)),
        }
    }
}
