use std::collections::BTreeSet;

use dynnet::graph::{complete_graph, ring_lattice};
use dynnet::mutation::{apply, mutation_by_name, propose_rewire, revert, DoubleEdgeSwap, EndpointRewire};
use dynnet::{Edge, Error, MutationOperator, SimRng, Topology};
use proptest::prelude::*;
use rand::SeedableRng;

fn assert_simple(g: &Topology) {
    let mut seen = BTreeSet::new();
    for e in g.edges() {
        assert!(!e.is_loop(), "self-loop {e}");
        assert!(e.hi() < g.node_count());
        assert!(seen.insert(*e), "duplicate {e}");
    }
    for i in 0..g.node_count() {
        let nb = g.neighbors(i);
        assert!(nb.windows(2).all(|w| w[0] < w[1]));
        assert!(nb.iter().all(|&j| g.contains(i, j) && g.neighbors(j).contains(&i)));
    }
}

#[test]
fn ten_thousand_swaps_preserve_the_degree_sequence() {
    let mut g = ring_lattice(50, 4).unwrap();
    let degrees = g.degrees();
    let mut rng = SimRng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let p = propose_rewire(&g, 1, &mut rng).unwrap();
        assert_eq!(p.removed.len(), 2);
        assert_eq!(p.added.len(), 2);
        let before = g.clone();
        apply(&mut g, &p).unwrap();
        assert_eq!(g.degrees(), degrees);
        assert_eq!(g.edge_count(), 100);
        assert_simple(&g);
        let mut undone = g.clone();
        revert(&mut undone, &p).unwrap();
        assert_eq!(undone, before);
    }
}

#[test]
fn complete_graph_has_no_swap() {
    let mut rng = SimRng::seed_from_u64(1);
    for _ in 0..20 {
        assert!(matches!(propose_rewire(&complete_graph(4), 1, &mut rng), Err(Error::NoValidMove(_))));
    }
}

#[test]
fn same_seed_same_proposals() {
    let g = ring_lattice(30, 4).unwrap();
    let draw = |seed| {
        let mut rng = SimRng::seed_from_u64(seed);
        (0..50).map(|_| propose_rewire(&g, 2, &mut rng).unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(draw(7), draw(7));
    assert_ne!(draw(7), draw(8));
}

#[test]
fn failed_apply_leaves_the_graph_untouched() {
    let mut g = ring_lattice(10, 2).unwrap();
    let before = g.clone();
    let bad = dynnet::MutationProposal {
        removed: vec![Edge::new(0, 1)],
        added: vec![Edge::new(2, 3)],
    };
    assert!(matches!(apply(&mut g, &bad), Err(Error::Integrity(_))));
    assert_eq!(g, before);
}

#[test]
fn endpoint_rewire_keeps_the_edge_count() {
    let op = EndpointRewire::default();
    let mut g = ring_lattice(20, 4).unwrap();
    let mut rng = SimRng::seed_from_u64(3);
    for _ in 0..2000 {
        let p = op.propose(&g, &mut rng).unwrap();
        apply(&mut g, &p).unwrap();
        assert_eq!(g.edge_count(), 40);
        assert_simple(&g);
    }
}

#[test]
fn registry() {
    assert_eq!(mutation_by_name("rewire", 1).unwrap().name(), "rewire");
    assert_eq!(mutation_by_name("rewire_endpoint", 3).unwrap().name(), "rewire_endpoint");
    assert!(matches!(mutation_by_name("shuffle", 1), Err(Error::Config(_))));
    assert!(matches!(mutation_by_name("rewire", 0), Err(Error::Config(_))));
}

proptest! {
    #[test]
    fn multi_swaps_are_net_degree_preserving(seed in any::<u64>(), count in 1usize..6, n in 8usize..30) {
        let g = ring_lattice(n, 4).unwrap();
        let mut rng = SimRng::seed_from_u64(seed);
        let op = DoubleEdgeSwap { count, ..Default::default() };
        let p = op.propose(&g, &mut rng).unwrap();
        prop_assert_eq!(p.removed.len(), p.added.len());
        let mut h = g.clone();
        apply(&mut h, &p).unwrap();
        prop_assert_eq!(h.degrees(), g.degrees());
        revert(&mut h, &p).unwrap();
        prop_assert_eq!(h, g);
    }

    #[test]
    fn swaps_can_disconnect_but_stay_simple(seed in any::<u64>()) {
        // Swaps are not required to keep connectivity; only simplicity.
        let mut g = ring_lattice(12, 2).unwrap();
        let mut rng = SimRng::seed_from_u64(seed);
        for _ in 0..20 {
            let p = propose_rewire(&g, 1, &mut rng).unwrap();
            apply(&mut g, &p).unwrap();
            assert_simple(&g);
        }
    }
}
