mod common;

use common::{edges, graph_kb, hop_distances, person, PERSONS};
use ontorec::cop::{identify_cop, spread_activation, RelationWeights};
use ontorec::kb::{KbBuilder, RelationType};
use proptest::prelude::*;

fn weights() -> impl Strategy<Value = RelationWeights> {
    prop::collection::vec(0.0..=1.0f64, 5)
        .prop_map(|ws| RelationWeights::new(RelationType::ALL.into_iter().zip(ws)).unwrap())
}

proptest! {
    #[test]
    fn zero_weight_is_edge_deletion(
        es in edges(30),
        w in weights(),
        dropped in prop::sample::select(RelationType::ALL.to_vec()),
        seed in 0..PERSONS,
        depth in 1..5usize,
    ) {
        let zeroed = RelationWeights::new(w.iter().map(|(r, x)| (r, if r == dropped { 0.0 } else { x }))).unwrap();
        let full = graph_kb(&es);
        let kept: Vec<_> = es.iter().copied().filter(|(r, _, _)| *r != dropped).collect();
        let pruned = graph_kb(&kept);
        let a = identify_cop(&full, &person(seed), &zeroed, depth).unwrap();
        let b = identify_cop(&pruned, &person(seed), &w, depth).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn results_are_normalised(es in edges(30), w in weights(), seed in 0..PERSONS, depth in 1..5usize) {
        let kb = graph_kb(&es);
        let cop = identify_cop(&kb, &person(seed), &w, depth).unwrap();
        if let Some(first) = cop.entries.first() {
            prop_assert_eq!(first.relevance, 1.0);
            prop_assert!(cop.entries.iter().all(|e| e.relevance > 0.0 && e.relevance <= 1.0));
            prop_assert!(cop.entries.windows(2).all(|p| p[0].relevance >= p[1].relevance));
        }
        prop_assert!(cop.relevance(&person(seed)).is_none());
    }

    #[test]
    fn activation_is_bounded(es in edges(40), w in weights(), seed in 0..PERSONS, depth in 1..5usize) {
        let kb = graph_kb(&es);
        let run = spread_activation(&kb, &person(seed), &w, depth).unwrap();
        let mut degree = std::collections::BTreeMap::<&str, usize>::new();
        for r in kb.relations().iter().filter(|r| w.get(r.rel_type) > 0.0) {
            *degree.entry(&r.source).or_default() += 1;
            *degree.entry(&r.target).or_default() += 1;
        }
        let max_degree = degree.values().copied().max().unwrap_or(0) as f64;
        let max_weight = w.iter().map(|(_, x)| x).fold(0.0, f64::max);
        let bound = (max_degree * max_weight).max(1.0).powi(depth as i32);
        prop_assert!(run.activation.values().all(|a| *a <= bound * (1.0 + 1e-12)));
        prop_assert!(run.expanded <= kb.entity_count() + kb.forest().len());
    }

    #[test]
    fn nobody_beyond_max_depth(es in edges(30), w in weights(), seed in 0..PERSONS, depth in 1..5usize) {
        let kb = graph_kb(&es);
        let hops = hop_distances(&kb, &person(seed), |r| w.get(r) > 0.0);
        let cop = identify_cop(&kb, &person(seed), &w, depth).unwrap();
        for e in &cop.entries {
            prop_assert!(hops[&e.person] <= depth);
        }
        let run = spread_activation(&kb, &person(seed), &w, depth).unwrap();
        prop_assert!(run.level.values().all(|l| *l <= depth));
        for (node, level) in &run.level {
            prop_assert_eq!(hops[node], *level);
        }
    }
}

#[test]
fn long_cycle_stops_at_max_depth() {
    // p0 - p1 - ... - p7 - p0 by supervision.
    let mut b = KbBuilder::default();
    for i in 0..8 {
        b.person(&person(i));
    }
    for i in 0..8 {
        b.link(&person(i), RelationType::Supervises, &person((i + 1) % 8));
    }
    let kb = b.build().unwrap();
    for depth in 1..=3 {
        let cop = identify_cop(&kb, "p0", &RelationWeights::standard(), depth).unwrap();
        assert_eq!(cop.len(), 2 * depth);
        // p4 is four hops away either way round.
        assert!(cop.relevance("p4").is_none());
    }
    let full = identify_cop(&kb, "p0", &RelationWeights::standard(), 4).unwrap();
    assert!(full.relevance("p4").is_some());
}
