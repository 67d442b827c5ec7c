#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use chrono::NaiveDate;
use ontorec::kb::{Entity, EntityKind, KbBuilder, Relation, RelationType};
use ontorec::{KnowledgeBase, TopicForest, TopicPath};
use proptest::prelude::*;
use proptest::sample::Index;

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

/// Parent choices for a forest: node `i` hangs under an earlier node or is
/// a root, and no node sits deeper than `max_depth`.
pub fn forest_shape(max_nodes: usize, max_depth: usize) -> impl Strategy<Value = Vec<Option<usize>>> {
    prop::collection::vec((prop::bool::weighted(0.15), any::<Index>()), 1..=max_nodes).prop_map(move |picks| {
        let mut parents: Vec<Option<usize>> = Vec::new();
        let mut depth: Vec<usize> = Vec::new();
        for (i, (root, idx)) in picks.into_iter().enumerate() {
            let parent = if i == 0 || root { None } else { Some(idx.index(i)) };
            let parent = parent.filter(|&p| depth[p] < max_depth);
            depth.push(parent.map_or(0, |p| depth[p] + 1));
            parents.push(parent);
        }
        parents
    })
}

/// Builds the forest; node `i` is labelled `t{i}`.
pub fn build_forest(parents: &[Option<usize>]) -> (TopicForest, Vec<TopicPath>) {
    let mut paths: Vec<TopicPath> = Vec::new();
    for (i, parent) in parents.iter().enumerate() {
        let label = format!("t{i}");
        let path = match parent {
            Some(p) => paths[*p].child(&label).unwrap(),
            None => TopicPath::new([label]).unwrap(),
        };
        paths.push(path);
    }
    let forest = TopicForest::from_declarations(paths.iter().map(|p| (p.clone(), p.prefix()))).unwrap();
    (forest, paths)
}

pub const PERSONS: usize = 8;
const PUBLICATIONS: usize = 4;
const EVENTS: usize = 2;
const PROJECTS: usize = 2;
const TOPICS: usize = 3;

pub fn person(i: usize) -> String {
    format!("p{i}")
}

/// Random typed edges `(relation, source slot, target slot)`.
pub fn edges(max: usize) -> impl Strategy<Value = Vec<(RelationType, usize, usize)>> {
    prop::collection::vec((prop::sample::select(RelationType::ALL.to_vec()), 0..64usize, 0..64usize), 0..=max)
}

/// A graph of eight people plus a few publications, events, projects and
/// topics. Edge slots are reduced modulo the size of each endpoint kind;
/// self-supervision is dropped.
pub fn graph_kb(edges: &[(RelationType, usize, usize)]) -> KnowledgeBase {
    let mut b = KbBuilder::default();
    for i in 0..PERSONS {
        b.person(&person(i));
    }
    for i in 0..PUBLICATIONS {
        b.entity(Entity::new(format!("b{i}"), EntityKind::Publication));
    }
    for i in 0..EVENTS {
        b.entity(Entity::new(format!("e{i}"), EntityKind::Event));
    }
    for i in 0..PROJECTS {
        b.entity(Entity::new(format!("j{i}"), EntityKind::Project));
    }
    for i in 0..TOPICS {
        b.topic(&format!("T{i}"));
    }
    for &(rel, s, t) in edges {
        let source = person(s % PERSONS);
        let target = match rel {
            RelationType::Authored => format!("b{}", t % PUBLICATIONS),
            RelationType::Supervises => person(t % PERSONS),
            RelationType::Attended => format!("e{}", t % EVENTS),
            RelationType::MemberOfProject => format!("j{}", t % PROJECTS),
            RelationType::HasResearchInterest => format!("T{}", t % TOPICS),
        };
        if source == target {
            continue;
        }
        let mut r = Relation::new(source, rel, target);
        if rel == RelationType::HasResearchInterest {
            r.value = Some(1.0);
            r.date = Some(date(2002, 1, 1));
        }
        b.relation(r);
    }
    b.build().unwrap()
}

/// Hop distance from `seed` over relations whose type passes `keep`.
pub fn hop_distances(kb: &KnowledgeBase, seed: &str, keep: impl Fn(RelationType) -> bool) -> BTreeMap<String, usize> {
    let mut adj: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in kb.relations().iter().filter(|r| keep(r.rel_type)) {
        adj.entry(&r.source).or_default().insert(&r.target);
        adj.entry(&r.target).or_default().insert(&r.source);
    }
    let mut dist = BTreeMap::from([(seed.to_owned(), 0)]);
    let mut queue = VecDeque::from([seed]);
    while let Some(n) = queue.pop_front() {
        let d = dist[n];
        for m in adj.get(n).into_iter().flatten() {
            if !dist.contains_key(*m) {
                dist.insert(m.to_string(), d + 1);
                queue.push_back(m);
            }
        }
    }
    dist
}
