//! Community-of-practice identification by breadth-first spreading
//! activation over the knowledge-base relation graph.
//!
//! The seed starts with activation 1. Each breadth-first level, every
//! frontier node passes `activation × weight(relation)` across each of its
//! relations (in either direction) to neighbours that were not reached at
//! an earlier level. Arrivals add up. Newly reached nodes form the next
//! frontier, so each node is expanded once. Only people are reported, and
//! their activations are divided by the largest one.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::{EntityKind, KnowledgeBase, RelationType};

pub const DEFAULT_MAX_DEPTH: usize = 3;

/// Weight in `[0, 1]` per relation type. Types without a weight, or with
/// weight zero, are not traversed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<RelationType, f64>", into = "BTreeMap<RelationType, f64>")]
pub struct RelationWeights(BTreeMap<RelationType, f64>);

impl RelationWeights {
    pub fn new<I: IntoIterator<Item = (RelationType, f64)>>(weights: I) -> Result<Self> {
        let map: BTreeMap<RelationType, f64> = weights.into_iter().collect();
        if let Some((rel, w)) = map.iter().find(|(_, w)| !(0.0..=1.0).contains(*w)) {
            return Err(Error::Argument(format!("weight {w} for `{rel}` is outside [0, 1]")));
        }
        Ok(RelationWeights(map))
    }

    /// attended 0.4, supervises 0.7, authored 0.3, research interest 0.8,
    /// project membership 0.5.
    pub fn standard() -> Self {
        RelationWeights(BTreeMap::from([
            (RelationType::Attended, 0.4),
            (RelationType::Supervises, 0.7),
            (RelationType::Authored, 0.3),
            (RelationType::HasResearchInterest, 0.8),
            (RelationType::MemberOfProject, 0.5),
        ]))
    }

    pub fn get(&self, rel: RelationType) -> f64 {
        self.0.get(&rel).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (RelationType, f64)> + '_ {
        self.0.iter().map(|(r, w)| (*r, *w))
    }
}

impl Default for RelationWeights {
    fn default() -> Self {
        RelationWeights::standard()
    }
}

impl TryFrom<BTreeMap<RelationType, f64>> for RelationWeights {
    type Error = Error;

    fn try_from(map: BTreeMap<RelationType, f64>) -> Result<Self> {
        RelationWeights::new(map)
    }
}

impl From<RelationWeights> for BTreeMap<RelationType, f64> {
    fn from(w: RelationWeights) -> Self {
        w.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopEntry {
    pub person: String,
    pub relevance: f64,
}

/// People ranked by descending relevance, ties by id. The seed is never
/// included, and the first entry has relevance 1.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CopResult {
    pub entries: Vec<CopEntry>,
}

impl CopResult {
    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        CopResult {
            entries: entries.into_iter().map(|(p, r)| CopEntry { person: p.into(), relevance: r }).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn relevance(&self, person: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.person == person).map(|e| e.relevance)
    }
}

/// Raw outcome of a spreading-activation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Activation {
    /// Accumulated activation per reached node, seed included.
    pub activation: BTreeMap<String, f64>,
    /// Breadth-first level at which each node was first reached.
    pub level: BTreeMap<String, usize>,
    /// Number of nodes whose relations were followed.
    pub expanded: usize,
}

fn adjacency<'a>(kb: &'a KnowledgeBase, weights: &RelationWeights) -> HashMap<&'a str, Vec<(&'a str, f64)>> {
    let mut adj: HashMap<&str, Vec<(&str, f64)>> = HashMap::new();
    for r in kb.relations() {
        let w = weights.get(r.rel_type);
        if w <= 0.0 {
            continue;
        }
        adj.entry(r.source.as_str()).or_default().push((r.target.as_str(), w));
        adj.entry(r.target.as_str()).or_default().push((r.source.as_str(), w));
    }
    adj
}

/// Runs spreading activation from `seed` for up to `max_depth` levels.
pub fn spread_activation(
    kb: &KnowledgeBase,
    seed: &str,
    weights: &RelationWeights,
    max_depth: usize,
) -> Result<Activation> {
    if !kb.is_node(seed) {
        return Err(Error::not_found("entity", seed));
    }
    let adj = adjacency(kb, weights);
    let mut activation: HashMap<&str, f64> = HashMap::from([(seed, 1.0)]);
    let mut level: HashMap<&str, usize> = HashMap::from([(seed, 0)]);
    let mut frontier: Vec<&str> = vec![seed];
    let mut expanded = 0;

    for depth in 1..=max_depth {
        if frontier.is_empty() {
            break;
        }
        let snapshot: Vec<(&str, f64, usize)> =
            frontier.iter().map(|n| (*n, activation[n], level[n])).collect();
        expanded += snapshot.len();
        let mut next = Vec::new();
        for (node, act, node_level) in snapshot {
            for &(neighbour, w) in adj.get(node).map(Vec::as_slice).unwrap_or_default() {
                match level.get(neighbour) {
                    Some(&l) if l < node_level => continue,
                    Some(_) => {}
                    None => {
                        level.insert(neighbour, depth);
                        next.push(neighbour);
                    }
                }
                *activation.entry(neighbour).or_insert(0.0) += act * w;
            }
        }
        next.sort_unstable();
        frontier = next;
    }

    Ok(Activation {
        activation: activation.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
        level: level.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
        expanded,
    })
}

/// Ranks the people closest to `seed`.
pub fn identify_cop(
    kb: &KnowledgeBase,
    seed: &str,
    weights: &RelationWeights,
    max_depth: usize,
) -> Result<CopResult> {
    if kb.kind_of(seed) != Some(EntityKind::Person) {
        return Err(Error::not_found("person", seed));
    }
    if max_depth < 1 {
        return Err(Error::Argument("max_depth must be at least 1".into()));
    }
    let run = spread_activation(kb, seed, weights, max_depth)?;
    let mut people: Vec<(String, f64)> = run
        .activation
        .into_iter()
        .filter(|(id, a)| id != seed && *a > 0.0 && kb.kind_of(id) == Some(EntityKind::Person))
        .collect();
    let Some(max) = people.iter().map(|(_, a)| *a).max_by(f64::total_cmp) else {
        return Ok(CopResult::default());
    };
    for (_, a) in &mut people {
        *a /= max;
    }
    people.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(CopResult::from_entries(people))
}

/// Weights proportional to how often each relation type occurs, scaled so
/// the most frequent type has weight 1.
pub fn auto_select_weights(kb: &KnowledgeBase) -> Result<RelationWeights> {
    let counts = kb.relation_frequency();
    let max = counts.values().copied().max().unwrap_or(0);
    if max == 0 {
        return Err(Error::State("knowledge base has no relations to weight".into()));
    }
    RelationWeights::new(
        counts
            .into_iter()
            .filter(|(_, c)| *c > 0)
            .map(|(r, c)| (r, c as f64 / max as f64)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{Entity, KbBuilder};

    fn three_node() -> KnowledgeBase {
        let mut b = KbBuilder::default();
        b.person("M").person("D");
        b.entity(Entity::new("P1", EntityKind::Publication));
        b.link("D", RelationType::Supervises, "M")
            .link("M", RelationType::Authored, "P1")
            .link("D", RelationType::Authored, "P1");
        b.build().unwrap()
    }

    #[test]
    fn hand_traced_three_node_graph() {
        let kb = three_node();
        let w = RelationWeights::standard();
        let run = spread_activation(&kb, "M", &w, DEFAULT_MAX_DEPTH).unwrap();
        // D: 0.7 directly, then 0.3 * 0.3 through the shared paper.
        assert!((run.activation["D"] - 0.79).abs() < 1e-12);
        let cop = identify_cop(&kb, "M", &w, DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(cop, CopResult::from_entries([("D", 1.0)]));
    }

    #[test]
    fn isolated_seed_has_no_community() {
        let mut b = KbBuilder::default();
        b.person("alone").person("other");
        let kb = b.build().unwrap();
        assert!(identify_cop(&kb, "alone", &RelationWeights::standard(), 3).unwrap().is_empty());
    }

    #[test]
    fn symmetric_supervisees_tie_at_one() {
        let mut b = KbBuilder::default();
        b.person("s").person("b").person("a");
        b.link("s", RelationType::Supervises, "b").link("s", RelationType::Supervises, "a");
        let cop = identify_cop(&b.build().unwrap(), "s", &RelationWeights::standard(), 3).unwrap();
        assert_eq!(cop, CopResult::from_entries([("a", 1.0), ("b", 1.0)]));
    }

    #[test]
    fn unknown_or_non_person_seed() {
        let kb = three_node();
        let w = RelationWeights::standard();
        assert!(matches!(identify_cop(&kb, "X", &w, 3), Err(Error::NotFound { .. })));
        assert!(matches!(identify_cop(&kb, "P1", &w, 3), Err(Error::NotFound { .. })));
        assert!(matches!(identify_cop(&kb, "M", &w, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn depth_limits_reach() {
        let mut b = KbBuilder::default();
        b.person("a").person("b").person("c").person("d");
        b.link("a", RelationType::Supervises, "b")
            .link("b", RelationType::Supervises, "c")
            .link("c", RelationType::Supervises, "d");
        let kb = b.build().unwrap();
        let w = RelationWeights::standard();
        let cop = identify_cop(&kb, "a", &w, 2).unwrap();
        assert!(cop.relevance("c").is_some());
        assert!(cop.relevance("d").is_none());
        assert!(identify_cop(&kb, "a", &w, 3).unwrap().relevance("d").is_some());
    }

    #[test]
    fn activation_does_not_flow_back_up() {
        let mut b = KbBuilder::default();
        b.person("a").person("b").person("c");
        b.link("a", RelationType::Supervises, "b").link("b", RelationType::Supervises, "c");
        let run = spread_activation(&b.build().unwrap(), "a", &RelationWeights::standard(), 3).unwrap();
        assert!((run.activation["b"] - 0.7).abs() < 1e-12);
        assert!((run.activation["c"] - 0.49).abs() < 1e-12);
        assert_eq!(run.activation["a"], 1.0);
    }

    #[test]
    fn weights_are_validated() {
        assert!(RelationWeights::new([(RelationType::Authored, 1.5)]).is_err());
        assert!(RelationWeights::new([(RelationType::Authored, -0.1)]).is_err());
        let w: RelationWeights = serde_json::from_str(r#"{"authored": 0.3}"#).unwrap();
        assert_eq!(w.get(RelationType::Authored), 0.3);
        assert_eq!(w.get(RelationType::Supervises), 0.0);
        assert!(serde_json::from_str::<RelationWeights>(r#"{"authored": 2}"#).is_err());
    }

    #[test]
    fn auto_weights_follow_frequency() {
        let mut b = KbBuilder::default();
        for i in 0..10 {
            b.person(&format!("a{i}"));
            b.entity(Entity::new(format!("p{i}"), EntityKind::Publication));
            b.link(&format!("a{i}"), RelationType::Authored, &format!("p{i}"));
        }
        for i in 0..5 {
            b.link(&format!("a{i}"), RelationType::Supervises, &format!("a{}", i + 5));
        }
        let w = auto_select_weights(&b.build().unwrap()).unwrap();
        assert_eq!(w.iter().collect::<Vec<_>>(), [(RelationType::Authored, 1.0), (RelationType::Supervises, 0.5)]);

        let mut only = KbBuilder::default();
        only.person("a").entity(Entity::new("p", EntityKind::Publication)).link("a", RelationType::Authored, "p");
        let w = auto_select_weights(&only.build().unwrap()).unwrap();
        assert_eq!(w.iter().collect::<Vec<_>>(), [(RelationType::Authored, 1.0)]);

        assert!(matches!(auto_select_weights(&KnowledgeBase::default()), Err(Error::State(_))));
    }
}
