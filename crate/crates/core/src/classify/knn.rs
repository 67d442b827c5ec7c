//! IBk: k-nearest-neighbour classification over term vectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::vector::{knn_distance, TermVector};
use crate::error::{Error, Result};
use crate::topic::{TopicForest, TopicPath};

pub const DEFAULT_K: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example {
    pub vector: TermVector,
    pub label: TopicPath,
}

/// Labelled examples in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingSet {
    examples: Vec<Example>,
}

impl TrainingSet {
    pub fn new(examples: Vec<Example>) -> Self {
        TrainingSet { examples }
    }

    pub fn push(&mut self, vector: TermVector, label: TopicPath) {
        self.examples.push(Example { vector, label });
    }

    /// Every label must name a topic in `forest`.
    pub fn validate(&self, forest: &TopicForest) -> Result<()> {
        match self.examples.iter().find(|e| !forest.contains(&e.label)) {
            Some(e) => Err(Error::UnknownTopic(e.label.to_string())),
            None => Ok(()),
        }
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: TopicPath,
    pub confidence: f64,
}

/// Indexes of the `k` training examples nearest to `query`; distance ties
/// go to the earlier example.
pub(crate) fn nearest(query: &TermVector, ts: &TrainingSet, k: usize) -> Result<Vec<usize>> {
    if ts.is_empty() {
        return Err(Error::State("training set is empty".into()));
    }
    if k < 1 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    let mut dist: Vec<(f64, usize)> = ts
        .examples
        .iter()
        .enumerate()
        .map(|(i, e)| knn_distance(query, &e.vector).map(|d| (d, i)))
        .collect::<Result<_>>()?;
    let k = k.min(dist.len());
    if k < dist.len() {
        dist.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        dist.truncate(k);
    }
    dist.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(dist.into_iter().map(|(_, i)| i).collect())
}

/// Plurality vote where each neighbour counts with its example weight.
/// Ties in vote mass go to the lexicographically smaller label.
pub(crate) fn weighted_vote(neighbours: &[usize], ts: &TrainingSet, weights: Option<&[f64]>) -> Prediction {
    let mut mass: BTreeMap<&TopicPath, f64> = BTreeMap::new();
    for &i in neighbours {
        let w = weights.map_or(1.0, |w| w[i]);
        *mass.entry(&ts.examples[i].label).or_insert(0.0) += w;
    }
    let total: f64 = mass.values().sum();
    // BTreeMap iterates labels in order, so `>` keeps the smallest on ties.
    let (label, best) = mass
        .iter()
        .fold(None, |acc: Option<(&TopicPath, f64)>, (l, m)| match acc {
            Some((_, bm)) if *m <= bm => acc,
            _ => Some((l, *m)),
        })
        .expect("at least one neighbour");
    let confidence = if total > 0.0 { best / total } else { 0.0 };
    Prediction { label: label.clone(), confidence }
}

/// Labels `query` by plurality among its `k` nearest training examples.
/// Confidence is the winning share of the neighbours.
pub fn ibk_classify(query: &TermVector, ts: &TrainingSet, k: usize) -> Result<Prediction> {
    let neighbours = nearest(query, ts, k)?;
    Ok(weighted_vote(&neighbours, ts, None))
}
