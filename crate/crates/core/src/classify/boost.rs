//! AdaBoostM1 with a distribution-aware IBk weak learner.
//!
//! Round `t` weights each neighbour's vote by its current example weight
//! `D_t(i)`. The round's error `e_t` is the weight of the training examples
//! it gets wrong, `β_t = e_t / (1 - e_t)`, correctly classified examples
//! are scaled by `β_t` and the distribution is renormalised. The combined
//! classifier gives each round a vote of `ln(1 / β_t)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::knn::{nearest, weighted_vote, Prediction, TrainingSet};
use super::vector::TermVector;
use crate::error::{Error, Result};
use crate::topic::TopicPath;

pub const DEFAULT_ROUNDS: usize = 10;

/// Smallest `β` used; a perfect round would otherwise get an infinite vote.
pub const BETA_FLOOR: f64 = 1e-10;

/// Error adjustment `e / (1 - e)`, floored at [`BETA_FLOOR`].
pub fn beta(error: f64) -> f64 {
    (error / (1.0 - error)).max(BETA_FLOOR)
}

/// Next-round distribution: correct examples scaled by `beta`, then
/// normalised to sum to one.
pub fn reweight(distribution: &[f64], correct: &[bool], beta: f64) -> Vec<f64> {
    let scaled: Vec<f64> =
        distribution.iter().zip(correct).map(|(&d, &ok)| if ok { d * beta } else { d }).collect();
    let total: f64 = scaled.iter().sum();
    scaled.into_iter().map(|d| d / total).collect()
}

/// One kept boosting round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostRound {
    /// Example weights the weak learner voted with.
    pub distribution: Vec<f64>,
    pub error: f64,
    pub beta: f64,
    /// `ln(1 / β)`; always positive.
    pub vote_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedClassifier {
    training: TrainingSet,
    k: usize,
    max_rounds: usize,
    rounds: Vec<BoostRound>,
}

impl BoostedClassifier {
    pub fn rounds(&self) -> &[BoostRound] {
        &self.rounds
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_rounds(&self) -> usize {
        self.max_rounds
    }

    pub fn training_set(&self) -> &TrainingSet {
        &self.training
    }

    pub fn classify(&self, query: &TermVector) -> Result<Prediction> {
        boosted_classify(query, self)
    }
}

/// Trains up to `rounds` boosting rounds of weighted IBk.
///
/// Training stops early after a perfect round (its `β` floored) or when a
/// round's error reaches one half; such a round is discarded unless it is
/// the first, which is then kept as the sole voter with weight 1.
pub fn adaboost_train(ts: &TrainingSet, k: usize, rounds: usize) -> Result<BoostedClassifier> {
    if rounds < 1 {
        return Err(Error::Argument("boosting needs at least one round".into()));
    }
    if ts.is_empty() {
        return Err(Error::State("training set is empty".into()));
    }
    let m = ts.len();
    let neighbours: Vec<Vec<usize>> =
        ts.examples().iter().map(|e| nearest(&e.vector, ts, k)).collect::<Result<_>>()?;

    let mut distribution = vec![1.0 / m as f64; m];
    let mut kept = Vec::new();
    for _ in 0..rounds {
        let correct: Vec<bool> = neighbours
            .iter()
            .zip(ts.examples())
            .map(|(nb, e)| weighted_vote(nb, ts, Some(&distribution)).label == e.label)
            .collect();
        let error = distribution.iter().zip(&correct).filter(|(_, ok)| !**ok).fold(0.0, |acc, (d, _)| acc + d);

        if error >= 0.5 {
            if kept.is_empty() {
                kept.push(BoostRound { distribution, error, beta: 1.0, vote_weight: 1.0 });
            }
            break;
        }
        let b = beta(error);
        let next = reweight(&distribution, &correct, b);
        kept.push(BoostRound { distribution, error, beta: b, vote_weight: (1.0 / b).ln() });
        if error == 0.0 {
            break;
        }
        distribution = next;
    }
    Ok(BoostedClassifier { training: ts.clone(), k, max_rounds: rounds, rounds: kept })
}

/// Combines the rounds' votes; confidence is the winning share of the total
/// vote mass. Ties go to the lexicographically smaller label.
pub fn boosted_classify(query: &TermVector, c: &BoostedClassifier) -> Result<Prediction> {
    let votes = c.rounds.iter().map(|r| (r.distribution.as_slice(), r.vote_weight));
    let neighbours = nearest(query, &c.training, c.k)?;
    let mut mass: BTreeMap<TopicPath, f64> = BTreeMap::new();
    for (distribution, weight) in votes {
        let label = weighted_vote(&neighbours, &c.training, Some(distribution)).label;
        *mass.entry(label).or_insert(0.0) += weight;
    }
    Ok(combine(mass))
}

pub(crate) fn combine(mass: BTreeMap<TopicPath, f64>) -> Prediction {
    let total: f64 = mass.values().sum();
    let mut best: Option<(TopicPath, f64)> = None;
    for (label, m) in mass {
        if best.as_ref().is_none_or(|(_, bm)| m > *bm) {
            best = Some((label, m));
        }
    }
    let (label, m) = best.expect("classifier has at least one round");
    Prediction { label, confidence: m / total }
}
