//! Research-paper classification.
//!
//! Text is tokenised, stop-listed and Porter-stemmed, counted into sparse
//! term-frequency vectors over a bounded dictionary, and labelled by an
//! IBk (k-nearest-neighbour) learner boosted with AdaBoostM1.

mod boost;
mod corpus;
mod knn;
mod porter;
mod text;
mod vector;

pub use boost::{
    adaboost_train, beta, boosted_classify, reweight, BoostRound, BoostedClassifier, BETA_FLOOR, DEFAULT_ROUNDS,
};
pub use corpus::{read_manifest, read_training_labels, Document, ManifestEntry, TrainingLabel};
pub use knn::{ibk_classify, Example, Prediction, TrainingSet, DEFAULT_K};
pub use porter::stem;
pub use text::{tokenize_and_stem, Stoplist};
pub use vector::{build_dictionary, knn_distance, vectorize, TermDictionary, TermVector, DEFAULT_CAPACITY};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recommend::{ClassifiedPaper, PaperDatabase};
use crate::topic::{TopicForest, TopicPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierParams {
    pub k: usize,
    pub rounds: usize,
    pub capacity: usize,
}

impl Default for ClassifierParams {
    fn default() -> Self {
        ClassifierParams { k: DEFAULT_K, rounds: DEFAULT_ROUNDS, capacity: DEFAULT_CAPACITY }
    }
}

/// Text-in, topic-out classifier: stop-list, dictionary and boosted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicClassifier {
    stoplist: Stoplist,
    dictionary: TermDictionary,
    model: BoostedClassifier,
}

impl TopicClassifier {
    /// Trains on `(text, label)` pairs. Labels must be topics of `forest`.
    pub fn train<'a, I>(examples: I, stoplist: Stoplist, forest: &TopicForest, params: ClassifierParams) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, TopicPath)>,
    {
        let (tokens, labels): (Vec<Vec<String>>, Vec<TopicPath>) =
            examples.into_iter().map(|(text, label)| (tokenize_and_stem(text, &stoplist), label)).unzip();
        if tokens.is_empty() {
            return Err(Error::State("no training documents".into()));
        }
        let dictionary = build_dictionary(&tokens, params.capacity)?;
        let ts = TrainingSet::new(
            tokens
                .iter()
                .zip(labels)
                .map(|(t, label)| Example { vector: vectorize(t, &dictionary), label })
                .collect(),
        );
        ts.validate(forest)?;
        let model = adaboost_train(&ts, params.k, params.rounds)?;
        Ok(TopicClassifier { stoplist, dictionary, model })
    }

    pub fn vectorize_text(&self, text: &str) -> TermVector {
        vectorize(&tokenize_and_stem(text, &self.stoplist), &self.dictionary)
    }

    pub fn classify_text(&self, text: &str) -> Result<Prediction> {
        self.model.classify(&self.vectorize_text(text))
    }

    /// Classifies every document into a paper database.
    pub fn classify_documents(&self, docs: &[Document]) -> Result<PaperDatabase> {
        let mut db = PaperDatabase::default();
        for doc in docs {
            let p = self.classify_text(&doc.text)?;
            db.insert(ClassifiedPaper { url: doc.url.clone(), topic: p.label, classification_confidence: p.confidence });
        }
        Ok(db)
    }

    pub fn dictionary(&self) -> &TermDictionary {
        &self.dictionary
    }

    pub fn model(&self) -> &BoostedClassifier {
        &self.model
    }
}

/// Pairs labelled URLs with their documents, in label order. Labels whose
/// URL has no document are an error.
pub fn labelled_documents<'a>(
    docs: &'a [Document],
    labels: &[TrainingLabel],
) -> Result<Vec<(&'a str, TopicPath)>> {
    let by_url: BTreeMap<&str, &Document> = docs.iter().map(|d| (d.url.as_str(), d)).collect();
    labels
        .iter()
        .map(|l| {
            by_url
                .get(l.url.as_str())
                .map(|d| (d.text.as_str(), l.topic_path.clone()))
                .ok_or_else(|| Error::DanglingReference { id: l.url.clone() })
        })
        .collect()
}
