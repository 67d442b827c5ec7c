//! Deterministic synthetic trial data: a small department of five users, a
//! twelve-topic forest, a labelled paper corpus and seven weeks of browsing.
//!
//! Each user has a couple of *current* research topics, which drive their
//! browsing, and *older* topics that only show up in their publications.
//! That split is what makes the cold-start bootstrap both useful (the
//! current topics overlap) and noisy (the older ones never reappear).

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{Days, NaiveDate};
use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bootstrap::BootstrapParams;
use crate::classify::{labelled_documents, ClassifierParams, Document, Stoplist, TopicClassifier, TrainingLabel};
use crate::error::Result;
use crate::harness::WeeklySplit;
use crate::kb::{Entity, EntityKind, KbBuilder, KnowledgeBase, Relation, RelationType};
use crate::profile::{EventType, LogRecord};
use crate::recommend::PaperDatabase;
use crate::topic::TopicPath;

pub const TOPICS: [&str; 12] = [
    "AI",
    "AI\\Agents",
    "AI\\Agents\\Recommender Systems",
    "AI\\Agents\\Mobile Agents",
    "AI\\Distributed Systems",
    "AI\\Machine Learning",
    "Knowledge Technology",
    "Knowledge Technology\\Ontology",
    "Knowledge Technology\\Knowledge Management",
    "Knowledge Technology\\Knowledge Management\\CoP",
    "Knowledge Technology\\Knowledge Acquisition",
    "Knowledge Technology\\Knowledge Devices",
];

/// Topics papers are written about, with the words that mark them.
const CLASSES: [(&str, &[&str]); 10] = [
    ("AI\\Agents", &["agent", "autonomy", "negotiation", "belief", "intention", "deliberation", "multiagent", "coordination"]),
    ("AI\\Agents\\Recommender Systems", &["recommender", "rating", "collaborative", "filtering", "preference", "personalisation", "coldstart", "profile"]),
    ("AI\\Agents\\Mobile Agents", &["mobile", "migration", "itinerary", "roaming", "host", "mobility", "platform", "travelling"]),
    ("AI\\Distributed Systems", &["distributed", "grid", "middleware", "replication", "consensus", "cluster", "latency", "peer"]),
    ("AI\\Machine Learning", &["learning", "classifier", "boosting", "neighbour", "training", "generalisation", "kernel", "regression"]),
    ("Knowledge Technology\\Ontology", &["ontology", "taxonomy", "axiom", "concept", "semantic", "reasoner", "description", "logic"]),
    ("Knowledge Technology\\Knowledge Management", &["organisational", "memory", "knowledge", "lessons", "intranet", "sharing", "repository", "enterprise"]),
    ("Knowledge Technology\\Knowledge Management\\CoP", &["community", "practice", "membership", "informal", "network", "identification", "colleague", "social"]),
    ("Knowledge Technology\\Knowledge Acquisition", &["elicitation", "interview", "expert", "protocol", "acquisition", "commonkads", "modelling", "capture"]),
    ("Knowledge Technology\\Knowledge Devices", &["device", "sensor", "wearable", "handheld", "annotation", "context", "appliance", "ubiquitous"]),
];

const FILLER: &[&str] = &[
    "approach", "method", "result", "evaluation", "system", "framework", "analysis", "study", "model", "data",
    "process", "design", "experiment", "research", "application", "performance",
];

/// `(user, current topics, older topics)`; indexes into [`CLASSES`].
const USERS: [(&str, &[usize], &[usize]); 5] = [
    ("alice", &[1, 4], &[6]),
    ("bob", &[3, 1], &[8, 9]),
    ("carol", &[5, 7], &[2]),
    ("dave", &[0, 6], &[9]),
    ("erin", &[8, 5], &[3]),
];

const DOCS_PER_CLASS: usize = 8;
const LABELLED_PER_CLASS: usize = 5;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub kb: KnowledgeBase,
    pub documents: Vec<Document>,
    pub labels: Vec<TrainingLabel>,
    pub log: Vec<LogRecord>,
    pub users: Vec<String>,
    pub start: NaiveDate,
    pub weeks: usize,
}

fn doc_url(class: usize, i: usize) -> String {
    format!("http://papers.example.org/c{class:02}/p{i:02}")
}

fn write_text(rng: &mut ChaCha8Rng, class: usize) -> String {
    let (_, vocab) = CLASSES[class];
    let words: Vec<&str> = (0..60)
        .map(|_| {
            if rng.random_bool(0.7) {
                *vocab.choose(rng).expect("vocabulary")
            } else {
                *FILLER.choose(rng).expect("filler")
            }
        })
        .collect();
    words.join(" ")
}

impl Fixture {
    pub fn generate(seed: u64) -> Fixture {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = NaiveDate::from_ymd_opt(2002, 1, 7).expect("valid date");
        let weeks = 7;

        let mut documents = Vec::new();
        let mut labels = Vec::new();
        for (class, (topic, _)) in CLASSES.iter().enumerate() {
            for i in 0..DOCS_PER_CLASS {
                let url = doc_url(class, i);
                documents.push(Document { url: url.clone(), text: write_text(&mut rng, class) });
                if i < LABELLED_PER_CLASS {
                    labels.push(TrainingLabel { url, topic_path: topic.parse().expect("valid topic") });
                }
            }
        }

        let mut b = KbBuilder::default();
        for t in TOPICS {
            b.topic(t);
        }
        for (user, _, _) in USERS {
            b.entity(Entity::new(user, EntityKind::Person).with_attr("email", format!("{user}@example.org")));
        }
        b.entity(Entity::new("conf-2001", EntityKind::Event).with_attr("title", "Knowledge Capture 2001"));
        b.entity(Entity::new("proj-akt", EntityKind::Project).with_attr("title", "Advanced Knowledge Technologies"));

        // Publications: one on a current topic, the rest on older topics.
        let mut pub_no = 0;
        for (u, (user, current, older)) in USERS.iter().enumerate() {
            let topics = std::iter::once(current[0]).chain(older.iter().copied());
            for (j, class) in topics.enumerate() {
                pub_no += 1;
                let id = format!("pub-{pub_no:02}");
                let year = 2001 - (j as i32) - (u as i32 % 2);
                let doc = DOCS_PER_CLASS - 1 - (u % 3);
                b.entity(
                    Entity::new(&id, EntityKind::Publication)
                        .with_attr("title", format!("{} paper by {user}", CLASSES[class].0))
                        .with_attr("year", year.to_string())
                        .with_attr("topic", CLASSES[class].0)
                        .with_attr("uri", doc_url(class, doc)),
                );
                b.link(user, RelationType::Authored, &id);
            }
        }
        // A joint paper, supervision, a conference and a project.
        b.entity(Entity::new("pub-joint", EntityKind::Publication).with_attr("year", "2001"));
        b.link("alice", RelationType::Authored, "pub-joint").link("bob", RelationType::Authored, "pub-joint");
        b.link("dave", RelationType::Supervises, "alice").link("dave", RelationType::Supervises, "erin");
        b.link("carol", RelationType::Attended, "conf-2001").link("erin", RelationType::Attended, "conf-2001");
        b.link("bob", RelationType::MemberOfProject, "proj-akt").link("carol", RelationType::MemberOfProject, "proj-akt");
        let mut interest = Relation::new("carol", RelationType::HasResearchInterest, "Knowledge Technology\\Ontology");
        interest.value = Some(1.0);
        interest.date = Some(start);
        b.relation(interest);
        let kb = b.build().expect("fixture knowledge base is valid");

        let mut log = Vec::new();
        for week in 0..weeks {
            for (user, current, _) in USERS {
                let events = rng.random_range(3..=6);
                for _ in 0..events {
                    let class = *current.choose(&mut rng).expect("current topics");
                    let day = rng.random_range(0..7u64);
                    let date = start + Days::new(7 * week as u64 + day);
                    let roll: f64 = rng.random();
                    let record = if roll < 0.8 {
                        LogRecord {
                            user: user.into(),
                            etype: EventType::PaperBrowsed,
                            url: Some(doc_url(class, rng.random_range(0..DOCS_PER_CLASS))),
                            topic: None,
                            date,
                        }
                    } else if roll < 0.95 {
                        LogRecord {
                            user: user.into(),
                            etype: EventType::RecommendationFollowed,
                            url: Some(doc_url(class, rng.random_range(0..DOCS_PER_CLASS))),
                            topic: None,
                            date,
                        }
                    } else {
                        LogRecord {
                            user: user.into(),
                            etype: EventType::TopicRatedInteresting,
                            url: None,
                            topic: Some(CLASSES[class].0.parse().expect("valid topic")),
                            date,
                        }
                    };
                    log.push(record);
                }
            }
        }
        log.sort_by(|a, b| a.date.cmp(&b.date).then_with(|| a.user.cmp(&b.user)));

        Fixture {
            kb,
            documents,
            labels,
            log,
            users: USERS.iter().map(|(u, _, _)| u.to_string()).collect(),
            start,
            weeks,
        }
    }

    /// Trains the boosted classifier on the labelled documents.
    pub fn classifier(&self, params: ClassifierParams) -> Result<TopicClassifier> {
        let examples = labelled_documents(&self.documents, &self.labels)?;
        TopicClassifier::train(examples, Stoplist::english(), self.kb.forest(), params)
    }

    /// Classifies the whole corpus with a default-parameter classifier.
    pub fn papers(&self) -> Result<PaperDatabase> {
        self.classifier(ClassifierParams::default())?.classify_documents(&self.documents)
    }

    pub fn weekly_split(&self) -> Result<WeeklySplit> {
        WeeklySplit::from_log(&self.log, self.start, self.weeks)
    }

    /// Bootstrap parameters with the replay start as reference date.
    pub fn bootstrap_params(&self) -> BootstrapParams {
        BootstrapParams::new(self.start)
    }

    /// Ground-truth topic of every corpus document.
    pub fn true_topics(&self) -> BTreeMap<String, TopicPath> {
        CLASSES
            .iter()
            .enumerate()
            .flat_map(|(class, (topic, _))| {
                (0..DOCS_PER_CLASS).map(move |i| (doc_url(class, i), topic.parse().expect("valid topic")))
            })
            .collect()
    }

    /// Writes `kb.jsonl`, `training.jsonl`, `logs.jsonl` and a `corpus/`
    /// directory with its `manifest.jsonl` under `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir.join("corpus"))?;
        self.kb.write_records(fs::File::create(dir.join("kb.jsonl"))?)?;

        let mut manifest = fs::File::create(dir.join("corpus/manifest.jsonl"))?;
        for (i, doc) in self.documents.iter().enumerate() {
            let file = format!("doc-{i:03}.txt");
            fs::write(dir.join("corpus").join(&file), &doc.text)?;
            writeln!(manifest, "{}", serde_json::json!({ "file": file, "url": doc.url }))?;
        }

        let mut training = fs::File::create(dir.join("training.jsonl"))?;
        for label in &self.labels {
            writeln!(training, "{}", serde_json::to_string(label)?)?;
        }
        let mut logs = fs::File::create(dir.join("logs.jsonl"))?;
        for record in &self.log {
            writeln!(logs, "{}", serde_json::to_string(record)?)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let f = Fixture::generate(7);
        assert_eq!(f.users.len(), 5);
        assert_eq!(f.kb.forest().len(), 12);
        assert_eq!(f.documents.len(), 80);
        assert_eq!(f.labels.len(), 50);
        assert!(f.log.iter().all(|r| r.date >= f.start && r.date < f.start + Days::new(49)));
        let again = Fixture::generate(7);
        assert_eq!(f.log, again.log);
        assert_eq!(f.documents, again.documents);
    }
}
