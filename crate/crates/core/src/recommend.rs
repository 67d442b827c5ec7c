//! Daily recommendations: unseen papers from a user's top three topics,
//! ranked by `classification confidence × topic interest`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{top_topics, InterestProfile};
use crate::topic::{TopicForest, TopicPath};

/// Number of top topics recommendations are drawn from.
pub const TOP_TOPICS: usize = 3;
pub const DEFAULT_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifiedPaper {
    pub url: String,
    pub topic: TopicPath,
    #[serde(rename = "confidence")]
    pub classification_confidence: f64,
}

/// Classified papers keyed by URL.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PaperDatabase {
    papers: BTreeMap<String, ClassifiedPaper>,
}

impl PaperDatabase {
    pub fn from_papers<I: IntoIterator<Item = ClassifiedPaper>>(papers: I) -> Self {
        PaperDatabase { papers: papers.into_iter().map(|p| (p.url.clone(), p)).collect() }
    }

    pub fn insert(&mut self, paper: ClassifiedPaper) {
        self.papers.insert(paper.url.clone(), paper);
    }

    pub fn get(&self, url: &str) -> Option<&ClassifiedPaper> {
        self.papers.get(url)
    }

    pub fn papers(&self) -> impl Iterator<Item = &ClassifiedPaper> {
        self.papers.values()
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    /// Reads `{url, topic, confidence}` records, checking topics against
    /// `forest` and confidences against `[0, 1]`.
    pub fn read<R: BufRead>(reader: R, forest: &TopicForest) -> Result<Self> {
        let mut db = PaperDatabase::default();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let paper: ClassifiedPaper =
                serde_json::from_str(&line).map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
            if !forest.contains(&paper.topic) {
                return Err(Error::UnknownTopic(paper.topic.to_string()));
            }
            if !(0.0..=1.0).contains(&paper.classification_confidence) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("confidence {} outside [0, 1]", paper.classification_confidence),
                });
            }
            db.insert(paper);
        }
        Ok(db)
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for paper in self.papers() {
            writeln!(out, "{}", serde_json::to_string(paper)?)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Recommendation {
    pub url: String,
    pub topic: TopicPath,
    #[serde(rename = "confidence")]
    pub recommendation_confidence: f64,
}

/// Output record: one ranked recommendation for one user.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecommendationRecord<'a> {
    pub user: &'a str,
    pub rank: usize,
    pub url: &'a str,
    pub topic: &'a TopicPath,
    pub confidence: f64,
}

/// Ranks unseen papers in the profile's top three topics.
///
/// Candidates from all three topics are pooled and sorted by confidence
/// (descending, ties by URL) before truncating to `limit`.
pub fn recommend<'a, I>(
    profile: &InterestProfile,
    papers: I,
    browsed: &BTreeSet<String>,
    limit: usize,
) -> Vec<Recommendation>
where
    I: IntoIterator<Item = &'a ClassifiedPaper>,
{
    let top: BTreeSet<TopicPath> = top_topics(profile, TOP_TOPICS).into_iter().collect();
    let mut out: Vec<Recommendation> = papers
        .into_iter()
        .filter(|p| top.contains(&p.topic) && !browsed.contains(&p.url))
        .map(|p| Recommendation {
            url: p.url.clone(),
            topic: p.topic.clone(),
            recommendation_confidence: p.classification_confidence * profile.get(&p.topic),
        })
        .collect();
    out.sort_by(|a, b| {
        b.recommendation_confidence
            .total_cmp(&a.recommendation_confidence)
            .then_with(|| a.url.cmp(&b.url))
    });
    out.truncate(limit);
    out
}

pub fn recommendation_records<'a>(user: &'a str, recs: &'a [Recommendation]) -> Vec<RecommendationRecord<'a>> {
    recs.iter()
        .enumerate()
        .map(|(i, r)| RecommendationRecord {
            user,
            rank: i + 1,
            url: &r.url,
            topic: &r.topic,
            confidence: r.recommendation_confidence,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn tp(s: &str) -> TopicPath {
        s.parse().unwrap()
    }

    fn paper(url: &str, topic: &str, conf: f64) -> ClassifiedPaper {
        ClassifiedPaper { url: url.into(), topic: tp(topic), classification_confidence: conf }
    }

    fn profile(entries: &[(&str, f64)]) -> InterestProfile {
        InterestProfile::from_entries(
            "u",
            NaiveDate::from_ymd_opt(2002, 1, 1).unwrap(),
            entries.iter().map(|(t, v)| (tp(t), *v)),
        )
    }

    #[test]
    fn confidence_is_the_product() {
        let p = profile(&[("a", 1.5)]);
        let papers = [paper("u1", "a", 0.8)];
        let recs = recommend(&p, &papers, &BTreeSet::new(), DEFAULT_LIMIT);
        assert_eq!(recs.len(), 1);
        assert!((recs[0].recommendation_confidence - 1.2).abs() < 1e-12);
    }

    #[test]
    fn browsed_papers_are_never_recommended() {
        let p = profile(&[("a", 1.0)]);
        let papers = [paper("u1", "a", 0.8), paper("u2", "a", 0.5)];
        let browsed: BTreeSet<String> = ["u1".to_owned(), "u2".to_owned()].into();
        assert!(recommend(&p, &papers, &browsed, DEFAULT_LIMIT).is_empty());
    }

    #[test]
    fn no_positive_topics_means_nothing() {
        let p = profile(&[("a", -1.0)]);
        assert!(recommend(&p, &[paper("u1", "a", 1.0)], &BTreeSet::new(), DEFAULT_LIMIT).is_empty());
    }

    #[test]
    fn only_top_three_topics_are_used_and_pooled() {
        let p = profile(&[("a", 4.0), ("b", 3.0), ("c", 2.0), ("d", 1.0)]);
        let papers = [
            paper("d1", "d", 1.0),
            paper("a1", "a", 0.1),
            paper("b1", "b", 0.9),
            paper("c1", "c", 0.9),
            paper("c2", "c", 0.9),
        ];
        let recs = recommend(&p, &papers, &BTreeSet::new(), DEFAULT_LIMIT);
        let urls: Vec<_> = recs.iter().map(|r| r.url.as_str()).collect();
        assert_eq!(urls, ["b1", "c1", "c2", "a1"]);
        assert_eq!(recommend(&p, &papers, &BTreeSet::new(), 2).len(), 2);
    }

    #[test]
    fn paper_database_io() {
        let forest = TopicForest::from_declarations([(tp("a"), None)]).unwrap();
        let db = PaperDatabase::from_papers([paper("u1", "a", 0.5)]);
        let mut buf = Vec::new();
        db.write(&mut buf).unwrap();
        assert_eq!(PaperDatabase::read(buf.as_slice(), &forest).unwrap(), db);
        let bad = "{\"url\":\"x\",\"topic\":\"a\",\"confidence\":1.5}";
        assert!(PaperDatabase::read(bad.as_bytes(), &forest).is_err());
        let unknown = "{\"url\":\"x\",\"topic\":\"zz\",\"confidence\":0.5}";
        assert!(matches!(PaperDatabase::read(unknown.as_bytes(), &forest), Err(Error::UnknownTopic(_))));
    }
}
