//! Cold-start profiles.
//!
//! A *new-system* profile is built from a person's own publications: each
//! publication adds `1 / age` to its topic, with the usual halving shares
//! for super-classes. A *new-user* profile adds the interests of the
//! person's community of practice:
//!
//! ```text
//! interest(t) = γ / N_similar · Σ_u interest(u, t) · confidence(u)
//!             + Σ_n 1 / age(n)          (publications n of class t)
//! ```
//!
//! Copied community interests are not re-inherited: those profiles already
//! carry their own super-class entries.

use std::collections::BTreeMap;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::cop::CopResult;
use crate::error::{Error, Result};
use crate::kb::{publication_age, KnowledgeBase};
use crate::profile::InterestProfile;
use crate::recommend::PaperDatabase;
use crate::topic::{TopicForest, TopicPath};

pub const DEFAULT_GAMMA: f64 = 2.5;

/// Where the per-person community confidence comes from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfidenceSource {
    /// Every community member counts with confidence 1.
    Unit,
    /// The member's normalised relevance from community identification.
    #[default]
    Relevance,
}

impl std::str::FromStr for ConfidenceSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(ConfidenceSource::Unit),
            "relevance" => Ok(ConfidenceSource::Relevance),
            other => Err(Error::Argument(format!("confidence source must be `unit` or `relevance`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapParams {
    pub gamma: f64,
    pub reference_date: NaiveDate,
    pub confidence_source: ConfidenceSource,
}

impl BootstrapParams {
    pub fn new(reference_date: NaiveDate) -> Self {
        BootstrapParams { gamma: DEFAULT_GAMMA, reference_date, confidence_source: ConfidenceSource::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::Argument(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        Ok(())
    }
}

/// A publication paired with the topic it was classified under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedPublication {
    pub id: String,
    pub topic: TopicPath,
    pub year: Option<i32>,
}

impl ClassifiedPublication {
    pub fn new(id: impl Into<String>, topic: TopicPath, year: i32) -> Self {
        ClassifiedPublication { id: id.into(), topic, year: Some(year) }
    }
}

/// Topics for `person`'s publications: the paper database's class for the
/// publication's `uri` when known, otherwise the publication's own topic
/// label. Publications with neither are left out.
pub fn classify_publications(
    kb: &KnowledgeBase,
    person: &str,
    papers: &PaperDatabase,
) -> Result<Vec<ClassifiedPublication>> {
    let mut out = Vec::new();
    for publication in kb.publications_of(person)? {
        let classified = publication.uri.as_deref().and_then(|u| papers.get(u)).map(|p| p.topic.clone());
        match classified.or(publication.topic_label) {
            Some(topic) => out.push(ClassifiedPublication { id: publication.id, topic, year: publication.year }),
            None => tracing::warn!(publication = %publication.id, "publication has no topic; skipped"),
        }
    }
    Ok(out)
}

fn publication_term(
    person: &str,
    pubs: &[ClassifiedPublication],
    forest: &TopicForest,
    params: &BootstrapParams,
) -> Result<InterestProfile> {
    let reference_year = params.reference_date.year();
    let mut profile = InterestProfile::new(person, params.reference_date);
    for publication in pubs {
        let Some(year) = publication.year else {
            tracing::warn!(publication = %publication.id, "undated publication skipped");
            continue;
        };
        let age = publication_age(year, reference_year);
        profile.add_inherited(forest, &publication.topic, 1.0 / f64::from(age))?;
    }
    profile.prune();
    Ok(profile)
}

/// Initial profile from `person`'s own publications.
pub fn new_system_profile(
    person: &str,
    pubs: &[ClassifiedPublication],
    forest: &TopicForest,
    params: &BootstrapParams,
) -> Result<InterestProfile> {
    params.validate()?;
    publication_term(person, pubs, forest, params)
}

/// Initial profile from `person`'s publications plus the profiles of the
/// community members in `cop` that have one in `similar_profiles`.
pub fn new_user_profile(
    person: &str,
    pubs: &[ClassifiedPublication],
    cop: &CopResult,
    similar_profiles: &BTreeMap<String, InterestProfile>,
    forest: &TopicForest,
    params: &BootstrapParams,
) -> Result<InterestProfile> {
    params.validate()?;
    let mut profile = publication_term(person, pubs, forest, params)?;

    let similar: Vec<(&InterestProfile, f64)> = cop
        .entries
        .iter()
        .filter(|e| e.person != person)
        .filter_map(|e| {
            let confidence = match params.confidence_source {
                ConfidenceSource::Unit => 1.0,
                ConfidenceSource::Relevance => e.relevance,
            };
            similar_profiles.get(&e.person).map(|p| (p, confidence))
        })
        .collect();
    if similar.is_empty() || params.gamma == 0.0 {
        return Ok(profile);
    }

    let mut weighted: BTreeMap<&TopicPath, f64> = BTreeMap::new();
    for (other, confidence) in &similar {
        for (topic, interest) in other.iter() {
            if !forest.contains(topic) {
                return Err(Error::UnknownTopic(topic.to_string()));
            }
            *weighted.entry(topic).or_insert(0.0) += interest * confidence;
        }
    }
    let scale = params.gamma / similar.len() as f64;
    for (topic, sum) in weighted {
        profile.add(topic.clone(), scale * sum);
    }
    profile.prune();
    Ok(profile)
}

/// Asserts each profile into the knowledge base. Stops at the first
/// failure, leaving the caller's knowledge base untouched.
pub fn export_profiles(profiles: &[InterestProfile], kb: &KnowledgeBase) -> Result<KnowledgeBase> {
    if let Some(first) = profiles.first() {
        if let Some(odd) = profiles.iter().find(|p| p.as_of != first.as_of) {
            return Err(Error::Argument(format!(
                "profiles span several dates ({} and {})",
                first.as_of, odd.as_of
            )));
        }
    }
    profiles.iter().try_fold(kb.clone(), |kb, p| kb.assert_interest_profile(p))
}
