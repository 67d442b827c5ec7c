//! Interest profiles computed from dated user events.
//!
//! Each event contributes `interest_value / days_old` to its topic, and half
//! as much again to each step up the is-a tree: a topic `level` classes
//! above the event's topic receives `1 / 2^level` of the contribution.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recommend::PaperDatabase;
use crate::topic::{TopicForest, TopicPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventType {
    PaperBrowsed,
    RecommendationFollowed,
    TopicRatedInteresting,
    TopicRatedNotInteresting,
}

impl EventType {
    pub const ALL: [EventType; 4] = [
        EventType::PaperBrowsed,
        EventType::RecommendationFollowed,
        EventType::TopicRatedInteresting,
        EventType::TopicRatedNotInteresting,
    ];

    pub fn interest_value(self) -> f64 {
        match self {
            EventType::PaperBrowsed => 1.0,
            EventType::RecommendationFollowed => 2.0,
            EventType::TopicRatedInteresting => 10.0,
            EventType::TopicRatedNotInteresting => -10.0,
        }
    }

    /// Browse and follow events refer to a paper; ratings refer to a topic.
    pub fn refers_to_paper(self) -> bool {
        matches!(self, EventType::PaperBrowsed | EventType::RecommendationFollowed)
    }
}

pub fn event_interest_value(etype: EventType) -> f64 {
    etype.interest_value()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub user: String,
    pub etype: EventType,
    pub topic: TopicPath,
    pub date: NaiveDate,
}

/// A user's interest in each topic as of one date.
///
/// Entries holding exactly zero are never stored, so a topic is a member
/// of the profile iff its interest is nonzero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterestProfile {
    pub user: String,
    pub as_of: NaiveDate,
    entries: BTreeMap<TopicPath, f64>,
}

impl InterestProfile {
    pub fn new(user: impl Into<String>, as_of: NaiveDate) -> Self {
        InterestProfile { user: user.into(), as_of, entries: BTreeMap::new() }
    }

    pub fn from_entries<I>(user: impl Into<String>, as_of: NaiveDate, entries: I) -> Self
    where
        I: IntoIterator<Item = (TopicPath, f64)>,
    {
        let mut p = InterestProfile::new(user, as_of);
        for (topic, value) in entries {
            p.add(topic, value);
        }
        p.prune();
        p
    }

    /// Interest in `topic`; zero when absent.
    pub fn get(&self, topic: &TopicPath) -> f64 {
        self.entries.get(topic).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, topic: &TopicPath) -> bool {
        self.entries.contains_key(topic)
    }

    pub fn entries(&self) -> &BTreeMap<TopicPath, f64> {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TopicPath, f64)> {
        self.entries.iter().map(|(t, v)| (t, *v))
    }

    /// Member topics (nonzero entries).
    pub fn topics(&self) -> BTreeSet<TopicPath> {
        self.entries.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sets an entry outright; a zero value removes it.
    pub fn set(&mut self, topic: TopicPath, value: f64) {
        if value == 0.0 {
            self.entries.remove(&topic);
        } else {
            self.entries.insert(topic, value);
        }
    }

    /// Entrywise sum with `other`, keeping this profile's user and date.
    pub fn merged(&self, other: &InterestProfile) -> InterestProfile {
        let mut out = self.clone();
        for (topic, value) in other.iter() {
            out.add(topic.clone(), value);
        }
        out.prune();
        out
    }

    /// Every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> InterestProfile {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= factor;
        }
        out.prune();
        out
    }

    pub(crate) fn add(&mut self, topic: TopicPath, value: f64) {
        *self.entries.entry(topic).or_insert(0.0) += value;
    }

    pub(crate) fn prune(&mut self) {
        self.entries.retain(|_, v| *v != 0.0);
    }

    /// Adds `value` to `topic` and `value / 2^level` to each ancestor.
    pub(crate) fn add_inherited(&mut self, forest: &TopicForest, topic: &TopicPath, value: f64) -> Result<()> {
        let chain = forest.superclass_chain(topic)?;
        self.add(topic.clone(), value);
        let mut share = value;
        for ancestor in chain {
            share /= 2.0;
            self.add(ancestor, share);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RejectedEvent {
    pub event: Event,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOutcome {
    pub profile: InterestProfile,
    pub rejected: Vec<RejectedEvent>,
}

/// Whole days between `date` and `as_of`, never less than one.
pub fn days_old(date: NaiveDate, as_of: NaiveDate) -> i64 {
    (as_of - date).num_days().max(1)
}

/// Inverse-time-weighted interest profile for `user` as of `as_of`.
///
/// Events for another user, dated after `as_of`, or naming a topic outside
/// the forest are reported in [`ProfileOutcome::rejected`]; the rest are
/// processed normally.
pub fn compute_profile(user: &str, events: &[Event], forest: &TopicForest, as_of: NaiveDate) -> ProfileOutcome {
    let mut profile = InterestProfile::new(user, as_of);
    let mut rejected = Vec::new();
    for event in events {
        let reason = if event.user != user {
            Some(format!("event belongs to `{}`", event.user))
        } else if event.date > as_of {
            Some(format!("event dated {} is after {as_of}", event.date))
        } else if !forest.contains(&event.topic) {
            Some(format!("unknown topic `{}`", event.topic))
        } else {
            None
        };
        if let Some(reason) = reason {
            rejected.push(RejectedEvent { event: event.clone(), reason });
            continue;
        }
        let contribution = event.etype.interest_value() / days_old(event.date, as_of) as f64;
        profile
            .add_inherited(forest, &event.topic, contribution)
            .expect("topic membership checked above");
    }
    profile.prune();
    ProfileOutcome { profile, rejected }
}

/// Up to `n` strictly positive topics, highest interest first.
pub fn top_topics(profile: &InterestProfile, n: usize) -> Vec<TopicPath> {
    let mut positive: Vec<(&TopicPath, f64)> = profile.iter().filter(|(_, v)| *v > 0.0).collect();
    positive.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    positive.into_iter().take(n).map(|(t, _)| t.clone()).collect()
}

/// One line of an event log, before browse URLs are resolved to topics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogRecord {
    pub user: String,
    pub etype: EventType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic: Option<TopicPath>,
    pub date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnresolvedRecord {
    pub record: LogRecord,
    pub reason: String,
}

/// Parses one [`LogRecord`] per non-blank line.
pub fn read_log<R: std::io::BufRead>(reader: R) -> Result<Vec<LogRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: LogRecord =
            serde_json::from_str(&line).map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
        if record.url.is_none() && record.topic.is_none() {
            return Err(Error::Parse { line: i + 1, message: "record needs a url or a topic".into() });
        }
        out.push(record);
    }
    Ok(out)
}

/// Turns log records into events, looking browse URLs up in `papers`.
///
/// An explicit `topic` wins over a `url`. Records whose URL is not in the
/// paper database are returned as unresolved.
pub fn resolve_log(records: &[LogRecord], papers: &PaperDatabase) -> (Vec<Event>, Vec<UnresolvedRecord>) {
    let mut events = Vec::new();
    let mut unresolved = Vec::new();
    for record in records {
        let topic = match (&record.topic, &record.url) {
            (Some(topic), _) => Some(topic.clone()),
            (None, Some(url)) => papers.get(url).map(|p| p.topic.clone()),
            (None, None) => None,
        };
        match topic {
            Some(topic) => events.push(Event {
                user: record.user.clone(),
                etype: record.etype,
                topic,
                date: record.date,
            }),
            None => unresolved.push(UnresolvedRecord {
                record: record.clone(),
                reason: format!("url `{}` is not a classified paper", record.url.as_deref().unwrap_or("")),
            }),
        }
    }
    (events, unresolved)
}

/// URLs `user` has browsed or followed, for recommendation exclusion.
pub fn browsed_urls(records: &[LogRecord], user: &str) -> BTreeSet<String> {
    records
        .iter()
        .filter(|r| r.user == user && r.etype.refers_to_paper())
        .filter_map(|r| r.url.clone())
        .collect()
}
