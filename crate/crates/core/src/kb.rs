//! The academic knowledge base: people, publications, projects, events,
//! the research-topic forest, and typed relations between them.
//!
//! The input format is one JSON object per line. Three record shapes are
//! recognised by their keys:
//!
//! ```text
//! {"id": "stone", "kind": "person", "attributes": {"name": "Ada Stone"}}
//! {"path": "AI\\Agents", "parent": "AI"}
//! {"source": "stone", "rel": "authored", "target": "pub-1"}
//! ```
//!
//! Publications keep their metadata in `attributes`: `title`, `year`,
//! `topic` (a ground-truth topic path) and `uri`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::profile::InterestProfile;
use crate::topic::{TopicForest, TopicPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Person,
    Publication,
    Project,
    Event,
    Topic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entity {
    pub id: String,
    pub kind: EntityKind,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attributes: BTreeMap<String, String>,
}

impl Entity {
    pub fn new(id: impl Into<String>, kind: EntityKind) -> Self {
        Entity { id: id.into(), kind, attributes: BTreeMap::new() }
    }

    pub fn with_attr(mut self, key: &str, value: impl Into<String>) -> Self {
        self.attributes.insert(key.to_owned(), value.into());
        self
    }

    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attributes.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationType {
    Authored,
    Supervises,
    Attended,
    MemberOfProject,
    HasResearchInterest,
}

impl RelationType {
    pub const ALL: [RelationType; 5] = [
        RelationType::Authored,
        RelationType::Supervises,
        RelationType::Attended,
        RelationType::MemberOfProject,
        RelationType::HasResearchInterest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationType::Authored => "authored",
            RelationType::Supervises => "supervises",
            RelationType::Attended => "attended",
            RelationType::MemberOfProject => "member_of_project",
            RelationType::HasResearchInterest => "has_research_interest",
        }
    }

    /// Entity kinds allowed at the source and target ends.
    fn endpoint_kinds(self) -> (EntityKind, EntityKind) {
        match self {
            RelationType::Authored => (EntityKind::Person, EntityKind::Publication),
            RelationType::Supervises => (EntityKind::Person, EntityKind::Person),
            RelationType::Attended => (EntityKind::Person, EntityKind::Event),
            RelationType::MemberOfProject => (EntityKind::Person, EntityKind::Project),
            RelationType::HasResearchInterest => (EntityKind::Person, EntityKind::Topic),
        }
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RelationType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RelationType::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Argument(format!("unknown relation type `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub source: String,
    #[serde(rename = "rel")]
    pub rel_type: RelationType,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<NaiveDate>,
}

impl Relation {
    pub fn new(source: impl Into<String>, rel_type: RelationType, target: impl Into<String>) -> Self {
        Relation { source: source.into(), rel_type, target: target.into(), value: None, date: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopicRecord {
    pub path: TopicPath,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<TopicPath>,
}

/// One line of knowledge-base input.
#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    Entity(Entity),
    Topic(TopicRecord),
    Relation(Relation),
}

impl Record {
    fn from_json(map: Map<String, Value>) -> std::result::Result<Record, String> {
        let value = Value::Object(map);
        let parsed = if value.get("source").is_some() {
            serde_json::from_value(value).map(Record::Relation)
        } else if value.get("id").is_some() {
            serde_json::from_value(value).map(Record::Entity)
        } else if value.get("path").is_some() {
            serde_json::from_value(value).map(Record::Topic)
        } else {
            return Err("expected an entity {id, kind}, topic {path, parent} or relation {source, rel, target}".into());
        };
        parsed.map_err(|e| e.to_string())
    }
}

/// Publication view assembled from a publication entity and its authors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Publication {
    pub id: String,
    pub title: String,
    pub year: Option<i32>,
    pub authors: Vec<String>,
    pub topic_label: Option<TopicPath>,
    pub uri: Option<String>,
}

/// Age in whole years, counting a publication from the reference year
/// itself as one year old.
pub fn publication_age(publication_year: i32, reference_year: i32) -> u32 {
    (reference_year - publication_year).max(1) as u32
}

/// Loaded knowledge base. Immutable apart from
/// [`KnowledgeBase::assert_interest_profile`], which returns a new version.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeBase {
    entities: BTreeMap<String, Entity>,
    forest: TopicForest,
    relations: Vec<Relation>,
}

/// Parses knowledge-base records, one JSON object per non-blank line, and
/// validates the result.
pub fn load_kb<R: BufRead>(reader: R) -> Result<KnowledgeBase> {
    let mut builder = KbBuilder::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: i + 1, message };
        let map: Map<String, Value> = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        builder.push(Record::from_json(map).map_err(parse_err)?);
    }
    builder.build()
}

/// Collects records and validates them all at once in [`KbBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct KbBuilder {
    records: Vec<Record>,
}

impl KbBuilder {
    pub fn push(&mut self, record: Record) -> &mut Self {
        self.records.push(record);
        self
    }

    pub fn entity(&mut self, entity: Entity) -> &mut Self {
        self.push(Record::Entity(entity))
    }

    pub fn person(&mut self, id: &str) -> &mut Self {
        self.entity(Entity::new(id, EntityKind::Person))
    }

    pub fn topic(&mut self, path: &str) -> &mut Self {
        let path = path.parse().expect("valid topic path");
        self.push(Record::Topic(TopicRecord { path, parent: None }))
    }

    pub fn relation(&mut self, relation: Relation) -> &mut Self {
        self.push(Record::Relation(relation))
    }

    pub fn link(&mut self, source: &str, rel_type: RelationType, target: &str) -> &mut Self {
        self.relation(Relation::new(source, rel_type, target))
    }

    pub fn build(&self) -> Result<KnowledgeBase> {
        let mut entities = BTreeMap::new();
        let mut topics = Vec::new();
        let mut relations = Vec::new();
        for record in &self.records {
            match record {
                Record::Entity(e) => {
                    if e.kind == EntityKind::Topic {
                        return Err(Error::InvalidRecord(format!(
                            "`{}`: declare topics with {{path, parent}} records",
                            e.id
                        )));
                    }
                    if entities.insert(e.id.clone(), e.clone()).is_some() {
                        return Err(Error::DuplicateId { id: e.id.clone() });
                    }
                }
                Record::Topic(t) => topics.push((t.path.clone(), t.parent.clone())),
                Record::Relation(r) => relations.push(r.clone()),
            }
        }
        let forest = TopicForest::from_declarations(topics)?;
        if let Some(clash) = forest.topics().map(ToString::to_string).find(|t| entities.contains_key(t)) {
            return Err(Error::DuplicateId { id: clash });
        }

        let kb = KnowledgeBase { entities, forest, relations };
        for e in kb.entities.values() {
            kb.check_entity(e)?;
        }
        for r in &kb.relations {
            kb.check_relation(r)?;
        }
        Ok(kb)
    }
}

impl KnowledgeBase {
    fn check_entity(&self, e: &Entity) -> Result<()> {
        if e.kind != EntityKind::Publication {
            return Ok(());
        }
        if let Some(year) = e.attr("year") {
            let year: i32 = year
                .trim()
                .parse()
                .map_err(|_| Error::InvalidRecord(format!("`{}`: year `{year}` is not an integer", e.id)))?;
            if year < 1900 {
                return Err(Error::InvalidRecord(format!("`{}`: year {year} is before 1900", e.id)));
            }
        }
        if let Some(topic) = e.attr("topic") {
            let topic: TopicPath = topic.parse()?;
            if !self.forest.contains(&topic) {
                return Err(Error::UnknownTopic(topic.to_string()));
            }
        }
        Ok(())
    }

    fn node_kind(&self, id: &str) -> Option<EntityKind> {
        if let Some(e) = self.entities.get(id) {
            return Some(e.kind);
        }
        let topic: TopicPath = id.parse().ok()?;
        self.forest.contains(&topic).then_some(EntityKind::Topic)
    }

    fn check_relation(&self, r: &Relation) -> Result<()> {
        let (want_source, want_target) = r.rel_type.endpoint_kinds();
        for (id, want) in [(&r.source, want_source), (&r.target, want_target)] {
            let kind = self.node_kind(id).ok_or_else(|| Error::DanglingReference { id: id.clone() })?;
            if kind != want {
                return Err(Error::InvalidRecord(format!(
                    "`{}` relation expects `{id}` to be a {want:?}, found {kind:?}",
                    r.rel_type
                )));
            }
        }
        match (r.rel_type, r.value) {
            (RelationType::HasResearchInterest, None) => Err(Error::InvalidRecord(format!(
                "has_research_interest from `{}` to `{}` carries no value",
                r.source, r.target
            ))),
            (RelationType::HasResearchInterest, Some(v)) if !v.is_finite() => {
                Err(Error::InvalidRecord(format!("interest value {v} is not finite")))
            }
            (other, Some(_)) if other != RelationType::HasResearchInterest => {
                Err(Error::InvalidRecord(format!("`{other}` relations carry no value")))
            }
            _ => Ok(()),
        }
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.get(id)
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    /// Number of entity records; topics live in the forest and are not counted.
    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn persons(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values().filter(|e| e.kind == EntityKind::Person)
    }

    pub fn forest(&self) -> &TopicForest {
        &self.forest
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_node(&self, id: &str) -> bool {
        self.node_kind(id).is_some()
    }

    pub fn kind_of(&self, id: &str) -> Option<EntityKind> {
        self.node_kind(id)
    }

    pub fn superclass_chain(&self, topic: &TopicPath) -> Result<Vec<TopicPath>> {
        self.forest.superclass_chain(topic)
    }

    fn person(&self, id: &str) -> Result<&Entity> {
        self.entities
            .get(id)
            .filter(|e| e.kind == EntityKind::Person)
            .ok_or_else(|| Error::not_found("person", id))
    }

    fn publication_view(&self, e: &Entity) -> Publication {
        let authors: BTreeSet<&str> = self
            .relations
            .iter()
            .filter(|r| r.rel_type == RelationType::Authored && r.target == e.id)
            .map(|r| r.source.as_str())
            .collect();
        Publication {
            id: e.id.clone(),
            title: e.attr("title").unwrap_or_default().to_owned(),
            year: e.attr("year").and_then(|y| y.trim().parse().ok()),
            authors: authors.into_iter().map(str::to_owned).collect(),
            topic_label: e.attr("topic").and_then(|t| t.parse().ok()),
            uri: e.attr("uri").map(str::to_owned),
        }
    }

    /// Every publication entity, newest first, then by id.
    pub fn publications(&self) -> Vec<Publication> {
        let mut pubs: Vec<Publication> = self
            .entities
            .values()
            .filter(|e| e.kind == EntityKind::Publication)
            .map(|e| self.publication_view(e))
            .collect();
        sort_publications(&mut pubs);
        pubs
    }

    /// Publications authored by `person`, newest first, then by id.
    pub fn publications_of(&self, person: &str) -> Result<Vec<Publication>> {
        self.person(person)?;
        let ids: BTreeSet<&str> = self
            .relations
            .iter()
            .filter(|r| r.rel_type == RelationType::Authored && r.source == person)
            .map(|r| r.target.as_str())
            .collect();
        let mut pubs: Vec<Publication> =
            ids.into_iter().map(|id| self.publication_view(&self.entities[id])).collect();
        sort_publications(&mut pubs);
        Ok(pubs)
    }

    /// Count of stored relations per type; every type is present.
    pub fn relation_frequency(&self) -> BTreeMap<RelationType, usize> {
        let mut counts: BTreeMap<RelationType, usize> = RelationType::ALL.into_iter().map(|r| (r, 0)).collect();
        for r in &self.relations {
            *counts.get_mut(&r.rel_type).expect("all types seeded") += 1;
        }
        counts
    }

    /// Stores `profile` as `has_research_interest` relations dated
    /// `profile.as_of`, replacing anything previously asserted for the same
    /// person and date. The whole profile is rejected if any topic is
    /// unknown.
    pub fn assert_interest_profile(&self, profile: &InterestProfile) -> Result<KnowledgeBase> {
        self.person(&profile.user)?;
        if let Some((topic, _)) = profile.iter().find(|(t, _)| !self.forest.contains(t)) {
            return Err(Error::UnknownTopic(topic.to_string()));
        }
        let mut next = self.clone();
        next.relations.retain(|r| {
            !(r.rel_type == RelationType::HasResearchInterest
                && r.source == profile.user
                && r.date == Some(profile.as_of))
        });
        next.relations.extend(profile.iter().map(|(topic, value)| Relation {
            source: profile.user.clone(),
            rel_type: RelationType::HasResearchInterest,
            target: topic.to_string(),
            value: Some(value),
            date: Some(profile.as_of),
        }));
        Ok(next)
    }

    /// Profile asserted for `person` on `date`, if any.
    pub fn interest_profile(&self, person: &str, date: NaiveDate) -> Option<InterestProfile> {
        let entries: Vec<(TopicPath, f64)> = self
            .relations
            .iter()
            .filter(|r| {
                r.rel_type == RelationType::HasResearchInterest && r.source == person && r.date == Some(date)
            })
            .filter_map(|r| Some((r.target.parse().ok()?, r.value?)))
            .collect();
        (!entries.is_empty()).then(|| InterestProfile::from_entries(person, date, entries))
    }

    /// Most recent dated profile asserted for `person` on or before `date`.
    pub fn latest_interest_profile(&self, person: &str, date: NaiveDate) -> Option<InterestProfile> {
        let latest = self
            .relations
            .iter()
            .filter(|r| r.rel_type == RelationType::HasResearchInterest && r.source == person)
            .filter_map(|r| r.date)
            .filter(|d| *d <= date)
            .max()?;
        self.interest_profile(person, latest)
    }

    /// All records in load order: entities, topics, then relations.
    pub fn records(&self) -> Vec<Record> {
        let topics = self.forest.topics().map(|t| {
            Record::Topic(TopicRecord { path: t.clone(), parent: self.forest.parent(t).cloned() })
        });
        self.entities
            .values()
            .cloned()
            .map(Record::Entity)
            .chain(topics)
            .chain(self.relations.iter().cloned().map(Record::Relation))
            .collect()
    }

    /// Writes the knowledge base back out in the format [`load_kb`] reads.
    pub fn write_records<W: Write>(&self, mut out: W) -> Result<()> {
        for record in self.records() {
            let line = match &record {
                Record::Entity(e) => serde_json::to_string(e)?,
                Record::Topic(t) => serde_json::to_string(t)?,
                Record::Relation(r) => serde_json::to_string(r)?,
            };
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

fn sort_publications(pubs: &mut [Publication]) {
    pubs.sort_by(|a, b| b.year.cmp(&a.year).then_with(|| a.id.cmp(&b.id)));
}
