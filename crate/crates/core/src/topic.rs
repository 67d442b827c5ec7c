//! Research-topic paths and the is-a forest that relates them.
//!
//! A topic is named by its full path from a root, written with backslash
//! separators (`AI\Agents\Recommender Systems`). Each node has at most one
//! parent, and a node's path is always its parent's path plus one label.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const SEPARATOR: char = '\\';

/// Path of labels from a root of the topic forest.
///
/// Ordering is label-wise lexicographic, which is the tie-break order used
/// throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TopicPath(Vec<String>);

impl TopicPath {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(|s| s.into().trim().to_owned()).collect();
        if labels.is_empty() || labels.iter().any(|l| l.is_empty()) {
            return Err(Error::InvalidRecord(format!(
                "topic path `{}` has an empty label",
                labels.join("\\")
            )));
        }
        Ok(TopicPath(labels))
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    /// Final label, e.g. `Recommender Systems`.
    pub fn label(&self) -> &str {
        self.0.last().map(String::as_str).unwrap_or_default()
    }

    /// Number of labels; a root has depth 1.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The path with its last label removed, or `None` for a root.
    pub fn prefix(&self) -> Option<TopicPath> {
        (self.0.len() > 1).then(|| TopicPath(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn child(&self, label: &str) -> Result<TopicPath> {
        let mut labels = self.0.clone();
        labels.push(label.to_owned());
        TopicPath::new(labels)
    }
}

impl fmt::Display for TopicPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, label) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "{SEPARATOR}")?;
            }
            f.write_str(label)?;
        }
        Ok(())
    }
}

impl FromStr for TopicPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TopicPath::new(s.split(SEPARATOR))
    }
}

impl Serialize for TopicPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TopicPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The is-a hierarchy of research topics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TopicForest {
    parents: BTreeMap<TopicPath, Option<TopicPath>>,
}

impl TopicForest {
    /// Builds a forest from `(path, parent)` declarations.
    ///
    /// A missing parent on a multi-label path is inferred from the path
    /// prefix. Parents must themselves be declared, parentage must be
    /// acyclic, and every path must extend its parent's path by one label.
    pub fn from_declarations<I>(decls: I) -> Result<Self>
    where
        I: IntoIterator<Item = (TopicPath, Option<TopicPath>)>,
    {
        let mut parents = BTreeMap::new();
        for (path, parent) in decls {
            let parent = parent.or_else(|| path.prefix());
            if parents.insert(path.clone(), parent).is_some() {
                return Err(Error::DuplicateId { id: path.to_string() });
            }
        }

        for parent in parents.values().flatten() {
            if !parents.contains_key(parent) {
                return Err(Error::DanglingReference { id: parent.to_string() });
            }
        }

        if let Some(cycle) = find_cycle(&parents) {
            return Err(Error::TopicCycle {
                cycle: cycle.iter().map(ToString::to_string).collect(),
            });
        }

        for (path, parent) in &parents {
            if path.prefix() != *parent {
                return Err(Error::InvalidRecord(format!(
                    "topic `{path}` does not extend its parent `{}`",
                    parent.as_ref().map(ToString::to_string).unwrap_or_default()
                )));
            }
        }

        Ok(TopicForest { parents })
    }

    pub fn contains(&self, topic: &TopicPath) -> bool {
        self.parents.contains_key(topic)
    }

    pub fn parent(&self, topic: &TopicPath) -> Option<&TopicPath> {
        self.parents.get(topic).and_then(Option::as_ref)
    }

    /// Ancestors nearest-first: index `i` is `i + 1` levels above `topic`.
    pub fn superclass_chain(&self, topic: &TopicPath) -> Result<Vec<TopicPath>> {
        if !self.contains(topic) {
            return Err(Error::UnknownTopic(topic.to_string()));
        }
        let mut chain = Vec::new();
        let mut cursor = self.parent(topic);
        while let Some(p) = cursor {
            chain.push(p.clone());
            cursor = self.parent(p);
        }
        Ok(chain)
    }

    /// Number of edges from `topic` up to its root.
    pub fn depth(&self, topic: &TopicPath) -> Option<usize> {
        self.superclass_chain(topic).ok().map(|c| c.len())
    }

    pub fn max_depth(&self) -> usize {
        self.parents.keys().map(|t| t.len() - 1).max().unwrap_or(0)
    }

    pub fn roots(&self) -> impl Iterator<Item = &TopicPath> {
        self.parents.iter().filter(|(_, p)| p.is_none()).map(|(t, _)| t)
    }

    pub fn children<'a>(&'a self, topic: &'a TopicPath) -> impl Iterator<Item = &'a TopicPath> + 'a {
        self.parents
            .iter()
            .filter(move |(_, p)| p.as_ref() == Some(topic))
            .map(|(t, _)| t)
    }

    pub fn topics(&self) -> impl Iterator<Item = &TopicPath> {
        self.parents.keys()
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }
}

fn find_cycle(parents: &BTreeMap<TopicPath, Option<TopicPath>>) -> Option<Vec<TopicPath>> {
    let mut settled: BTreeSet<&TopicPath> = BTreeSet::new();
    for start in parents.keys() {
        let mut trail: Vec<&TopicPath> = Vec::new();
        let mut cursor = Some(start);
        while let Some(node) = cursor {
            if settled.contains(node) {
                break;
            }
            if let Some(pos) = trail.iter().position(|t| *t == node) {
                return Some(trail[pos..].iter().map(|t| (*t).clone()).collect());
            }
            trail.push(node);
            cursor = parents.get(node).and_then(Option::as_ref);
        }
        settled.extend(trail);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(s: &str) -> TopicPath {
        s.parse().unwrap()
    }

    fn forest(paths: &[&str]) -> TopicForest {
        TopicForest::from_declarations(paths.iter().map(|p| (tp(p), None))).unwrap()
    }

    #[test]
    fn parses_and_displays_paths() {
        let p = tp("AI\\Agents\\Recommender Systems");
        assert_eq!(p.labels(), ["AI", "Agents", "Recommender Systems"]);
        assert_eq!(p.to_string(), "AI\\Agents\\Recommender Systems");
        assert_eq!(p.label(), "Recommender Systems");
        // labels are trimmed, as in `Knowledge Management\ CoP`
        assert_eq!(tp("Knowledge Management\\ CoP").label(), "CoP");
        assert!("A\\\\B".parse::<TopicPath>().is_err());
    }

    #[test]
    fn superclass_chain_is_nearest_first() {
        let f = forest(&["AI", "AI\\Agents", "AI\\Agents\\Recommender Systems"]);
        assert_eq!(
            f.superclass_chain(&tp("AI\\Agents\\Recommender Systems")).unwrap(),
            vec![tp("AI\\Agents"), tp("AI")]
        );
        assert!(f.superclass_chain(&tp("AI")).unwrap().is_empty());
        assert!(matches!(f.superclass_chain(&tp("ML")), Err(Error::UnknownTopic(_))));
    }

    #[test]
    fn rejects_undeclared_parent() {
        let err = TopicForest::from_declarations([(tp("AI\\Agents"), None)]).unwrap_err();
        assert!(matches!(err, Error::DanglingReference { id } if id == "AI"));
    }

    #[test]
    fn rejects_cycles_naming_them() {
        let err = TopicForest::from_declarations([
            (tp("A"), Some(tp("B"))),
            (tp("B"), Some(tp("C"))),
            (tp("C"), Some(tp("A"))),
        ])
        .unwrap_err();
        match err {
            Error::TopicCycle { cycle } => {
                assert_eq!(cycle.len(), 3);
                assert!(cycle.iter().any(|c| c == "A"));
                assert!(cycle.iter().any(|c| c == "C"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_inconsistent_parent() {
        let err = TopicForest::from_declarations([(tp("AI"), None), (tp("KT\\Ontology"), Some(tp("AI")))])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidRecord(_)));
    }

    #[test]
    fn children_and_roots() {
        let f = forest(&["AI", "AI\\Agents", "AI\\ML", "KT"]);
        let roots: Vec<_> = f.roots().map(ToString::to_string).collect();
        assert_eq!(roots, ["AI", "KT"]);
        let ai = tp("AI");
        assert_eq!(f.children(&ai).count(), 2);
        assert_eq!(f.max_depth(), 1);
    }
}
