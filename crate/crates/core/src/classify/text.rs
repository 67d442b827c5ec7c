use std::collections::BTreeSet;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::porter::stem;
use crate::error::Result;

const DEFAULT_STOPLIST: &str = include_str!("../../data/stoplist.txt");

/// Words dropped before stemming. Stored lowercase.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stoplist(BTreeSet<String>);

impl Stoplist {
    /// The bundled English stop-list (about 300 words).
    pub fn english() -> Self {
        Self::parse(DEFAULT_STOPLIST)
    }

    /// One word per line; blank lines and `#` comments are ignored.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut words = BTreeSet::new();
        for line in reader.lines() {
            if let Some(w) = clean_line(&line?) {
                words.insert(w);
            }
        }
        Ok(Stoplist(words))
    }

    fn parse(text: &str) -> Self {
        Stoplist(text.lines().filter_map(clean_line).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn clean_line(line: &str) -> Option<String> {
    let w = line.trim();
    (!w.is_empty() && !w.starts_with('#')).then(|| w.to_lowercase())
}

impl<S: Into<String>> FromIterator<S> for Stoplist {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Stoplist(iter.into_iter().map(|s| s.into().to_lowercase()).collect())
    }
}

/// Lowercase alphabetic runs of `text`, minus stop words, each replaced by
/// its Porter stem. Tokens that stem to nothing are dropped.
pub fn tokenize_and_stem(text: &str, stoplist: &Stoplist) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .filter(|t| !stoplist.contains(t))
        .map(|t| stem(&t))
        .filter(|t| !t.is_empty())
        .collect()
}
