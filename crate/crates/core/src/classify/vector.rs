use std::collections::{BTreeMap, HashMap};
use std::hash::Hasher;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CAPACITY: usize = 15_000;

/// Bounded term -> index map. Indexes are dense and follow lexicographic
/// term order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "DictionaryRepr", into = "DictionaryRepr")]
pub struct TermDictionary {
    terms: Vec<String>,
    capacity: usize,
    index: HashMap<String, u32>,
    fingerprint: u64,
}

#[derive(Serialize, Deserialize)]
struct DictionaryRepr {
    capacity: usize,
    terms: Vec<String>,
}

impl From<DictionaryRepr> for TermDictionary {
    fn from(r: DictionaryRepr) -> Self {
        TermDictionary::from_sorted(r.terms, r.capacity)
    }
}

impl From<TermDictionary> for DictionaryRepr {
    fn from(d: TermDictionary) -> Self {
        DictionaryRepr { capacity: d.capacity, terms: d.terms }
    }
}

impl TermDictionary {
    fn from_sorted(terms: Vec<String>, capacity: usize) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        let mut h = FnvHasher::default();
        h.write_usize(capacity);
        for t in &terms {
            h.write(t.as_bytes());
            h.write_u8(0);
        }
        TermDictionary { terms, capacity, index, fingerprint: h.finish() }
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).map(|&i| i as usize)
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
}

/// Keeps the `capacity` terms with the highest document frequency
/// (ties lexicographic).
pub fn build_dictionary<S: AsRef<str>>(corpus: &[Vec<S>], capacity: usize) -> Result<TermDictionary> {
    if capacity < 1 {
        return Err(Error::Argument("dictionary capacity must be at least 1".into()));
    }
    let mut df: HashMap<&str, usize> = HashMap::new();
    for doc in corpus {
        let mut seen: Vec<&str> = doc.iter().map(AsRef::as_ref).collect();
        seen.sort_unstable();
        seen.dedup();
        for t in seen {
            *df.entry(t).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = df.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(capacity);
    let mut terms: Vec<String> = ranked.into_iter().map(|(t, _)| t.to_owned()).collect();
    terms.sort_unstable();
    Ok(TermDictionary::from_sorted(terms, capacity))
}

/// Sparse term-frequency vector over one dictionary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermVector {
    dictionary: u64,
    /// `(index, weight)` sorted by index; weights are positive.
    weights: Vec<(u32, f64)>,
}

impl TermVector {
    pub fn zero(dict: &TermDictionary) -> Self {
        TermVector { dictionary: dict.fingerprint, weights: Vec::new() }
    }

    /// Builds a vector from `(term, weight)` pairs; unknown terms and
    /// non-positive weights are ignored.
    pub fn from_weights<'a, I>(dict: &TermDictionary, weights: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut map: BTreeMap<u32, f64> = BTreeMap::new();
        for (term, w) in weights {
            if let Some(&i) = dict.index.get(term) {
                *map.entry(i).or_insert(0.0) += w;
            }
        }
        TermVector { dictionary: dict.fingerprint, weights: map.into_iter().filter(|(_, w)| *w > 0.0).collect() }
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights
            .binary_search_by_key(&(index as u32), |(i, _)| *i)
            .map(|pos| self.weights[pos].1)
            .unwrap_or(0.0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().map(|(i, w)| (*i as usize, *w))
    }

    pub fn nnz(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn belongs_to(&self, dict: &TermDictionary) -> bool {
        self.dictionary == dict.fingerprint
    }
}

/// Occurrence count of each in-dictionary token.
pub fn vectorize<S: AsRef<str>>(tokens: &[S], dict: &TermDictionary) -> TermVector {
    TermVector::from_weights(dict, tokens.iter().map(|t| (t.as_ref(), 1.0)))
}

/// Euclidean distance between two vectors over the same dictionary.
pub fn knn_distance(a: &TermVector, b: &TermVector) -> Result<f64> {
    if a.dictionary != b.dictionary {
        return Err(Error::DictionaryMismatch);
    }
    Ok(squared_distance(&a.weights, &b.weights).sqrt())
}

fn squared_distance(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    while i < a.len() && j < b.len() {
        let d = match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                i += 1;
                a[i - 1].1
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                b[j - 1].1
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                a[i - 1].1 - b[j - 1].1
            }
        };
        sum += d * d;
    }
    sum += a[i..].iter().map(|(_, w)| w * w).sum::<f64>();
    sum += b[j..].iter().map(|(_, w)| w * w).sum::<f64>();
    sum
}
