//! Corpus ingestion: a manifest of `{file, url}` records naming plain-text
//! files, and training labels as `{url, topic_path}` records.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topic::TopicPath;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub file: PathBuf,
    pub url: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub url: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingLabel {
    pub url: String,
    pub topic_path: TopicPath,
}

fn read_records<T: DeserializeOwned, R: BufRead>(reader: R) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?);
    }
    Ok(out)
}

/// Loads every document listed in the manifest at `path`. Relative file
/// names resolve against the manifest's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<Document>> {
    let entries: Vec<ManifestEntry> = read_records(BufReader::new(fs::File::open(path)?))?;
    let base = path.parent().unwrap_or(Path::new("."));
    entries
        .into_iter()
        .map(|e| {
            let file = base.join(&e.file);
            let text = fs::read_to_string(&file)
                .map_err(|err| Error::InvalidRecord(format!("{}: {err}", file.display())))?;
            Ok(Document { url: e.url, text })
        })
        .collect()
}

pub fn read_training_labels<R: BufRead>(reader: R) -> Result<Vec<TrainingLabel>> {
    read_records(reader)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_labels() {
        let input = "{\"url\":\"http://a\",\"topic_path\":\"AI\\\\Agents\"}\n\n";
        let labels = read_training_labels(input.as_bytes()).unwrap();
        assert_eq!(labels[0].topic_path.to_string(), "AI\\Agents");
        assert!(matches!(read_training_labels("{\"url\":1}".as_bytes()), Err(Error::Parse { line: 1, .. })));
    }
}
