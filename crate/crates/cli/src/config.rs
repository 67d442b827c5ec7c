use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use ontorec::bootstrap::{BootstrapParams, ConfidenceSource, DEFAULT_GAMMA};
use ontorec::classify::ClassifierParams;
use ontorec::cop::{RelationWeights, DEFAULT_MAX_DEPTH};
use ontorec::recommend::DEFAULT_LIMIT;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub kb: Option<PathBuf>,
    pub corpus_manifest: Option<PathBuf>,
    pub training: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    pub logs: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub papers: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CopConfig {
    pub max_depth: usize,
    pub weights: RelationWeights,
}

impl Default for CopConfig {
    fn default() -> Self {
        CopConfig { max_depth: DEFAULT_MAX_DEPTH, weights: RelationWeights::standard() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapConfig {
    pub gamma: f64,
    pub reference_date: Option<NaiveDate>,
    pub confidence_source: ConfidenceSource,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig { gamma: DEFAULT_GAMMA, reference_date: None, confidence_source: ConfidenceSource::default() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecommendConfig {
    pub limit: usize,
}

impl Default for RecommendConfig {
    fn default() -> Self {
        RecommendConfig { limit: DEFAULT_LIMIT }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReplayConfig {
    pub start: Option<NaiveDate>,
    pub weeks: Option<usize>,
}

/// Contents of the TOML config file. Relative paths resolve against the
/// file's directory.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub paths: Paths,
    pub classifier: ClassifierParams,
    pub cop: CopConfig,
    pub bootstrap: BootstrapConfig,
    pub recommend: RecommendConfig,
    pub replay: ReplayConfig,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: Config =
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.paths.resolve(base);
        Ok(config)
    }

    pub fn bootstrap_params(&self, reference_date: NaiveDate) -> BootstrapParams {
        BootstrapParams {
            gamma: self.bootstrap.gamma,
            reference_date,
            confidence_source: self.bootstrap.confidence_source,
        }
    }
}

impl Paths {
    fn resolve(&mut self, base: &Path) {
        for p in [
            &mut self.kb,
            &mut self.corpus_manifest,
            &mut self.training,
            &mut self.stoplist,
            &mut self.logs,
            &mut self.model,
            &mut self.papers,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    /// A path that must be configured and must exist.
    pub fn input(&self, name: &str, path: &Option<PathBuf>) -> Result<PathBuf, CliError> {
        let path = path.clone().ok_or_else(|| CliError::Usage(format!("config sets no `paths.{name}`")))?;
        if !path.exists() {
            return Err(CliError::Data(format!("`paths.{name}` {} does not exist", path.display())));
        }
        Ok(path)
    }

    /// A path that must be configured; it need not exist yet.
    pub fn output(&self, name: &str, path: &Option<PathBuf>) -> Result<PathBuf, CliError> {
        path.clone().ok_or_else(|| CliError::Usage(format!("config sets no `paths.{name}`")))
    }
}
