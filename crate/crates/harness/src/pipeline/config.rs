use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use sbc_core::SbcWeights;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::providers::{PromptSet, PromptTemplate, ProviderSpec, RetryTiming};

fn default_iterations() -> u32 {
    3
}

fn default_concurrency() -> usize {
    1
}

/// Replacement prompts; an absent entry keeps the built-in template.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptOverrides {
    #[serde(default)]
    pub generate: Option<PromptTemplate>,
    #[serde(default)]
    pub reverse: Option<PromptTemplate>,
}

impl PromptOverrides {
    pub fn resolve(&self) -> PromptSet {
        let defaults = PromptSet::default();
        PromptSet {
            generate: self.generate.clone().unwrap_or(defaults.generate),
            reverse: self.reverse.clone().unwrap_or(defaults.reverse),
        }
    }
}

/// A run configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub providers: Vec<ProviderSpec>,
    pub embedding_provider: ProviderSpec,
    #[serde(default = "default_iterations")]
    pub iterations: u32,
    #[serde(default)]
    pub weights: SbcWeights,
    #[serde(default = "default_concurrency")]
    pub concurrency_limit: usize,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub prompts: PromptOverrides,
    #[serde(default)]
    pub retry: RetryTiming,
    /// Word-per-line file replacing the built-in function-word list.
    #[serde(default)]
    pub lexicon_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| PipelineError::ConfigParse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file. A relative `lexicon_path` is resolved against the
    /// config file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.into(), source })?;
        let mut config = Self::from_json(&text)?;
        if let (Some(lexicon), Some(dir)) = (&config.lexicon_path, path.parent()) {
            if lexicon.is_relative() {
                config.lexicon_path = Some(dir.join(lexicon));
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.providers.is_empty() {
            return Err(PipelineError::InvalidConfig("at least one provider is required".into()));
        }
        if self.iterations == 0 {
            return Err(PipelineError::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.concurrency_limit == 0 {
            return Err(PipelineError::InvalidConfig("concurrency_limit must be at least 1".into()));
        }
        let mut names = HashSet::new();
        for spec in self.providers.iter().chain(std::iter::once(&self.embedding_provider)) {
            spec.config.validate().map_err(|e| PipelineError::InvalidConfig(format!("{}: {e}", spec.name)))?;
        }
        for spec in &self.providers {
            if spec.name.is_empty() || !names.insert(spec.name.as_str()) {
                return Err(PipelineError::InvalidConfig(format!(
                    "provider name {:?} is empty or repeated",
                    spec.name
                )));
            }
        }
        Ok(())
    }
}
