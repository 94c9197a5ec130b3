//! Experiment configuration: the nine-version ladder and the flat, typed
//! config-file format.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::{GbdtConfig, LogRegConfig};
use crate::embeddings::EmbeddingMode;
use crate::error::{Error, Result};
use crate::nn::Architecture;

/// One rung of the model ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelVersion {
    V1a,
    V1b,
    V2,
    V3a,
    V3b,
    V3c,
    V4a,
    V4b,
    V4c,
}

impl ModelVersion {
    /// Ladder order used in reports.
    pub fn all() -> [ModelVersion; 9] {
        use ModelVersion::*;
        [V1a, V1b, V2, V3a, V3b, V3c, V4a, V4b, V4c]
    }

    pub fn id(&self) -> &'static str {
        match self {
            ModelVersion::V1a => "V1a",
            ModelVersion::V1b => "V1b",
            ModelVersion::V2 => "V2",
            ModelVersion::V3a => "V3a",
            ModelVersion::V3b => "V3b",
            ModelVersion::V3c => "V3c",
            ModelVersion::V4a => "V4a",
            ModelVersion::V4b => "V4b",
            ModelVersion::V4c => "V4c",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ModelVersion::V1a => "GloVe+Logistic Regression",
            ModelVersion::V1b => "GloVe+GBDT",
            ModelVersion::V2 => "GloVe+LSTM",
            ModelVersion::V3a => "Random+BiLSTM",
            ModelVersion::V3b => "GloVe+BiLSTM",
            ModelVersion::V3c => "GN-GloVe+BiLSTM",
            ModelVersion::V4a => "Random+BiLSTM+Attn",
            ModelVersion::V4b => "GloVe+BiLSTM+Attn",
            ModelVersion::V4c => "GN-GloVe+BiLSTM+Attn",
        }
    }

    /// The ladder fixes the embedding mode per version.
    pub fn embedding_mode(&self) -> EmbeddingMode {
        match self {
            ModelVersion::V3a | ModelVersion::V4a => EmbeddingMode::Random,
            ModelVersion::V3c | ModelVersion::V4c => EmbeddingMode::GnGlove,
            _ => EmbeddingMode::Glove,
        }
    }

    pub fn is_deep(&self) -> bool {
        !matches!(self, ModelVersion::V1a | ModelVersion::V1b)
    }
}

impl std::str::FromStr for ModelVersion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lowered = s.to_ascii_lowercase();
        ModelVersion::all()
            .into_iter()
            .find(|v| v.id().to_ascii_lowercase() == lowered)
            .ok_or_else(|| Error::Config(format!("unknown model version {s:?}")))
    }
}

impl std::fmt::Display for ModelVersion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// One row of the ladder: model version, embedding configuration,
/// hyperparameters, split ratio, and the seed list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub version: ModelVersion,
    pub glove_path: Option<PathBuf>,
    pub gn_glove_path: Option<PathBuf>,
    pub embedding_dim: usize,
    pub trainable_embeddings: bool,
    pub max_len: usize,
    pub min_freq: u64,
    pub hidden: usize,
    pub hidden2: usize,
    pub attn_dim: usize,
    pub dropout: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub split_ratio: f64,
    pub seeds: Vec<u64>,
    pub early_stop_loss: Option<f64>,
    pub logreg: LogRegConfig,
    pub gbdt: GbdtConfig,
}

impl ExperimentConfig {
    pub fn with_defaults(version: ModelVersion) -> Self {
        Self {
            version,
            glove_path: None,
            gn_glove_path: None,
            embedding_dim: 100,
            trainable_embeddings: true,
            max_len: 48,
            min_freq: 1,
            hidden: 64,
            hidden2: 64,
            attn_dim: 64,
            dropout: 0.5,
            batch_size: 32,
            epochs: 30,
            learning_rate: 1e-3,
            split_ratio: 0.8,
            seeds: vec![1, 2, 3],
            early_stop_loss: None,
            logreg: LogRegConfig::default(),
            gbdt: GbdtConfig::default(),
        }
    }

    pub fn embedding_mode(&self) -> EmbeddingMode {
        self.version.embedding_mode()
    }

    /// Path of the pretrained table this version needs, if any.
    pub fn embedding_path(&self) -> Result<Option<&Path>> {
        match self.embedding_mode() {
            EmbeddingMode::Random => Ok(None),
            EmbeddingMode::Glove => self
                .glove_path
                .as_deref()
                .map(Some)
                .ok_or_else(|| Error::Config(format!("{} requires glove_path", self.version))),
            EmbeddingMode::GnGlove => self
                .gn_glove_path
                .as_deref()
                .map(Some)
                .ok_or_else(|| Error::Config(format!("{} requires gn_glove_path", self.version))),
        }
    }

    /// The deep architecture for this version; None for V1 models.
    pub fn architecture(&self) -> Option<Architecture> {
        match self.version {
            ModelVersion::V1a | ModelVersion::V1b => None,
            ModelVersion::V2 => Some(Architecture::StackedLstm {
                hidden1: self.hidden,
                hidden2: self.hidden2,
            }),
            ModelVersion::V3a | ModelVersion::V3b | ModelVersion::V3c => {
                Some(Architecture::BiLstm { hidden: self.hidden })
            }
            ModelVersion::V4a | ModelVersion::V4b | ModelVersion::V4c => {
                Some(Architecture::BiLstmAttention {
                    hidden: self.hidden,
                    attn_dim: self.attn_dim,
                })
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("seed list must not be empty".into()));
        }
        if self.embedding_dim == 0 || self.max_len == 0 || self.batch_size == 0 {
            return Err(Error::Config(
                "embedding_dim, max_len and batch_size must be positive".into(),
            ));
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(Error::InvalidRatio(self.split_ratio));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::InvalidDropoutRate(self.dropout));
        }
        self.embedding_path()?;
        Ok(())
    }

    /// Stable hex digest of the serialized config.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// The flat, typed on-disk config format (TOML). Every key is optional;
/// unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: Option<String>,
    pub versions: Option<Vec<String>>,
    pub glove_path: Option<PathBuf>,
    pub gn_glove_path: Option<PathBuf>,
    pub embedding_dim: Option<usize>,
    pub trainable_embeddings: Option<bool>,
    pub max_len: Option<usize>,
    pub min_freq: Option<u64>,
    pub hidden: Option<usize>,
    pub hidden2: Option<usize>,
    pub attn_dim: Option<usize>,
    pub dropout: Option<f64>,
    pub batch_size: Option<usize>,
    pub epochs: Option<usize>,
    pub learning_rate: Option<f64>,
    pub split_ratio: Option<f64>,
    pub seeds: Option<Vec<u64>>,
    pub early_stop_loss: Option<f64>,
    pub slang_map: Option<PathBuf>,
    pub logreg_learning_rate: Option<f64>,
    pub logreg_epochs: Option<usize>,
    pub logreg_l2: Option<f64>,
    pub gbdt_n_trees: Option<usize>,
    pub gbdt_max_depth: Option<usize>,
    pub gbdt_learning_rate: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Materializes the config for one version, filling defaults.
    pub fn experiment(&self, version: ModelVersion) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::with_defaults(version);
        macro_rules! copy {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field.clone() { cfg.$field = v; })*
            };
        }
        copy!(
            embedding_dim,
            trainable_embeddings,
            max_len,
            min_freq,
            hidden,
            hidden2,
            attn_dim,
            dropout,
            batch_size,
            epochs,
            learning_rate,
            split_ratio,
            seeds
        );
        cfg.glove_path = self.glove_path.clone();
        cfg.gn_glove_path = self.gn_glove_path.clone();
        cfg.early_stop_loss = self.early_stop_loss;
        if let Some(v) = self.logreg_learning_rate {
            cfg.logreg.learning_rate = v;
        }
        if let Some(v) = self.logreg_epochs {
            cfg.logreg.epochs = v;
        }
        if let Some(v) = self.logreg_l2 {
            cfg.logreg.l2 = v;
        }
        if let Some(v) = self.gbdt_n_trees {
            cfg.gbdt.n_trees = v;
        }
        if let Some(v) = self.gbdt_max_depth {
            cfg.gbdt.max_depth = v;
        }
        if let Some(v) = self.gbdt_learning_rate {
            cfg.gbdt.learning_rate = v;
        }
        cfg
    }

    /// The single version named by `version` (required, for `train`).
    pub fn single_version(&self) -> Result<ModelVersion> {
        self.version
            .as_deref()
            .ok_or_else(|| Error::Config("config file must set `version`".into()))?
            .parse()
    }

    /// The version list for a ladder run; defaults to all nine.
    pub fn ladder_versions(&self) -> Result<Vec<ModelVersion>> {
        match &self.versions {
            None => Ok(ModelVersion::all().to_vec()),
            Some(list) => list.iter().map(|s| s.parse()).collect(),
        }
    }
}
