//! Runs one ladder experiment (train + evaluate per seed) and the full
//! nine-version reproduction.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{gbdt_fit, gbdt_predict, logreg_fit, mean_embedding};
use crate::corpus::{Corpus, SplitPair};
use crate::embeddings::{
    build_matrix, build_vocab, encode, parse_embedding_file, EmbeddingMode, EmbeddingTable,
    Vocabulary,
};
use crate::error::Result;
use crate::nn::{fit, ModelParams, TrainConfig};

use super::config::{ExperimentConfig, ModelVersion};
use super::report::{Aggregate, ExperimentOutcome, MetricsReport};
use super::{confusion, precision_recall_f1};

/// Parsed pretrained tables shared across experiments. A file that fails
/// to load only fails the experiments that need it.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingTables {
    glove: Option<std::result::Result<Arc<EmbeddingTable>, String>>,
    gn_glove: Option<std::result::Result<Arc<EmbeddingTable>, String>>,
}

impl EmbeddingTables {
    /// Parses whichever files the given configs need, each path once.
    pub fn load_for(configs: &[ExperimentConfig]) -> Self {
        let mut tables = Self::default();
        for cfg in configs {
            let slot = match cfg.embedding_mode() {
                EmbeddingMode::Random => continue,
                EmbeddingMode::Glove => &mut tables.glove,
                EmbeddingMode::GnGlove => &mut tables.gn_glove,
            };
            if slot.is_none() {
                *slot = Some(load_table(cfg));
            }
        }
        tables
    }

    fn table_for(&self, mode: EmbeddingMode) -> Result<Option<&EmbeddingTable>> {
        let slot = match mode {
            EmbeddingMode::Random => return Ok(None),
            EmbeddingMode::Glove => &self.glove,
            EmbeddingMode::GnGlove => &self.gn_glove,
        };
        match slot {
            Some(Ok(table)) => Ok(Some(table)),
            Some(Err(msg)) => Err(crate::error::Error::Config(msg.clone())),
            None => Err(crate::error::Error::Config(format!(
                "no {mode} table loaded"
            ))),
        }
    }
}

fn load_table(cfg: &ExperimentConfig) -> std::result::Result<Arc<EmbeddingTable>, String> {
    let path = cfg
        .embedding_path()
        .map_err(|e| e.to_string())?
        .expect("non-random mode has a path");
    parse_embedding_file(path)
        .map(Arc::new)
        .map_err(|e| e.to_string())
}

/// One (experiment, seed) evaluation row.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedRow {
    pub model: String,
    pub description: String,
    pub embedding: String,
    pub seed: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Trained epochs for deep models; logreg epochs or tree count for V1.
    pub epochs: usize,
    pub wallclock_s: f64,
    pub config_hash: String,
}

/// Per-seed rows plus their aggregate.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub version: ModelVersion,
    pub rows: Vec<SeedRow>,
    pub aggregate: Aggregate,
}

fn nonempty(corpus: &Corpus) -> impl Iterator<Item = &crate::corpus::Statement> {
    corpus.statements.iter().filter(|s| !s.tokens.is_empty())
}

fn run_seed(
    cfg: &ExperimentConfig,
    data: &SplitPair,
    vocab: &Vocabulary,
    tables: &EmbeddingTables,
    seed: u64,
) -> Result<SeedRow> {
    let start = Instant::now();
    let mode = cfg.embedding_mode();
    let mut matrix = build_matrix(
        vocab,
        tables.table_for(mode)?,
        cfg.embedding_dim,
        mode,
        seed,
    )?;
    matrix.trainable = cfg.trainable_embeddings;

    let golds: Vec<u8> = nonempty(&data.test).map(|s| s.label).collect();
    let (preds, epochs) = match cfg.version {
        ModelVersion::V1a => {
            let features: Vec<_> = nonempty(&data.train)
                .map(|s| mean_embedding(&s.tokens, vocab, &matrix))
                .collect();
            let labels: Vec<u8> = nonempty(&data.train).map(|s| s.label).collect();
            let fitted = logreg_fit(&features, &labels, &cfg.logreg, seed)?;
            let preds = nonempty(&data.test)
                .map(|s| {
                    let x = mean_embedding(&s.tokens, vocab, &matrix);
                    u8::from(fitted.model.predict_proba(&x) >= 0.5)
                })
                .collect();
            (preds, cfg.logreg.epochs)
        }
        ModelVersion::V1b => {
            let features: Vec<_> = nonempty(&data.train)
                .map(|s| mean_embedding(&s.tokens, vocab, &matrix))
                .collect();
            let labels: Vec<u8> = nonempty(&data.train).map(|s| s.label).collect();
            let fitted = gbdt_fit(&features, &labels, &cfg.gbdt, seed)?;
            let preds = nonempty(&data.test)
                .map(|s| {
                    let x = mean_embedding(&s.tokens, vocab, &matrix);
                    u8::from(gbdt_predict(&fitted.model, &x) >= 0.5)
                })
                .collect();
            (preds, cfg.gbdt.n_trees)
        }
        _ => {
            let arch = cfg.architecture().expect("deep versions have an architecture");
            let train_data: Vec<_> = nonempty(&data.train)
                .map(|s| (encode(&s.tokens, vocab, cfg.max_len), s.label))
                .collect();
            let mut params = ModelParams::init(arch, matrix, cfg.dropout, seed)?;
            let train_cfg = TrainConfig {
                batch_size: cfg.batch_size,
                epochs: cfg.epochs,
                seed,
                adam: crate::nn::AdamConfig {
                    learning_rate: cfg.learning_rate,
                    ..Default::default()
                },
                early_stop_loss: cfg.early_stop_loss,
            };
            let history = fit(&mut params, &train_data, &train_cfg)?;
            let preds = nonempty(&data.test)
                .map(|s| {
                    let seq = encode(&s.tokens, vocab, cfg.max_len);
                    params.predict(&seq).map(|(_, label)| label)
                })
                .collect::<Result<Vec<u8>>>()?;
            (preds, history.len())
        }
    };

    let counts = confusion(&preds, &golds)?;
    let (precision, recall, f1) = precision_recall_f1(&counts);
    Ok(SeedRow {
        model: cfg.version.id().to_string(),
        description: cfg.version.description().to_string(),
        embedding: cfg.embedding_mode().to_string(),
        seed,
        precision,
        recall,
        f1,
        epochs,
        wallclock_s: start.elapsed().as_secs_f64(),
        config_hash: cfg.hash(),
    })
}

/// Trains and evaluates one config over its seed list.
pub fn run_experiment(cfg: &ExperimentConfig, data: &SplitPair) -> Result<ExperimentResult> {
    cfg.validate()?;
    let tables = EmbeddingTables::load_for(std::slice::from_ref(cfg));
    run_experiment_with_tables(cfg, data, &tables)
}

pub(crate) fn run_experiment_with_tables(
    cfg: &ExperimentConfig,
    data: &SplitPair,
    tables: &EmbeddingTables,
) -> Result<ExperimentResult> {
    let vocab = build_vocab(&data.train, cfg.min_freq)?;
    let rows: Vec<SeedRow> = cfg
        .seeds
        .iter()
        .map(|&seed| run_seed(cfg, data, &vocab, tables, seed))
        .collect::<Result<_>>()?;
    Ok(ExperimentResult {
        version: cfg.version,
        aggregate: Aggregate::over(&rows),
        rows,
    })
}

/// Runs every config in order and collects the Table-1 analog report.
/// A failed experiment marks its row failed without aborting the rest.
/// With `parallel`, (experiment, seed) jobs fan out across threads; the
/// result is identical either way.
pub fn run_ladder(
    configs: &[ExperimentConfig],
    data: &SplitPair,
    parallel: bool,
    header: Vec<String>,
) -> MetricsReport {
    let tables = EmbeddingTables::load_for(configs);

    // flatten to (config, seed) jobs for better load balance
    let jobs: Vec<(usize, u64)> = configs
        .iter()
        .enumerate()
        .flat_map(|(i, cfg)| cfg.seeds.iter().map(move |&s| (i, s)))
        .collect();

    let run_job = |&(cfg_idx, seed): &(usize, u64)| -> (usize, u64, Result<SeedRow>) {
        let cfg = &configs[cfg_idx];
        let row = cfg
            .validate()
            .and_then(|_| build_vocab(&data.train, cfg.min_freq))
            .and_then(|vocab| run_seed(cfg, data, &vocab, &tables, seed));
        (cfg_idx, seed, row)
    };

    let results: Vec<(usize, u64, Result<SeedRow>)> = if parallel {
        jobs.par_iter().map(run_job).collect()
    } else {
        jobs.iter().map(run_job).collect()
    };

    let entries = configs
        .iter()
        .enumerate()
        .map(|(cfg_idx, cfg)| {
            let mut rows = Vec::new();
            let mut failure: Option<String> = None;
            for (idx, _, outcome) in results.iter().filter(|(i, _, _)| *i == cfg_idx) {
                debug_assert_eq!(*idx, cfg_idx);
                match outcome {
                    Ok(row) => rows.push(row.clone()),
                    Err(e) => {
                        if failure.is_none() {
                            failure = Some(e.to_string());
                        }
                    }
                }
            }
            let result = match failure {
                Some(msg) => Err(msg),
                None => Ok(ExperimentResult {
                    version: cfg.version,
                    aggregate: Aggregate::over(&rows),
                    rows,
                }),
            };
            ExperimentOutcome {
                version: cfg.version,
                result,
            }
        })
        .collect();

    MetricsReport { header, entries }
}
