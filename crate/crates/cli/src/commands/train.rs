use std::path::Path;

use anyhow::{Context, Result};
use wsdetect_core::baselines::{gbdt_fit, logreg_fit, mean_embedding};
use wsdetect_core::checkpoint::Checkpoint;
use wsdetect_core::corpus::ColumnSchema;
use wsdetect_core::embeddings::{
    build_matrix, build_vocab, encode, parse_embedding_file, EmbeddingMode,
};
use wsdetect_core::eval::{ConfigFile, ModelVersion};
use wsdetect_core::nn::{fit, AdamConfig, ModelParams, TrainConfig};

use crate::paths::resolve_embedding_path;

pub fn run(
    config_path: &Path,
    train_csv: &Path,
    embeddings_override: Option<&Path>,
    out_model: &Path,
    seed_override: Option<u64>,
) -> Result<()> {
    let file = ConfigFile::load(config_path)?;
    let version = file.single_version()?;
    let mut cfg = file.experiment(version);
    if let Some(path) = embeddings_override {
        match cfg.embedding_mode() {
            EmbeddingMode::Glove => cfg.glove_path = Some(path.to_path_buf()),
            EmbeddingMode::GnGlove => cfg.gn_glove_path = Some(path.to_path_buf()),
            EmbeddingMode::Random => {
                eprintln!("warning: {version} uses random embeddings; --embeddings ignored")
            }
        }
    }
    let seed = seed_override.unwrap_or_else(|| cfg.seeds.first().copied().unwrap_or(42));

    let slang = super::load_slang(file.slang_map.as_deref())?;
    let corpus = super::load_normalized(train_csv, &ColumnSchema::default(), &slang)?;
    let vocab = build_vocab(&corpus, cfg.min_freq)?;

    let table = match cfg.embedding_path()? {
        None => None,
        Some(path) => {
            let resolved = resolve_embedding_path(path)?;
            Some(parse_embedding_file(&resolved)?)
        }
    };
    let mut matrix = build_matrix(
        &vocab,
        table.as_ref(),
        cfg.embedding_dim,
        cfg.embedding_mode(),
        seed,
    )?;
    matrix.trainable = cfg.trainable_embeddings;
    if let Some(coverage) = matrix.coverage {
        println!("embedding coverage: {:.1}% of vocabulary", coverage * 100.0);
    }

    let (checkpoint, losses) = match version {
        ModelVersion::V1a => {
            let features: Vec<_> = corpus
                .statements
                .iter()
                .map(|s| mean_embedding(&s.tokens, &vocab, &matrix))
                .collect();
            let labels: Vec<u8> = corpus.statements.iter().map(|s| s.label).collect();
            let fitted = logreg_fit(&features, &labels, &cfg.logreg, seed)?;
            let ckpt = Checkpoint::for_logreg(
                version.id(),
                version.description(),
                cfg.max_len,
                &vocab,
                &slang,
                &matrix,
                &fitted.model,
            );
            (ckpt, fitted.loss_history)
        }
        ModelVersion::V1b => {
            let features: Vec<_> = corpus
                .statements
                .iter()
                .map(|s| mean_embedding(&s.tokens, &vocab, &matrix))
                .collect();
            let labels: Vec<u8> = corpus.statements.iter().map(|s| s.label).collect();
            let fitted = gbdt_fit(&features, &labels, &cfg.gbdt, seed)?;
            let ckpt = Checkpoint::for_gbdt(
                version.id(),
                version.description(),
                cfg.max_len,
                &vocab,
                &slang,
                &matrix,
                &fitted.model,
            );
            (ckpt, fitted.loss_history)
        }
        _ => {
            let arch = cfg.architecture().expect("deep version");
            let data: Vec<_> = corpus
                .statements
                .iter()
                .map(|s| (encode(&s.tokens, &vocab, cfg.max_len), s.label))
                .collect();
            let mut params = ModelParams::init(arch, matrix, cfg.dropout, seed)?;
            let train_cfg = TrainConfig {
                batch_size: cfg.batch_size,
                epochs: cfg.epochs,
                seed,
                adam: AdamConfig {
                    learning_rate: cfg.learning_rate,
                    ..AdamConfig::default()
                },
                early_stop_loss: cfg.early_stop_loss,
            };
            let history = fit(&mut params, &data, &train_cfg)?;
            let ckpt = Checkpoint::for_nn(
                version.id(),
                version.description(),
                cfg.max_len,
                &vocab,
                &slang,
                &params,
            );
            (ckpt, history)
        }
    };

    checkpoint.save(out_model)?;
    let sidecar = out_model.with_extension("losses.json");
    std::fs::write(&sidecar, serde_json::to_string_pretty(&losses)?)
        .with_context(|| format!("writing {}", sidecar.display()))?;

    match losses.last() {
        Some(last) => println!(
            "trained {version} for {} epoch(s)/round(s), final loss {last:.6}",
            losses.len()
        ),
        None => println!("trained {version} (no training iterations requested)"),
    }
    println!("wrote {}", out_model.display());
    println!("wrote {}", sidecar.display());
    Ok(())
}
