use std::path::Path;

use anyhow::{bail, Context, Result};
use wsdetect_core::corpus::{ColumnSchema, SplitPair};
use wsdetect_core::eval::{run_ladder, ConfigFile, ExperimentConfig};

use crate::paths::resolve_embedding_path;

pub fn run(config_set: &Path, data_dir: &Path, out_report: &Path, parallel: bool) -> Result<()> {
    let file = ConfigFile::load(config_set)?;
    let versions = file.ladder_versions()?;

    let train_csv = data_dir.join("train.csv");
    let test_csv = data_dir.join("test.csv");
    if !train_csv.exists() || !test_csv.exists() {
        bail!(
            "{} must contain train.csv and test.csv (run `wsdetect prepare` first)",
            data_dir.display()
        );
    }
    let slang = super::load_slang(file.slang_map.as_deref())?;
    let schema = ColumnSchema::default();
    let train = super::load_normalized(&train_csv, &schema, &slang)?;
    let test = super::load_normalized(&test_csv, &schema, &slang)?;
    let ratio = train.len() as f64 / (train.len() + test.len()) as f64;
    let data = SplitPair {
        train,
        test,
        seed: 0,
        ratio,
    };

    let mut configs: Vec<ExperimentConfig> = Vec::new();
    for version in versions {
        let mut cfg = file.experiment(version);
        if let Some(p) = cfg.glove_path.take() {
            cfg.glove_path = Some(resolve_embedding_path(&p).unwrap_or(p));
        }
        if let Some(p) = cfg.gn_glove_path.take() {
            cfg.gn_glove_path = Some(resolve_embedding_path(&p).unwrap_or(p));
        }
        configs.push(cfg);
    }

    let header = vec![
        format!("data: {}", data_dir.display()),
        format!(
            "split: {} train / {} test",
            data.train.len(),
            data.test.len()
        ),
    ];
    let report = run_ladder(&configs, &data, parallel, header);

    let text = report.to_text();
    print!("{text}");

    let txt_path = with_suffix(out_report, "txt");
    let jsonl_path = with_suffix(out_report, "jsonl");
    if let Some(parent) = txt_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(&txt_path, &text)
        .with_context(|| format!("writing {}", txt_path.display()))?;
    std::fs::write(&jsonl_path, report.to_jsonl())
        .with_context(|| format!("writing {}", jsonl_path.display()))?;
    println!("wrote {}", txt_path.display());
    println!("wrote {}", jsonl_path.display());

    let failures: Vec<_> = report
        .entries
        .iter()
        .filter_map(|e| e.result.as_ref().err().map(|msg| (e.version, msg.clone())))
        .collect();
    if !failures.is_empty() {
        for (version, msg) in &failures {
            eprintln!("warning: {version} failed: {msg}");
        }
    }
    Ok(())
}

fn with_suffix(prefix: &Path, ext: &str) -> std::path::PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(ext);
    prefix.with_file_name(name)
}
