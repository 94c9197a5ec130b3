use std::path::Path;

use anyhow::{bail, Context, Result};
use wsdetect_core::corpus::{
    class_balance, deduplicate, stratified_split, write_split_csv, ColumnSchema,
};

#[allow(clippy::too_many_arguments)]
pub fn run(
    data: &Path,
    slang_map: Option<&Path>,
    ratio: f64,
    seed: u64,
    out_dir: &Path,
    force: bool,
    text_col: &str,
    label_col: &str,
) -> Result<()> {
    let train_path = out_dir.join("train.csv");
    let test_path = out_dir.join("test.csv");
    if !force && (train_path.exists() || test_path.exists()) {
        bail!(
            "{} already contains split files; pass --force to overwrite",
            out_dir.display()
        );
    }

    let schema = ColumnSchema {
        text: text_col.to_string(),
        label: label_col.to_string(),
    };
    let slang = super::load_slang(slang_map)?;
    let corpus = super::load_normalized(data, &schema, &slang)?;

    let (corpus, duplicates) = deduplicate(&corpus);
    let (sexist, neutral) = class_balance(&corpus)?;
    let pair = stratified_split(&corpus, ratio, seed)?;

    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    write_split_csv(&pair.train, &train_path, &schema)?;
    write_split_csv(&pair.test, &test_path, &schema)?;

    println!("statements: {}", corpus.len());
    println!("duplicates removed: {duplicates}");
    println!(
        "class balance: {:.1}% sexist / {:.1}% neutral",
        sexist * 100.0,
        neutral * 100.0
    );
    println!(
        "split: {} train / {} test (ratio {ratio}, seed {seed})",
        pair.train.len(),
        pair.test.len()
    );
    println!("wrote {}", train_path.display());
    println!("wrote {}", test_path.display());
    Ok(())
}
