//! `wsdetect` — workplace statement classifier CLI.
//!
//! Exit codes: 0 success, 1 user error (bad input, missing files, malformed
//! flags), 2 internal error (diverged training, corrupt state).

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

mod commands;
mod paths;

#[derive(Parser)]
#[command(
    name = "wsdetect",
    version,
    about = "Workplace sexism statement classifier: corpus preparation, model training, evaluation, and the experiment ladder"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load, normalize, deduplicate, and split a labeled CSV/JSONL dataset
    Prepare {
        /// Input dataset (CSV with header, or .jsonl)
        #[arg(long)]
        data: PathBuf,
        /// Two-column TSV slang table (defaults to the bundled table)
        #[arg(long)]
        slang_map: Option<PathBuf>,
        /// Train fraction
        #[arg(long, default_value_t = 0.8)]
        ratio: f64,
        /// Split seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output directory for train.csv / test.csv
        #[arg(long)]
        out_dir: PathBuf,
        /// Overwrite existing split files
        #[arg(long)]
        force: bool,
        /// Name of the text column
        #[arg(long, default_value = "text")]
        text_col: String,
        /// Name of the label column
        #[arg(long, default_value = "label")]
        label_col: String,
    },
    /// Train one model version and write a checkpoint
    Train {
        /// Experiment config (flat TOML; must set `version`)
        #[arg(long)]
        config: PathBuf,
        /// Prepared training CSV
        #[arg(long)]
        train_csv: PathBuf,
        /// Override the embedding file for this version's mode
        #[arg(long)]
        embeddings: Option<PathBuf>,
        /// Checkpoint output path (a .losses.json sidecar is written too)
        #[arg(long)]
        out_model: PathBuf,
        /// Override the training seed (default: first seed in the config)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate a checkpoint on a labeled dataset
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Also write the metrics as JSON
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
    /// Run the model ladder and emit the performance report
    Bench {
        /// Config set (flat TOML; `versions` selects rungs, default all nine)
        #[arg(long)]
        config_set: PathBuf,
        /// Directory holding prepared train.csv / test.csv
        #[arg(long)]
        data_dir: PathBuf,
        /// Report path prefix; writes <prefix>.txt and <prefix>.jsonl
        #[arg(long)]
        out_report: PathBuf,
        /// Fan experiments out across threads
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        parallel: bool,
    },
    /// Classify raw text lines with a trained checkpoint
    Classify {
        #[arg(long)]
        model: PathBuf,
        /// One statement to classify
        #[arg(long, conflicts_with = "stdin")]
        text: Option<String>,
        /// Read statements from stdin, one per line
        #[arg(long)]
        stdin: bool,
    },
    /// Report shape and statistics of an embedding file
    InspectEmbeddings {
        #[arg(long)]
        embeddings: PathBuf,
        /// Vocabulary dump (token<TAB>index<TAB>frequency) for coverage
        #[arg(long)]
        vocab: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };

    let result = match cli.command {
        Command::Prepare {
            data,
            slang_map,
            ratio,
            seed,
            out_dir,
            force,
            text_col,
            label_col,
        } => commands::prepare::run(
            &data, slang_map.as_deref(), ratio, seed, &out_dir, force, &text_col, &label_col,
        ),
        Command::Train {
            config,
            train_csv,
            embeddings,
            out_model,
            seed,
        } => commands::train::run(&config, &train_csv, embeddings.as_deref(), &out_model, seed),
        Command::Eval {
            model,
            data,
            out_json,
        } => commands::eval::run(&model, &data, out_json.as_deref()),
        Command::Bench {
            config_set,
            data_dir,
            out_report,
            parallel,
        } => commands::bench::run(&config_set, &data_dir, &out_report, parallel),
        Command::Classify { model, text, stdin } => {
            commands::classify::run(&model, text.as_deref(), stdin)
        }
        Command::InspectEmbeddings { embeddings, vocab } => {
            commands::inspect::run(&embeddings, vocab.as_deref())
        }
    };

    match result {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(exit_code(&err));
        }
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<wsdetect_core::Error>() {
        Some(core_err) if core_err.is_internal() => 2,
        _ => 1,
    }
}
