use std::io::BufRead;
use std::path::Path;

use anyhow::{bail, Result};
use wsdetect_core::checkpoint::{Checkpoint, Predictor};

/// Prints `<probability 4dp><TAB><label>` per input line, or `skip` for
/// lines that normalize to nothing.
fn classify_line(predictor: &Predictor, line: &str) -> Result<()> {
    match predictor.classify(line)? {
        Some((probability, label)) => println!("{probability:.4}\t{label}"),
        None => println!("skip"),
    }
    Ok(())
}

pub fn run(model: &Path, text: Option<&str>, stdin: bool) -> Result<()> {
    let predictor = Checkpoint::load(model)?.into_predictor()?;
    match (text, stdin) {
        (Some(line), false) => classify_line(&predictor, line),
        (None, true) => {
            let input = std::io::stdin().lock();
            for line in input.lines() {
                classify_line(&predictor, &line?)?;
            }
            Ok(())
        }
        _ => bail!("pass exactly one of --text or --stdin"),
    }
}
