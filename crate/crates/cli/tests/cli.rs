//! End-to-end tests of the `wsdetect` binary: exit-code contract,
//! subcommand workflows, and output formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wsdetect"))
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

/// Ten sexist / ten neutral statements plus a duplicate pair.
fn small_dataset(dir: &Path) -> PathBuf {
    let path = dir.join("data.csv");
    let mut rows = String::from("text,label\n");
    let bad = [
        "women are too emotional for the boardroom",
        "girls cannot handle the budget pressure",
        "ladies belong at the reception desk",
        "women get hysterical about deadlines",
        "a woman cannot lead the engineering team",
        "girls are too fragile for negotiations",
        "women should fetch the coffee",
        "ladies cannot stay rational in meetings",
        "women are naturally worse at strategy",
        "girls get dramatic about the roadmap",
    ];
    let good = [
        "the quarterly report is due friday",
        "she shipped the feature ahead of schedule",
        "the team reviewed the budget carefully",
        "he presented the roadmap to the client",
        "the audit finished without findings",
        "she leads the engineering team well",
        "the meeting moved to tuesday morning",
        "the prototype demo went smoothly",
        "she negotiated the contract renewal",
        "the forecast looks solid this quarter",
    ];
    for text in bad {
        rows.push_str(&format!("{text},1\n"));
    }
    for text in good {
        rows.push_str(&format!("{text},0\n"));
    }
    // duplicate of the first row, with decoration the normalizer removes
    rows.push_str("WOMEN are too emotional for the boardroom,1\n");
    write(&path, &rows);
    path
}

/// A tiny embedding file covering the small dataset's key words.
fn small_embeddings(dir: &Path) -> PathBuf {
    let path = dir.join("vectors.txt");
    let words = [
        "women", "girls", "ladies", "woman", "she", "he", "the", "team", "budget", "report",
        "emotional", "hysterical", "fragile", "dramatic", "rational", "quarterly", "audit",
        "meeting", "roadmap", "are", "too", "for", "cannot", "a", "to", "at",
    ];
    let mut text = String::new();
    for (idx, word) in words.iter().enumerate() {
        let base = (idx as f64) * 0.07 - 0.9;
        text.push_str(&format!(
            "{word} {:.4} {:.4} {:.4} {:.4}\n",
            base,
            -base,
            base * 0.5,
            0.3 - base
        ));
    }
    write(&path, &text);
    path
}

fn train_config(dir: &Path, version: &str, embeddings: &Path) -> PathBuf {
    let path = dir.join("config.toml");
    write(
        &path,
        &format!(
            "version = \"{version}\"\nglove_path = \"{}\"\ngn_glove_path = \"{}\"\n\
             embedding_dim = 4\nhidden = 6\nhidden2 = 6\nattn_dim = 6\nepochs = 30\n\
             batch_size = 8\nseeds = [3]\nmax_len = 12\n",
            embeddings.display(),
            embeddings.display()
        ),
    );
    path
}

#[test]
fn help_exits_zero_and_unknown_flag_exits_one() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("prepare"));

    let out = bin().args(["prepare", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin().arg("not-a-command").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn prepare_reports_stats_and_respects_force() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_dataset(dir.path());
    let out_dir = dir.path().join("split");

    let out = bin()
        .args(["prepare", "--data"])
        .arg(&data)
        .args(["--out-dir"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("duplicates removed: 1"), "{text}");
    assert!(text.contains("50.0% sexist"), "{text}");
    assert!(out_dir.join("train.csv").exists());
    assert!(out_dir.join("test.csv").exists());

    // refusal without --force
    let out = bin()
        .args(["prepare", "--data"])
        .arg(&data)
        .args(["--out-dir"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--force"));

    // succeeds with --force
    let out = bin()
        .args(["prepare", "--data"])
        .arg(&data)
        .args(["--out-dir"])
        .arg(&out_dir)
        .arg("--force")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn prepare_rejects_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["prepare", "--data", "/nonexistent/data.csv", "--out-dir"])
        .arg(dir.path().join("split"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn train_classify_round_trip_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_dataset(dir.path());
    let embeddings = small_embeddings(dir.path());
    let config = train_config(dir.path(), "V4b", &embeddings);
    let model = dir.path().join("model.json");

    let out = bin()
        .args(["train", "--config"])
        .arg(&config)
        .args(["--train-csv"])
        .arg(&data)
        .args(["--out-model"])
        .arg(&model)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(model.exists());
    assert!(dir.path().join("model.losses.json").exists());

    let classify = |text: &str| -> String {
        let out = bin()
            .args(["classify", "--model"])
            .arg(&model)
            .args(["--text", text])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
        stdout(&out)
    };
    let line = "girls are too emotional for the audit";
    let first = classify(line);
    let second = classify(line);
    assert_eq!(first, second, "classification is byte-stable");
    let fields: Vec<&str> = first.trim_end().split('\t').collect();
    assert_eq!(fields.len(), 2);
    assert!(fields[0].len() >= 6 && fields[0].contains('.'), "4dp probability");
    assert!(fields[1] == "0" || fields[1] == "1");
}

#[test]
fn classify_skips_empty_lines_via_stdin() {
    use std::io::Write as _;
    let dir = tempfile::tempdir().unwrap();
    let data = small_dataset(dir.path());
    let embeddings = small_embeddings(dir.path());
    let config = train_config(dir.path(), "V1a", &embeddings);
    let model = dir.path().join("v1a.json");
    let out = bin()
        .args(["train", "--config"])
        .arg(&config)
        .args(["--train-csv"])
        .arg(&data)
        .args(["--out-model"])
        .arg(&model)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let mut child = bin()
        .args(["classify", "--model"])
        .arg(&model)
        .arg("--stdin")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"the report is due\n\n#final\nwomen are hysterical\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "skip");
    assert_eq!(lines[2], "skip");
    assert!(lines[0].contains('\t'));
    assert!(lines[3].contains('\t'));
}

#[test]
fn train_fails_cleanly_on_missing_embeddings() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_dataset(dir.path());
    let missing = dir.path().join("nothere.txt");
    let config = train_config(dir.path(), "V3b", &missing);
    let out = bin()
        .args(["train", "--config"])
        .arg(&config)
        .args(["--train-csv"])
        .arg(&data)
        .args(["--out-model"])
        .arg(dir.path().join("m.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("nothere.txt"),
        "error names the path: {}",
        stderr(&out)
    );
}

#[test]
fn embedding_search_path_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_dataset(dir.path());
    let vectors_dir = dir.path().join("vectors");
    std::fs::create_dir_all(&vectors_dir).unwrap();
    let real = small_embeddings(&vectors_dir);
    // config references a bare filename that only resolves via the search path
    let config = train_config(dir.path(), "V3b", Path::new(real.file_name().unwrap()));
    let out = bin()
        .env("WSDETECT_EMBEDDINGS_PATH", &vectors_dir)
        .args(["train", "--config"])
        .arg(&config)
        .args(["--train-csv"])
        .arg(&data)
        .args(["--out-model"])
        .arg(dir.path().join("m.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}

#[test]
fn diverged_training_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_dataset(dir.path());
    let embeddings = small_embeddings(dir.path());
    let config = dir.path().join("bad.toml");
    write(
        &config,
        &format!(
            "version = \"V3b\"\nglove_path = \"{}\"\nembedding_dim = 4\nhidden = 6\n\
             epochs = 20\nseeds = [1]\nlearning_rate = 1e200\n",
            embeddings.display()
        ),
    );
    let out = bin()
        .args(["train", "--config"])
        .arg(&config)
        .args(["--train-csv"])
        .arg(&data)
        .args(["--out-model"])
        .arg(dir.path().join("m.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("non-finite loss"));
}

#[test]
fn eval_reports_metrics_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_dataset(dir.path());
    let embeddings = small_embeddings(dir.path());
    let config = train_config(dir.path(), "V1b", &embeddings);
    let model = dir.path().join("v1b.json");
    let out = bin()
        .args(["train", "--config"])
        .arg(&config)
        .args(["--train-csv"])
        .arg(&data)
        .args(["--out-model"])
        .arg(&model)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let json_out = dir.path().join("metrics.json");
    let out = bin()
        .args(["eval", "--model"])
        .arg(&model)
        .args(["--data"])
        .arg(&data)
        .args(["--out-json"])
        .arg(&json_out)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("precision:"));
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_out).unwrap()).unwrap();
    assert!(value["f1"].as_f64().unwrap() >= 0.0);
    assert_eq!(value["evaluated"].as_u64().unwrap(), 21);
}

#[test]
fn bench_writes_both_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_dataset(dir.path());
    let embeddings = small_embeddings(dir.path());
    let split_dir = dir.path().join("split");
    let out = bin()
        .args(["prepare", "--data"])
        .arg(&data)
        .args(["--out-dir"])
        .arg(&split_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let config = dir.path().join("ladder.toml");
    write(
        &config,
        &format!(
            "versions = [\"V1a\", \"V3b\"]\nglove_path = \"{}\"\nembedding_dim = 4\n\
             hidden = 6\nepochs = 3\nbatch_size = 8\nseeds = [1, 2]\nmax_len = 12\n",
            embeddings.display()
        ),
    );
    let report = dir.path().join("reports").join("run");
    let out = bin()
        .args(["bench", "--config-set"])
        .arg(&config)
        .args(["--data-dir"])
        .arg(&split_dir)
        .args(["--out-report"])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let table = stdout(&out);
    assert!(table.contains("V1a") && table.contains("V3b"), "{table}");

    let jsonl = std::fs::read_to_string(dir.path().join("reports/run.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 4); // 2 versions x 2 seeds
    assert!(dir.path().join("reports/run.txt").exists());
}

#[test]
fn inspect_embeddings_reports_shape_and_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let embeddings = small_embeddings(dir.path());
    let out = bin()
        .args(["inspect-embeddings", "--embeddings"])
        .arg(&embeddings)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dimension: 4"), "{text}");
    assert!(text.contains("tokens: 26"), "{text}");

    // vocabulary dump with one covered and one uncovered token
    let vocab = dir.path().join("vocab.tsv");
    write(
        &vocab,
        "<pad>\t0\t0\n<oov>\t1\t0\nwomen\t2\t5\nzzzmissing\t3\t1\n",
    );
    let out = bin()
        .args(["inspect-embeddings", "--embeddings"])
        .arg(&embeddings)
        .args(["--vocab"])
        .arg(&vocab)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1/2 tokens (50.0%)"), "{}", stdout(&out));
}
