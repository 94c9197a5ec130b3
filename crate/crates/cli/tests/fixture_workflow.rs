//! Full workflow on the bundled demo corpus: prepare -> train V4b ->
//! classify the documented neutral example.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wsdetect"))
}

fn workspace_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

#[test]
fn trained_v4b_labels_neutral_example_zero() {
    let dir = tempfile::tempdir().unwrap();
    let split_dir = dir.path().join("split");

    let out = bin()
        .args(["prepare", "--data"])
        .arg(workspace_path("data/fixture/statements_200.csv"))
        .args(["--out-dir"])
        .arg(&split_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("55.0% sexist / 45.0% neutral"), "{text}");

    let config = dir.path().join("v4b.toml");
    std::fs::write(
        &config,
        format!(
            "version = \"V4b\"\nglove_path = \"{}\"\nhidden = 32\nattn_dim = 32\nepochs = 10\nseeds = [1]\n",
            workspace_path("data/fixture/embeddings_100d.txt").display()
        ),
    )
    .unwrap();
    let model = dir.path().join("v4b.json");
    let out = bin()
        .args(["train", "--config"])
        .arg(&config)
        .args(["--train-csv"])
        .arg(split_dir.join("train.csv"))
        .args(["--out-model"])
        .arg(&model)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = bin()
        .args(["classify", "--model"])
        .arg(&model)
        .args([
            "--text",
            "The Belgian bar near the end of the road was a great spot to go after work",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let line = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(
        line.trim_end().ends_with("\t0"),
        "neutral example should classify 0, got: {line}"
    );
}
