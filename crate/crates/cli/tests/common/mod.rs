#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const BIN: &str = env!("CARGO_BIN_EXE_refgame");

pub const DATA_FILES: [&str; 5] = ["lexicon.txt", "counts.tsv", "embeddings.txt", "relatedness.tsv", "topics.txt"];

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Copies the sample inputs into `dir` so that runs can use relative paths.
pub fn stage_inputs(dir: &Path) {
    for f in DATA_FILES {
        fs::copy(data_dir().join(f), dir.join(f)).unwrap();
    }
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    run_with_env(dir, args, &[])
}

pub fn run_with_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.current_dir(dir).args(args).env_remove("REFGAME_THREADS").env("RUST_LOG", "error");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

/// Runs and fails with the command's stderr unless it exits 0.
pub fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = run_in(dir, args);
    assert!(
        out.status.success(),
        "refgame {} failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub const SOURCES: [(&str, &str, &str); 4] = [
    ("counts", "counts.tsv", "bigram"),
    ("embeddings", "embeddings.txt", "embedding-cosine"),
    ("relatedness", "relatedness.tsv", "graph-relatedness"),
    ("topics", "topics.txt", "topic-distance"),
];

/// ingest and normalize every sample source into `<metric>.tsv`.
pub fn build_matrices(dir: &Path) {
    for (kind, input, metric) in SOURCES {
        let raw = format!("{metric}.raw.tsv");
        let norm = format!("{metric}.tsv");
        ok(dir, &["ingest", kind, "--input", input, "--lexicon", "lexicon.txt", "-o", &raw]);
        ok(dir, &["normalize", "--input", &raw, "-o", &norm]);
    }
}

pub fn matrix_flags(metrics: &[&str]) -> Vec<String> {
    metrics
        .iter()
        .flat_map(|m| ["--matrix".to_string(), format!("{m}={m}.tsv")])
        .collect()
}

/// Files written by [`run_pipeline`], each with its manifest.
pub const PIPELINE_OUTPUTS: [&str; 5] = [
    "bigram.raw.tsv",
    "bigram.tsv",
    "candidates.json",
    "filtered.json",
    "success.tsv",
];

/// ingest -> normalize -> oed -> filter -> simulate on the sample data.
pub fn run_pipeline(dir: &Path) {
    stage_inputs(dir);
    build_matrices(dir);
    let metrics = ["bigram", "embedding-cosine", "graph-relatedness"];
    let mut oed: Vec<String> = ["oed", "--preset", "exp3", "--iterations", "3000", "--top", "60", "--seed", "17"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    oed.extend(matrix_flags(&metrics));
    oed.extend(["-o".into(), "candidates.json".into()]);
    ok(dir, &oed.iter().map(String::as_str).collect::<Vec<_>>());
    ok(
        dir,
        &["filter", "--input", "candidates.json", "--max-word-occurrence", "8", "-o", "filtered.json"],
    );
    let mut sim: Vec<String> = ["simulate", "--scenarios", "filtered.json", "--speaker", "bigram:literal", "--listener", "bigram:literal"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    sim.extend(matrix_flags(&["bigram"]));
    sim.extend(["-o".into(), "success.tsv".into()]);
    ok(dir, &sim.iter().map(String::as_str).collect::<Vec<_>>());
}

/// Byte comparison of every pipeline output and manifest against the stored
/// golden copies. Returns the names of files that differ.
pub fn golden_mismatches(dir: &Path) -> Vec<String> {
    let mut bad = Vec::new();
    for f in PIPELINE_OUTPUTS {
        for name in [f.to_string(), format!("{f}.manifest.json")] {
            let got = fs::read(dir.join(&name)).unwrap();
            match fs::read(golden_dir().join(&name)) {
                Ok(want) if want == got => {}
                _ => bad.push(name),
            }
        }
    }
    bad
}

/// Rewrites the golden files from a fresh pipeline run.
pub fn update_golden(dir: &Path) {
    fs::create_dir_all(golden_dir()).unwrap();
    for f in PIPELINE_OUTPUTS {
        for name in [f.to_string(), format!("{f}.manifest.json")] {
            fs::copy(dir.join(&name), golden_dir().join(&name)).unwrap();
        }
    }
}
