use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use refgame_core::association::Metric;
use refgame_core::oed::SearchMode;
use refgame_core::rsa::{parse_model, Depth};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(name = "refgame", version, about = "Associative reference game toolkit: association metrics, RSA agents, design search and scoring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a raw association matrix from a counts, embeddings, relatedness or topics file.
    Ingest(IngestArgs),
    /// Quantile-normalize a raw association matrix.
    Normalize(NormalizeArgs),
    /// Print a model's response distribution for each configuration in a file.
    Predict(PredictArgs),
    /// Search for configurations or scenarios that best discriminate a set of models.
    Oed(OedArgs),
    /// Apply the word-difference and word-occurrence filter to a candidate file.
    Filter(FilterArgs),
    /// Score models against observed responses.
    Score(ScoreArgs),
    /// Compare metrics and models with each other.
    Compare(CompareArgs),
    /// Expected speaker-listener success on a set of scenarios.
    Simulate(SimulateArgs),
    /// Draw scenarios uniformly at random.
    Generate(GenerateArgs),
    /// Fraction of referenced cells that were raw zeros.
    Sparsity(SparsityArgs),
    /// Keep configurations whose mean confidence is above the overall mean.
    ConfidenceFilter(ConfidenceFilterArgs),
    /// Welch t-test of speaker against listener confidence ratings.
    ConfidenceTest(ConfidenceTestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    Counts,
    Embeddings,
    Relatedness,
    Topics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Tsv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Exp1,
    Exp2Speaker,
    Exp2Listener,
    Exp3,
    Exp4,
}

/// `metric=path` pair naming a normalized association file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixArg {
    pub metric: Metric,
    pub path: PathBuf,
}

pub fn parse_matrix_arg(s: &str) -> Result<MatrixArg, String> {
    let (metric, path) = s
        .split_once('=')
        .ok_or_else(|| format!("expected metric=path, got '{s}'"))?;
    if path.is_empty() {
        return Err(format!("empty path in '{s}'"));
    }
    Ok(MatrixArg {
        metric: metric.parse()?,
        path: PathBuf::from(path),
    })
}

/// A model spec string without a role, as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelArg {
    pub metric: Metric,
    pub depth: Depth,
}

pub fn parse_model_arg(s: &str) -> Result<ModelArg, String> {
    let (metric, depth) = parse_model(s).map_err(|e| e.to_string())?;
    Ok(ModelArg { metric, depth })
}

/// A model spec or `uniform`, which spreads probability evenly over the support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AgentArg {
    Model(ModelArg),
    Uniform,
}

pub fn parse_agent_arg(s: &str) -> Result<AgentArg, String> {
    if s.trim() == "uniform" {
        Ok(AgentArg::Uniform)
    } else {
        parse_model_arg(s).map(AgentArg::Model)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Normalized association matrix as metric=path. Repeatable.
    #[arg(long = "matrix", value_parser = parse_matrix_arg, required = true)]
    pub matrices: Vec<MatrixArg>,
    /// Lexicon to align matrices to; defaults to the first matrix's words.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(value_enum)]
    pub kind: SourceKind,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    /// Raw association matrix.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub tables: TablesArgs,
    /// JSON file with one configuration or a list of them.
    #[arg(long)]
    pub config: PathBuf,
    /// Model spec such as bigram:literal, bigram:pragmatic:5.0, or uniform.
    #[arg(long, value_parser = parse_agent_arg)]
    pub model: AgentArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FilterSettings {
    /// Minimum number of differing words between kept candidates.
    #[arg(long, default_value_t = 2)]
    pub min_word_diff: usize,
    /// Maximum number of kept candidates any word may appear in.
    #[arg(long, default_value_t = 20)]
    pub max_word_occurrence: usize,
}

#[derive(Debug, Args)]
pub struct OedArgs {
    #[command(flatten)]
    pub tables: TablesArgs,
    /// Candidate model spec. Repeatable; the preset's models when omitted.
    #[arg(long = "model", value_parser = parse_model_arg)]
    pub models: Vec<ModelArg>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub nouns: Option<usize>,
    #[arg(long)]
    pub adjectives: Option<usize>,
    /// separate-speaker, separate-listener or joint.
    #[arg(long)]
    pub mode: Option<SearchMode>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Number of top candidates to keep.
    #[arg(long)]
    pub top: Option<usize>,
    /// Filter the kept candidates before writing them.
    #[arg(long)]
    pub filter: bool,
    #[command(flatten)]
    pub filter_settings: FilterSettings,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Candidate file written by `oed`.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub filter_settings: FilterSettings,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub tables: TablesArgs,
    /// JSON response file.
    #[arg(long)]
    pub responses: PathBuf,
    /// Model spec to score. Repeatable; literal models of every matrix when omitted.
    #[arg(long = "model", value_parser = parse_model_arg)]
    pub models: Vec<ModelArg>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub tables: TablesArgs,
    /// JSON file with the configurations to compare models on.
    #[arg(long)]
    pub configs: PathBuf,
    /// Model spec. Repeatable; literal models of every matrix when omitted.
    #[arg(long = "model", value_parser = parse_model_arg)]
    pub models: Vec<ModelArg>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub tables: TablesArgs,
    /// JSON list of scenarios, or a candidate file.
    #[arg(long)]
    pub scenarios: PathBuf,
    #[arg(long, value_parser = parse_agent_arg)]
    pub speaker: AgentArg,
    #[arg(long, value_parser = parse_agent_arg)]
    pub listener: AgentArg,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub lexicon: PathBuf,
    /// Number of distinct scenarios to draw.
    #[arg(long)]
    pub count: usize,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub nouns: Option<usize>,
    #[arg(long)]
    pub adjectives: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SparsityArgs {
    #[command(flatten)]
    pub tables: TablesArgs,
    /// JSON file with configurations.
    #[arg(long)]
    pub configs: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConfidenceFilterArgs {
    /// JSON response file with confidence ratings.
    #[arg(long)]
    pub responses: PathBuf,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConfidenceTestArgs {
    #[arg(long)]
    pub responses: PathBuf,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}
