use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

/// Unsupervised entity coreference: train, resolve, score and inspect.
///
/// Exit codes: 0 success; 1 unexpected failure; 2 bad input (missing or
/// malformed path, invalid option); 3 model format or representation
/// version mismatch; 4 key and response documents do not pair up.
#[derive(Debug, Parser)]
#[command(name = "coref-em", version)]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Worker threads for analysis and the E-step [default: 1]
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
    /// Extra lexicon files merged over the bundled one, in order
    #[arg(long = "lexicons", global = true, num_args = 1..)]
    pub lexicons: Vec<PathBuf>,
    /// Output format for tables and dumps [default: text]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with defaults for any option; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precedence {
    /// String matches win over precise constructs
    StrFirst,
    /// Precise constructs win over string matches
    PrecFirst,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model with EM on unannotated CoNLL files
    Train(TrainArgs),
    /// Write CoNLL files with decoded chains in the coreference column
    Resolve(ResolveArgs),
    /// Compare response chains against key chains
    Score(ScoreArgs),
    /// List mentions, attributes, modes and antecedent posteriors
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
pub struct Analysis {
    /// Which sieve family decides the mode when both fire [default: str-first]
    #[arg(long, value_enum)]
    pub precedence: Option<Precedence>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training files in CoNLL format
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Where to write the selected model
    #[arg(short, long)]
    pub model: PathBuf,
    /// EM iterations [default: 10]
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub iterations: Option<u32>,
    /// Decode-time probability floor stored in the model [default: 1e-10]
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Keep documents whose token sequence repeats an earlier one
    #[arg(long)]
    pub no_dedup: bool,
    /// Skip documents with fewer sentences [default: 3]
    #[arg(long)]
    pub min_sentences: Option<usize>,
    /// Gold-annotated development files; the best dev CoNLL F1 selects the model
    #[arg(long, num_args = 1..)]
    pub dev: Vec<PathBuf>,
    /// Also write the model after every iteration as MODEL.iterN
    #[arg(long)]
    pub keep_iterations: bool,
    /// Where to write the per-iteration trace [default: MODEL.trace.tsv]
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub analysis: Analysis,
}

#[derive(Debug, Args)]
pub struct ResolveArgs {
    /// Files to resolve, in CoNLL format
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Trained model file
    #[arg(short, long)]
    pub model: PathBuf,
    /// Output file [default: standard output]
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Emit single-mention chains as well
    #[arg(long)]
    pub singletons: bool,
    #[command(flatten)]
    pub analysis: Analysis,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Gold CoNLL file
    #[arg(long)]
    pub key: PathBuf,
    /// System CoNLL file
    #[arg(long)]
    pub response: PathBuf,
    /// Print percentages instead of fractions
    #[arg(long)]
    pub percent: bool,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    /// Files to inspect, in CoNLL format
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Model for antecedent posteriors; omitted means no posteriors
    #[arg(short, long)]
    pub model: Option<PathBuf>,
    /// Posteriors listed per mention [default: 5]
    #[arg(long)]
    pub top: Option<usize>,
    #[command(flatten)]
    pub analysis: Analysis,
}
