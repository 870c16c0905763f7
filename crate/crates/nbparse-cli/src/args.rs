use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nbparse::dynamic_oracle::ExplorationPolicy;
use nbparse::trainer::OracleMode;
use nbparse::transition::SystemKind;

#[derive(Debug, Parser)]
#[command(
    name = "nbparse",
    version,
    about = "Greedy non-binary constituent parser"
)]
pub struct Cli {
    /// Settings file of `key = value` lines; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model on a bracketed treebank.
    Train(TrainArgs),
    /// Parse `form_POS` sentences, one per line.
    Parse(ParseArgs),
    /// Score predicted trees against gold trees.
    Eval(EvalArgs),
    /// Check the dynamic oracle against exhaustive search.
    OracleAudit(AuditArgs),
    /// Transitions per sentence under both systems.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Bracketed training trees.
    pub treebank: PathBuf,
    /// Where to write the model.
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub system: Option<SystemKind>,
    #[arg(long)]
    pub oracle: Option<OracleMode>,
    /// Exploration policy such as `aggr=1.0,reg=0.1`.
    #[arg(long)]
    pub explore: Option<ExplorationPolicy>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "FILE")]
    pub head_rules: Option<PathBuf>,
    #[arg(long)]
    pub unary_cap: Option<usize>,
    /// Hashed feature buckets.
    #[arg(long)]
    pub buckets: Option<u64>,
    /// Print the report as `key=value` lines.
    #[arg(long)]
    pub records: bool,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    #[arg(short, long)]
    pub model: PathBuf,
    /// Input sentences; standard input when absent.
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Follow each tree with a line holding its transition sequence.
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub gold: PathBuf,
    pub predicted: PathBuf,
    /// Add per-arity scores.
    #[arg(long)]
    pub by_arity: bool,
    #[arg(long)]
    pub records: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Condition {
    Built,
    Buffer,
    Stack,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Longest sentence of the exhaustive part.
    #[arg(long, default_value_t = 4)]
    pub max_len: usize,
    #[arg(long, default_value_t = 2)]
    pub labels: usize,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Longest unary chain in exhaustive gold trees.
    #[arg(long, default_value_t = 1)]
    pub max_chain: usize,
    /// Most unary nodes in one exhaustive gold tree.
    #[arg(long, default_value_t = 1)]
    pub max_unary_nodes: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 6)]
    pub sample_len: usize,
    #[arg(long, default_value_t = 3)]
    pub sample_labels: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub unary_cap: Option<usize>,
    /// Turn off one reachability condition of the oracle under test.
    #[arg(long, value_enum)]
    pub disable_condition: Option<Condition>,
    /// Counterexamples to print.
    #[arg(long, default_value_t = 5)]
    pub keep: usize,
    #[arg(long)]
    pub records: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub treebank: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub head_rules: Option<PathBuf>,
    /// Also time this model on the treebank sentences.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub records: bool,
}
