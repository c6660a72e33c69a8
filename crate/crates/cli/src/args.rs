use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "wildstream",
    version,
    about = "Streaming pattern matching with wildcards"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report every occurrence of the pattern in the text stream.
    Match(MatchArgs),
    /// Same as `match` with the direct comparison matcher.
    Oracle(StreamArgs),
    /// Run the small wildcard-period matcher.
    Smallwp(SmallWpArgs),
    /// Run the space/time tradeoff matcher.
    Tradeoff(TradeoffArgs),
    /// Principal period of a wildcard-free string.
    Period(PatternArgs),
    /// Wildcard-period length of a pattern.
    Pi(PatternArgs),
    /// Show the interval partition of a pattern.
    Partition(PartitionArgs),
    /// Show the prime cover of a pattern's wildcard layout.
    Primes(SeededPatternArgs),
    /// Show the column table and column pattern modulo `q`.
    Gamma(GammaArgs),
    /// Compare the streaming matchers with the oracle on generated cases.
    Difftest(DifftestArgs),
    /// Time the matchers on generated inputs; prints JSON lines.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Thm1,
    Smallwp,
    Tradeoff,
    Naive,
    Prelim,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricsFormat {
    Json,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("pattern_source").required(true).args(["pattern", "pattern_file"])))]
pub struct PatternArgs {
    /// Pattern; the wildcard byte matches any character.
    #[arg(short = 'p', long, allow_hyphen_values = true)]
    pub pattern: Option<String>,
    /// Read the pattern from a file (one trailing newline is dropped).
    #[arg(long)]
    pub pattern_file: Option<PathBuf>,
    /// Wildcard byte, as a single character or a number.
    #[arg(long, default_value = "?")]
    pub wildcard: String,
}

#[derive(Debug, Args)]
pub struct SeededPatternArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct StreamArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Text source; standard input when absent.
    #[arg(long)]
    pub text_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write run metrics to standard error.
    #[arg(long, value_enum)]
    pub metrics: Option<MetricsFormat>,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    #[command(flatten)]
    pub stream: StreamArgs,
    #[arg(long, value_enum, default_value = "thm1")]
    pub engine: EngineArg,
    /// Tradeoff exponent in [0, 1]; tradeoff engine only.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Wildcard-period threshold to certify; smallwp engine only.
    #[arg(long)]
    pub tau: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SmallWpArgs {
    #[command(flatten)]
    pub stream: StreamArgs,
    #[arg(long)]
    pub tau: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    #[command(flatten)]
    pub stream: StreamArgs,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Split only at wildcards.
    #[arg(long)]
    pub preliminary: bool,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(short = 'q', long)]
    pub q: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DifftestArgs {
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub max_m: usize,
    #[arg(long, default_value_t = 8)]
    pub max_d: usize,
    #[arg(long, default_value_t = 2048)]
    pub max_n: usize,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "thm1,smallwp,tradeoff,naive,prelim"
    )]
    pub engines: Vec<EngineArg>,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Skip validation at this interval of the streaming engine.
    #[arg(long, hide = true)]
    pub mutate: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "4096")]
    pub m: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "4,16,64")]
    pub d: Vec<usize>,
    #[arg(long, default_value_t = 1 << 17)]
    pub n: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "thm1,naive")]
    pub engines: Vec<EngineArg>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}
