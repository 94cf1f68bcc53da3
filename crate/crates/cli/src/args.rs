use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sbc", version, about = "Score how well requirements survive a code round trip")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score one reconstructed requirement against its original.
    Score(ScoreArgs),
    /// Run generate, reverse-generate and score over a dataset.
    Run(RunArgs),
    /// Complete a partial results file, running only missing evaluations.
    Resume(ResumeArgs),
    /// Write the per-question maximum score of each model as CSV.
    Consolidate(ResultsArgs),
    /// Print per-model, per-layer statistics and quality bands.
    Report(ReportArgs),
    /// Draw per-question maxima of each model as an SVG line chart.
    Chart(ResultsArgs),
    /// Check a dataset file and print a summary.
    ValidateDataset(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("candidate").required(true).args(["reversed", "code"]))]
pub struct ScoreArgs {
    /// Original requirement: a file path or literal text.
    #[arg(long)]
    pub original: String,
    /// Reconstructed requirement: a file path or literal text.
    #[arg(long)]
    pub reversed: Option<String>,
    /// Code file to reverse-generate with a configured provider.
    #[arg(long, requires = "config")]
    pub code: Option<PathBuf>,
    /// Provider used with --code; defaults to the first configured one.
    #[arg(long, requires = "code")]
    pub provider: Option<String>,
    /// Run configuration (providers, embedding provider, weights).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub config: PathBuf,
    /// Results file; defaults to the config's output_path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResumeArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub config: PathBuf,
    /// Partial results file to complete.
    #[arg(long)]
    pub existing: PathBuf,
    /// Merged results file; defaults to overwriting --existing.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResultsArgs {
    /// Results files (JSON Lines, or CSV with a .csv extension).
    #[arg(long, required = true, num_args = 1..)]
    pub results: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, required = true, num_args = 1..)]
    pub results: Vec<PathBuf>,
    /// Dataset supplying each question's layer.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub dataset: PathBuf,
}
