//! `blocksel`: partition an embedding pool into context blocks, score and
//! compare partitions, and run exhaustive oracles on toy instances.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 fingerprint
//! mismatch under `--strict`.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use blocksel::io::Format;
use blocksel::Strategy;

#[derive(Parser)]
#[command(name = "blocksel", version, about = "Submodular context-block partitioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition embeddings into blocks and write the partition JSON.
    Partition(PartitionArgs),
    /// Re-score a partition file against its embeddings.
    Score(ScoreArgs),
    /// Compare strategies and a random baseline on the same input.
    Compare(CompareArgs),
    /// Exhaustive optimum and per-strategy approximation ratios.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Embedding file.
    #[arg(long)]
    input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_strategy)]
    strategy: Strategy,
    /// Total selection budget.
    #[arg(long, default_value_t = 40)]
    k: usize,
    /// Number of blocks.
    #[arg(long, default_value_t = 4)]
    blocks: usize,
    /// L2-normalize rows (cosine similarity).
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    normalize: bool,
    /// Enforce per-block label quotas.
    #[arg(long, default_value_t = false, action = ArgAction::Set)]
    balance_labels: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Partition JSON written by `partition`.
    #[arg(long)]
    partition: PathBuf,
    /// Fail with exit code 3 when the input fingerprint does not match.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Strategy to include; repeatable. Defaults to all four.
    #[arg(long = "strategy", value_parser = parse_strategy)]
    strategies: Vec<Strategy>,
    #[arg(long, default_value_t = 40)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    blocks: usize,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    normalize: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    blocks: usize,
    /// best-subset, min-block, sum, sum-plus-union or max-block.
    #[arg(long, default_value = "best-subset")]
    objective: String,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    normalize: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: blocksel::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: blocksel::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Partition(a) => commands::partition(a),
        Command::Score(a) => commands::score(a),
        Command::Compare(a) => commands::compare(a),
        Command::Oracle(a) => commands::oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
