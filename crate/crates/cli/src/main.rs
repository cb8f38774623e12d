use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod cmd;
mod config;
mod output;

use output::Out;

/// Image-text relation corpus tooling: taxonomy, corpus building, baseline
/// classifiers, evaluation and human annotation.
#[derive(Parser)]
#[command(name = "forge", version)]
struct Cli {
    /// Print reports as JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the relation classes and their metric triples.
    Taxonomy(cmd::taxonomy::Args),
    /// Build a labeled corpus from source manifests.
    Build(cmd::build::Args),
    /// Derive antonym-substituted negatives from positive pairs.
    Augment(cmd::augment::Args),
    /// Train the classic and per-metric heads on a corpus.
    Train(cmd::train::Args),
    /// Predict classes for a pairs file.
    Predict(cmd::predict::Args),
    /// Score predictions or automatic labels against ground truth.
    Evaluate(cmd::evaluate::Args),
    /// Audit class and metric counts of a corpus.
    Consistency(cmd::consistency::Args),
    /// Serve pairs to human annotators over HTTP.
    AnnotateServe(cmd::serve::Args),
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let out = Out { json: cli.json };
    match cli.command {
        Command::Taxonomy(a) => cmd::taxonomy::run(a, &out),
        Command::Build(a) => cmd::build::run(a, &out),
        Command::Augment(a) => cmd::augment::run(a, &out),
        Command::Train(a) => cmd::train::run(a, &out),
        Command::Predict(a) => cmd::predict::run(a, &out),
        Command::Evaluate(a) => cmd::evaluate::run(a, &out),
        Command::Consistency(a) => cmd::consistency::run(a, &out),
        Command::AnnotateServe(a) => cmd::serve::run(a, &out),
    }
}

/// 0 on success, 1 on validation failure or error, 2 on usage error.
fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
