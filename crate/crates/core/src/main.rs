use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use socialsig::pipeline::{
    run_pipeline, simulate_fixture, Command, Overrides, PipelineConfig, SimulationOptions, Stage,
};
use socialsig::signals::Population;

/// Trading-signal time series, Granger scans and co-mention networks from
/// crypto tweet corpora.
#[derive(Parser, Debug)]
#[command(name = "socialsig", version)]
struct Cli {
    /// Pipeline config file (TOML). Relative input paths resolve against its directory.
    #[arg(long, global = true, default_value = "socialsig.toml")]
    config: PathBuf,
    /// Output directory; overrides `run.out`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel stages; overrides `run.workers`.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for the simulate subcommand; overrides `run.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Authors feeding the social signal: pooled, influencers or news.
    #[arg(long, global = true)]
    population: Option<Population>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Parse tweets, prices and registry; detect coin mentions.
    Ingest,
    /// Label every tweet buy / not-buy / irrelevant.
    Classify,
    /// Hourly social-signal series per coin.
    Signals,
    /// Co-mention and retweet networks, centrality, influencer selection.
    Network,
    /// Granger causality scans per coin.
    Granger,
    /// Lagged cross-correlation scans per coin.
    Xcorr,
    /// Pairwise return correlation matrix.
    Matrix,
    /// Significance table, corpus summary and report bundle.
    Report,
    /// Every stage.
    All,
    /// Write a seeded synthetic fixture (inputs plus config) to --out.
    Simulate,
}

impl Cmd {
    fn pipeline(self) -> Option<Command> {
        Some(match self {
            Cmd::Ingest => Command::Ingest,
            Cmd::Classify => Command::Classify,
            Cmd::Signals => Command::Signals,
            Cmd::Network => Command::Network,
            Cmd::Granger => Command::Granger,
            Cmd::Xcorr => Command::Xcorr,
            Cmd::Matrix => Command::Matrix,
            Cmd::Report => Command::Report,
            Cmd::All => Command::All,
            Cmd::Simulate => return None,
        })
    }
}

fn absolute(p: &Path) -> PathBuf {
    std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf())
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: config: {msg}");
    ExitCode::from(Stage::Config.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let Some(command) = cli.command.pipeline() else {
        let Some(out) = &cli.out else {
            return config_error("simulate requires --out");
        };
        let opts = SimulationOptions { seed: cli.seed.unwrap_or(0), ..SimulationOptions::default() };
        return match simulate_fixture(&opts, out) {
            Ok(()) => {
                println!("fixture written to {}", out.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: simulate: {e}");
                ExitCode::FAILURE
            }
        };
    };

    let mut config = match PipelineConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let overrides = Overrides {
        out: cli.out.as_deref().map(absolute),
        workers: cli.workers,
        seed: cli.seed,
        population: cli.population,
    };
    if let Err(e) = config.apply(&overrides) {
        return config_error(e);
    }
    if let Some(n) = config.run.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return config_error(format!("run.workers: {e}"));
        }
    }

    match run_pipeline(&config, command) {
        Ok(outcome) => {
            for w in &outcome.manifest.warnings {
                eprintln!("warning: {w}");
            }
            println!("{} outputs written to {}", outcome.manifest.outputs.len(), outcome.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
