use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use wsn_core::engine::deploy_network;
use wsn_core::{simulate_traced, StrategyKind};
use wsn_sim::output::{write_nodes_csv, TraceWriter};
use wsn_sim::{load_config_with, run_experiment, Overrides};

#[derive(Parser)]
#[command(
    name = "wsn-sim",
    version,
    about = "Cluster-head routing simulator for wireless sensor networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured protocol over every seed and write results.
    Run(RunArgs),
    /// Print the deployed node roster for one seed as CSV.
    DumpNodes(SingleArgs),
    /// Write the per-node event log of a single run as CSV.
    Trace(TraceArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// TOML configuration file; defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    max_rounds: Option<u32>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Use seeds 1..=N.
    #[arg(long, value_name = "N", conflicts_with = "seed_list")]
    seeds: Option<u64>,
    /// Explicit seeds, comma separated.
    #[arg(long, value_name = "A,B,C", value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Comma separated subset of leach,lpch,udlpch.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    protocols: Option<Vec<StrategyKind>>,
}

#[derive(Args)]
struct SingleArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    single: SingleArgs,
    #[arg(long)]
    protocol: StrategyKind,
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let overrides = Overrides {
                seed_count: args.seeds,
                seed_list: args.seed_list,
                out_dir: args.out,
                protocols: args.protocols,
                max_rounds: args.common.max_rounds,
            };
            let config = load_config_with(args.common.config.as_deref(), &overrides)?;
            let result = run_experiment(&config)?;
            print!("{}", result.report);
            for file in &result.files {
                println!("wrote {}", file.display());
            }
        }
        Command::DumpNodes(args) => {
            let overrides = Overrides {
                max_rounds: args.common.max_rounds,
                ..Overrides::default()
            };
            let config = load_config_with(args.common.config.as_deref(), &overrides)?;
            let (nodes, _) = deploy_network(&config.sim.field, config.sim.radio.e_init, args.seed);
            let mut out = output(args.out.as_ref())?;
            write_nodes_csv(&mut out, &nodes)?;
            out.flush()?;
        }
        Command::Trace(args) => {
            let single = args.single;
            let overrides = Overrides {
                max_rounds: single.common.max_rounds,
                ..Overrides::default()
            };
            let config = load_config_with(single.common.config.as_deref(), &overrides)?;
            let mut sink = TraceWriter::new(output(single.out.as_ref())?)?;
            let series = simulate_traced(&config.sim, args.protocol, single.seed, &mut sink)?;
            sink.finish()?;
            eprintln!(
                "{} seed {}: stability {}, lifetime {}, packets {}{}",
                series.kind,
                series.seed,
                series.stability_period,
                series.lifetime,
                series.total_packets,
                if series.truncated { " (truncated)" } else { "" }
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
