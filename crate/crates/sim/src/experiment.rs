//! Multi-protocol, multi-seed experiments and the comparison report.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use wsn_core::{aggregate, simulate, AggregateSeries, RunSeries, StrategyKind};

use crate::config::ExperimentConfig;
use crate::output::{write_plot_data, write_rounds_csv, write_summary_csv, PlotMetric};

/// Minimum stability ratio for each step of LEACH < LPCH < UDLPCH.
pub const STABILITY_MARGIN: f64 = 1.03;
/// Minimum LPCH / LEACH throughput ratio.
pub const THROUGHPUT_MULTIPLE: f64 = 2.0;

/// Runs every (protocol, seed) pair. Results come back grouped by protocol
/// in config order, each group in ascending seed order.
pub fn run_all(config: &ExperimentConfig) -> Result<Vec<Vec<RunSeries>>> {
    let mut seeds = config.seeds.clone();
    seeds.sort_unstable();
    let jobs: Vec<(StrategyKind, u64)> = config
        .protocols
        .iter()
        .flat_map(|&k| seeds.iter().map(move |&s| (k, s)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(kind, seed)| simulate(&config.sim, kind, seed).with_context(|| format!("{kind} run with seed {seed}")))
        .collect::<Result<Vec<_>>>()?;
    let mut grouped: Vec<Vec<RunSeries>> = config.protocols.iter().map(|_| Vec::new()).collect();
    for run in runs {
        let slot = config
            .protocols
            .iter()
            .position(|&k| k == run.kind)
            .expect("configured protocol");
        grouped[slot].push(run);
    }
    Ok(grouped)
}

/// Averaged metrics of one protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSummary {
    pub kind: StrategyKind,
    pub runs: usize,
    pub truncated_runs: usize,
    pub stability_mean: f64,
    pub lifetime_mean: f64,
    pub total_packets_mean: f64,
}

/// `a` measured against baseline `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDelta {
    pub a: StrategyKind,
    pub b: StrategyKind,
    /// `(a - b) / b * 100`.
    pub stability_pct: f64,
    /// `a / b` on mean total packets.
    pub throughput_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub seeds: Vec<u64>,
    pub summaries: Vec<ProtocolSummary>,
    pub deltas: Vec<PairDelta>,
    pub checks: Vec<Check>,
}

fn pct(a: f64, b: f64) -> f64 {
    (a - b) / b * 100.0
}

impl ComparisonReport {
    pub fn new(seeds: &[u64], groups: &[Vec<RunSeries>], aggregates: &[AggregateSeries]) -> Self {
        let summaries: Vec<ProtocolSummary> = groups
            .iter()
            .zip(aggregates)
            .map(|(runs, agg)| ProtocolSummary {
                kind: agg.kind,
                runs: agg.runs,
                truncated_runs: runs.iter().filter(|r| r.truncated).count(),
                stability_mean: agg.stability_mean,
                lifetime_mean: agg.lifetime_mean,
                total_packets_mean: agg.total_packets_mean,
            })
            .collect();
        let find = |k: StrategyKind| summaries.iter().find(|s| s.kind == k);
        let pairs = [
            (StrategyKind::Lpch, StrategyKind::Leach),
            (StrategyKind::Udlpch, StrategyKind::Lpch),
            (StrategyKind::Udlpch, StrategyKind::Leach),
        ];
        let deltas: Vec<PairDelta> = pairs
            .iter()
            .filter_map(|&(a, b)| {
                let (sa, sb) = (find(a)?, find(b)?);
                Some(PairDelta {
                    a,
                    b,
                    stability_pct: pct(sa.stability_mean, sb.stability_mean),
                    throughput_ratio: sa.total_packets_mean / sb.total_packets_mean,
                })
            })
            .collect();

        let mut checks = Vec::new();
        if let (Some(l), Some(p), Some(u)) = (
            find(StrategyKind::Leach),
            find(StrategyKind::Lpch),
            find(StrategyKind::Udlpch),
        ) {
            let (lp, ul) = (p.stability_mean / l.stability_mean, u.stability_mean / p.stability_mean);
            checks.push(Check {
                name: "stability ordering",
                passed: l.stability_mean < p.stability_mean
                    && p.stability_mean < u.stability_mean
                    && lp >= STABILITY_MARGIN
                    && ul >= STABILITY_MARGIN,
                detail: format!("lpch/leach = {lp:.4}, udlpch/lpch = {ul:.4} (each must be >= {STABILITY_MARGIN})"),
            });
            let (tp, tu) = (
                p.total_packets_mean / l.total_packets_mean,
                u.total_packets_mean / p.total_packets_mean,
            );
            checks.push(Check {
                name: "throughput ordering",
                passed: tp >= THROUGHPUT_MULTIPLE && tu >= 1.0,
                detail: format!(
                    "lpch/leach = {tp:.4} (must be >= {THROUGHPUT_MULTIPLE}), udlpch/lpch = {tu:.4} (must be >= 1)"
                ),
            });
        }
        let mut seeds = seeds.to_vec();
        seeds.sort_unstable();
        ComparisonReport {
            seeds,
            summaries,
            deltas,
            checks,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seeds: {:?}", self.seeds)?;
        writeln!(
            f,
            "{:<8} {:>5} {:>10} {:>12} {:>12} {:>14}",
            "protocol", "runs", "truncated", "stability", "lifetime", "total_packets"
        )?;
        for s in &self.summaries {
            writeln!(
                f,
                "{:<8} {:>5} {:>10} {:>12.1} {:>12.1} {:>14.1}",
                s.kind.name(),
                s.runs,
                s.truncated_runs,
                s.stability_mean,
                s.lifetime_mean,
                s.total_packets_mean
            )?;
        }
        for d in &self.deltas {
            writeln!(
                f,
                "{} vs {}: stability {:+.2}%, throughput x{:.3} ({:+.1}%)",
                d.a,
                d.b,
                d.stability_pct,
                d.throughput_ratio,
                (d.throughput_ratio - 1.0) * 100.0
            )?;
        }
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

/// Everything a finished experiment produced.
pub struct ExperimentOutput {
    pub report: ComparisonReport,
    pub aggregates: Vec<AggregateSeries>,
    pub runs: Vec<Vec<RunSeries>>,
    pub files: Vec<PathBuf>,
}

fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let probe = dir.join(".write-probe");
    File::create(&probe).with_context(|| format!("output directory {} is not writable", dir.display()))?;
    fs::remove_file(&probe).ok();
    Ok(())
}

fn write_file(
    path: PathBuf,
    files: &mut Vec<PathBuf>,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let file = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = BufWriter::new(file);
    body(&mut out)
        .and_then(|_| out.flush())
        .with_context(|| format!("cannot write {}", path.display()))?;
    files.push(path);
    Ok(())
}

/// Runs the experiment and writes all result files into `config.out_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let dir = config.out_dir.clone();
    ensure_writable(&dir)?;

    let runs = run_all(config)?;
    let aggregates = runs
        .iter()
        .map(|group| aggregate(group).map_err(anyhow::Error::from))
        .collect::<Result<Vec<_>>>()?;
    let report = ComparisonReport::new(&config.seeds, &runs, &aggregates);

    let mut files = Vec::new();
    for agg in &aggregates {
        write_file(dir.join(format!("{}_rounds.csv", agg.kind)), &mut files, |out| {
            write_rounds_csv(out, agg)
        })?;
    }
    write_file(dir.join("summary.csv"), &mut files, |out| {
        write_summary_csv(out, &aggregates)
    })?;
    for metric in PlotMetric::ALL {
        write_file(dir.join(metric.file_name()), &mut files, |out| {
            write_plot_data(out, &aggregates, metric)
        })?;
    }
    write_file(dir.join("config.resolved.toml"), &mut files, |out| {
        out.write_all(config.echo().as_bytes())
    })?;
    write_file(dir.join("report.txt"), &mut files, |out| write!(out, "{report}"))?;

    Ok(ExperimentOutput {
        report,
        aggregates,
        runs,
        files,
    })
}
