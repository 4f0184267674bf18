//! Text formats: per-round and summary CSV, plot tables, node roster and
//! the per-run event log. All files use `\n` line endings and `.` decimals.

use std::io::{self, Write};

use wsn_core::engine::TraceEvent;
use wsn_core::{AggregateSeries, MeanRound, NodeState};

pub const ROUNDS_HEADER: &str = "round,dead_mean,alive_mean,packets_mean,ch_r1_mean,ch_r2_mean,energy_mean";
pub const SUMMARY_HEADER: &str = "protocol,stability_mean,lifetime_mean,total_packets_mean";
pub const NODES_HEADER: &str = "id,region,x,y";
pub const TRACE_HEADER: &str = "round,node,action,target,energy_after";

/// Which curve a plot table carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMetric {
    Dead,
    Alive,
    /// Cumulative packets delivered to the BS.
    Throughput,
}

impl PlotMetric {
    pub const ALL: [PlotMetric; 3] = [PlotMetric::Dead, PlotMetric::Alive, PlotMetric::Throughput];

    pub fn file_name(self) -> &'static str {
        match self {
            PlotMetric::Dead => "dead_nodes.dat",
            PlotMetric::Alive => "alive_nodes.dat",
            PlotMetric::Throughput => "throughput.dat",
        }
    }

    fn value(self, r: &MeanRound) -> f64 {
        match self {
            PlotMetric::Dead => r.dead,
            PlotMetric::Alive => r.alive,
            PlotMetric::Throughput => r.cumulative_packets,
        }
    }
}

pub fn write_rounds_csv<W: Write>(out: &mut W, series: &AggregateSeries) -> io::Result<()> {
    writeln!(out, "{ROUNDS_HEADER}")?;
    for r in &series.rounds {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.round, r.dead, r.alive, r.packets, r.ch_r1, r.ch_r2, r.energy
        )?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(out: &mut W, series: &[AggregateSeries]) -> io::Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for s in series {
        writeln!(
            out,
            "{},{},{},{}",
            s.kind, s.stability_mean, s.lifetime_mean, s.total_packets_mean
        )?;
    }
    Ok(())
}

/// A whitespace-separated table with one `round` column and one column per
/// protocol. Shorter series are extended with their last value.
pub fn write_plot_data<W: Write>(out: &mut W, series: &[AggregateSeries], metric: PlotMetric) -> io::Result<()> {
    write!(out, "round")?;
    for s in series {
        write!(out, " {}", s.kind)?;
    }
    writeln!(out)?;
    let rows = series.iter().map(|s| s.rounds.len()).max().unwrap_or(0);
    for i in 0..rows {
        write!(out, "{i}")?;
        for s in series {
            let value = s.rounds.get(i).or(s.rounds.last()).map_or(0.0, |r| metric.value(r));
            write!(out, " {value}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_nodes_csv<W: Write>(out: &mut W, nodes: &[NodeState]) -> io::Result<()> {
    writeln!(out, "{NODES_HEADER}")?;
    for n in nodes {
        writeln!(out, "{},{},{},{}", n.id, n.region, n.pos.x, n.pos.y)?;
    }
    Ok(())
}

pub fn write_trace_header<W: Write>(out: &mut W) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")
}

pub fn write_trace_event<W: Write>(out: &mut W, e: &TraceEvent) -> io::Result<()> {
    match e.target {
        Some(t) => writeln!(
            out,
            "{},{},{},{},{}",
            e.round,
            e.node,
            e.action.name(),
            t,
            e.energy_after
        ),
        None => writeln!(out, "{},{},{},,{}", e.round, e.node, e.action.name(), e.energy_after),
    }
}

/// Streams events straight into a writer, keeping the first I/O error.
pub struct TraceWriter<W: Write> {
    out: W,
    error: Option<io::Error>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(mut out: W) -> io::Result<Self> {
        write_trace_header(&mut out)?;
        Ok(Self { out, error: None })
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> wsn_core::TraceSink for TraceWriter<W> {
    fn record(&mut self, event: TraceEvent) {
        if self.error.is_none() {
            if let Err(e) = write_trace_event(&mut self.out, &event) {
                self.error = Some(e);
            }
        }
    }
}
