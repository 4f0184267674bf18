//! Multi-seed averaging of run series.

use alloc::vec::Vec;

use crate::engine::{RoundRecord, RunSeries};
use crate::error::SimError;
use crate::protocols::StrategyKind;

/// Per-round means across runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanRound {
    pub round: u32,
    pub dead: f64,
    pub alive: f64,
    pub packets: f64,
    /// Mean of each run's running packet total.
    pub cumulative_packets: f64,
    pub ch_r1: f64,
    pub ch_r2: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSeries {
    pub kind: StrategyKind,
    pub runs: usize,
    pub rounds: Vec<MeanRound>,
    pub stability_mean: f64,
    pub lifetime_mean: f64,
    pub total_packets_mean: f64,
}

/// Averages `series` round by round.
///
/// Runs that ended early are extended with their final node counts and
/// energy, and with zero packets and zero heads. Sums run in ascending
/// seed order.
pub fn aggregate(series: &[RunSeries]) -> Result<AggregateSeries, SimError> {
    let first = series.first().ok_or(SimError::EmptyAggregate)?;
    if series.iter().any(|s| s.kind != first.kind) {
        return Err(SimError::MixedAggregate);
    }
    let mut ordered: Vec<&RunSeries> = series.iter().collect();
    ordered.sort_by_key(|s| s.seed);

    let n = ordered.len() as f64;
    let len = ordered.iter().map(|s| s.records.len()).max().unwrap_or(0);
    let mut running = alloc::vec![0u64; ordered.len()];
    let mut rounds = Vec::with_capacity(len);
    for i in 0..len {
        let mut acc = MeanRound {
            round: i as u32,
            dead: 0.0,
            alive: 0.0,
            packets: 0.0,
            cumulative_packets: 0.0,
            ch_r1: 0.0,
            ch_r2: 0.0,
            energy: 0.0,
        };
        for (run, total) in ordered.iter().zip(running.iter_mut()) {
            let rec = padded(&run.records, i);
            *total += u64::from(rec.packets_to_bs);
            acc.dead += f64::from(rec.dead);
            acc.alive += f64::from(rec.alive);
            acc.packets += f64::from(rec.packets_to_bs);
            acc.cumulative_packets += *total as f64;
            acc.ch_r1 += f64::from(rec.ch_count_r1);
            acc.ch_r2 += f64::from(rec.ch_count_r2);
            acc.energy += rec.energy_total;
        }
        acc.dead /= n;
        acc.alive /= n;
        acc.packets /= n;
        acc.cumulative_packets /= n;
        acc.ch_r1 /= n;
        acc.ch_r2 /= n;
        acc.energy /= n;
        rounds.push(acc);
    }

    let mean = |f: fn(&RunSeries) -> f64| ordered.iter().map(|s| f(s)).sum::<f64>() / n;
    Ok(AggregateSeries {
        kind: first.kind,
        runs: ordered.len(),
        rounds,
        stability_mean: mean(|s| f64::from(s.stability_period)),
        lifetime_mean: mean(|s| f64::from(s.lifetime)),
        total_packets_mean: mean(|s| s.total_packets as f64),
    })
}

fn padded(records: &[RoundRecord], i: usize) -> RoundRecord {
    match records.get(i) {
        Some(r) => *r,
        None => {
            let last = records.last().copied().unwrap_or(RoundRecord {
                round: 0,
                dead: 0,
                alive: 0,
                alive_r1: 0,
                alive_r2: 0,
                packets_to_bs: 0,
                direct_senders: 0,
                ch_count_r1: 0,
                ch_count_r2: 0,
                energy_total: 0.0,
            });
            RoundRecord {
                round: i as u32,
                packets_to_bs: 0,
                direct_senders: 0,
                ch_count_r1: 0,
                ch_count_r2: 0,
                ..last
            }
        }
    }
}
