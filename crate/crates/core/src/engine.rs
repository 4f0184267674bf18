//! Round lifecycle and run driver.
//!
//! A round runs in a fixed order: head selection, cluster formation, energy
//! charging (heads, members, direct senders), liveness update, record
//! emission. Every
//! node alive at the start of a round transmits exactly one packet in it,
//! even if that leaves its battery below zero.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SimError;
use crate::network::{assign_ids, deploy, distance, FieldConfig, NodeId, NodeState, Region, Role};
use crate::protocols::{form_clusters, ClusterAssignment, ProtocolConfig, ProtocolState, StrategyKind};
use crate::radio::{Joules, RadioParams};

pub const DEFAULT_MAX_ROUNDS: u32 = 20_000;

/// Everything a single run needs besides the strategy and the seed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimConfig {
    pub field: FieldConfig,
    pub radio: RadioParams,
    pub protocol: ProtocolConfig,
    pub max_rounds: u32,
}

impl SimConfig {
    pub fn with_defaults() -> Self {
        Self {
            max_rounds: DEFAULT_MAX_ROUNDS,
            ..Self::default()
        }
    }
}

/// The run's random stream. Deployment draws come first, then election
/// draws round by round.
pub fn run_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deployed, ID-ordered nodes for `seed`, plus the stream positioned right
/// after the deployment draws.
pub fn deploy_network(field: &FieldConfig, e_init: Joules, seed: u64) -> (Vec<NodeState>, ChaCha8Rng) {
    let mut rng = run_rng(seed);
    let nodes = assign_ids(deploy(field, e_init, &mut rng));
    (nodes, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    /// Head sends its aggregate to the BS.
    HeadTx,
    /// Member sends to its head (`target`).
    MemberTx,
    /// Node sends straight to the BS.
    DirectTx,
    Death,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::HeadTx => "ch_tx",
            Action::MemberTx => "member_tx",
            Action::DirectTx => "direct_tx",
            Action::Death => "death",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub round: u32,
    pub node: NodeId,
    pub action: Action,
    /// Receiving head for [`Action::MemberTx`].
    pub target: Option<NodeId>,
    pub energy_after: Joules,
}

/// Receives per-node events as a round executes.
pub trait TraceSink {
    fn record(&mut self, event: TraceEvent);
}

impl TraceSink for () {
    fn record(&mut self, _: TraceEvent) {}
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: TraceEvent) {
        self.push(event);
    }
}

/// Observables of one round, taken after energy charging.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub round: u32,
    pub dead: u32,
    pub alive: u32,
    pub alive_r1: u32,
    pub alive_r2: u32,
    /// One per head aggregate plus one per direct sender.
    pub packets_to_bs: u32,
    pub direct_senders: u32,
    pub ch_count_r1: u32,
    pub ch_count_r2: u32,
    /// Sum of the residual energy of alive nodes.
    pub energy_total: Joules,
}

/// Mutable state of one run.
#[derive(Debug, Clone)]
pub struct NetworkState {
    pub nodes: Vec<NodeState>,
    pub round: u32,
    pub protocol: ProtocolState,
    pub radio: RadioParams,
    pub field: FieldConfig,
    /// Cluster structure of the most recent round.
    pub assignment: ClusterAssignment,
    rng: ChaCha8Rng,
    consumed: Joules,
}

impl NetworkState {
    /// Deploys the network for `seed` and prepares `kind`.
    pub fn new(config: &SimConfig, kind: StrategyKind, seed: u64) -> Result<Self, SimError> {
        config.field.validate()?;
        let (nodes, rng) = deploy_network(&config.field, config.radio.e_init, seed);
        Self::from_nodes(config, kind, nodes, rng)
    }

    /// Starts a run on an already ID-ordered node list.
    pub fn from_nodes(
        config: &SimConfig,
        kind: StrategyKind,
        nodes: Vec<NodeState>,
        rng: ChaCha8Rng,
    ) -> Result<Self, SimError> {
        let protocol = ProtocolState::new(kind, &config.protocol, nodes.len() as u32, config.radio.p_opt)?;
        Ok(Self {
            nodes,
            round: 0,
            protocol,
            radio: config.radio,
            field: config.field,
            assignment: ClusterAssignment::default(),
            rng,
            consumed: 0.0,
        })
    }

    pub fn alive_count(&self) -> u32 {
        self.nodes.iter().filter(|n| n.alive).count() as u32
    }

    /// Total energy charged so far.
    pub fn consumed(&self) -> Joules {
        self.consumed
    }

    /// Sum of every node's energy, negative balances included.
    pub fn residual(&self) -> Joules {
        self.nodes.iter().map(|n| n.energy).sum()
    }

    /// Energy the network started with.
    pub fn initial_energy(&self) -> Joules {
        self.nodes.len() as f64 * self.radio.e_init
    }

    /// Executes one round and advances the round counter.
    pub fn run_round<S: TraceSink + ?Sized>(&mut self, sink: &mut S) -> Result<RoundRecord, SimError> {
        if self.alive_count() == 0 {
            return Err(SimError::NetworkDead);
        }
        let round = self.round;
        let heads = self.protocol.next_round_chs(&self.nodes, round, &mut self.rng)?;
        let chs: Vec<NodeId> = heads.iter().flatten().copied().collect();
        let assignment = form_clusters(&chs, &self.nodes, self.field.bs, self.protocol.rules);
        let member_counts = assignment.member_counts();

        for node in self.nodes.iter_mut() {
            node.role = None;
        }
        let mut packets = 0u32;
        let bs = self.field.bs;
        for (&ch, &members) in assignment.ch_ids.iter().zip(&member_counts) {
            let node = &mut self.nodes[ch.index()];
            let cost = self.radio.ch_round_energy(members, distance(node.pos, bs))?;
            charge(node, cost, &mut self.consumed);
            node.role = Some(Role::ClusterHead);
            packets += 1;
        }
        for (&member, &head) in &assignment.membership {
            let head_pos = self.nodes[head.index()].pos;
            let node = &mut self.nodes[member.index()];
            let cost = self.radio.non_ch_round_energy(distance(node.pos, head_pos))?;
            charge(node, cost, &mut self.consumed);
            node.role = Some(Role::Member);
        }
        for &direct in &assignment.direct_senders {
            let node = &mut self.nodes[direct.index()];
            let cost = self.radio.non_ch_round_energy(distance(node.pos, bs))?;
            charge(node, cost, &mut self.consumed);
            node.role = Some(Role::DirectSender);
            packets += 1;
        }

        // events go out in ascending node ID
        for node in &self.nodes {
            let Some(role) = node.role else { continue };
            let (action, target) = match role {
                Role::ClusterHead => (Action::HeadTx, None),
                Role::Member => (Action::MemberTx, assignment.membership.get(&node.id).copied()),
                Role::DirectSender => (Action::DirectTx, None),
            };
            sink.record(TraceEvent {
                round,
                node: node.id,
                action,
                target,
                energy_after: node.energy,
            });
        }
        for node in self.nodes.iter_mut().filter(|n| n.alive && n.energy <= 0.0) {
            node.alive = false;
            sink.record(TraceEvent {
                round,
                node: node.id,
                action: Action::Death,
                target: None,
                energy_after: node.energy,
            });
        }

        let record = self.record(round, packets, assignment.direct_senders.len() as u32, &heads);
        self.assignment = assignment;
        self.round += 1;
        Ok(record)
    }

    fn record(&self, round: u32, packets: u32, direct: u32, heads: &[Vec<NodeId>; 2]) -> RoundRecord {
        let mut alive_by_region = [0u32; 2];
        let mut energy_total = 0.0;
        for node in self.nodes.iter().filter(|n| n.alive) {
            alive_by_region[node.region.index()] += 1;
            energy_total += node.energy;
        }
        let alive = alive_by_region[0] + alive_by_region[1];
        let heads_in = |r: Region| heads[r.index()].len() as u32;
        RoundRecord {
            round,
            dead: self.nodes.len() as u32 - alive,
            alive,
            alive_r1: alive_by_region[0],
            alive_r2: alive_by_region[1],
            packets_to_bs: packets,
            direct_senders: direct,
            ch_count_r1: heads_in(Region::R1),
            ch_count_r2: heads_in(Region::R2),
            energy_total,
        }
    }
}

fn charge(node: &mut NodeState, cost: Joules, consumed: &mut Joules) {
    node.energy -= cost;
    *consumed += cost;
}

/// One complete run with derived lifetime metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSeries {
    pub kind: StrategyKind,
    pub seed: u64,
    pub records: Vec<RoundRecord>,
    /// Round in which the first node died (rounds executed if none died).
    pub stability_period: u32,
    /// Round in which the last node died (rounds executed if truncated).
    pub lifetime: u32,
    pub total_packets: u64,
    /// `max_rounds` was hit with nodes still alive.
    pub truncated: bool,
    /// Per-region head count fixed in round 0 (rotating strategies).
    pub locked_ch: [usize; 2],
    pub lpch_redraws: u32,
}

/// Deploys, numbers and runs a network until every node is dead or
/// `config.max_rounds` rounds have run.
pub fn simulate(config: &SimConfig, kind: StrategyKind, seed: u64) -> Result<RunSeries, SimError> {
    simulate_traced(config, kind, seed, &mut ())
}

pub fn simulate_traced<S: TraceSink + ?Sized>(
    config: &SimConfig,
    kind: StrategyKind,
    seed: u64,
    sink: &mut S,
) -> Result<RunSeries, SimError> {
    if config.max_rounds == 0 {
        return Err(SimError::InvalidParameter {
            name: "max_rounds",
            reason: "must be at least 1",
        });
    }
    let mut state = NetworkState::new(config, kind, seed)?;
    let mut records = Vec::new();
    while state.alive_count() > 0 && state.round < config.max_rounds {
        records.push(state.run_round(sink)?);
    }
    Ok(series_from_records(kind, seed, records, &state))
}

fn series_from_records(kind: StrategyKind, seed: u64, records: Vec<RoundRecord>, state: &NetworkState) -> RunSeries {
    let executed = records.len() as u32;
    let stability_period = records.iter().find(|r| r.dead > 0).map_or(executed, |r| r.round);
    let truncated = state.alive_count() > 0;
    let lifetime = if truncated {
        executed
    } else {
        records.last().map_or(0, |r| r.round)
    };
    let total_packets = records.iter().map(|r| u64::from(r.packets_to_bs)).sum();
    RunSeries {
        kind,
        seed,
        records,
        stability_period,
        lifetime,
        total_packets,
        truncated,
        locked_ch: state.protocol.locked,
        lpch_redraws: state.protocol.redraws,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{nodes_from_positions, Point};
    use alloc::vec;

    #[test]
    fn single_node_network() {
        let config = SimConfig {
            field: FieldConfig {
                nodes_per_region: 1,
                ..FieldConfig::default()
            },
            protocol: ProtocolConfig {
                k_opt: 1,
                ..ProtocolConfig::default()
            },
            ..SimConfig::with_defaults()
        };
        let mut nodes = nodes_from_positions(&config.field, 0.5, &[Point::new(20.0, 30.0), Point::new(80.0, 70.0)]);
        nodes[0].alive = false;
        nodes[0].energy = 0.0;
        let mut state = NetworkState::from_nodes(&config, StrategyKind::Udlpch, nodes, run_rng(0)).unwrap();
        let before = state.nodes[1].energy;
        let rec = state.run_round(&mut ()).unwrap();
        assert_eq!(rec.packets_to_bs, 1);
        assert_eq!(rec.ch_count_r2, 1);
        let d_bs = distance(Point::new(80.0, 70.0), config.field.bs);
        let expect = config.radio.ch_round_energy(0, d_bs).unwrap();
        assert_eq!(state.nodes[1].energy, before - expect);
    }

    #[test]
    fn dead_network_refuses_round() {
        let config = SimConfig::with_defaults();
        let mut state = NetworkState::new(&config, StrategyKind::Leach, 1).unwrap();
        for n in state.nodes.iter_mut() {
            n.alive = false;
        }
        assert_eq!(state.run_round(&mut ()), Err(SimError::NetworkDead));
    }

    #[test]
    fn zero_max_rounds_rejected() {
        let config = SimConfig {
            max_rounds: 0,
            ..SimConfig::with_defaults()
        };
        assert!(simulate(&config, StrategyKind::Lpch, 0).is_err());
    }

    #[test]
    fn truncated_run_is_flagged() {
        let config = SimConfig {
            max_rounds: 25,
            ..SimConfig::with_defaults()
        };
        let s = simulate(&config, StrategyKind::Leach, 3).unwrap();
        assert!(s.truncated);
        assert_eq!(s.records.len(), 25);
        assert_eq!(s.lifetime, 25);
        assert_eq!(s.stability_period, 25);
    }

    #[test]
    fn events_match_record() {
        let config = SimConfig::with_defaults();
        let mut state = NetworkState::new(&config, StrategyKind::Lpch, 5).unwrap();
        let mut events = vec![];
        let rec = state.run_round(&mut events).unwrap();
        let sent = events
            .iter()
            .filter(|e| matches!(e.action, Action::HeadTx | Action::DirectTx))
            .count();
        assert_eq!(sent as u32, rec.packets_to_bs);
        assert_eq!(events.len(), 100);
    }
}
