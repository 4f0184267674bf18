//! Cluster-head selection strategies and cluster formation.
//!
//! [`StrategyKind::Leach`] re-elects heads at random every round.
//! [`StrategyKind::Lpch`] and [`StrategyKind::Udlpch`] fix a per-region head
//! count in round 0 (LEACH-style draws, respectively ID multiples) and then
//! walk each head slot down the field one node per round.

mod clusters;
mod leach;
mod rotation;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

pub use clusters::{form_clusters, ClusterAssignment, MembershipRules};
pub use leach::{epoch_len, leach_elect, leach_threshold, reset_eligibility};
pub use rotation::{lpch_rotate, q_step, rotate_region, udlpch_first_round};

use crate::error::SimError;
use crate::network::{NodeId, NodeState, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrategyKind {
    Leach,
    Lpch,
    Udlpch,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [StrategyKind::Leach, StrategyKind::Lpch, StrategyKind::Udlpch];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Leach => "leach",
            StrategyKind::Lpch => "lpch",
            StrategyKind::Udlpch => "udlpch",
        }
    }

    fn rotates(self) -> bool {
        !matches!(self, StrategyKind::Leach)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownStrategy;

impl fmt::Display for UnknownStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of leach, lpch, udlpch")
    }
}

impl core::error::Error for UnknownStrategy {}

impl FromStr for StrategyKind {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "leach" => Ok(StrategyKind::Leach),
            "lpch" => Ok(StrategyKind::Lpch),
            "udlpch" => Ok(StrategyKind::Udlpch),
            _ => Err(UnknownStrategy),
        }
    }
}

/// Per-run protocol options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    /// Target number of heads network-wide; seeds UDLPCH through `q_step`.
    pub k_opt: u32,
    /// Restrict membership to heads of the node's own region.
    pub same_region_membership: bool,
    /// Let LEACH members use the direct-to-BS override as well. LPCH and
    /// UDLPCH always use it.
    pub leach_direct_override: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            k_opt: 10,
            same_region_membership: false,
            leach_direct_override: false,
        }
    }
}

/// Selection bookkeeping carried between rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolState {
    pub kind: StrategyKind,
    pub k_opt: u32,
    pub q_step: u32,
    pub p_opt: f64,
    /// Heads chosen in the previous round, per region.
    pub prev_chs: [Vec<NodeId>; 2],
    /// Per-region head count fixed in round 0 (rotating strategies only).
    pub locked: [usize; 2],
    /// LEACH: nodes that have not been head yet in this epoch, by ID index.
    pub eligible: Vec<bool>,
    /// Extra round-0 LPCH draws needed because a region elected no head.
    pub redraws: u32,
    pub rules: MembershipRules,
}

impl ProtocolState {
    pub fn new(kind: StrategyKind, config: &ProtocolConfig, n_total: u32, p_opt: f64) -> Result<Self, SimError> {
        let q_step = q_step(n_total, config.k_opt)?;
        let rules = MembershipRules {
            direct_override: kind.rotates() || config.leach_direct_override,
            same_region_only: config.same_region_membership,
        };
        Ok(Self {
            kind,
            k_opt: config.k_opt,
            q_step,
            p_opt,
            prev_chs: [Vec::new(), Vec::new()],
            locked: [0, 0],
            eligible: vec![true; n_total as usize],
            redraws: 0,
            rules,
        })
    }

    /// Heads for round `round`, per region. `nodes` must be ID-ordered.
    pub fn next_round_chs<R: Rng + ?Sized>(
        &mut self,
        nodes: &[NodeState],
        round: u32,
        rng: &mut R,
    ) -> Result<[Vec<NodeId>; 2], SimError> {
        let chs = match (self.kind, round) {
            (StrategyKind::Leach, _) => {
                if round.is_multiple_of(epoch_len(self.p_opt)) {
                    reset_eligibility(nodes, &mut self.eligible);
                }
                let elected = leach_elect(nodes, &mut self.eligible, self.p_opt, round, None, rng);
                split_by_region(nodes, &elected)
            }
            (StrategyKind::Lpch, 0) => self.lpch_first_round(nodes, rng),
            (StrategyKind::Udlpch, 0) => udlpch_first_round(nodes, self.k_opt)?,
            _ => Region::ALL.map(|region| rotate_region(nodes, region, &self.prev_chs[region.index()])),
        };
        if round == 0 && self.kind.rotates() {
            self.locked = [chs[0].len(), chs[1].len()];
        }
        self.prev_chs = chs.clone();
        Ok(chs)
    }

    /// Independent LEACH elections per region, repeated for any region that
    /// comes up empty.
    fn lpch_first_round<R: Rng + ?Sized>(&mut self, nodes: &[NodeState], rng: &mut R) -> [Vec<NodeId>; 2] {
        reset_eligibility(nodes, &mut self.eligible);
        Region::ALL.map(|region| {
            let populated = nodes.iter().any(|n| n.alive && n.region == region);
            loop {
                let chs = leach_elect(nodes, &mut self.eligible, self.p_opt, 0, Some(region), rng);
                if !chs.is_empty() || !populated {
                    break chs;
                }
                self.redraws += 1;
            }
        })
    }
}

fn split_by_region(nodes: &[NodeState], ids: &[NodeId]) -> [Vec<NodeId>; 2] {
    let mut out = [Vec::new(), Vec::new()];
    for &id in ids {
        out[nodes[id.index()].region.index()].push(id);
    }
    out
}
