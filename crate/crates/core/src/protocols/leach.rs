use alloc::vec::Vec;

use rand::Rng;

use crate::network::{NodeId, NodeState, Region};

/// Rounds in one epoch for election probability `p`.
pub fn epoch_len(p: f64) -> u32 {
    libm::round(1.0 / p) as u32
}

/// LEACH election threshold `p / (1 - p * (r mod round(1/p)))`.
///
/// Only nodes that have not yet served as cluster head in the current epoch
/// may be compared against it.
pub fn leach_threshold(p: f64, round: u32) -> f64 {
    let phase = round % epoch_len(p);
    let denom = 1.0 - p * f64::from(phase);
    assert!(
        denom > 0.0,
        "threshold denominator must stay positive (p = {p}, r = {round})"
    );
    p / denom
}

/// Marks every alive node eligible again; called at each epoch boundary.
pub fn reset_eligibility(nodes: &[NodeState], eligible: &mut [bool]) {
    for (flag, node) in eligible.iter_mut().zip(nodes) {
        *flag = node.alive;
    }
}

/// One LEACH election over the alive, eligible nodes (optionally restricted
/// to `region`).
///
/// Candidates draw `u ∈ [0, 1)` in ascending ID order and become cluster head
/// when `u < T`. Winners lose eligibility until the next epoch reset.
/// `nodes` must be ID-ordered and `eligible` indexed like it.
pub fn leach_elect<R: Rng + ?Sized>(
    nodes: &[NodeState],
    eligible: &mut [bool],
    p: f64,
    round: u32,
    region: Option<Region>,
    rng: &mut R,
) -> Vec<NodeId> {
    let threshold = leach_threshold(p, round);
    let mut elected = Vec::new();
    for node in nodes {
        if !node.alive || region.is_some_and(|r| r != node.region) {
            continue;
        }
        let slot = &mut eligible[node.id.index()];
        if !*slot {
            continue;
        }
        let u: f64 = rng.random();
        if u < threshold {
            *slot = false;
            elected.push(node.id);
        }
    }
    elected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{nodes_from_positions, FieldConfig, Point};
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn threshold_values() {
        assert_eq!(leach_threshold(0.1, 0), 0.1);
        assert!((leach_threshold(0.1, 9) - 1.0).abs() < 1e-12);
        assert_eq!(leach_threshold(0.1, 10), leach_threshold(0.1, 0));
        assert_eq!(leach_threshold(1.0, 5), 1.0);
    }

    fn line(n: u32) -> Vec<NodeState> {
        let field = FieldConfig {
            nodes_per_region: n / 2,
            ..FieldConfig::default()
        };
        let pts: Vec<_> = (0..n)
            .map(|i| Point::new(if i % 2 == 0 { 10.0 } else { 90.0 }, f64::from(i) * 9.0 + 1.0))
            .collect();
        nodes_from_positions(&field, 0.5, &pts)
    }

    #[test]
    fn last_round_of_epoch_elects_every_eligible_node() {
        let nodes = line(10);
        let mut eligible = vec![true; 10];
        eligible[2] = false;
        eligible[7] = false;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let chs = leach_elect(&nodes, &mut eligible, 0.1, 9, None, &mut rng);
        let ids: Vec<u32> = chs.iter().map(|id| id.0).collect();
        assert_eq!(ids, vec![1, 2, 4, 5, 6, 7, 9, 10]);
        assert!(eligible.iter().all(|e| !e));
    }

    #[test]
    fn elected_node_sits_out_rest_of_epoch() {
        let nodes = line(10);
        let mut eligible = vec![true; 10];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = [0u32; 10];
        for r in 0..10 {
            for id in leach_elect(&nodes, &mut eligible, 0.1, r, None, &mut rng) {
                seen[id.index()] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn region_filter() {
        let nodes = line(10);
        let mut eligible = vec![true; 10];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let chs = leach_elect(&nodes, &mut eligible, 0.1, 9, Some(Region::R2), &mut rng);
        assert_eq!(chs.len(), 5);
        assert!(chs.iter().all(|id| nodes[id.index()].region == Region::R2));
    }
}
