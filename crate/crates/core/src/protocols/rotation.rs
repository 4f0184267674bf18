use alloc::vec::Vec;

use crate::error::SimError;
use crate::network::{NodeId, NodeState, Region};

/// Successor of a cluster head whose position had height `prev_y`.
///
/// Picks the candidate closest below `prev_y`; when nothing lies below, wraps
/// to the top-most candidate. Equal heights go to the lowest ID. Candidates
/// listed in `taken` are skipped. Returns `None` when no candidate is left.
pub fn lpch_rotate<'a, I>(prev_y: f64, candidates: I, taken: &[NodeId]) -> Option<NodeId>
where
    I: IntoIterator<Item = &'a NodeState>,
{
    let mut below: Option<&NodeState> = None;
    let mut top: Option<&NodeState> = None;
    let better = |cur: Option<&NodeState>, n: &NodeState| match cur {
        None => true,
        Some(c) => n.pos.y > c.pos.y || (n.pos.y == c.pos.y && n.id < c.id),
    };
    for node in candidates {
        if taken.contains(&node.id) {
            continue;
        }
        if node.pos.y < prev_y && better(below, node) {
            below = Some(node);
        }
        if better(top, node) {
            top = Some(node);
        }
    }
    below.or(top).map(|n| n.id)
}

/// Moves every previous cluster head of `region` one step down the field.
///
/// Previous heads are processed from the highest down (ties by ID) and share
/// one taken-set, so each slot lands on a distinct node. A slot is dropped
/// once the region has no untaken alive node left.
pub fn rotate_region(nodes: &[NodeState], region: Region, prev: &[NodeId]) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = prev.to_vec();
    order.sort_by(|a, b| {
        let (ya, yb) = (nodes[a.index()].pos.y, nodes[b.index()].pos.y);
        yb.total_cmp(&ya).then(a.cmp(b))
    });
    let candidates = || nodes.iter().filter(|n| n.alive && n.region == region);
    let mut taken = Vec::with_capacity(order.len());
    for id in order {
        // dead heads still steer the walk by their fixed position
        let prev_y = nodes[id.index()].pos.y;
        if let Some(next) = lpch_rotate(prev_y, candidates(), &taken) {
            taken.push(next);
        }
    }
    taken
}

/// Round-0 UDLPCH heads: every alive node whose ID is a multiple of
/// `floor(n_total / k_opt)`.
pub fn udlpch_first_round(nodes: &[NodeState], k_opt: u32) -> Result<[Vec<NodeId>; 2], SimError> {
    let q = q_step(nodes.len() as u32, k_opt)?;
    let mut out = [Vec::new(), Vec::new()];
    for node in nodes.iter().filter(|n| n.alive && n.id.0 % q == 0) {
        out[node.region.index()].push(node.id);
    }
    Ok(out)
}

/// ID modulus used to seed UDLPCH.
pub fn q_step(n_total: u32, k_opt: u32) -> Result<u32, SimError> {
    if k_opt == 0 || k_opt >= n_total {
        return Err(SimError::InvalidClusterTarget { k_opt, n_total });
    }
    Ok(n_total / k_opt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{assign_ids, deploy, nodes_from_positions, FieldConfig, Point};
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn node(id: u32, y: f64) -> NodeState {
        NodeState {
            id: NodeId(id),
            region: Region::R1,
            pos: Point::new(10.0, y),
            energy: 0.5,
            alive: true,
            role: None,
        }
    }

    #[test]
    fn closest_below() {
        let c = [node(1, 72.0), node(2, 65.0), node(3, 60.0)];
        assert_eq!(lpch_rotate(70.0, &c, &[]), Some(NodeId(2)));
    }

    #[test]
    fn wraps_to_top() {
        let c = [node(1, 90.0), node(2, 40.0)];
        assert_eq!(lpch_rotate(5.0, &c, &[]), Some(NodeId(1)));
    }

    #[test]
    fn equal_height_goes_to_lowest_id() {
        let c = [node(12, 65.0), node(7, 65.0), node(3, 20.0)];
        assert_eq!(lpch_rotate(70.0, &c, &[]), Some(NodeId(7)));
        let c = [node(12, 95.0), node(7, 95.0)];
        assert_eq!(lpch_rotate(1.0, &c, &[]), Some(NodeId(7)));
    }

    #[test]
    fn skips_taken_and_reports_exhaustion() {
        let c = [node(1, 50.0), node(2, 40.0)];
        assert_eq!(lpch_rotate(60.0, &c, &[NodeId(1)]), Some(NodeId(2)));
        assert_eq!(lpch_rotate(60.0, &c, &[NodeId(1), NodeId(2)]), None);
        assert_eq!(lpch_rotate(60.0, &[], &[]), None);
    }

    #[test]
    fn conflicting_walks_share_taken_set() {
        // heads at y=80 (id 1) and y=70 (id 2, died last round); the node at
        // y=60 is the next stop for both walks
        let mut nodes = vec![node(1, 80.0), node(2, 70.0), node(3, 60.0), node(4, 10.0)];
        nodes[1].alive = false;
        let next = rotate_region(&nodes, Region::R1, &[NodeId(2), NodeId(1)]);
        // id 1 (higher) goes first and takes 3; id 2 then wants 3 again and
        // falls through to 4
        assert_eq!(next, vec![NodeId(3), NodeId(4)]);
    }

    #[test]
    fn clamps_to_alive_count() {
        let mut nodes = vec![node(1, 80.0), node(2, 70.0), node(3, 60.0), node(4, 10.0)];
        nodes[0].alive = false;
        let next = rotate_region(&nodes, Region::R1, &[NodeId(1), NodeId(2), NodeId(3), NodeId(4)]);
        assert_eq!(next.len(), 3);
        let mut sorted = next.clone();
        sorted.sort();
        assert_eq!(sorted, vec![NodeId(2), NodeId(3), NodeId(4)]);
    }

    #[test]
    fn udlpch_worked_example() {
        let field = FieldConfig::default();
        for seed in [0, 1, 99] {
            let nodes = assign_ids(deploy(&field, 0.5, &mut ChaCha8Rng::seed_from_u64(seed)));
            let [r1, r2] = udlpch_first_round(&nodes, 6).unwrap();
            assert_eq!(r1, vec![NodeId(16), NodeId(32), NodeId(48)]);
            assert_eq!(r2, vec![NodeId(64), NodeId(80), NodeId(96)]);
            let [r1, r2] = udlpch_first_round(&nodes, 10).unwrap();
            let expect: Vec<_> = (1..=10).map(|i| NodeId(i * 10)).collect();
            assert_eq!(r1, expect[..5]);
            assert_eq!(r2, expect[5..]);
        }
    }

    #[test]
    fn q_step_rules() {
        assert_eq!(q_step(100, 6), Ok(16));
        assert_eq!(q_step(100, 10), Ok(10));
        assert!(q_step(100, 0).is_err());
        assert!(q_step(100, 100).is_err());
        let field = FieldConfig {
            nodes_per_region: 1,
            ..FieldConfig::default()
        };
        let nodes = nodes_from_positions(&field, 0.5, &[Point::new(1.0, 1.0), Point::new(99.0, 1.0)]);
        assert!(udlpch_first_round(&nodes, 2).is_err());
    }
}
