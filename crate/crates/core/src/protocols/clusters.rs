use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::network::{distance, NodeId, NodeState, Point};

/// How non-head nodes pick where to send.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MembershipRules {
    /// Send straight to the BS when it is strictly closer than the nearest head.
    pub direct_override: bool,
    /// Only join heads from the node's own region.
    pub same_region_only: bool,
}

/// One round's cluster structure.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClusterAssignment {
    /// Ascending.
    pub ch_ids: Vec<NodeId>,
    /// member → head
    pub membership: BTreeMap<NodeId, NodeId>,
    /// Ascending.
    pub direct_senders: Vec<NodeId>,
}

impl ClusterAssignment {
    pub fn member_count(&self, ch: NodeId) -> usize {
        self.membership.values().filter(|&&h| h == ch).count()
    }

    /// Member counts indexed like `ch_ids`.
    pub fn member_counts(&self) -> Vec<u32> {
        let mut counts = alloc::vec![0u32; self.ch_ids.len()];
        for head in self.membership.values() {
            if let Ok(i) = self.ch_ids.binary_search(head) {
                counts[i] += 1;
            }
        }
        counts
    }
}

/// Assigns every alive non-head node to its nearest head (ties to the lowest
/// head ID) or to the BS.
///
/// A node with no reachable head sends directly. With
/// [`MembershipRules::direct_override`] a node also sends directly whenever
/// `d(node, BS) < d(node, head)`. Heads never take the override.
pub fn form_clusters(chs: &[NodeId], nodes: &[NodeState], bs: Point, rules: MembershipRules) -> ClusterAssignment {
    let mut ch_ids: Vec<NodeId> = chs.iter().copied().filter(|id| nodes[id.index()].alive).collect();
    ch_ids.sort_unstable();
    ch_ids.dedup();

    let mut membership = BTreeMap::new();
    let mut direct_senders = Vec::new();
    for node in nodes.iter().filter(|n| n.alive) {
        if ch_ids.binary_search(&node.id).is_ok() {
            continue;
        }
        let mut nearest: Option<(NodeId, f64)> = None;
        for &ch in &ch_ids {
            let head = &nodes[ch.index()];
            if rules.same_region_only && head.region != node.region {
                continue;
            }
            let d = distance(node.pos, head.pos);
            if nearest.is_none_or(|(_, best)| d < best) {
                nearest = Some((ch, d));
            }
        }
        match nearest {
            Some((ch, d_ch)) if !(rules.direct_override && distance(node.pos, bs) < d_ch) => {
                membership.insert(node.id, ch);
            }
            _ => direct_senders.push(node.id),
        }
    }
    ClusterAssignment {
        ch_ids,
        membership,
        direct_senders,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{FieldConfig, Region};
    use alloc::vec;

    fn at(id: u32, x: f64, y: f64) -> NodeState {
        NodeState {
            id: NodeId(id),
            region: FieldConfig::default().region_of(Point::new(x, y)),
            pos: Point::new(x, y),
            energy: 0.5,
            alive: true,
            role: None,
        }
    }

    const BS: Point = Point::new(50.0, 50.0);
    const OVERRIDE: MembershipRules = MembershipRules {
        direct_override: true,
        same_region_only: false,
    };

    #[test]
    fn bs_closer_than_head() {
        let nodes = vec![at(1, 50.0, 80.0), at(2, 50.0, 60.0)];
        let a = form_clusters(&[NodeId(1)], &nodes, BS, OVERRIDE);
        assert_eq!(a.direct_senders, vec![NodeId(2)]);
        assert!(a.membership.is_empty());

        let a = form_clusters(&[NodeId(1)], &nodes, BS, MembershipRules::default());
        assert_eq!(a.membership.get(&NodeId(2)), Some(&NodeId(1)));
    }

    #[test]
    fn no_heads_means_all_direct() {
        let nodes = vec![at(1, 10.0, 10.0), at(2, 90.0, 90.0), at(3, 40.0, 40.0)];
        let a = form_clusters(&[], &nodes, BS, MembershipRules::default());
        assert_eq!(a.direct_senders, vec![NodeId(1), NodeId(2), NodeId(3)]);
        assert!(a.ch_ids.is_empty());
    }

    #[test]
    fn equidistant_heads_tie_to_lowest_id() {
        let nodes = vec![at(1, 10.0, 90.0), at(2, 10.0, 70.0), at(3, 10.0, 80.0)];
        let a = form_clusters(&[NodeId(2), NodeId(1)], &nodes, BS, MembershipRules::default());
        assert_eq!(a.membership.get(&NodeId(3)), Some(&NodeId(1)));
    }

    #[test]
    fn dead_nodes_excluded() {
        let mut nodes = vec![at(1, 10.0, 90.0), at(2, 10.0, 70.0), at(3, 10.0, 80.0)];
        nodes[0].alive = false;
        nodes[2].alive = false;
        let a = form_clusters(&[NodeId(1)], &nodes, BS, MembershipRules::default());
        assert!(a.ch_ids.is_empty());
        assert_eq!(a.direct_senders, vec![NodeId(2)]);
    }

    #[test]
    fn region_restricted_membership() {
        let nodes = vec![at(1, 45.0, 90.0), at(2, 55.0, 90.0), at(3, 5.0, 90.0)];
        assert_eq!(nodes[1].region, Region::R2);
        let open = form_clusters(&[NodeId(3)], &nodes, BS, MembershipRules::default());
        assert_eq!(open.membership.get(&NodeId(2)), Some(&NodeId(3)));
        let rules = MembershipRules {
            same_region_only: true,
            ..MembershipRules::default()
        };
        let closed = form_clusters(&[NodeId(3)], &nodes, BS, rules);
        assert_eq!(closed.direct_senders, vec![NodeId(2)]);
        assert_eq!(closed.membership.get(&NodeId(1)), Some(&NodeId(3)));
    }
}
