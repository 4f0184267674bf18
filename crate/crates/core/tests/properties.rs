use std::collections::BTreeSet;

use proptest::prelude::*;
use wsn_core::network::{distance, nodes_from_positions};
use wsn_core::protocols::{form_clusters, MembershipRules};
use wsn_core::{default_params, FieldConfig, NodeId, Point, Region};

fn positions(n: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.0..100.0f64, 0.0..100.0f64), n)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
}

proptest! {
    #[test]
    fn tx_monotone_in_distance(a in 0.0..500.0f64, b in 0.0..500.0f64, bits in 1u32..100_000) {
        let p = default_params();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(p.tx_energy(bits, lo).unwrap() <= p.tx_energy(bits, hi).unwrap());
    }

    #[test]
    fn tx_linear_in_bits(d in 0.0..500.0f64, bits in 1u32..50_000) {
        let p = default_params();
        let one = p.tx_energy(bits, d).unwrap();
        let two = p.tx_energy(2 * bits, d).unwrap();
        prop_assert!((two - 2.0 * one).abs() <= 1e-12 * two);
    }

    #[test]
    fn id_assignment_is_a_sorted_bijection(pts in positions(40)) {
        let field = FieldConfig { nodes_per_region: 20, ..FieldConfig::default() };
        let nodes = nodes_from_positions(&field, 0.5, &pts);
        let ids: Vec<u32> = nodes.iter().map(|n| n.id.0).collect();
        prop_assert_eq!(ids, (1..=40).collect::<Vec<_>>());
        let placed: BTreeSet<(u64, u64)> = nodes.iter().map(|n| (n.pos.x.to_bits(), n.pos.y.to_bits())).collect();
        let given: BTreeSet<(u64, u64)> = pts.iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect();
        prop_assert_eq!(placed, given);
        for w in nodes.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let key = |n: &wsn_core::NodeState| (n.region, -n.pos.y, n.pos.x);
            prop_assert!(key(a) <= key(b));
        }
        for n in &nodes {
            prop_assert_eq!(n.region == Region::R1, n.pos.x < 50.0);
        }
    }

    #[test]
    fn clusters_partition_alive_nodes(
        pts in positions(30),
        heads in prop::collection::btree_set(1u32..=30, 0..6),
        dead in prop::collection::btree_set(1u32..=30, 0..10),
        direct_override: bool,
        same_region_only: bool,
    ) {
        let field = FieldConfig { nodes_per_region: 15, ..FieldConfig::default() };
        let mut nodes = nodes_from_positions(&field, 0.5, &pts);
        for &d in &dead {
            nodes[d as usize - 1].alive = false;
        }
        let chs: Vec<NodeId> = heads.iter().map(|&h| NodeId(h)).collect();
        let rules = MembershipRules { direct_override, same_region_only };
        let a = form_clusters(&chs, &nodes, field.bs, rules);

        let mut seen = BTreeSet::new();
        for id in a.ch_ids.iter().chain(a.membership.keys()).chain(&a.direct_senders) {
            prop_assert!(seen.insert(*id), "node {} in two roles", id);
        }
        let alive: BTreeSet<NodeId> = nodes.iter().filter(|n| n.alive).map(|n| n.id).collect();
        prop_assert_eq!(seen, alive);
        for (&m, &h) in &a.membership {
            prop_assert!(a.ch_ids.contains(&h));
            let (mn, hn) = (&nodes[m.index()], &nodes[h.index()]);
            if same_region_only {
                prop_assert_eq!(mn.region, hn.region);
            }
            if direct_override {
                prop_assert!(distance(mn.pos, field.bs) >= distance(mn.pos, hn.pos));
            }
            for &other in &a.ch_ids {
                let on = &nodes[other.index()];
                if same_region_only && on.region != mn.region {
                    continue;
                }
                prop_assert!(distance(mn.pos, hn.pos) <= distance(mn.pos, on.pos));
            }
        }
    }
}
