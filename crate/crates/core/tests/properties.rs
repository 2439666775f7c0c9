//! Randomized property tests over arbitrary small graphs.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use tubix_core::graph::{edge_pairs, Graph, NodeSet};
use tubix_core::realize::{realize, WeightScheme};
use tubix_core::tubing::{
    are_compatible, classify_pair, enumerate_maximal_tubings, enumerate_tubes, f_vector, PairClass,
};
use tubix_core::verify::euler_check;

/// A graph on 2..=6 nodes with an arbitrary edge subset.
fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..=6)
        .prop_flat_map(|n| {
            let bits = edge_pairs(n).len() as u32;
            (Just(n), 0u64..(1u64 << bits))
        })
        .prop_map(|(n, mask)| {
            let edges: Vec<(usize, usize)> = edge_pairs(n)
                .into_iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p)
                .collect();
            Graph::new(n, &edges, None).unwrap()
        })
}

proptest! {
    #[test]
    fn components_partition_the_nodes(g in arb_graph()) {
        let components = g.components();
        let mut union = NodeSet::EMPTY;
        for (i, &c) in components.iter().enumerate() {
            prop_assert!(union.is_disjoint(c));
            union = union.union(c);
            prop_assert!(g.is_connected_subset(c));
            // Sorted by least element.
            if i > 0 {
                prop_assert!(components[i - 1].min_element() < c.min_element());
            }
        }
        prop_assert_eq!(union, g.all_nodes());
    }

    #[test]
    fn cross_component_subsets_are_disconnected(g in arb_graph()) {
        let components = g.components();
        if components.len() >= 2 {
            let a = components[0].min_element().unwrap();
            let b = components[1].min_element().unwrap();
            prop_assert!(!g.is_connected_subset(NodeSet::from_indices([a, b])));
        }
    }

    #[test]
    fn pair_classification_is_total_and_symmetric(g in arb_graph()) {
        let tubes = enumerate_tubes(&g);
        for (i, a) in tubes.iter().enumerate() {
            for b in tubes.iter().skip(i + 1) {
                let ab = classify_pair(&g, a, b).unwrap();
                let ba = classify_pair(&g, b, a).unwrap();
                prop_assert_eq!(ab, ba);
                let compatible = are_compatible(&g, a, b).unwrap();
                prop_assert_eq!(
                    compatible,
                    matches!(ab, PairClass::Nested | PairClass::Far)
                );
            }
        }
    }

    #[test]
    fn maximal_tubings_have_n_minus_1_tubes(g in arb_graph()) {
        let n = g.node_count();
        for u in enumerate_maximal_tubings(&g).unwrap() {
            prop_assert_eq!(u.len(), n - 1);
        }
    }

    #[test]
    fn graph_json_round_trip_is_byte_identical(g in arb_graph()) {
        let text = g.to_canonical_json();
        let parsed = Graph::parse_json(&text).unwrap();
        prop_assert_eq!(parsed.to_canonical_json(), text);
    }

    #[test]
    fn realized_coordinates_satisfy_all_tube_sums(g in arb_graph()) {
        let n = g.node_count();
        let s = WeightScheme::power3(n).unwrap();
        for v in realize(&g, &s).unwrap() {
            let total: BigInt = v.point.coords().iter().sum();
            prop_assert_eq!(&total, s.total());
            for t in v.tubing.tubes() {
                let sum: BigInt = t.nodes().iter().map(|i| v.point.coords()[i].clone()).sum();
                prop_assert_eq!(&sum, s.weight(t.len()));
            }
        }
    }

    #[test]
    fn realization_is_injective_under_power3(g in arb_graph()) {
        let n = g.node_count();
        let s = WeightScheme::power3(n).unwrap();
        let vertices = realize(&g, &s).unwrap();
        let points: BTreeSet<Vec<BigInt>> = vertices
            .iter()
            .map(|v| v.point.coords().to_vec())
            .collect();
        prop_assert_eq!(points.len(), vertices.len());
    }

    #[test]
    fn euler_relation_holds(g in arb_graph()) {
        prop_assert!(euler_check(&f_vector(&g)));
    }

    #[test]
    fn relabeling_is_equivariant(
        (g, perm) in arb_graph().prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        let n = g.node_count();
        let s = WeightScheme::power3(n).unwrap();
        let base: BTreeSet<Vec<BigInt>> = realize(&g, &s)
            .unwrap()
            .into_iter()
            .map(|v| {
                let mut out = vec![BigInt::zero(); n];
                for (i, c) in v.point.coords().iter().enumerate() {
                    out[perm[i]] = c.clone();
                }
                out
            })
            .collect();
        let moved: BTreeSet<Vec<BigInt>> = realize(&g.permuted(&perm), &s)
            .unwrap()
            .into_iter()
            .map(|v| v.point.coords().to_vec())
            .collect();
        prop_assert_eq!(base, moved);
    }
}
