//! Property tests for the edge-set algebra underpinning everything else.

use proptest::prelude::*;

use cgf_core::{decompose_even_subgraph, is_cycle, EdgeSet, UndirectedGraph, Weight};

#[derive(Debug, Clone)]
struct Fixture {
    graph: UndirectedGraph,
    subset_a: EdgeSet,
    subset_b: EdgeSet,
}

fn fixture() -> impl Strategy<Value = Fixture> {
    (2usize..=6).prop_flat_map(|n| {
        let edges = proptest::collection::vec(
            (1..=n, 1..=n, -4i64..=4),
            0..=12,
        );
        (Just(n), edges, proptest::collection::vec(any::<bool>(), 12), proptest::collection::vec(any::<bool>(), 12))
            .prop_map(|(n, raw, pick_a, pick_b)| {
                let clean: Vec<(usize, usize, Weight)> =
                    raw.into_iter().filter(|&(u, v, _)| u != v).collect();
                let graph = UndirectedGraph::new(n, &clean).unwrap();
                let subset_a: EdgeSet = (1..=graph.edge_count())
                    .filter(|&i| pick_a[i - 1])
                    .collect();
                let subset_b: EdgeSet = (1..=graph.edge_count())
                    .filter(|&i| pick_b[i - 1])
                    .collect();
                Fixture { graph, subset_a, subset_b }
            })
    })
}

proptest! {
    /// Flipping the same set twice restores the graph, ids and order intact.
    #[test]
    fn weight_flip_is_an_involution(fx in fixture()) {
        let once = fx.graph.weight_flip(&fx.subset_a).unwrap();
        let twice = once.weight_flip(&fx.subset_a).unwrap();
        prop_assert_eq!(twice, fx.graph);
    }

    /// The flipped weight of any set X is w(X \ F) - w(X ∩ F).
    #[test]
    fn flip_weight_identity(fx in fixture()) {
        let flipped = fx.graph.weight_flip(&fx.subset_a).unwrap();
        let x = &fx.subset_b;
        let minus: EdgeSet = x.iter().filter(|e| !fx.subset_a.contains(*e)).collect();
        let inter: EdgeSet = x.iter().filter(|e| fx.subset_a.contains(*e)).collect();
        prop_assert_eq!(
            x.weight(&flipped).unwrap(),
            minus.weight(&fx.graph).unwrap() - inter.weight(&fx.graph).unwrap()
        );
    }

    /// Odd-degree sets compose under symmetric difference: the odd set of
    /// A Δ B is the symmetric difference of the odd sets. In particular the
    /// difference of two T-joins is an ∅-join, and a T-join differs from an
    /// ∅-join by a T-join.
    #[test]
    fn tjoin_symmetric_difference_algebra(fx in fixture()) {
        let g = &fx.graph;
        let odd_a = fx.subset_a.odd_degree_vertices(g).unwrap();
        let odd_b = fx.subset_b.odd_degree_vertices(g).unwrap();
        let diff = fx.subset_a.sym_diff(&fx.subset_b);
        let odd_diff = diff.odd_degree_vertices(g).unwrap();
        let expect: std::collections::BTreeSet<_> =
            odd_a.symmetric_difference(&odd_b).copied().collect();
        prop_assert_eq!(odd_diff, expect);
    }

    /// Cycle decomposition: edge-disjoint cycles whose union is the input,
    /// every piece connected with all degrees 2; odd-degree inputs error.
    #[test]
    fn decomposition_postconditions(fx in fixture()) {
        let g = &fx.graph;
        let odd = fx.subset_a.odd_degree_vertices(g).unwrap();
        match decompose_even_subgraph(g, &fx.subset_a) {
            Err(_) => prop_assert!(!odd.is_empty()),
            Ok(cycles) => {
                prop_assert!(odd.is_empty());
                let mut union = EdgeSet::new();
                for c in &cycles {
                    prop_assert!(is_cycle(g, c).unwrap());
                    for e in c.iter() {
                        prop_assert!(union.insert(e), "cycles must be edge-disjoint");
                    }
                }
                prop_assert_eq!(union, fx.subset_a.clone());
            }
        }
    }

    /// Decomposition is deterministic for a fixed edge order.
    #[test]
    fn decomposition_is_deterministic(fx in fixture()) {
        if fx.subset_a.odd_degree_vertices(&fx.graph).unwrap().is_empty() {
            let once = decompose_even_subgraph(&fx.graph, &fx.subset_a).unwrap();
            let again = decompose_even_subgraph(&fx.graph, &fx.subset_a).unwrap();
            prop_assert_eq!(once, again);
        }
    }
}
