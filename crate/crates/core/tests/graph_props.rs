mod common;

use common::{arb_graph, arb_graph_and_set, crossing_weight};
use proptest::prelude::*;
use steiner_core::certify::{certify_strong_bruteforce, certify_terminal_strong_bruteforce};
use steiner_core::params::StrengthParams;
use steiner_core::{Dyadic, VertexSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cut_weight_is_symmetric((g, side) in arb_graph_and_set(10, 25, 9)) {
        prop_assume!(side.is_proper());
        let w = g.cut_weight(&side).unwrap();
        prop_assert_eq!(w, g.cut_weight(&side.complement()).unwrap());
        prop_assert_eq!(w, crossing_weight(&g, &side));
    }

    #[test]
    fn induced_subgraph_preserves_degrees((g, set) in arb_graph_and_set(10, 25, 9)) {
        prop_assume!(!set.is_empty());
        let sub = g.induced_subgraph(&set).unwrap();
        for v in set.iter() {
            let local = sub.local_id(v).unwrap();
            prop_assert_eq!(sub.graph.degree(local), g.degree(v));
        }
        let inner = g.edges().iter().filter(|e| set.contains(e.u) && set.contains(e.v)).count();
        let loops = sub.graph.edges().iter().filter(|e| e.is_loop()).count();
        prop_assert_eq!(sub.graph.edge_count() - loops, inner);
    }

    #[test]
    fn terminal_sparsity_is_symmetric((g, side) in arb_graph_and_set(10, 25, 9)) {
        prop_assume!(side.is_proper());
        prop_assert_eq!(g.terminal_sparsity(&side).unwrap(), g.terminal_sparsity(&side.complement()).unwrap());
    }

    #[test]
    fn strength_is_inherited_by_subsets(
        (g, a) in arb_graph_and_set(8, 16, 6),
        s in 0u128..4,
        delta in 1u64..12,
    ) {
        let p = StrengthParams::simple(s, delta, Dyadic::ZERO);
        let all = g.all_vertices();
        prop_assume!(!a.is_empty());
        if certify_strong_bruteforce(&g, &all, &p, 22).unwrap().holds {
            prop_assert!(certify_strong_bruteforce(&g, &a, &p, 22).unwrap().holds);
        }
        if certify_terminal_strong_bruteforce(&g, &all, &p, 22).unwrap().holds {
            prop_assert!(certify_terminal_strong_bruteforce(&g, &a, &p, 22).unwrap().holds);
        }
    }

    #[test]
    fn generated_graphs_are_valid(g in arb_graph(12, 30, 20)) {
        prop_assert!(g.terminal_count() >= 2);
        let total: u64 = g.edges().iter().map(|e| e.w).sum();
        prop_assert_eq!(g.total_weight(), total);
        prop_assert_eq!(crossing_weight(&g, &VertexSet::new(g.vertex_count())), 0);
    }
}
