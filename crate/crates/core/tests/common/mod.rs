#![allow(dead_code)]

use proptest::prelude::*;
use steiner_core::{Edge, Graph, VertexSet};

/// Random multigraph on `2..=max_n` vertices with at least two terminals.
pub fn arb_graph(max_n: usize, max_m: usize, max_w: u64) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        let edges = prop::collection::vec((0..n, 1..n, 1..=max_w), 0..=max_m).prop_map(move |es| {
            es.into_iter().map(|(u, d, w)| Edge { u, v: (u + d) % n, w }).collect::<Vec<_>>()
        });
        let terms = prop::collection::btree_set(0..n, 2..=n);
        (edges, terms).prop_map(move |(es, ts)| Graph::new(n, es, ts).unwrap())
    })
}

/// A graph together with a vertex subset given as a bitmask.
pub fn arb_graph_and_set(max_n: usize, max_m: usize, max_w: u64) -> impl Strategy<Value = (Graph, VertexSet)> {
    arb_graph(max_n, max_m, max_w).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), prop::collection::vec(any::<bool>(), n)).prop_map(move |(g, bits)| {
            let s = VertexSet::from_iter_in(n, (0..n).filter(|&v| bits[v]));
            (g, s)
        })
    })
}

pub fn crossing_weight(g: &Graph, side: &VertexSet) -> u64 {
    g.edges().iter().filter(|e| side.contains(e.u) != side.contains(e.v)).map(|e| e.w).sum()
}
