#![allow(dead_code)]

use modsep::Graph;
use proptest::prelude::*;

/// Simple graphs on `2..=max_n` vertices, edge density drawn per case.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), prop::collection::vec(any::<bool>(), pairs))
        })
        .prop_map(|(n, mask)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
}

/// Connected graphs: a random spanning path plus random extra edges.
pub fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec(prop::bool::weighted(0.3), pairs),
            )
        })
        .prop_map(|(n, order, mask)| {
            let mut edges: Vec<(usize, usize)> = order
                .windows(2)
                .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
                .collect();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask[k] && !edges.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
}
