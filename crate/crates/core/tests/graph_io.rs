mod common;

use std::collections::BTreeMap;

use modsep::corpus;
use modsep::generators::{
    apollonian, generate, grid, random_cubic, star, two_triangles_bridge, Family, GeneratorSpec,
};
use modsep::io::{graph_to_string, load_graph_str, Format};
use modsep::{vertex_weights, Graph, GraphError};
use proptest::prelude::*;

#[test]
fn corpus_round_trips_in_both_formats() {
    for ng in corpus::builtin() {
        for fmt in [Format::EdgeList, Format::Metis] {
            let text = graph_to_string(&ng.graph, fmt);
            let back = load_graph_str(&text, fmt).unwrap();
            assert_eq!(back, ng.graph, "{} via {fmt:?}", ng.name);
        }
    }
}

#[test]
fn metis_reload_has_consistent_degrees() {
    let g = load_graph_str("4 3\n2\n1 3\n2 4\n3\n", Format::Metis).unwrap();
    assert_eq!((g.n(), g.m()), (4, 3));
    assert_eq!(g.degrees(), vec![1, 2, 2, 1]);
    let again = load_graph_str(&graph_to_string(&g, Format::Metis), Format::Metis).unwrap();
    assert_eq!(again, g);
}

#[test]
fn loop_rejected_at_line_one() {
    match load_graph_str("0 0\n", Format::EdgeList) {
        Err(GraphError::SelfLoop {
            line: Some(1),
            vertex: 0,
        }) => {}
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn induce_whole_vertex_set_keeps_every_edge() {
    for ng in corpus::builtin() {
        let all: Vec<usize> = (0..ng.graph.n()).collect();
        let sub = ng.graph.induce(&all).unwrap();
        assert_eq!(sub.internal_edges(), ng.graph.m(), "{}", ng.name);
        assert_eq!(sub.internal_degree(), ng.graph.total_degree());
        let mut edges: Vec<_> = sub.parent_edges().collect();
        edges.sort();
        assert_eq!(edges, ng.graph.edges().collect::<Vec<_>>());
    }
}

#[test]
fn grid_row_induces_a_path() {
    let g = grid(3);
    let row = g.induce(&[3, 4, 5]).unwrap();
    assert_eq!(row.internal_edges(), 2);
    assert_eq!(row.graph().degrees(), vec![1, 2, 1]);
}

#[test]
fn vertex_weight_examples() {
    let w = vertex_weights(&two_triangles_bridge()).unwrap();
    let want = [2.0, 2.0, 3.0, 3.0, 2.0, 2.0].map(|d| d / 14.0);
    assert_eq!(w, want);
    let w = vertex_weights(&star(3)).unwrap();
    assert_eq!(w, vec![0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]);
}

#[test]
fn generators_are_deterministic_per_seed() {
    for family in [Family::Apollonian, Family::RandomCubic] {
        let size = if family == Family::Apollonian { 5 } else { 60 };
        let a = generate(&GeneratorSpec::new(family, size).with_seed(9)).unwrap();
        let b = generate(&GeneratorSpec::new(family, size).with_seed(9)).unwrap();
        let c = generate(&GeneratorSpec::new(family, size).with_seed(10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}

#[test]
fn random_cubic_seed_seven_degree_histogram() {
    let g = random_cubic(100, 7).unwrap();
    assert_eq!(g.m(), 150);
    let mut hist = BTreeMap::new();
    for d in g.degrees() {
        *hist.entry(d).or_insert(0) += 1;
    }
    assert_eq!(hist, BTreeMap::from([(3, 100)]));
    g.validate().unwrap();
}

#[test]
fn apollonian_networks_are_maximal_planar() {
    for depth in 1..=6 {
        let g = apollonian(depth, 3).unwrap();
        assert_eq!(g.m(), 3 * g.n() - 6, "depth {depth}");
        assert!(g.is_connected());
        assert!(g.degrees().iter().all(|&d| d >= 3));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_graphs_round_trip(g in common::arb_graph(16)) {
        for fmt in [Format::EdgeList, Format::Metis] {
            let back = load_graph_str(&graph_to_string(&g, fmt), fmt).unwrap();
            prop_assert_eq!(&back, &g);
        }
    }

    #[test]
    fn nested_induce_matches_direct_induce(
        g in common::arb_graph(16),
        outer in prop::collection::vec(any::<bool>(), 16),
        inner in prop::collection::vec(any::<bool>(), 16),
    ) {
        let n = g.n();
        let a: Vec<usize> = (0..n).filter(|&v| outer[v]).collect();
        let b: Vec<usize> = a.iter().copied().filter(|&v| inner[v]).collect();
        let nested = g.induce(&a).unwrap().induce(&b).unwrap();
        let direct = g.induce(&b).unwrap();
        prop_assert_eq!(nested.vertices(), direct.vertices());
        prop_assert_eq!(nested.graph(), direct.graph());
    }

    #[test]
    fn components_partition_the_vertices(g in common::arb_graph(16)) {
        let comps = g.components();
        let mut seen: Vec<usize> = comps.iter().flatten().copied().collect();
        seen.sort();
        prop_assert_eq!(seen, (0..g.n()).collect::<Vec<_>>());
        let internal: usize = comps
            .iter()
            .map(|c| g.induce(c).unwrap().internal_edges())
            .sum();
        prop_assert_eq!(internal, g.m());
    }

    #[test]
    fn edges_are_ordered_and_counted(g in common::arb_graph(16)) {
        let edges: Vec<(usize, usize)> = g.edges().collect();
        prop_assert_eq!(edges.len(), g.m());
        prop_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(edges.iter().all(|&(u, v)| u < v && g.has_edge(v, u)));
        let rebuilt = Graph::from_edges(g.n(), &edges).unwrap();
        prop_assert_eq!(rebuilt, g);
    }
}
