mod common;

use modsep::cheeger::{cheeger_constant_exact, crossing_edges, cut_ratio, sweep_cut};
use modsep::corpus;
use modsep::generators::{complete, cycle, path, two_triangles_bridge};
use modsep::spectral::{fiedler_vector, LaplacianOperator, SolverConfig};
use modsep::suites;
use modsep::{CutError, Graph};
use proptest::prelude::*;

// Plain subset enumeration; compares ratios by cross-multiplication.
fn brute_cheeger(g: &Graph) -> (usize, usize) {
    let n = g.n();
    let total = g.total_degree();
    let mut best = (usize::MAX, 1usize);
    for mask in 1u32..(1 << n) - 1 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let deg_s: usize = (0..n).filter(|&v| inside(v)).map(|v| g.degree(v)).sum();
        let cross = g.edges().filter(|&(u, v)| inside(u) != inside(v)).count();
        let den = deg_s.min(total - deg_s);
        if den == 0 {
            continue;
        }
        if (cross as u128) * (best.1 as u128) < (best.0 as u128) * (den as u128) {
            best = (cross, den);
        }
    }
    best
}

// Best prefix ratio of the order x_v / sqrt(deg v) descending, ties by id.
fn brute_sweep_ratio(g: &Graph, x: &[f64]) -> f64 {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    let key = |v: usize| x[v] / (g.degree(v) as f64).sqrt();
    order.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
    let mut best = f64::INFINITY;
    for k in 1..n {
        let prefix = &order[..k];
        if let Some(r) = cut_ratio(g, prefix) {
            best = best.min(r);
        }
    }
    best
}

#[test]
fn exact_constant_matches_subset_enumeration() {
    for ng in corpus::builtin() {
        let g = &ng.graph;
        if g.n() < 2 || g.n() > 12 || g.has_isolated_vertices() || !g.is_connected() {
            continue;
        }
        let (cross, den) = brute_cheeger(g);
        let cut = cheeger_constant_exact(g).unwrap();
        assert_eq!(
            cut.crossing() * den,
            cross * cut.min_side_degree,
            "{}",
            ng.name
        );
        assert!((cut.ratio - cross as f64 / den as f64).abs() < 1e-15);
    }
}

#[test]
fn named_exact_constants() {
    assert_eq!(cheeger_constant_exact(&path(3)).unwrap().ratio, 1.0);
    let k4 = cheeger_constant_exact(&complete(4)).unwrap();
    assert_eq!((k4.crossing(), k4.min_side_degree), (4, 6));
    let bell = cheeger_constant_exact(&two_triangles_bridge()).unwrap();
    assert_eq!((bell.crossing(), bell.min_side_degree), (1, 7));
    assert_eq!(bell.side_s.len(), 3);
}

#[test]
fn exact_search_refuses_large_graphs() {
    let g = path(21);
    assert!(matches!(
        cheeger_constant_exact(&g),
        Err(CutError::TooLarge { n: 21, .. })
    ));
}

#[test]
fn fiedler_sweep_on_dumbbell_cuts_the_bridge() {
    let g = two_triangles_bridge();
    let op = LaplacianOperator::normalized(&g).unwrap();
    let x = fiedler_vector(&op, &SolverConfig::default()).unwrap();
    let cut = sweep_cut(&g, &x).unwrap();
    assert_eq!(cut.crossing_edges, vec![(2, 3)]);
    assert_eq!(cut.min_side_degree, 7);
    assert_eq!(cut.certificate_holds(), Some(true));
}

#[test]
fn corpus_suite_passes() {
    let report = suites::cheeger(&corpus::builtin(), &SolverConfig::default(), 16, 20);
    assert!(report.passed(), "{:#?}", report.failures);
    assert!(report.checks > 1000);
}

#[test]
fn constant_vector_has_no_sweep() {
    assert!(matches!(
        sweep_cut(&cycle(5).unwrap(), &[0.3; 5]),
        Err(CutError::ConstantVector)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sweep_certificate_holds_for_any_vector(
        g in common::arb_connected(14),
        x in prop::collection::vec(-1.0f64..1.0, 14),
    ) {
        let x = &x[..g.n()];
        prop_assume!(x.iter().any(|&v| (v - x[0]).abs() > 1e-6));
        let cut = sweep_cut(&g, x).unwrap();
        prop_assert_eq!(cut.certificate_holds(), Some(true));
        prop_assert_eq!(cut.ratio, brute_sweep_ratio(&g, x));
        let exact = cheeger_constant_exact(&g).unwrap();
        prop_assert!(exact.ratio <= cut.ratio);
    }

    #[test]
    fn crossing_edges_match_brute_force(
        g in common::arb_graph(14),
        side in prop::collection::vec(any::<bool>(), 14),
    ) {
        let in_s = &side[..g.n()];
        let want: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| in_s[u] != in_s[v]).collect();
        prop_assert_eq!(crossing_edges(&g, in_s), want);
    }
}
