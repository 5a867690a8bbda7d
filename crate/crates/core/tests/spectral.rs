mod common;

use modsep::corpus;
use modsep::generators::{cycle, grid, path, random_cubic, torus_grid};
use modsep::spectral::{
    fiedler_vector, lambda2, lambda2_dense, lambda2_iterative, IterativeMethod, LaplacianOperator,
    Solver, SolverConfig,
};
use modsep::Graph;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

// Built from the edge list alone so it shares nothing with the operator.
fn oracle_matrix(g: &Graph, normalized: bool) -> DMatrix<f64> {
    let n = g.n();
    let deg: Vec<f64> = (0..n).map(|v| g.degree(v) as f64).collect();
    let mut a = DMatrix::zeros(n, n);
    for v in 0..n {
        a[(v, v)] = deg[v];
    }
    for (u, v) in g.edges() {
        a[(u, v)] -= 1.0;
        a[(v, u)] -= 1.0;
    }
    if normalized {
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] /= (deg[i] * deg[j]).sqrt();
            }
        }
    }
    a
}

fn oracle_spectrum(g: &Graph, normalized: bool) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(oracle_matrix(g, normalized))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

#[test]
fn dense_solver_matches_nalgebra_on_corpus() {
    for ng in corpus::builtin() {
        let g = &ng.graph;
        if g.n() < 2 || g.n() > 64 || g.has_isolated_vertices() {
            continue;
        }
        for normalized in [false, true] {
            let op = if normalized {
                LaplacianOperator::normalized(g).unwrap()
            } else {
                LaplacianOperator::combinatorial(g)
            };
            let ours = lambda2_dense(&op).unwrap().lambda2;
            let want = oracle_spectrum(g, normalized)[1];
            assert!(
                (ours - want).abs() < 1e-9,
                "{} normalized={normalized}: {ours} vs {want}",
                ng.name
            );
        }
    }
}

#[test]
fn dense_matrix_matches_nalgebra_oracle_matrix() {
    let g = grid(4);
    for normalized in [false, true] {
        let op = if normalized {
            LaplacianOperator::normalized(&g).unwrap()
        } else {
            LaplacianOperator::combinatorial(&g)
        };
        let ours = DMatrix::from_row_slice(g.n(), g.n(), &op.to_dense());
        assert!((ours - oracle_matrix(&g, normalized)).abs().max() < 1e-15);
    }
}

#[test]
fn iterative_matches_nalgebra_on_larger_graphs() {
    let cfg = SolverConfig::default();
    let graphs = [
        grid(10),
        torus_grid(9).unwrap(),
        random_cubic(120, 5).unwrap(),
        cycle(90).unwrap(),
        path(80),
    ];
    for g in &graphs {
        for normalized in [false, true] {
            let op = if normalized {
                LaplacianOperator::normalized(g).unwrap()
            } else {
                LaplacianOperator::combinatorial(g)
            };
            let est = lambda2_iterative(&op, &cfg).unwrap();
            let want = oracle_spectrum(g, normalized)[1];
            assert!(est.converged, "n={} normalized={normalized}", g.n());
            assert!(
                (est.lambda2 - want).abs() < 1e-6,
                "n={} normalized={normalized}: {} vs {want}",
                g.n(),
                est.lambda2
            );
        }
    }
}

#[test]
fn power_iteration_reaches_lambda2_on_small_grid() {
    let g = grid(6);
    let cfg = SolverConfig {
        method: IterativeMethod::Power,
        max_iterations: Some(200_000),
        tolerance: 1e-7,
        ..SolverConfig::default()
    };
    let op = LaplacianOperator::normalized(&g).unwrap();
    let est = lambda2_iterative(&op, &cfg).unwrap();
    let want = oracle_spectrum(&g, true)[1];
    assert!(
        (est.lambda2 - want).abs() < 1e-6,
        "{} vs {want}",
        est.lambda2
    );
}

#[test]
fn tiny_budget_reports_nonconvergence() {
    let g = grid(12);
    let cfg = SolverConfig {
        max_iterations: Some(3),
        ..SolverConfig::default()
    };
    let est = lambda2_iterative(&LaplacianOperator::normalized(&g).unwrap(), &cfg).unwrap();
    assert!(!est.converged);
    assert!(est.residual > cfg.tolerance);
}

#[test]
fn dispatch_picks_solver_by_size_and_connectivity() {
    let cfg = SolverConfig::default();
    let small = grid(4);
    let big = grid(10);
    let split = modsep::generators::two_triangles();
    let est = |g: &Graph| lambda2(&LaplacianOperator::normalized(g).unwrap(), &cfg).unwrap();
    assert_eq!(est(&small).solver, Solver::Dense);
    assert_eq!(est(&big).solver, Solver::Iterative);
    let scan = est(&split);
    assert_eq!(scan.solver, Solver::ComponentScan);
    assert_eq!(scan.lambda2, 0.0);
}

#[test]
fn fiedler_vectors_have_expected_rayleigh_quotient() {
    let cfg = SolverConfig::default();
    for g in [path(3), cycle(4).unwrap()] {
        let op = LaplacianOperator::normalized(&g).unwrap();
        let x = fiedler_vector(&op, &cfg).unwrap();
        let k = op.kernel_direction();
        let along: f64 = x.iter().zip(&k).map(|(a, b)| a * b).sum();
        assert!(along.abs() < 1e-10);
        assert!((op.rayleigh(&x).unwrap() - 1.0).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operators_are_symmetric(
        g in common::arb_graph(14),
        seed in prop::collection::vec(-1.0f64..1.0, 28),
    ) {
        let n = g.n();
        let x = &seed[..n];
        let y = &seed[14..14 + n];
        let mut ops = vec![LaplacianOperator::combinatorial(&g)];
        if let Ok(op) = LaplacianOperator::normalized(&g) {
            ops.push(op);
        }
        for op in ops {
            let lx = op.apply(x).unwrap();
            let ly = op.apply(y).unwrap();
            let a: f64 = lx.iter().zip(y).map(|(p, q)| p * q).sum();
            let b: f64 = ly.iter().zip(x).map(|(p, q)| p * q).sum();
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn rayleigh_quotients_within_spectral_range(
        g in common::arb_graph(14),
        x in prop::collection::vec(-1.0f64..1.0, 14),
    ) {
        let x = &x[..g.n()];
        prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
        let comb = LaplacianOperator::combinatorial(&g).rayleigh(x).unwrap();
        prop_assert!(comb >= -1e-10);
        prop_assert!(comb <= 2.0 * g.max_degree() as f64 + 1e-10);
        if let Ok(op) = LaplacianOperator::normalized(&g) {
            let r = op.rayleigh(x).unwrap();
            prop_assert!((-1e-10..=2.0 + 1e-10).contains(&r));
        }
    }

    #[test]
    fn kernel_direction_is_annihilated(g in common::arb_graph(14)) {
        let mut ops = vec![LaplacianOperator::combinatorial(&g)];
        if let Ok(op) = LaplacianOperator::normalized(&g) {
            ops.push(op);
        }
        for op in ops {
            let k = op.kernel_direction();
            let norm: f64 = k.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-12);
            prop_assert!(op.apply(&k).unwrap().iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn lambda2_agrees_with_nalgebra(g in common::arb_connected(12)) {
        let cfg = SolverConfig::default();
        for normalized in [false, true] {
            let op = if normalized {
                LaplacianOperator::normalized(&g).unwrap()
            } else {
                LaplacianOperator::combinatorial(&g)
            };
            let ours = lambda2(&op, &cfg).unwrap().lambda2;
            let want = oracle_spectrum(&g, normalized)[1];
            prop_assert!((ours - want).abs() < 1e-9, "{} vs {}", ours, want);
        }
    }
}
