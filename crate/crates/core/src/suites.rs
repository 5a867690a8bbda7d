//! Property suites run over the built-in corpus.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cheeger::{sweep_cut, verify_cheeger_sandwich, CERTIFICATE_SLACK};
use crate::corpus::NamedGraph;
use crate::modularity::{brute_force_modularity, lower_bound_with_run};
use crate::partitioner::{audit_run, run_separator, SeparatorConfig};
use crate::spectral::{
    check_lambda2_ordering, lambda2_dense, lambda2_iterative, LaplacianOperator, SolverConfig,
};

/// Vectors per graph in the sweep-certificate check of [`cheeger`].
pub const RANDOM_VECTORS: usize = 100;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Cheeger,
    LambdaOrder,
    Oracle,
    Audit,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cheeger" => Ok(Suite::Cheeger),
            "lambda-order" => Ok(Suite::LambdaOrder),
            "oracle" => Ok(Suite::Oracle),
            "audit" => Ok(Suite::Audit),
            other => Err(format!(
                "unknown suite '{other}' (expected cheeger, lambda-order, oracle or audit)"
            )),
        }
    }
}

pub fn run_suite(suite: Suite, corpus: &[NamedGraph], cfg: &SolverConfig) -> SuiteReport {
    match suite {
        Suite::Cheeger => cheeger(corpus, cfg, 16, RANDOM_VECTORS),
        Suite::LambdaOrder => lambda_order(corpus, cfg),
        Suite::Oracle => oracle(corpus, cfg, 8),
        Suite::Audit => audit(corpus, cfg, &[0.05, 0.1, 0.2, 0.5]),
    }
}

fn cuttable(g: &crate::Graph) -> bool {
    g.n() >= 2 && !g.has_isolated_vertices() && g.is_connected()
}

/// Cheeger sandwich on graphs with at most `max_n` vertices, plus the sweep
/// certificate and oracle dominance for `vectors` random test vectors per
/// graph on every connected corpus graph.
pub fn cheeger(
    corpus: &[NamedGraph],
    cfg: &SolverConfig,
    max_n: usize,
    vectors: usize,
) -> SuiteReport {
    let mut report = SuiteReport::new("cheeger");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for ng in corpus.iter().filter(|ng| cuttable(&ng.graph)) {
        let g = &ng.graph;
        let exact = if g.n() <= max_n {
            match verify_cheeger_sandwich(g, cfg) {
                Ok(r) => {
                    report.record(r.holds, || {
                        format!(
                            "{}: sandwich {} <= {} <= {} fails",
                            ng.name, r.lower, r.h_exact, r.upper
                        )
                    });
                    Some(r.h_exact)
                }
                Err(e) => {
                    report.record(false, || format!("{}: {e}", ng.name));
                    None
                }
            }
        } else {
            None
        };
        for _ in 0..vectors {
            let x: Vec<f64> = (0..g.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            match sweep_cut(g, &x) {
                Ok(cut) => {
                    let rho = cut.rayleigh_certificate.unwrap_or(f64::NAN);
                    report.record(cut.certificate_holds() == Some(true), || {
                        format!("{}: sweep ratio {} > sqrt(2*{rho})", ng.name, cut.ratio)
                    });
                    if let Some(h) = exact {
                        report.record(h <= cut.ratio + CERTIFICATE_SLACK, || {
                            format!("{}: exact {h} above sweep {}", ng.name, cut.ratio)
                        });
                    }
                }
                Err(e) => report.record(false, || format!("{}: {e}", ng.name)),
            }
        }
    }
    report
}

/// Ordering `λ₂(𝓛) ≤ λ₂(L)` on connected graphs within the dense cutoff and
/// iterative/dense agreement within `1e−6` for `10 ≤ n ≤ 64`.
pub fn lambda_order(corpus: &[NamedGraph], cfg: &SolverConfig) -> SuiteReport {
    let mut report = SuiteReport::new("lambda-order");
    for ng in corpus.iter().filter(|ng| cuttable(&ng.graph)) {
        let g = &ng.graph;
        if g.n() <= cfg.dense_cutoff {
            match check_lambda2_ordering(g, cfg) {
                Ok(r) => report.record(r.holds, || {
                    format!(
                        "{}: normalized {} > combinatorial {}",
                        ng.name, r.lambda2_normalized, r.lambda2_combinatorial
                    )
                }),
                Err(e) => report.record(false, || format!("{}: {e}", ng.name)),
            }
        }
        if (10..=64).contains(&g.n()) {
            for op in [
                LaplacianOperator::normalized(g).expect("no isolated vertices"),
                LaplacianOperator::combinatorial(g),
            ] {
                let dense = lambda2_dense(&op).map(|e| e.lambda2);
                let iter = lambda2_iterative(&op, cfg).map(|e| e.lambda2);
                match (dense, iter) {
                    (Ok(d), Ok(i)) => report.record((d - i).abs() <= 1e-6, || {
                        format!(
                            "{} ({:?}): dense {d} vs iterative {i}",
                            ng.name,
                            op.variant()
                        )
                    }),
                    (Err(e), _) | (_, Err(e)) => {
                        report.record(false, || format!("{}: {e}", ng.name))
                    }
                }
            }
        }
    }
    report
}

/// Lower-bound pipeline never beats the exact maximum on graphs with at
/// most `max_n` vertices, for several values of ε.
pub fn oracle(corpus: &[NamedGraph], cfg: &SolverConfig, max_n: usize) -> SuiteReport {
    let mut report = SuiteReport::new("oracle");
    for ng in corpus
        .iter()
        .filter(|ng| ng.graph.n() <= max_n && ng.graph.m() > 0)
    {
        let g = &ng.graph;
        let best = match brute_force_modularity(g) {
            Ok(b) => b,
            Err(e) => {
                report.record(false, || format!("{}: {e}", ng.name));
                continue;
            }
        };
        report.record(best.exact >= Ratio::from_integer(0), || {
            format!("{}: maximum {} is negative", ng.name, best.exact)
        });
        for eps in [0.1, 0.3, 0.5, 0.9] {
            let sep = SeparatorConfig {
                epsilon: eps,
                spectral: cfg.clone(),
                charge_audit: false,
            };
            match lower_bound_with_run(g, &sep) {
                Ok((lb, _)) => report.record(lb.exact <= best.exact, || {
                    format!(
                        "{} eps={eps}: bound {} exceeds maximum {}",
                        ng.name, lb.exact, best.exact
                    )
                }),
                Err(e) => report.record(false, || format!("{} eps={eps}: {e}", ng.name)),
            }
        }
    }
    report
}

/// Audits separator runs on every corpus graph with at least one edge.
pub fn audit(corpus: &[NamedGraph], cfg: &SolverConfig, epsilons: &[f64]) -> SuiteReport {
    let mut report = SuiteReport::new("audit");
    for ng in corpus.iter().filter(|ng| ng.graph.m() > 0) {
        for &eps in epsilons {
            let sep = SeparatorConfig {
                epsilon: eps,
                spectral: cfg.clone(),
                charge_audit: true,
            };
            match run_separator(&ng.graph, &sep) {
                Ok(run) => {
                    let audit = audit_run(&run, &ng.graph, &sep);
                    for check in audit.checks {
                        report.record(check.passed, || {
                            format!("{} eps={eps}: {} ({})", ng.name, check.name, check.detail)
                        });
                    }
                }
                Err(e) => report.record(false, || format!("{} eps={eps}: {e}", ng.name)),
            }
        }
    }
    report
}
