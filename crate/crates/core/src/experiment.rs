//! Family-scaling experiments with CSV output.
//!
//! Schema version 1. Columns, in order: `schema, family, size, seed, n, m,
//! max_degree, epsilon, deleted, deleted_fraction, edge_contribution,
//! degree_tax, max_weight, score, lambda2, lambda2_n_over_delta, steps,
//! max_charge_count, charge_bound, audit_passed`, followed by `wall_ms` only
//! when timing is requested. Rows are ordered with sizes outermost,
//! then seeds, then epsilons.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::error::{GraphError, SpectralError};
use crate::generators::{generate, Family, GeneratorSpec};
use crate::graph::Graph;
use crate::modularity::{assemble_bound, ModularityError};
use crate::partitioner::{audit_run, run_separator, SeparatorConfig, SeparatorError};
use crate::spectral::{lambda2, LaplacianOperator, SolverConfig};

pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("experiment needs at least one {0}")]
    EmptySweep(&'static str),

    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error(transparent)]
    Separator(#[from] SeparatorError),

    #[error(transparent)]
    Modularity(#[from] ModularityError),

    #[error(transparent)]
    Spectral(#[from] SpectralError),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub epsilons: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.sizes.is_empty() {
            return Err(ExperimentError::EmptySweep("size"));
        }
        if self.epsilons.is_empty() {
            return Err(ExperimentError::EmptySweep("epsilon"));
        }
        if self.seeds.is_empty() {
            return Err(ExperimentError::EmptySweep("seed"));
        }
        for &eps in &self.epsilons {
            SeparatorConfig::new(eps)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRow {
    pub schema: u32,
    pub family: String,
    pub size: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub epsilon: f64,
    pub deleted: usize,
    pub deleted_fraction: f64,
    pub edge_contribution: f64,
    pub degree_tax: f64,
    pub max_weight: f64,
    pub score: f64,
    /// `λ₂(L)` of the graph with isolated vertices removed.
    pub lambda2: f64,
    pub lambda2_n_over_delta: f64,
    pub steps: usize,
    pub max_charge_count: u32,
    pub charge_bound: usize,
    pub audit_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

/// Combinatorial `λ₂` of the non-isolated part of `g`.
pub fn root_lambda2(g: &Graph, cfg: &SolverConfig) -> Result<f64, SpectralError> {
    let active: Vec<usize> = (0..g.n()).filter(|&v| !g.is_isolated(v)).collect();
    let sub = g.induce(&active).expect("ids come from g");
    if sub.graph().n() < 2 {
        return Ok(0.0);
    }
    Ok(lambda2(&LaplacianOperator::combinatorial(sub.graph()), cfg)?.lambda2)
}

/// One row: separator run, bound decomposition, audit and root `λ₂`.
pub fn measure(
    g: &Graph,
    family: Family,
    size: usize,
    seed: u64,
    epsilon: f64,
    solver: &SolverConfig,
) -> Result<ExperimentRow, ExperimentError> {
    let started = Instant::now();
    let mut spectral = solver.clone();
    spectral.seed = seed;
    let cfg = SeparatorConfig {
        epsilon,
        spectral: spectral.clone(),
        charge_audit: true,
    };
    let run = run_separator(g, &cfg)?;
    let bound = assemble_bound(&run, g)?;
    let audit = audit_run(&run, g, &cfg);
    let l2 = root_lambda2(g, &spectral)?;
    let delta = g.max_degree();
    Ok(ExperimentRow {
        schema: CSV_SCHEMA_VERSION,
        family: family.name().to_string(),
        size,
        seed,
        n: g.n(),
        m: g.m(),
        max_degree: delta,
        epsilon,
        deleted: run.deleted_edges.len(),
        deleted_fraction: run.deleted_fraction(),
        edge_contribution: bound.edge_contribution,
        degree_tax: bound.degree_tax,
        max_weight: bound.max_weight,
        score: bound.score,
        lambda2: l2,
        lambda2_n_over_delta: if delta > 0 {
            l2 * g.n() as f64 / delta as f64
        } else {
            0.0
        },
        steps: run.trace.len(),
        max_charge_count: run.ledger.max_count(),
        charge_bound: cfg.charge_bound(),
        audit_passed: audit.passed(),
        wall_ms: Some(started.elapsed().as_millis() as u64),
    })
}

pub fn run_experiment(
    spec: &ExperimentSpec,
    solver: &SolverConfig,
    timing: bool,
) -> Result<Vec<ExperimentRow>, ExperimentError> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &size in &spec.sizes {
        for &seed in &spec.seeds {
            let g = generate(&GeneratorSpec::new(spec.family, size).with_seed(seed))?;
            for &eps in &spec.epsilons {
                let mut row = measure(&g, spec.family, size, seed, eps, solver)?;
                if !timing {
                    row.wall_ms = None;
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
