//! Recursive weighted edge separator.
//!
//! Starting from the whole graph, every component whose internal degree is at
//! least `(ε/2)·deg(V)` is cut along a spectral sweep; the crossing edges are
//! deleted and the pieces go back on the worklist. Each deleted edge is
//! charged to the vertices of the lighter side in proportion to their degree
//! inside the component being cut, which is what bounds how often any vertex
//! can be charged.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::cheeger::{sweep_cut, CERTIFICATE_SLACK};
use crate::error::{CutError, SpectralError};
use crate::graph::{Graph, InducedSubgraph};
use crate::spectral::{self, LaplacianOperator, Solver, SolverConfig};

/// Components up to this size fall back to the dense solver when the
/// iterative one does not converge.
pub const DENSE_FALLBACK_LIMIT: usize = 300;

#[derive(Debug, Error)]
pub enum SeparatorError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),

    #[error("graph has no edges")]
    Edgeless,

    #[error(
        "component internal degree {internal_degree} is below the cutting threshold {threshold}"
    )]
    LightComponent {
        internal_degree: usize,
        threshold: f64,
    },

    #[error("eigensolver did not converge (residual {:.3e})", .record.residual)]
    NotConverged { record: Box<StepRecord> },

    #[error(transparent)]
    Spectral(#[from] SpectralError),

    #[error(transparent)]
    Cut(#[from] CutError),
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatorConfig {
    pub epsilon: f64,
    pub spectral: SolverConfig,
    /// Keep every individual charge, not only per-vertex totals and counts.
    pub charge_audit: bool,
}

impl SeparatorConfig {
    pub fn new(epsilon: f64) -> Result<Self, SeparatorError> {
        let cfg = SeparatorConfig {
            epsilon,
            spectral: SolverConfig::default(),
            charge_audit: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SeparatorError> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(SeparatorError::InvalidEpsilon(self.epsilon));
        }
        self.spectral.validate()?;
        Ok(())
    }

    /// `(ε/2)·deg(V)` for a root graph of the given total degree.
    pub fn threshold(&self, root_total_degree: usize) -> f64 {
        self.epsilon / 2.0 * root_total_degree as f64
    }

    pub fn is_heavy(&self, internal_degree: usize, root_total_degree: usize) -> bool {
        internal_degree as f64 >= self.threshold(root_total_degree)
    }

    /// `⌊log₂(1/ε)⌋ + 2`.
    pub fn charge_bound(&self) -> usize {
        floor_log2_inv(self.epsilon) + 2
    }
}

/// `⌊log₂(1/ε)⌋`, computed with exact power-of-two scaling.
pub fn floor_log2_inv(epsilon: f64) -> usize {
    let mut k = 0;
    let mut scaled = epsilon * 2.0;
    while scaled <= 1.0 {
        k += 1;
        scaled *= 2.0;
    }
    k
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ChargeLedger {
    /// Number of steps that charged each vertex a nonzero amount.
    pub counts: Vec<u32>,
    pub totals: Vec<f64>,
    /// Per vertex `(step, charge)` pairs; kept only with `charge_audit`.
    pub entries: Option<Vec<Vec<(usize, f64)>>>,
}

impl ChargeLedger {
    fn new(n: usize, audit: bool) -> Self {
        ChargeLedger {
            counts: vec![0; n],
            totals: vec![0.0; n],
            entries: audit.then(|| vec![Vec::new(); n]),
        }
    }

    fn charge(&mut self, step: usize, v: usize, amount: f64) {
        if amount <= 0.0 {
            return;
        }
        self.counts[v] += 1;
        self.totals[v] += amount;
        if let Some(entries) = &mut self.entries {
            entries[v].push((step, amount));
        }
    }

    pub fn total_charge(&self) -> f64 {
        self.totals.iter().sum()
    }

    pub fn max_count(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// Disconnected component split into its components, no deletions.
    Split,
    /// Sweep cut with edge deletion.
    Cut,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub kind: StepKind,
    pub vertices: usize,
    pub internal_degree: usize,
    pub solver: Option<Solver>,
    pub converged: bool,
    pub dense_fallback: bool,
    pub lambda2: f64,
    pub rayleigh: f64,
    pub residual: f64,
    pub iterations: usize,
    pub cut_ratio: Option<f64>,
    pub certificate_holds: Option<bool>,
    pub edges_deleted: usize,
    pub charged_vertices: usize,
    pub blocks: usize,
}

/// Outcome of one application of the cutting procedure.
#[derive(Clone, Debug)]
pub struct CutStep {
    /// Resulting connected pieces in parent ids, each sorted, ordered by
    /// smallest member.
    pub blocks: Vec<Vec<usize>>,
    pub deleted: Vec<(usize, usize)>,
    /// `(vertex, charge)` in parent ids.
    pub charges: Vec<(usize, f64)>,
    pub record: StepRecord,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fallback {
    Fail,
    Recover,
}

/// Applies the cutting procedure once to a heavy induced subgraph.
///
/// A disconnected subgraph is split into its components for free. Otherwise
/// the sweep cut of its Fiedler vector is removed. Non-convergence of the
/// eigensolver is an error here; [`run_separator`] recovers from it instead.
pub fn single_cut_step(
    gsub: &InducedSubgraph<'_>,
    cfg: &SeparatorConfig,
) -> Result<CutStep, SeparatorError> {
    cfg.validate()?;
    cut_step(gsub, cfg, 0, Fallback::Fail)
}

fn cut_step(
    gsub: &InducedSubgraph<'_>,
    cfg: &SeparatorConfig,
    step: usize,
    fallback: Fallback,
) -> Result<CutStep, SeparatorError> {
    let root_total = gsub.parent().total_degree();
    let internal_degree = gsub.internal_degree();
    if !cfg.is_heavy(internal_degree, root_total) {
        return Err(SeparatorError::LightComponent {
            internal_degree,
            threshold: cfg.threshold(root_total),
        });
    }
    let local = gsub.graph();
    let mut record = StepRecord {
        step,
        kind: StepKind::Split,
        vertices: local.n(),
        internal_degree,
        solver: None,
        converged: true,
        dense_fallback: false,
        lambda2: 0.0,
        rayleigh: 0.0,
        residual: 0.0,
        iterations: 0,
        cut_ratio: None,
        certificate_holds: None,
        edges_deleted: 0,
        charged_vertices: 0,
        blocks: 0,
    };

    let comps = local.components();
    if comps.len() > 1 {
        let blocks: Vec<Vec<usize>> = comps
            .iter()
            .map(|c| c.iter().map(|&v| gsub.to_parent(v)).collect())
            .collect();
        record.blocks = blocks.len();
        return Ok(CutStep {
            blocks,
            deleted: Vec::new(),
            charges: Vec::new(),
            record,
        });
    }

    let op = LaplacianOperator::normalized(local)?;
    let mut est = spectral::lambda2(&op, &cfg.spectral)?;
    if !est.converged {
        record.solver = Some(est.solver);
        record.converged = false;
        record.lambda2 = est.lambda2;
        record.rayleigh = est.rayleigh;
        record.residual = est.residual;
        record.iterations = est.iterations;
        match fallback {
            Fallback::Fail => {
                return Err(SeparatorError::NotConverged {
                    record: Box::new(record),
                })
            }
            Fallback::Recover if local.n() <= DENSE_FALLBACK_LIMIT => {
                est = spectral::lambda2_dense(&op)?;
                record.dense_fallback = true;
            }
            // The sweep bound holds for any test vector, so the best iterate
            // is still a certified cut.
            Fallback::Recover => {}
        }
    }
    record.kind = StepKind::Cut;
    record.solver = Some(est.solver);
    record.converged = est.converged;
    record.lambda2 = est.lambda2;
    record.rayleigh = est.rayleigh;
    record.residual = est.residual;
    record.iterations = est.iterations;

    let cut = sweep_cut(local, &est.vector)?;
    record.cut_ratio = Some(cut.ratio);
    record.certificate_holds = cut.certificate_holds();

    let mut in_s = vec![false; local.n()];
    for &v in &cut.side_s {
        in_s[v] = true;
    }
    let kept: Vec<(usize, usize)> = local.edges().filter(|&(u, v)| in_s[u] == in_s[v]).collect();
    let remaining = Graph::from_simple_edges(local.n(), &kept);
    let blocks: Vec<Vec<usize>> = remaining
        .components()
        .iter()
        .map(|c| c.iter().map(|&v| gsub.to_parent(v)).collect())
        .collect();

    let crossing = cut.crossing() as f64;
    let side_degree = local.degree_of(&cut.side_s) as f64;
    let charges: Vec<(usize, f64)> = cut
        .side_s
        .iter()
        .map(|&v| {
            (
                gsub.to_parent(v),
                crossing * local.degree(v) as f64 / side_degree,
            )
        })
        .collect();
    let deleted: Vec<(usize, usize)> = cut
        .crossing_edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (gsub.to_parent(u), gsub.to_parent(v));
            (a.min(b), a.max(b))
        })
        .collect();

    record.edges_deleted = deleted.len();
    record.charged_vertices = charges.len();
    record.blocks = blocks.len();
    Ok(CutStep {
        blocks,
        deleted,
        charges,
        record,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatorRun {
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    /// Final blocks, each sorted, ordered by smallest member. Isolated
    /// vertices of the input appear as singletons.
    pub components: Vec<Vec<usize>>,
    /// Deleted edges `(u, v)`, `u < v`, sorted.
    pub deleted_edges: Vec<(usize, usize)>,
    pub ledger: ChargeLedger,
    pub trace: Vec<StepRecord>,
    /// `deg_G(V(G_i)) / deg(V)` per component.
    pub root_weights: Vec<f64>,
}

impl SeparatorRun {
    pub fn deleted_fraction(&self) -> f64 {
        self.deleted_edges.len() as f64 / self.m as f64
    }

    pub fn max_root_weight(&self) -> f64 {
        self.root_weights.iter().copied().fold(0.0, f64::max)
    }

    /// Block label per vertex, following the order of `components`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (i, comp) in self.components.iter().enumerate() {
            for &v in comp {
                labels[v] = i;
            }
        }
        labels
    }
}

/// Heavy components ordered by internal degree (largest first), ties by
/// smallest vertex id.
struct Worklist<'g> {
    graph: &'g Graph,
    pool: Vec<Option<InducedSubgraph<'g>>>,
    heap: BinaryHeap<(usize, Reverse<usize>, usize)>,
    finished: Vec<Vec<usize>>,
}

impl<'g> Worklist<'g> {
    fn offer(&mut self, block: Vec<usize>, cfg: &SeparatorConfig) {
        let sub = InducedSubgraph::from_sorted(self.graph, block);
        if cfg.is_heavy(sub.internal_degree(), self.graph.total_degree()) {
            self.heap.push((
                sub.internal_degree(),
                Reverse(sub.vertices()[0]),
                self.pool.len(),
            ));
            self.pool.push(Some(sub));
        } else {
            self.finished.push(sub.vertices().to_vec());
        }
    }

    fn pop(&mut self) -> Option<InducedSubgraph<'g>> {
        let (_, _, slot) = self.heap.pop()?;
        self.pool[slot].take()
    }
}

/// Runs the cutting procedure until every component is light.
pub fn run_separator(g: &Graph, cfg: &SeparatorConfig) -> Result<SeparatorRun, SeparatorError> {
    cfg.validate()?;
    if g.m() == 0 {
        return Err(SeparatorError::Edgeless);
    }
    let root_total = g.total_degree();
    let mut work = Worklist {
        graph: g,
        pool: Vec::new(),
        heap: BinaryHeap::new(),
        finished: (0..g.n())
            .filter(|&v| g.is_isolated(v))
            .map(|v| vec![v])
            .collect(),
    };
    work.offer((0..g.n()).filter(|&v| !g.is_isolated(v)).collect(), cfg);

    let mut ledger = ChargeLedger::new(g.n(), cfg.charge_audit);
    let mut deleted = Vec::new();
    let mut trace = Vec::new();
    while let Some(sub) = work.pop() {
        let step_id = trace.len();
        let step = cut_step(&sub, cfg, step_id, Fallback::Recover)?;
        for &(v, amount) in &step.charges {
            ledger.charge(step_id, v, amount);
        }
        deleted.extend_from_slice(&step.deleted);
        trace.push(step.record);
        for block in step.blocks {
            work.offer(block, cfg);
        }
        debug_assert!(trace.len() <= 2 * g.m());
    }

    let mut finished = work.finished;
    finished.sort_unstable_by_key(|c| c[0]);
    deleted.sort_unstable();
    let root_weights = finished
        .iter()
        .map(|c| g.degree_of(c) as f64 / root_total as f64)
        .collect();
    Ok(SeparatorRun {
        n: g.n(),
        m: g.m(),
        epsilon: cfg.epsilon,
        components: finished,
        deleted_edges: deleted,
        ledger,
        trace,
        root_weights,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Recomputes every guarantee of a run from scratch against `g`.
pub fn audit_run(run: &SeparatorRun, g: &Graph, cfg: &SeparatorConfig) -> AuditReport {
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| {
        checks.push(AuditCheck {
            name,
            passed,
            detail,
        })
    };
    let n = g.n();
    let m = g.m();
    let root_total = g.total_degree();

    // partition of V
    let mut label = vec![usize::MAX; n];
    let mut partition_ok = run.n == n && run.m == m;
    let mut detail = String::from("ok");
    'outer: for (i, comp) in run.components.iter().enumerate() {
        for &v in comp {
            if v >= n || label[v] != usize::MAX {
                partition_ok = false;
                detail = format!("vertex {v} out of range or repeated");
                break 'outer;
            }
            label[v] = i;
        }
    }
    if partition_ok {
        if let Some(v) = label.iter().position(|&l| l == usize::MAX) {
            partition_ok = false;
            detail = format!("vertex {v} not covered");
        }
    }
    push("partition", partition_ok, detail);
    if !partition_ok {
        return AuditReport { checks };
    }

    let disconnected = run.components.iter().position(|c| {
        !InducedSubgraph::from_sorted(g, sorted(c))
            .graph()
            .is_connected()
    });
    push(
        "components-connected",
        disconnected.is_none(),
        disconnected.map_or("ok".into(), |i| format!("component {i} is disconnected")),
    );

    let expected: HashSet<(usize, usize)> =
        g.edges().filter(|&(u, v)| label[u] != label[v]).collect();
    let mut actual = HashSet::new();
    let mut d_detail = String::from("ok");
    let mut d_ok = true;
    for &(u, v) in &run.deleted_edges {
        let e = (u.min(v), u.max(v));
        if !g.has_edge(u, v) {
            d_ok = false;
            d_detail = format!("{u}-{v} is not an edge");
        } else if !actual.insert(e) {
            d_ok = false;
            d_detail = format!("{u}-{v} listed twice");
        } else if label[u] == label[v] {
            d_ok = false;
            d_detail = format!("{u}-{v} lies inside a component");
        }
    }
    if d_ok && actual != expected {
        d_ok = false;
        d_detail = format!(
            "{} crossing edges missing from D",
            expected.difference(&actual).count()
        );
    }
    push("deleted-edges", d_ok, d_detail);

    let internal: usize = g.edges().filter(|&(u, v)| label[u] == label[v]).count();
    push(
        "edge-conservation",
        run.deleted_edges.len() + internal == m,
        format!(
            "|D| = {}, internal = {internal}, m = {m}",
            run.deleted_edges.len()
        ),
    );

    let threshold = cfg.threshold(root_total);
    let mut worst = 0usize;
    for comp in &run.components {
        let inside: usize = comp
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&u| label[u] == label[v])
                    .count()
            })
            .sum();
        worst = worst.max(inside);
    }
    push(
        "stopping-rule",
        !cfg.is_heavy(worst, root_total),
        format!("max internal degree {worst} vs threshold {threshold}"),
    );

    let bound = cfg.charge_bound();
    let counts: Vec<u32> = match &run.ledger.entries {
        Some(entries) => entries
            .iter()
            .map(|e| e.iter().filter(|&&(_, c)| c > 0.0).count() as u32)
            .collect(),
        None => run.ledger.counts.clone(),
    };
    let max_count = counts.iter().copied().max().unwrap_or(0);
    push(
        "charge-count",
        counts == run.ledger.counts && (max_count as usize) <= bound,
        format!("max nonzero charges per vertex {max_count}, bound {bound}"),
    );

    let total: f64 = match &run.ledger.entries {
        Some(entries) => entries.iter().flatten().map(|&(_, c)| c).sum(),
        None => run.ledger.total_charge(),
    };
    push(
        "charge-sum",
        (total - run.deleted_edges.len() as f64).abs() <= 1e-9,
        format!("charges {total} vs |D| = {}", run.deleted_edges.len()),
    );

    let bad_cert = run.trace.iter().find(|r| match (r.cut_ratio, r.kind) {
        (Some(ratio), StepKind::Cut) => ratio > (2.0 * r.rayleigh).sqrt() + CERTIFICATE_SLACK,
        _ => false,
    });
    push(
        "certificates",
        bad_cert.is_none(),
        bad_cert.map_or("ok".into(), |r| {
            format!("step {} violates ratio <= sqrt(2 rho)", r.step)
        }),
    );

    let traced: usize = run.trace.iter().map(|r| r.edges_deleted).sum();
    push(
        "trace",
        traced == run.deleted_edges.len() && run.trace.len() <= 2 * m,
        format!("{} steps, {traced} edges deleted in trace", run.trace.len()),
    );

    let d = run.deleted_edges.len() as f64;
    let applies = d <= cfg.epsilon * m as f64 / 2.0;
    let max_weight = run
        .components
        .iter()
        .map(|c| g.degree_of(c) as f64 / root_total as f64)
        .fold(0.0, f64::max);
    push(
        "weight-bound",
        !applies || max_weight < cfg.epsilon,
        if applies {
            format!(
                "max component weight {max_weight} vs epsilon {}",
                cfg.epsilon
            )
        } else {
            format!("not applicable: |D|/m = {}", d / m as f64)
        },
    );

    AuditReport { checks }
}

fn sorted(c: &[usize]) -> Vec<usize> {
    let mut v = c.to_vec();
    v.sort_unstable();
    v
}
