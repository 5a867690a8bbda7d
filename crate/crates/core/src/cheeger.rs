//! Degree-weighted Cheeger cuts.
//!
//! The ratio of a cut `S` is `|E(S, V∖S)| / min{deg(S), deg(V∖S)}`. A sweep over
//! any test vector with normalized Rayleigh quotient `ρ` yields a prefix cut of
//! ratio at most `√(2ρ)`; the exhaustive search gives the exact minimum for
//! small graphs.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::CutError;
use crate::graph::Graph;
use crate::spectral::{self, LaplacianOperator, SolverConfig};

/// Largest graph accepted by [`cheeger_constant_exact`].
pub const EXACT_LIMIT: usize = 20;

/// Slack on floating-point comparisons in the Cheeger checks.
pub const CERTIFICATE_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutResult {
    /// The side with smaller degree (the prefix side on ties), sorted.
    pub side_s: Vec<usize>,
    /// Edges `(u, v)`, `u < v`, with exactly one endpoint in `side_s`.
    pub crossing_edges: Vec<(usize, usize)>,
    pub ratio: f64,
    /// `min{deg(S), deg(V∖S)}`.
    pub min_side_degree: usize,
    /// Rayleigh quotient of the vector that produced the cut; `None` for
    /// exhaustive cuts.
    pub rayleigh_certificate: Option<f64>,
}

impl CutResult {
    pub fn crossing(&self) -> usize {
        self.crossing_edges.len()
    }

    /// `ratio ≤ √(2ρ)` up to [`CERTIFICATE_SLACK`], when a certificate exists.
    pub fn certificate_holds(&self) -> Option<bool> {
        self.rayleigh_certificate
            .map(|rho| self.ratio <= (2.0 * rho).sqrt() + CERTIFICATE_SLACK)
    }
}

fn check_input(g: &Graph) -> Result<(), CutError> {
    if g.n() < 2 {
        return Err(CutError::TooSmall(g.n()));
    }
    if let Some(v) = (0..g.n()).find(|&v| g.is_isolated(v)) {
        return Err(CutError::IsolatedVertex(v));
    }
    if !g.is_connected() {
        return Err(CutError::Disconnected);
    }
    Ok(())
}

/// Is `(cross, den)` a strictly better cut than `(best_cross, best_den)`?
/// Lower ratio wins, then the larger (more balanced) denominator.
fn better(cross: usize, den: usize, best_cross: usize, best_den: usize) -> bool {
    let lhs = cross as u128 * best_den as u128;
    let rhs = best_cross as u128 * den as u128;
    match lhs.cmp(&rhs) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => den > best_den,
    }
}

/// Edges with exactly one endpoint in the marked set.
pub fn crossing_edges(g: &Graph, in_s: &[bool]) -> Vec<(usize, usize)> {
    g.edges().filter(|&(u, v)| in_s[u] != in_s[v]).collect()
}

/// Ratio of an arbitrary proper subset, `None` if a side has zero degree.
pub fn cut_ratio(g: &Graph, subset: &[usize]) -> Option<f64> {
    let mut in_s = vec![false; g.n()];
    for &v in subset {
        in_s[v] = true;
    }
    let cross = crossing_edges(g, &in_s).len();
    let ds = g.degree_of(subset);
    let den = ds.min(g.total_degree() - ds);
    (den > 0).then(|| cross as f64 / den as f64)
}

fn build_result(g: &Graph, in_prefix: Vec<bool>, rayleigh: Option<f64>) -> CutResult {
    let prefix: Vec<usize> = (0..g.n()).filter(|&v| in_prefix[v]).collect();
    let deg_p = g.degree_of(&prefix);
    let deg_rest = g.total_degree() - deg_p;
    let side_s = if deg_p <= deg_rest {
        prefix
    } else {
        (0..g.n()).filter(|&v| !in_prefix[v]).collect()
    };
    let crossing_edges = crossing_edges(g, &in_prefix);
    let den = deg_p.min(deg_rest);
    CutResult {
        side_s,
        ratio: crossing_edges.len() as f64 / den as f64,
        crossing_edges,
        min_side_degree: den,
        rayleigh_certificate: rayleigh,
    }
}

/// Best prefix cut of the vertices ordered by `x_v / √deg(v)` descending
/// (ties by id). `x` lives in the domain of the normalized Laplacian.
pub fn sweep_cut(g: &Graph, x: &[f64]) -> Result<CutResult, CutError> {
    check_input(g)?;
    if x.len() != g.n() {
        return Err(CutError::DimensionMismatch {
            expected: g.n(),
            found: x.len(),
        });
    }
    let op = LaplacianOperator::normalized(g)?;
    let mut deflated = x.to_vec();
    spectral::deflate(&mut deflated, &op.kernel_direction());
    let scale = spectral::norm(x).max(f64::MIN_POSITIVE);
    if spectral::norm(&deflated) <= 1e-12 * scale {
        return Err(CutError::ConstantVector);
    }
    let rho = op.rayleigh(&deflated)?;

    let key: Vec<f64> = (0..g.n())
        .map(|v| x[v] / (g.degree(v) as f64).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| key[b].total_cmp(&key[a]).then(a.cmp(&b)));

    let total = g.total_degree();
    let mut in_s = vec![false; g.n()];
    let (mut cross, mut deg_s) = (0usize, 0usize);
    let mut best: Option<(usize, usize, usize)> = None;
    for (k, &v) in order[..g.n() - 1].iter().enumerate() {
        let inside = g.neighbors(v).iter().filter(|&&u| in_s[u]).count();
        in_s[v] = true;
        cross = cross + g.degree(v) - 2 * inside;
        deg_s += g.degree(v);
        let den = deg_s.min(total - deg_s);
        let improves = match best {
            None => true,
            Some((_, bc, bd)) => better(cross, den, bc, bd),
        };
        if improves {
            best = Some((k + 1, cross, den));
        }
    }
    let (len, best_cross, _) = best.expect("at least one prefix");
    let mut in_prefix = vec![false; g.n()];
    for &v in &order[..len] {
        in_prefix[v] = true;
    }
    let result = build_result(g, in_prefix, Some(rho));
    debug_assert_eq!(result.crossing(), best_cross);
    Ok(result)
}

/// Exact Cheeger constant by enumerating every proper subset, with the last
/// vertex fixed outside `S`. Subsets are visited in Gray-code order so each
/// step updates the crossing count in `O(deg)`.
pub fn cheeger_constant_exact(g: &Graph) -> Result<CutResult, CutError> {
    check_input(g)?;
    let n = g.n();
    if n > EXACT_LIMIT {
        return Err(CutError::TooLarge {
            n,
            limit: EXACT_LIMIT,
        });
    }
    let total = g.total_degree();
    let free = n - 1;
    let mut in_s = vec![false; n];
    let (mut cross, mut deg_s, mut mask) = (0usize, 0usize, 0u32);
    let mut best: Option<(u32, usize, usize)> = None;
    for i in 1u32..(1u32 << free) {
        let v = i.trailing_zeros() as usize;
        let inside = g.neighbors(v).iter().filter(|&&u| in_s[u]).count();
        if in_s[v] {
            in_s[v] = false;
            cross = cross + 2 * inside - g.degree(v);
            deg_s -= g.degree(v);
        } else {
            in_s[v] = true;
            cross = cross + g.degree(v) - 2 * inside;
            deg_s += g.degree(v);
        }
        mask ^= 1 << v;
        let den = deg_s.min(total - deg_s);
        let improves = match best {
            None => true,
            Some((_, bc, bd)) => better(cross, den, bc, bd),
        };
        if improves {
            best = Some((mask, cross, den));
        }
    }
    let (mask, _, _) = best.expect("n >= 2 gives at least one subset");
    let in_prefix = (0..n).map(|v| v < free && mask & (1 << v) != 0).collect();
    Ok(build_result(g, in_prefix, None))
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub lambda2: f64,
    pub lower: f64,
    pub h_exact: f64,
    pub upper: f64,
    pub holds: bool,
}

/// `λ₂/2 ≤ h ≤ √(2λ₂)` with `λ₂` of the normalized Laplacian from the dense
/// solver and `h` from exhaustive search.
pub fn verify_cheeger_sandwich(g: &Graph, _cfg: &SolverConfig) -> Result<SandwichReport, CutError> {
    check_input(g)?;
    if g.n() > EXACT_LIMIT {
        return Err(CutError::TooLarge {
            n: g.n(),
            limit: EXACT_LIMIT,
        });
    }
    let op = LaplacianOperator::normalized(g)?;
    let lambda2 = spectral::lambda2_dense(&op)?.lambda2;
    let h_exact = cheeger_constant_exact(g)?.ratio;
    let lower = lambda2 / 2.0;
    let upper = (2.0 * lambda2).sqrt();
    Ok(SandwichReport {
        lambda2,
        lower,
        h_exact,
        upper,
        holds: lower - CERTIFICATE_SLACK <= h_exact && h_exact <= upper + CERTIFICATE_SLACK,
    })
}
