//! Laplacian operators and second-eigenvalue solvers.
//!
//! Both `L = D - A` and `𝓛 = D^{-1/2} L D^{-1/2}` are applied matrix-free.
//! Small graphs go through a dense Jacobi decomposition; larger ones use a
//! restarted Lanczos iteration (or shifted power iteration) on the orthogonal
//! complement of the known kernel direction. Disconnected inputs never reach
//! an iterative solver: a component scan returns `λ₂ = 0` directly.

pub mod dense;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::SpectralError;
use crate::graph::Graph;

/// Largest Krylov basis built before an explicit restart.
const KRYLOV_MAX: usize = 120;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Combinatorial,
    Normalized,
}

/// Matrix-free view of a graph Laplacian.
#[derive(Clone, Debug)]
pub struct LaplacianOperator<'g> {
    graph: &'g Graph,
    variant: Variant,
    inv_sqrt_deg: Vec<f64>,
}

impl<'g> LaplacianOperator<'g> {
    pub fn new(graph: &'g Graph, variant: Variant) -> Result<Self, SpectralError> {
        let inv_sqrt_deg = match variant {
            Variant::Combinatorial => Vec::new(),
            Variant::Normalized => {
                if let Some(v) = (0..graph.n()).find(|&v| graph.is_isolated(v)) {
                    return Err(SpectralError::IsolatedVertex(v));
                }
                (0..graph.n())
                    .map(|v| 1.0 / (graph.degree(v) as f64).sqrt())
                    .collect()
            }
        };
        Ok(LaplacianOperator {
            graph,
            variant,
            inv_sqrt_deg,
        })
    }

    pub fn combinatorial(graph: &'g Graph) -> Self {
        Self::new(graph, Variant::Combinatorial).expect("combinatorial Laplacian is always defined")
    }

    pub fn normalized(graph: &'g Graph) -> Result<Self, SpectralError> {
        Self::new(graph, Variant::Normalized)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, SpectralError> {
        if x.len() != self.n() {
            return Err(SpectralError::DimensionMismatch {
                expected: self.n(),
                found: x.len(),
            });
        }
        let mut y = vec![0.0; x.len()];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    pub(crate) fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let g = self.graph;
        match self.variant {
            Variant::Combinatorial => {
                for v in 0..g.n() {
                    let s: f64 = g.neighbors(v).iter().map(|&u| x[u]).sum();
                    y[v] = g.degree(v) as f64 * x[v] - s;
                }
            }
            Variant::Normalized => {
                let d = &self.inv_sqrt_deg;
                for v in 0..g.n() {
                    let s: f64 = g.neighbors(v).iter().map(|&u| x[u] * d[u]).sum();
                    y[v] = x[v] - d[v] * s;
                }
            }
        }
    }

    /// Unit vector spanning the kernel of a connected graph's Laplacian:
    /// constant for `L`, proportional to `D^{1/2} 1` for `𝓛`.
    pub fn kernel_direction(&self) -> Vec<f64> {
        let n = self.n();
        match self.variant {
            Variant::Combinatorial => vec![1.0 / (n as f64).sqrt(); n],
            Variant::Normalized => {
                let total = self.graph.total_degree() as f64;
                (0..n)
                    .map(|v| (self.graph.degree(v) as f64 / total).sqrt())
                    .collect()
            }
        }
    }

    /// Largest eigenvalue bound used for spectral shifts.
    pub fn spectral_upper_bound(&self) -> f64 {
        match self.variant {
            Variant::Combinatorial => 2.0 * self.graph.max_degree() as f64,
            Variant::Normalized => 2.0,
        }
    }

    pub fn rayleigh(&self, x: &[f64]) -> Result<f64, SpectralError> {
        let y = self.apply(x)?;
        Ok(dot(x, &y) / dot(x, x))
    }

    /// Row-major dense copy of the operator.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let g = self.graph;
        let mut a = vec![0.0; n * n];
        for v in 0..n {
            match self.variant {
                Variant::Combinatorial => {
                    a[v * n + v] = g.degree(v) as f64;
                    for &u in g.neighbors(v) {
                        a[v * n + u] = -1.0;
                    }
                }
                Variant::Normalized => {
                    a[v * n + v] = 1.0;
                    for &u in g.neighbors(v) {
                        a[v * n + u] = -self.inv_sqrt_deg[v] * self.inv_sqrt_deg[u];
                    }
                }
            }
        }
        a
    }

    fn residual(&self, x: &[f64], rho: f64) -> f64 {
        let mut y = vec![0.0; x.len()];
        self.apply_into(x, &mut y);
        y.iter()
            .zip(x)
            .map(|(yi, xi)| (yi - rho * xi).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterativeMethod {
    Lanczos,
    Power,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Residual threshold `‖Op x − ρ x‖₂`.
    pub tolerance: f64,
    /// Matrix-vector product budget; `None` means `10 n + 1000`.
    pub max_iterations: Option<usize>,
    /// Graphs with at most this many vertices use the dense solver.
    pub dense_cutoff: usize,
    pub seed: u64,
    pub method: IterativeMethod,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-8,
            max_iterations: None,
            dense_cutoff: 64,
            seed: 0,
            method: IterativeMethod::Lanczos,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SpectralError> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(SpectralError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.dense_cutoff < 2 {
            return Err(SpectralError::InvalidConfig(format!(
                "dense cutoff must be at least 2, got {}",
                self.dense_cutoff
            )));
        }
        Ok(())
    }

    pub fn iteration_budget(&self, n: usize) -> usize {
        self.max_iterations.unwrap_or(10 * n + 1000)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Dense,
    Iterative,
    ComponentScan,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralEstimate {
    pub lambda2: f64,
    /// Unit norm, orthogonal to the kernel direction.
    pub vector: Vec<f64>,
    pub rayleigh: f64,
    pub residual: f64,
    pub iterations: usize,
    pub solver: Solver,
    pub converged: bool,
}

/// Second-smallest eigenvalue with its vector.
pub fn lambda2(
    op: &LaplacianOperator<'_>,
    cfg: &SolverConfig,
) -> Result<SpectralEstimate, SpectralError> {
    cfg.validate()?;
    let n = op.n();
    if n < 2 {
        return Err(SpectralError::TooSmall(n));
    }
    if let Some(est) = disconnected_estimate(op) {
        return Ok(est);
    }
    if n <= cfg.dense_cutoff {
        Ok(dense_estimate(op))
    } else {
        Ok(iterative_estimate(op, cfg))
    }
}

pub fn fiedler_vector(
    op: &LaplacianOperator<'_>,
    cfg: &SolverConfig,
) -> Result<Vec<f64>, SpectralError> {
    lambda2(op, cfg).map(|e| e.vector)
}

/// Dense decomposition regardless of size.
pub fn lambda2_dense(op: &LaplacianOperator<'_>) -> Result<SpectralEstimate, SpectralError> {
    let n = op.n();
    if n < 2 {
        return Err(SpectralError::TooSmall(n));
    }
    Ok(disconnected_estimate(op).unwrap_or_else(|| dense_estimate(op)))
}

/// Iterative solve regardless of size (component scan still applies).
pub fn lambda2_iterative(
    op: &LaplacianOperator<'_>,
    cfg: &SolverConfig,
) -> Result<SpectralEstimate, SpectralError> {
    cfg.validate()?;
    let n = op.n();
    if n < 2 {
        return Err(SpectralError::TooSmall(n));
    }
    Ok(disconnected_estimate(op).unwrap_or_else(|| iterative_estimate(op, cfg)))
}

fn disconnected_estimate(op: &LaplacianOperator<'_>) -> Option<SpectralEstimate> {
    let comps = op.graph().components();
    if comps.len() < 2 {
        return None;
    }
    let g = op.graph();
    let mut x = vec![0.0; op.n()];
    for &v in &comps[0] {
        x[v] = match op.variant() {
            Variant::Combinatorial => 1.0,
            Variant::Normalized => (g.degree(v) as f64).sqrt(),
        };
    }
    let kernel = op.kernel_direction();
    deflate(&mut x, &kernel);
    normalize(&mut x);
    Some(finish(op, x, 0, Solver::ComponentScan, true, Some(0.0)))
}

fn dense_estimate(op: &LaplacianOperator<'_>) -> SpectralEstimate {
    let n = op.n();
    let (values, vectors) = dense::symmetric_eigen(&op.to_dense(), n);
    let mut x = vectors[1].clone();
    deflate(&mut x, &op.kernel_direction());
    normalize(&mut x);
    sign_normalize(&mut x);
    finish(op, x, 0, Solver::Dense, true, Some(values[1].max(0.0)))
}

fn finish(
    op: &LaplacianOperator<'_>,
    x: Vec<f64>,
    iterations: usize,
    solver: Solver,
    converged: bool,
    lambda: Option<f64>,
) -> SpectralEstimate {
    let mut y = vec![0.0; x.len()];
    op.apply_into(&x, &mut y);
    let rho = (dot(&x, &y) / dot(&x, &x)).max(0.0);
    let residual = op.residual(&x, rho);
    SpectralEstimate {
        lambda2: lambda.unwrap_or(rho),
        vector: x,
        rayleigh: rho,
        residual,
        iterations,
        solver,
        converged,
    }
}

fn random_start(op: &LaplacianOperator<'_>, seed: u64, kernel: &[f64]) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..op.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut x, kernel);
    normalize(&mut x);
    x
}

fn iterative_estimate(op: &LaplacianOperator<'_>, cfg: &SolverConfig) -> SpectralEstimate {
    let kernel = op.kernel_direction();
    let start = random_start(op, cfg.seed, &kernel);
    let budget = cfg.iteration_budget(op.n());
    let (mut x, iterations, converged) = match cfg.method {
        IterativeMethod::Lanczos => lanczos(op, &kernel, start, cfg.tolerance, budget),
        IterativeMethod::Power => power(op, &kernel, start, cfg.tolerance, budget),
    };
    sign_normalize(&mut x);
    finish(op, x, iterations, Solver::Iterative, converged, None)
}

/// Explicitly restarted Lanczos with full reorthogonalization, restricted to
/// the complement of `kernel`. Returns the final Ritz vector, the number of
/// operator applications and whether the residual met `tol`.
fn lanczos(
    op: &LaplacianOperator<'_>,
    kernel: &[f64],
    mut x: Vec<f64>,
    tol: f64,
    budget: usize,
) -> (Vec<f64>, usize, bool) {
    let n = op.n();
    let dim = (n - 1).clamp(1, KRYLOV_MAX);
    let mut applied = 0usize;
    let mut w = vec![0.0; n];
    loop {
        let mut basis: Vec<Vec<f64>> = vec![x.clone()];
        let mut alpha = Vec::with_capacity(dim);
        let mut beta: Vec<f64> = Vec::with_capacity(dim);
        for j in 0..dim {
            op.apply_into(&basis[j], &mut w);
            applied += 1;
            deflate(&mut w, kernel);
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            axpy(-a, &basis[j], &mut w);
            if j > 0 {
                axpy(-beta[j - 1], &basis[j - 1], &mut w);
            }
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    axpy(-c, v, &mut w);
                }
                deflate(&mut w, kernel);
            }
            let b = norm(&w);
            let scale = a.abs() + beta.last().copied().unwrap_or(0.0) + 1.0;
            if j + 1 == dim || b <= 1e-12 * scale || applied >= budget {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|wi| wi / b).collect());
        }

        let k = alpha.len();
        let mut t = vec![0.0; k * k];
        for i in 0..k {
            t[i * k + i] = alpha[i];
            if i + 1 < k {
                t[i * k + i + 1] = beta[i];
                t[(i + 1) * k + i] = beta[i];
            }
        }
        let (_, ritz) = dense::symmetric_eigen(&t, k);
        let y = &ritz[0];
        let mut next = vec![0.0; n];
        for (c, v) in y.iter().zip(&basis) {
            axpy(*c, v, &mut next);
        }
        deflate(&mut next, kernel);
        normalize(&mut next);
        x = next;

        op.apply_into(&x, &mut w);
        applied += 1;
        let rho = dot(&x, &w);
        let res = w
            .iter()
            .zip(&x)
            .map(|(wi, xi)| (wi - rho * xi).powi(2))
            .sum::<f64>()
            .sqrt();
        if res <= tol {
            return (x, applied, true);
        }
        if applied >= budget {
            return (x, applied, false);
        }
    }
}

/// Power iteration on `c I − Op` with `c` at least the top of the spectrum.
fn power(
    op: &LaplacianOperator<'_>,
    kernel: &[f64],
    mut x: Vec<f64>,
    tol: f64,
    budget: usize,
) -> (Vec<f64>, usize, bool) {
    let shift = op.spectral_upper_bound();
    let mut y = vec![0.0; x.len()];
    let mut applied = 0;
    while applied < budget {
        op.apply_into(&x, &mut y);
        applied += 1;
        if applied % 10 == 0 {
            let rho = dot(&x, &y);
            let res = y
                .iter()
                .zip(&x)
                .map(|(yi, xi)| (yi - rho * xi).powi(2))
                .sum::<f64>()
                .sqrt();
            if res <= tol {
                return (x, applied, true);
            }
        }
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi = shift * xi - *yi;
        }
        deflate(&mut y, kernel);
        normalize(&mut y);
        std::mem::swap(&mut x, &mut y);
    }
    (x, applied, false)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderingReport {
    pub lambda2_normalized: f64,
    pub lambda2_combinatorial: f64,
    pub holds: bool,
}

/// Compares `λ₂(𝓛)` with `λ₂(L)` on a connected graph without isolated vertices.
pub fn check_lambda2_ordering(
    g: &Graph,
    cfg: &SolverConfig,
) -> Result<OrderingReport, SpectralError> {
    let norm_op = LaplacianOperator::normalized(g)?;
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    let ln = lambda2(&norm_op, cfg)?.lambda2;
    let lc = lambda2(&LaplacianOperator::combinatorial(g), cfg)?.lambda2;
    Ok(OrderingReport {
        lambda2_normalized: ln,
        lambda2_combinatorial: lc,
        holds: ln <= lc + 1e-9,
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Removes the component of `x` along the unit vector `dir`.
pub(crate) fn deflate(x: &mut [f64], dir: &[f64]) {
    let c = dot(x, dir);
    axpy(-c, dir, x);
}

fn normalize(x: &mut [f64]) {
    let nrm = norm(x);
    if nrm > 0.0 {
        x.iter_mut().for_each(|v| *v /= nrm);
    }
}

/// Makes the first clearly nonzero entry positive.
fn sign_normalize(x: &mut [f64]) {
    if let Some(&first) = x.iter().find(|v| v.abs() > 1e-10) {
        if first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path, two_triangles};

    fn k2() -> Graph {
        Graph::from_edges(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn matvec_examples() {
        let g = k2();
        let op = LaplacianOperator::combinatorial(&g);
        assert_eq!(op.apply(&[1.0, -1.0]).unwrap(), vec![2.0, -2.0]);
        let c4 = cycle(4).unwrap();
        let op = LaplacianOperator::combinatorial(&c4);
        assert!(op.apply(&[1.0; 4]).unwrap().iter().all(|&v| v == 0.0));
        let op = LaplacianOperator::normalized(&c4).unwrap();
        let y = op.apply(&[1.0, 0.0, -1.0, 0.0]).unwrap();
        for (a, b) in y.iter().zip([1.0, 0.0, -1.0, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(matches!(
            op.apply(&[1.0]),
            Err(SpectralError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn normalized_rejects_isolated() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            LaplacianOperator::normalized(&g),
            Err(SpectralError::IsolatedVertex(2))
        ));
    }

    #[test]
    fn small_lambda2_values() {
        let cfg = SolverConfig::default();
        let g = k2();
        let e = lambda2(&LaplacianOperator::normalized(&g).unwrap(), &cfg).unwrap();
        assert!((e.lambda2 - 2.0).abs() < 1e-12);
        assert_eq!(e.solver, Solver::Dense);
        assert!(e.residual <= 1e-9);

        let p3 = path(3);
        let e = lambda2(&LaplacianOperator::normalized(&p3).unwrap(), &cfg).unwrap();
        assert!((e.lambda2 - 1.0).abs() < 1e-12);
        assert!((e.rayleigh - 1.0).abs() < 1e-8);
        let kernel = LaplacianOperator::normalized(&p3)
            .unwrap()
            .kernel_direction();
        assert!(dot(&e.vector, &kernel).abs() < 1e-8);

        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let e = lambda2(&LaplacianOperator::normalized(&two).unwrap(), &cfg).unwrap();
        assert_eq!(e.lambda2, 0.0);
        assert_eq!(e.solver, Solver::ComponentScan);
    }

    #[test]
    fn disconnected_triangles_indicator() {
        let g = two_triangles();
        let op = LaplacianOperator::normalized(&g).unwrap();
        let e = lambda2(&op, &SolverConfig::default()).unwrap();
        assert!(e.rayleigh.abs() < 1e-15);
        assert!(e.vector[..3].iter().all(|&v| v > 0.0));
        assert!(e.vector[3..].iter().all(|&v| v < 0.0));
        assert!(dot(&e.vector, &op.kernel_direction()).abs() < 1e-12);
    }

    #[test]
    fn ordering_examples() {
        let cfg = SolverConfig::default();
        let r = check_lambda2_ordering(&cycle(4).unwrap(), &cfg).unwrap();
        assert!((r.lambda2_normalized - 1.0).abs() < 1e-12);
        assert!((r.lambda2_combinatorial - 2.0).abs() < 1e-12);
        assert!(r.holds);
        let r = check_lambda2_ordering(&k2(), &cfg).unwrap();
        assert!((r.lambda2_normalized - 2.0).abs() < 1e-12);
        assert!((r.lambda2_combinatorial - 2.0).abs() < 1e-12);
        assert!(r.holds);
        assert!(check_lambda2_ordering(&two_triangles(), &cfg).is_err());
    }

    #[test]
    fn config_validation() {
        for cfg in [
            SolverConfig {
                tolerance: 0.0,
                ..SolverConfig::default()
            },
            SolverConfig {
                tolerance: f64::NAN,
                ..SolverConfig::default()
            },
            SolverConfig {
                dense_cutoff: 1,
                ..SolverConfig::default()
            },
        ] {
            assert!(cfg.validate().is_err());
        }
        assert_eq!(SolverConfig::default().iteration_budget(10), 1100);
    }
}
