//! Deterministic generators for the graph families used throughout the crate.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GraphError;
use crate::graph::Graph;

/// Upper bound on configuration-model restarts before giving up.
const MAX_PAIRING_ATTEMPTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `K_{1,m}`: size is the number of leaves.
    Star,
    Cycle,
    Path,
    /// `k x k` grid.
    Grid,
    /// `k x k` grid with wrap-around edges, `k >= 3`.
    TorusGrid,
    /// Random Apollonian network; size is the depth `d`, giving `(3^d - 1) / 2`
    /// inserted vertices.
    Apollonian,
    Complete,
    /// Uniform simple 3-regular graph via the pairing model; size is `n`.
    RandomCubic,
    /// Two triangles joined by a bridge. Takes no size.
    TwoTrianglesBridge,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Star,
        Family::Cycle,
        Family::Path,
        Family::Grid,
        Family::TorusGrid,
        Family::Apollonian,
        Family::Complete,
        Family::RandomCubic,
        Family::TwoTrianglesBridge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Grid => "grid",
            Family::TorusGrid => "torus-grid",
            Family::Apollonian => "apollonian",
            Family::Complete => "complete",
            Family::RandomCubic => "random-cubic",
            Family::TwoTrianglesBridge => "two-triangles-bridge",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Family::Apollonian | Family::RandomCubic)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dumbbell" => return Ok(Family::TwoTrianglesBridge),
            "torus" => return Ok(Family::TorusGrid),
            _ => {}
        }
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown graph family '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub family: Family,
    pub size: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, size: usize) -> Self {
        GeneratorSpec {
            family,
            size,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Graph, GraphError> {
    let k = spec.size;
    match spec.family {
        Family::Star => Ok(star(k)),
        Family::Cycle => cycle(k),
        Family::Path => Ok(path(k)),
        Family::Grid => Ok(grid(k)),
        Family::TorusGrid => torus_grid(k),
        Family::Apollonian => apollonian(k, spec.seed),
        Family::Complete => Ok(complete(k)),
        Family::RandomCubic => random_cubic(k, spec.seed),
        Family::TwoTrianglesBridge => Ok(two_triangles_bridge()),
    }
}

pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_simple_edges(leaves + 1, &edges)
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_simple_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::Infeasible(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((0, n - 1));
    Ok(Graph::from_simple_edges(n, &edges))
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_simple_edges(n, &edges)
}

/// Row-major `k x k` grid: vertex `(r, c)` is `r * k + c`.
pub fn grid(k: usize) -> Graph {
    let mut edges = Vec::with_capacity(2 * k * k.saturating_sub(1));
    for r in 0..k {
        for c in 0..k {
            let v = r * k + c;
            if c + 1 < k {
                edges.push((v, v + 1));
            }
            if r + 1 < k {
                edges.push((v, v + k));
            }
        }
    }
    Graph::from_simple_edges(k * k, &edges)
}

pub fn torus_grid(k: usize) -> Result<Graph, GraphError> {
    if k < 3 {
        return Err(GraphError::Infeasible(format!(
            "torus grid needs k >= 3, got {k}"
        )));
    }
    let mut edges = Vec::with_capacity(2 * k * k);
    for r in 0..k {
        for c in 0..k {
            let v = r * k + c;
            edges.push((v, r * k + (c + 1) % k));
            edges.push((v, ((r + 1) % k) * k + c));
        }
    }
    Ok(Graph::from_simple_edges(k * k, &edges))
}

pub fn two_triangles_bridge() -> Graph {
    Graph::from_simple_edges(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)])
}

/// Two disjoint triangles `{0,1,2}` and `{3,4,5}`.
pub fn two_triangles() -> Graph {
    Graph::from_simple_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
}

fn apollonian_insertions(depth: usize) -> Result<usize, GraphError> {
    let pow = u32::try_from(depth)
        .ok()
        .and_then(|d| 3usize.checked_pow(d))
        .ok_or_else(|| GraphError::Infeasible(format!("apollonian depth {depth} too large")))?;
    Ok((pow - 1) / 2)
}

/// Random Apollonian network: start from a triangle and repeatedly place a new
/// vertex inside a face chosen uniformly at random, joining it to the face's
/// three corners.
pub fn apollonian(depth: usize, seed: u64) -> Result<Graph, GraphError> {
    let inserts = apollonian_insertions(depth)?;
    let n = 3 + inserts;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(3 + 3 * inserts);
    edges.extend_from_slice(&[(0, 1), (0, 2), (1, 2)]);
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2]];
    for v in 3..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[i];
        edges.extend_from_slice(&[(a, v), (b, v), (c, v)]);
        faces[i] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([a, c, v]);
    }
    Ok(Graph::from_simple_edges(n, &edges))
}

/// Simple 3-regular graph from the pairing model, restarting from scratch
/// whenever the pairing produces a loop or a repeated edge.
pub fn random_cubic(n: usize, seed: u64) -> Result<Graph, GraphError> {
    random_regular(n, 3, seed)
}

pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if !(n * d).is_multiple_of(2) {
        return Err(GraphError::Infeasible(format!(
            "{d}-regular graph needs n*{d} even, got n = {n}"
        )));
    }
    if d >= n && n > 0 {
        return Err(GraphError::Infeasible(format!(
            "{d}-regular simple graph needs n > {d}, got n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut seen = HashSet::with_capacity(points.len() / 2);
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        points.sort_unstable();
        points.shuffle(&mut rng);
        seen.clear();
        let mut edges = Vec::with_capacity(points.len() / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        return Ok(Graph::from_simple_edges(n, &edges));
    }
    Err(GraphError::Infeasible(format!(
        "no simple pairing found after {MAX_PAIRING_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_families() {
        let s = star(5);
        assert_eq!((s.n(), s.m(), s.max_degree()), (6, 5, 5));
        let g = grid(3);
        assert_eq!((g.n(), g.m()), (9, 12));
        assert_eq!(grid(8).m(), 2 * 8 * 7);
        let t = torus_grid(4).unwrap();
        assert!((0..t.n()).all(|v| t.degree(v) == 4));
        assert_eq!(complete(5).m(), 10);
        let c = cycle(4).unwrap();
        assert_eq!(c.degrees(), vec![2; 4]);
        assert!(cycle(2).is_err());
        let d = two_triangles_bridge();
        assert_eq!(d.degrees(), vec![2, 2, 3, 3, 2, 2]);
        assert!(d.is_connected());
        assert_eq!(two_triangles().components().len(), 2);
    }

    #[test]
    fn random_cubic_is_simple_and_regular() {
        let g = random_cubic(100, 7).unwrap();
        assert_eq!(g.m(), 150);
        assert!((0..g.n()).all(|v| g.degree(v) == 3));
        g.validate().unwrap();
        assert!(random_cubic(7, 1).is_err());
    }

    #[test]
    fn apollonian_counts() {
        for depth in 0..6 {
            let g = apollonian(depth, 3).unwrap();
            let inserted = g.n() - 3;
            assert_eq!(inserted, (3usize.pow(depth as u32) - 1) / 2);
            assert_eq!(g.m(), 3 + 3 * inserted);
            assert!(g.m() <= 3 * g.n() - 6 || g.n() < 3);
            g.validate().unwrap();
        }
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("petersen".parse::<Family>().is_err());
    }
}
