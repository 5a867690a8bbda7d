//! Modularity scoring, the exact small-graph maximum, and lower bounds from
//! separator runs.
//!
//! For a partition `𝒜` of a graph with `m ≥ 1` edges the score is
//! `Σ_A |E(A)|/m − Σ_A (deg(V(A))/2m)²`: the edge contribution minus the degree
//! tax. Over the common denominator `4m²` both terms are integers, which is
//! how the exact variants are computed.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::partitioner::{run_separator, SeparatorConfig, SeparatorError, SeparatorRun};

/// Largest graph accepted by [`brute_force_modularity`].
pub const BRUTE_FORCE_LIMIT: usize = 10;

#[derive(Debug, Error)]
pub enum ModularityError {
    #[error("partition has {found} labels for a graph with {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },

    #[error("graph has no edges")]
    Edgeless,

    #[error("brute force limited to {limit} vertices, got {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("partition line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Separator(#[from] SeparatorError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub internal_edges: usize,
    pub degree: usize,
}

/// Dense block ids with cached per-block tallies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    labels: Vec<usize>,
    blocks: Vec<Block>,
}

impl Partition {
    /// Labels may be arbitrary integers; blocks are renumbered in order of
    /// first appearance.
    pub fn from_labels(g: &Graph, labels: &[usize]) -> Result<Self, ModularityError> {
        if labels.len() != g.n() {
            return Err(ModularityError::LengthMismatch {
                expected: g.n(),
                found: labels.len(),
            });
        }
        let mut remap = std::collections::HashMap::new();
        let dense: Vec<usize> = labels
            .iter()
            .map(|&l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        let mut blocks = vec![
            Block {
                vertices: Vec::new(),
                internal_edges: 0,
                degree: 0,
            };
            remap.len()
        ];
        for (v, &b) in dense.iter().enumerate() {
            blocks[b].vertices.push(v);
            blocks[b].degree += g.degree(v);
        }
        for (u, v) in g.edges() {
            if dense[u] == dense[v] {
                blocks[dense[u]].internal_edges += 1;
            }
        }
        Ok(Partition {
            labels: dense,
            blocks,
        })
    }

    pub fn from_blocks(g: &Graph, blocks: &[Vec<usize>]) -> Result<Self, ModularityError> {
        let mut labels = vec![usize::MAX; g.n()];
        for (i, b) in blocks.iter().enumerate() {
            for &v in b {
                if v >= g.n() || labels[v] != usize::MAX {
                    return Err(ModularityError::LengthMismatch {
                        expected: g.n(),
                        found: v + 1,
                    });
                }
                labels[v] = i;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(ModularityError::LengthMismatch {
                expected: g.n(),
                found: labels.iter().filter(|&&l| l != usize::MAX).count(),
            });
        }
        Self::from_labels(g, &labels)
    }

    pub fn single_block(g: &Graph) -> Self {
        Self::from_labels(g, &vec![0; g.n()]).expect("length matches")
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Reads one block id per line; blank lines and `#` comments are ignored.
pub fn parse_partition(text: &str) -> Result<Vec<usize>, ModularityError> {
    let mut labels = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let data = raw.split('#').next().unwrap_or("").trim();
        if data.is_empty() {
            continue;
        }
        labels.push(data.parse().map_err(|_| ModularityError::Parse {
            line: i + 1,
            message: format!("expected a block id, found '{data}'"),
        })?);
    }
    Ok(labels)
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockTerm {
    pub edge_fraction: f64,
    pub degree_fraction: f64,
    pub term: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularityReport {
    /// `edge_contribution − degree_tax`.
    pub score: f64,
    pub edge_contribution: f64,
    pub degree_tax: f64,
    #[serde(serialize_with = "ser_ratio")]
    pub exact: Ratio<i128>,
    pub blocks: Vec<BlockTerm>,
    /// Set for edgeless graphs, whose modularity is 0 by convention.
    pub edgeless: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i128>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Exact score `(4m Σ|E(A)| − Σ deg(A)²) / 4m²`.
pub fn exact_score(m: usize, blocks: &[Block]) -> Ratio<i128> {
    let m = m as i128;
    let internal: i128 = blocks.iter().map(|b| b.internal_edges as i128).sum();
    let squares: i128 = blocks.iter().map(|b| (b.degree as i128).pow(2)).sum();
    Ratio::new(4 * m * internal - squares, 4 * m * m)
}

pub fn score_partition(g: &Graph, p: &Partition) -> Result<ModularityReport, ModularityError> {
    if p.labels.len() != g.n() {
        return Err(ModularityError::LengthMismatch {
            expected: g.n(),
            found: p.labels.len(),
        });
    }
    if g.m() == 0 {
        return Ok(ModularityReport {
            score: 0.0,
            edge_contribution: 0.0,
            degree_tax: 0.0,
            exact: Ratio::from_integer(0),
            blocks: Vec::new(),
            edgeless: true,
        });
    }
    let m = g.m() as f64;
    let total = g.total_degree() as f64;
    let blocks: Vec<BlockTerm> = p
        .blocks
        .iter()
        .map(|b| {
            let edge_fraction = b.internal_edges as f64 / m;
            let degree_fraction = b.degree as f64 / total;
            BlockTerm {
                edge_fraction,
                degree_fraction,
                term: edge_fraction - degree_fraction * degree_fraction,
            }
        })
        .collect();
    let internal: usize = p.blocks.iter().map(|b| b.internal_edges).sum();
    let edge_contribution = internal as f64 / m;
    let degree_tax: f64 = blocks
        .iter()
        .map(|b| b.degree_fraction * b.degree_fraction)
        .sum();
    Ok(ModularityReport {
        score: edge_contribution - degree_tax,
        edge_contribution,
        degree_tax,
        exact: exact_score(g.m(), &p.blocks),
        blocks,
        edgeless: false,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    #[serde(serialize_with = "ser_ratio")]
    pub exact: Ratio<i128>,
    pub score: f64,
    pub labels: Vec<usize>,
    pub partitions_examined: usize,
}

/// Restricted growth strings of length `n` in lexicographic order:
/// `a[0] = 0` and `a[i] ≤ 1 + max(a[..i])`.
#[derive(Clone, Debug)]
pub struct RestrictedGrowth {
    a: Vec<usize>,
    // prefix maxima: b[i] = 1 + max(a[..i])
    b: Vec<usize>,
    started: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            a: vec![0; n],
            b: vec![1; n],
            started: false,
        }
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let n = self.a.len();
        if !self.started {
            self.started = true;
            return Some(self.a.clone());
        }
        // rightmost position that can still grow
        let j = (1..n).rev().find(|&j| self.a[j] < self.b[j])?;
        self.a[j] += 1;
        for k in j + 1..n {
            self.a[k] = 0;
            self.b[k] = self.b[j].max(self.a[j] + 1);
        }
        Some(self.a.clone())
    }
}

/// Exact maximum modularity over all set partitions.
///
/// Ties keep the first partition in restricted-growth order, so the
/// single-block partition wins whenever the maximum is 0.
pub fn brute_force_modularity(g: &Graph) -> Result<OracleResult, ModularityError> {
    let n = g.n();
    if g.m() == 0 {
        return Err(ModularityError::Edgeless);
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(ModularityError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let m = g.m() as i64;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut best_num = i64::MIN;
    let mut best = Vec::new();
    let mut count = 0;
    let mut degree = vec![0i64; n];
    for rgs in RestrictedGrowth::new(n) {
        count += 1;
        degree.iter_mut().for_each(|d| *d = 0);
        for v in 0..n {
            degree[rgs[v]] += g.degree(v) as i64;
        }
        let internal = edges.iter().filter(|&&(u, v)| rgs[u] == rgs[v]).count() as i64;
        let num = 4 * m * internal - degree.iter().map(|d| d * d).sum::<i64>();
        if num > best_num {
            best_num = num;
            best = rgs;
        }
    }
    let exact = Ratio::new(best_num as i128, 4 * (m as i128).pow(2));
    Ok(OracleResult {
        score: ratio_to_f64(&exact),
        exact,
        labels: best,
        partitions_examined: count,
    })
}

pub fn ratio_to_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// `1 − |D|/m`.
    pub edge_contribution: f64,
    /// `Σ w(A)²` with `w(A) = deg_G(V(A)) / deg(V)`.
    pub degree_tax: f64,
    pub max_weight: f64,
    /// `Σ w(A)² ≤ max_A w(A)`.
    pub tax_within_max_weight: bool,
    /// Strict form of the above.
    pub tax_strictly_below_max_weight: bool,
    pub score: f64,
    /// `score_partition` agrees with `EC − tax` (exactly for EC, within
    /// `1e−12` for the score).
    pub identity_holds: bool,
    pub deleted_fraction: f64,
    pub blocks: usize,
}

/// Treats the run's components as partition blocks and decomposes the score.
pub fn assemble_bound(run: &SeparatorRun, g: &Graph) -> Result<BoundReport, ModularityError> {
    if g.m() == 0 {
        return Err(ModularityError::Edgeless);
    }
    let p = Partition::from_blocks(g, &run.components)?;
    let report = score_partition(g, &p)?;
    let m = g.m();
    let d = run.deleted_edges.len();
    let internal: usize = p.blocks().iter().map(|b| b.internal_edges).sum();
    let edge_contribution = 1.0 - d as f64 / m as f64;
    let total = g.total_degree() as f64;
    let weights: Vec<f64> = p.blocks().iter().map(|b| b.degree as f64 / total).collect();
    let degree_tax: f64 = weights.iter().map(|w| w * w).sum();
    let max_weight = weights.iter().copied().fold(0.0, f64::max);
    // the strict form needs a positive-weight block lighter than the heaviest
    let strict = weights.iter().any(|&w| w > 0.0 && w < max_weight);
    let score = edge_contribution - degree_tax;
    Ok(BoundReport {
        edge_contribution,
        degree_tax,
        max_weight,
        tax_within_max_weight: degree_tax <= max_weight + 1e-15,
        tax_strictly_below_max_weight: strict,
        score,
        identity_holds: internal + d == m && (report.score - score).abs() <= 1e-12,
        deleted_fraction: d as f64 / m as f64,
        blocks: p.len(),
    })
}

/// Score of the separator partition, a certified lower bound on `mod(G)`.
pub fn modularity_lower_bound(
    g: &Graph,
    cfg: &SeparatorConfig,
) -> Result<ModularityReport, ModularityError> {
    lower_bound_with_run(g, cfg).map(|(report, _)| report)
}

/// Like [`modularity_lower_bound`] but also returns the run (absent for
/// edgeless graphs).
pub fn lower_bound_with_run(
    g: &Graph,
    cfg: &SeparatorConfig,
) -> Result<(ModularityReport, Option<SeparatorRun>), ModularityError> {
    if g.m() == 0 {
        let report = score_partition(g, &Partition::single_block(g))?;
        return Ok((report, None));
    }
    let run = run_separator(g, cfg)?;
    let p = Partition::from_blocks(g, &run.components)?;
    Ok((score_partition(g, &p)?, Some(run)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, star, two_triangles, two_triangles_bridge};

    #[test]
    fn single_block_scores_zero() {
        let g = two_triangles_bridge();
        let r = score_partition(&g, &Partition::single_block(&g)).unwrap();
        assert_eq!(r.edge_contribution, 1.0);
        assert_eq!(r.degree_tax, 1.0);
        assert_eq!(r.score, 0.0);
        assert_eq!(r.exact, Ratio::from_integer(0));
    }

    #[test]
    fn hand_checked_scores() {
        let g = two_triangles();
        let p = Partition::from_labels(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
        let r = score_partition(&g, &p).unwrap();
        assert_eq!(r.exact, Ratio::new(1, 2));
        assert!((r.edge_contribution - 1.0).abs() < 1e-15);
        assert!((r.degree_tax - 0.5).abs() < 1e-15);

        let g = two_triangles_bridge();
        let p = Partition::from_labels(&g, &[7, 7, 7, 3, 3, 3]).unwrap();
        let r = score_partition(&g, &p).unwrap();
        assert_eq!(r.exact, Ratio::new(5, 14));
        assert!((r.edge_contribution - 6.0 / 7.0).abs() < 1e-15);
        assert!((r.score - 5.0 / 14.0).abs() < 1e-15);
        assert_eq!(p.labels(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn edgeless_convention() {
        let g = Graph::edgeless(4);
        let r = score_partition(&g, &Partition::single_block(&g)).unwrap();
        assert!(r.edgeless);
        assert_eq!(r.score, 0.0);
        assert!(matches!(
            brute_force_modularity(&g),
            Err(ModularityError::Edgeless)
        ));
        let (lb, run) = lower_bound_with_run(&g, &SeparatorConfig::new(0.5).unwrap()).unwrap();
        assert!(lb.edgeless && run.is_none());
    }

    #[test]
    fn rgs_counts_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            let all: Vec<_> = RestrictedGrowth::new(n).collect();
            assert_eq!(all.len(), b, "n = {n}");
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn oracle_small_cases() {
        let r = brute_force_modularity(&complete(3)).unwrap();
        assert_eq!(r.exact, Ratio::from_integer(0));
        assert_eq!(r.partitions_examined, 5);
        assert_eq!(r.labels, vec![0, 0, 0]);
        let split = Partition::from_labels(&complete(3), &[0, 0, 1]).unwrap();
        assert_eq!(
            score_partition(&complete(3), &split).unwrap().exact,
            Ratio::new(-2, 9)
        );

        let r = brute_force_modularity(&star(7)).unwrap();
        assert_eq!(r.exact, Ratio::from_integer(0));

        let r = brute_force_modularity(&two_triangles()).unwrap();
        assert_eq!(r.exact, Ratio::new(1, 2));
        assert_eq!(r.partitions_examined, 203);
        assert_eq!(r.labels, vec![0, 0, 0, 1, 1, 1]);
        assert!(matches!(
            brute_force_modularity(&complete(11)),
            Err(ModularityError::TooLarge { n: 11, .. })
        ));
    }

    #[test]
    fn partition_file_parsing() {
        assert_eq!(
            parse_partition("0\n# c\n\n1\n1 # x\n").unwrap(),
            vec![0, 1, 1]
        );
        assert!(matches!(
            parse_partition("0\nfoo\n"),
            Err(ModularityError::Parse { line: 2, .. })
        ));
    }
}
