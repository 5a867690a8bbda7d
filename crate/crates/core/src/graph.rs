//! Immutable simple undirected graphs in compressed adjacency form.
//!
//! Vertices are dense `0..n` ids. Neighbor lists are stored back to back in a
//! single buffer, sorted ascending, with `offsets[v]..offsets[v + 1]` giving the
//! slice for `v`. Construction rejects self-loops and repeated edges instead of
//! repairing them.

use std::collections::HashSet;

use crate::error::GraphError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list.
    ///
    /// Every pair must be distinct, in range and not a loop. The orientation of
    /// a pair is irrelevant but `(u, v)` and `(v, u)` count as the same edge.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop {
                    line: None,
                    vertex: u,
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge {
                    line: None,
                    u: u.min(v),
                    v: u.max(v),
                });
            }
        }
        Ok(Self::from_simple_edges(n, edges))
    }

    /// Builds from an edge list that is already known to be simple.
    pub(crate) fn from_simple_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; 2 * edges.len()];
        for &(u, v) in edges {
            neighbors[fill[u]] = v;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { offsets, neighbors }
    }

    /// A graph with `n` vertices and no edges.
    pub fn edgeless(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn total_degree(&self) -> usize {
        self.neighbors.len()
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.degree(v) == 0
    }

    pub fn has_isolated_vertices(&self) -> bool {
        (0..self.n()).any(|v| self.is_isolated(v))
    }

    /// Sum of degrees over a vertex subset.
    pub fn degree_of(&self, vertices: &[usize]) -> usize {
        vertices.iter().map(|&v| self.degree(v)).sum()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut comp = vec![s];
            label[s] = id;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// The subgraph induced by `vertices` (any order, duplicates rejected).
    pub fn induce(&self, vertices: &[usize]) -> Result<InducedSubgraph<'_>, GraphError> {
        InducedSubgraph::new(self, vertices)
    }

    /// Checks the structural invariants. Used by tests and loaders.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.n();
        let mut degree_sum = 0;
        for v in 0..n {
            let nb = self.neighbors(v);
            degree_sum += nb.len();
            for (i, &u) in nb.iter().enumerate() {
                if u >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: u, n });
                }
                if u == v {
                    return Err(GraphError::SelfLoop {
                        line: None,
                        vertex: v,
                    });
                }
                if i > 0 && nb[i - 1] >= u {
                    return Err(GraphError::DuplicateEdge {
                        line: None,
                        u: v.min(u),
                        v: v.max(u),
                    });
                }
                if self.neighbors(u).binary_search(&v).is_err() {
                    return Err(GraphError::Asymmetric { u: v, v: u });
                }
            }
        }
        debug_assert_eq!(degree_sum, self.total_degree());
        Ok(())
    }
}

/// Degree-proportional vertex weights `deg(v) / deg(V)`.
pub fn vertex_weights(g: &Graph) -> Result<Vec<f64>, GraphError> {
    if g.m() == 0 {
        return Err(GraphError::Edgeless);
    }
    let total = g.total_degree() as f64;
    Ok((0..g.n()).map(|v| g.degree(v) as f64 / total).collect())
}

/// A vertex subset of a parent graph together with the graph it induces.
///
/// `vertices` holds parent ids in ascending order; local id `i` of
/// [`InducedSubgraph::graph`] corresponds to parent vertex `vertices[i]`.
#[derive(Clone, Debug)]
pub struct InducedSubgraph<'g> {
    parent: &'g Graph,
    vertices: Vec<usize>,
    local: Graph,
}

impl<'g> InducedSubgraph<'g> {
    pub fn new(parent: &'g Graph, vertices: &[usize]) -> Result<Self, GraphError> {
        let n = parent.n();
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex { vertex: w[0] });
            }
        }
        if let Some(&last) = sorted.last() {
            if last >= n {
                return Err(GraphError::VertexOutOfRange { vertex: last, n });
            }
        }
        Ok(Self::from_sorted(parent, sorted))
    }

    /// `vertices` must be sorted, distinct and in range.
    pub(crate) fn from_sorted(parent: &'g Graph, vertices: Vec<usize>) -> Self {
        let mut local_id = vec![usize::MAX; parent.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local_id[v] = i;
        }
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for &v in &vertices {
            // parent lists are sorted and local ids are monotone in parent ids
            neighbors.extend(
                parent
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| local_id[u] != usize::MAX)
                    .map(|&u| local_id[u]),
            );
            offsets.push(neighbors.len());
        }
        InducedSubgraph {
            parent,
            vertices,
            local: Graph { offsets, neighbors },
        }
    }

    pub fn parent(&self) -> &'g Graph {
        self.parent
    }

    /// Parent ids, ascending.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// The induced graph on local ids.
    pub fn graph(&self) -> &Graph {
        &self.local
    }

    pub fn to_parent(&self, local: usize) -> usize {
        self.vertices[local]
    }

    pub fn internal_edges(&self) -> usize {
        self.local.m()
    }

    /// `deg_{G'}(V')`, twice the internal edge count.
    pub fn internal_degree(&self) -> usize {
        self.local.total_degree()
    }

    /// Restricts to the parent ids in `subset` that also belong to this subgraph.
    pub fn induce(&self, subset: &[usize]) -> Result<InducedSubgraph<'g>, GraphError> {
        let n = self.parent.n();
        let mut keep: Vec<usize> = Vec::with_capacity(subset.len());
        for &v in subset {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if self.vertices.binary_search(&v).is_ok() {
                keep.push(v);
            }
        }
        keep.sort_unstable();
        keep.dedup();
        Ok(InducedSubgraph::from_sorted(self.parent, keep))
    }

    /// Internal edges in parent ids, `u < v`.
    pub fn parent_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.local
            .edges()
            .map(move |(a, b)| (self.vertices[a], self.vertices[b]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn csr_layout_is_canonical() {
        let g = Graph::from_edges(4, &[(3, 0), (1, 0), (2, 1)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 3]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.total_degree(), 2 * g.m());
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (1, 2)]);
        g.validate().unwrap();
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(matches!(
            Graph::from_edges(2, &[(1, 1)]),
            Err(GraphError::SelfLoop { vertex: 1, .. })
        ));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 0, v: 1, .. })
        ));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn weights() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(vertex_weights(&k2).unwrap(), vec![0.5, 0.5]);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let w = vertex_weights(&star).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-15);
        for &x in &w[1..] {
            assert!((x - 1.0 / 6.0).abs() < 1e-15);
        }
        assert!(matches!(
            vertex_weights(&Graph::edgeless(3)),
            Err(GraphError::Edgeless)
        ));
    }

    #[test]
    fn induce_pair_of_triangle() {
        let g = k3();
        let sub = g.induce(&[2, 0]).unwrap();
        assert_eq!(sub.vertices(), &[0, 2]);
        assert_eq!(sub.internal_edges(), 1);
        assert_eq!(sub.parent_edges().collect::<Vec<_>>(), vec![(0, 2)]);
        assert!(g.induce(&[0, 3]).is_err());
        assert!(g.induce(&[0, 0]).is_err());
    }

    #[test]
    fn components_sorted_by_smallest_member() {
        let g = Graph::from_edges(6, &[(4, 5), (0, 2), (1, 3)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 2], vec![1, 3], vec![4, 5]]);
        assert!(!g.is_connected());
    }
}
