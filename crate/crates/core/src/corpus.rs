//! Built-in test corpus: every connected graph on up to six vertices (one per
//! isomorphism class) plus named fixtures.

use std::collections::BTreeSet;

use crate::generators::{
    self, apollonian, complete, cycle, grid, path, random_cubic, star, torus_grid,
};
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct NamedGraph {
    pub name: String,
    pub graph: Graph,
}

impl NamedGraph {
    fn new(name: impl Into<String>, graph: Graph) -> Self {
        NamedGraph {
            name: name.into(),
            graph,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn mask_connected(n: usize, pairs: &[(usize, usize)], mask: u32) -> bool {
    let mut reach = 1u32;
    loop {
        let mut next = reach;
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask & (1 << i) != 0 && (reach & (1 << u) != 0 || reach & (1 << v) != 0) {
                next |= (1 << u) | (1 << v);
            }
        }
        if next == reach {
            return reach.count_ones() as usize == n;
        }
        reach = next;
    }
}

/// One representative of every isomorphism class of connected graphs on
/// exactly `n` vertices (`2 ≤ n ≤ 6`), as the lexicographically smallest edge
/// mask in its class.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=6).contains(&n), "enumeration supports 1..=6 vertices");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let index = |u: usize, v: usize| {
        pairs
            .iter()
            .position(|&p| p == (u.min(v), u.max(v)))
            .unwrap()
    };
    let maps: Vec<Vec<usize>> = permutations(n)
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut classes = BTreeSet::new();
    for mask in 0u32..(1 << pairs.len()) {
        if !mask_connected(n, &pairs, mask) {
            continue;
        }
        let canon = maps
            .iter()
            .map(|map| {
                map.iter()
                    .enumerate()
                    .filter(|&(i, _)| mask & (1 << i) != 0)
                    .fold(0u32, |acc, (_, &j)| acc | (1 << j))
            })
            .min()
            .unwrap();
        classes.insert(canon);
    }
    classes
        .into_iter()
        .map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_simple_edges(n, &edges)
        })
        .collect()
}

/// Connected graphs on 2..=`max_n` vertices.
pub fn small_connected(max_n: usize) -> Vec<NamedGraph> {
    (2..=max_n)
        .flat_map(|n| {
            connected_graphs(n)
                .into_iter()
                .enumerate()
                .map(move |(i, g)| NamedGraph::new(format!("conn{n}-{i}"), g))
        })
        .collect()
}

pub fn fixtures() -> Vec<NamedGraph> {
    let mut out = Vec::new();
    for k in 2..=10 {
        out.push(NamedGraph::new(format!("star-{k}"), star(k)));
    }
    for n in 3..=16 {
        out.push(NamedGraph::new(format!("path-{n}"), path(n)));
        out.push(NamedGraph::new(format!("cycle-{n}"), cycle(n).unwrap()));
    }
    for k in 2..=8 {
        out.push(NamedGraph::new(format!("grid-{k}"), grid(k)));
    }
    for k in 3..=6 {
        out.push(NamedGraph::new(
            format!("torus-grid-{k}"),
            torus_grid(k).unwrap(),
        ));
    }
    for n in 4..=6 {
        out.push(NamedGraph::new(format!("complete-{n}"), complete(n)));
    }
    out.push(NamedGraph::new(
        "dumbbell",
        generators::two_triangles_bridge(),
    ));
    out.push(NamedGraph::new(
        "two-triangles",
        generators::two_triangles(),
    ));
    for depth in 1..=4 {
        out.push(NamedGraph::new(
            format!("apollonian-{depth}"),
            apollonian(depth, 1).unwrap(),
        ));
    }
    for (n, seed) in [(12, 1), (20, 2), (40, 3), (64, 4)] {
        out.push(NamedGraph::new(
            format!("random-cubic-{n}"),
            random_cubic(n, seed).unwrap(),
        ));
    }
    out
}

/// Small connected graphs up to six vertices followed by the named fixtures.
pub fn builtin() -> Vec<NamedGraph> {
    let mut all = small_connected(6);
    all.extend(fixtures());
    all
}
