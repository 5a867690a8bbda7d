//! Edge-list and METIS-style graph files.
//!
//! Edge list: one `u v` pair per line, whitespace separated, 0-based ids.
//! Everything after `#` is a comment. A comment of the exact form
//! `# vertices N` raises the vertex count to `N`, which is how trailing
//! isolated vertices survive a round trip. Written files list each edge once
//! as `u v` with `u < v` in lexicographic order.
//!
//! METIS: lines starting with `%` are comments. The header is `n m`; line `i`
//! of the body lists the 1-based neighbors of vertex `i`, separated by single
//! spaces. Missing trailing body lines mean isolated vertices, so the writer
//! stops after the last vertex with a neighbor and an edgeless graph is just
//! its header.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use crate::error::GraphError;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Metis,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-list" | "edgelist" | "edges" => Ok(Format::EdgeList),
            "metis" => Ok(Format::Metis),
            other => Err(format!(
                "unknown graph format '{other}' (expected edge-list or metis)"
            )),
        }
    }
}

pub fn load_graph<R: Read>(source: R, format: Format) -> Result<Graph, GraphError> {
    let reader = BufReader::new(source);
    let mut lines = Vec::new();
    for line in reader.lines() {
        lines.push(line?);
    }
    match format {
        Format::EdgeList => parse_edge_list(&lines),
        Format::Metis => parse_metis(&lines),
    }
}

pub fn load_graph_str(text: &str, format: Format) -> Result<Graph, GraphError> {
    load_graph(text.as_bytes(), format)
}

pub fn save_graph<W: Write>(g: &Graph, format: Format, mut out: W) -> Result<(), GraphError> {
    out.write_all(graph_to_string(g, format).as_bytes())?;
    Ok(())
}

pub fn graph_to_string(g: &Graph, format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::EdgeList => {
            let implied = g.edges().map(|(_, v)| v + 1).max().unwrap_or(0);
            if g.n() > implied {
                writeln!(s, "# vertices {}", g.n()).unwrap();
            }
            for (u, v) in g.edges() {
                writeln!(s, "{u} {v}").unwrap();
            }
        }
        Format::Metis => {
            writeln!(s, "{} {}", g.n(), g.m()).unwrap();
            let last = (0..g.n()).rev().find(|&v| g.degree(v) > 0);
            if let Some(last) = last {
                for v in 0..=last {
                    let row: Vec<String> =
                        g.neighbors(v).iter().map(|u| (u + 1).to_string()).collect();
                    writeln!(s, "{}", row.join(" ")).unwrap();
                }
            }
        }
    }
    s
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, GraphError> {
    tok.parse::<usize>().map_err(|_| GraphError::Parse {
        line,
        message: format!("expected a non-negative integer, found '{tok}'"),
    })
}

fn parse_edge_list(lines: &[String]) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut declared = 0usize;
    let mut n = 0usize;
    for (idx, raw) in lines.iter().enumerate() {
        let line = idx + 1;
        let (data, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw.as_str(), None),
        };
        if let Some(c) = comment {
            let mut toks = c.split_whitespace();
            if toks.next() == Some("vertices") {
                if let (Some(t), None) = (toks.next(), toks.next()) {
                    declared = declared.max(parse_usize(t, line)?);
                }
            }
        }
        let toks: Vec<&str> = data.split_whitespace().collect();
        match toks.len() {
            0 => continue,
            2 => {}
            k => {
                return Err(GraphError::Parse {
                    line,
                    message: format!("expected 2 vertex ids, found {k} fields"),
                })
            }
        }
        let u = parse_usize(toks[0], line)?;
        let v = parse_usize(toks[1], line)?;
        if u == v {
            return Err(GraphError::SelfLoop {
                line: Some(line),
                vertex: u,
            });
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(GraphError::DuplicateEdge {
                line: Some(line),
                u: key.0,
                v: key.1,
            });
        }
        n = n.max(key.1 + 1);
        edges.push(key);
    }
    Ok(Graph::from_simple_edges(n.max(declared), &edges))
}

fn parse_metis(lines: &[String]) -> Result<Graph, GraphError> {
    let mut body = lines
        .iter()
        .enumerate()
        .map(|(i, l)| (i + 1, l.as_str()))
        .filter(|(_, l)| !l.trim_start().starts_with('%'));
    let (hline, header) =
        body.by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or(GraphError::Parse {
                line: lines.len().max(1),
                message: "missing header".into(),
            })?;
    let htoks: Vec<&str> = header.split_whitespace().collect();
    if htoks.len() < 2 || htoks.len() > 3 {
        return Err(GraphError::Parse {
            line: hline,
            message: "header must be 'n m'".into(),
        });
    }
    let n = parse_usize(htoks[0], hline)?;
    let m = parse_usize(htoks[1], hline)?;
    if htoks.len() == 3 && parse_usize(htoks[2], hline)? != 0 {
        return Err(GraphError::Parse {
            line: hline,
            message: "weighted METIS formats are not supported".into(),
        });
    }

    let mut rows: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
    for (line, text) in body {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if rows.len() == n {
            if toks.is_empty() {
                continue;
            }
            return Err(GraphError::Parse {
                line,
                message: format!("more than {n} vertex lines"),
            });
        }
        let v = rows.len();
        let mut row = Vec::with_capacity(toks.len());
        for t in toks {
            let id = parse_usize(t, line)?;
            if id == 0 || id > n {
                return Err(GraphError::Parse {
                    line,
                    message: format!("neighbor {id} outside 1..={n}"),
                });
            }
            let u = id - 1;
            if u == v {
                return Err(GraphError::SelfLoop {
                    line: Some(line),
                    vertex: v,
                });
            }
            row.push(u);
        }
        let mut sorted = row.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge {
                line: Some(line),
                u: v.min(w[0]),
                v: v.max(w[0]),
            });
        }
        rows.push((line, sorted));
    }
    while rows.len() < n {
        rows.push((0, Vec::new()));
    }

    let mut edges = Vec::new();
    for (v, (_, row)) in rows.iter().enumerate() {
        for &u in row {
            if rows[u].1.binary_search(&v).is_err() {
                return Err(GraphError::Asymmetric { u: v, v: u });
            }
            if v < u {
                edges.push((v, u));
            }
        }
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(Graph::from_simple_edges(n, &edges))
}
