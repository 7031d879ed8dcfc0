//! Immutable simple undirected graphs and the plain-text edge-list format.
//!
//! Nodes are dense ids `0..n`. Every adjacency list is sorted ascending so
//! neighbor sets can be intersected with a linear merge.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Self-loops, out-of-range ids and
    /// duplicate edges (in either orientation) are rejected.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            check_pair(n, u, v)?;
            if !seen.insert(ordered(u, v)) {
                return Err(Error::InvalidGraph(format!("duplicate edge {u}-{v}")));
            }
        }
        Ok(Self::from_unique_pairs(n, seen.into_iter()))
    }

    /// Builds a graph from pairs that may repeat; duplicates collapse into one edge.
    pub fn from_edges_dedup(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            check_pair(n, u, v)?;
            pairs.push(ordered(u, v));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_unique_pairs(n, pairs.into_iter()))
    }

    /// `pairs` must be normalized (`u < v`), in range and free of duplicates.
    pub(crate) fn from_unique_pairs(
        n: usize,
        pairs: impl Iterator<Item = (NodeId, NodeId)>,
    ) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in pairs {
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, adj, edge_count }
    }

    pub fn complete(n: usize) -> Self {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_unique_pairs(n, pairs)
    }

    /// The cycle `0-1-...-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!(
                "cycle graph needs at least 3 nodes, got {n}"
            )));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, &edges).expect("petersen edge list is valid")
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Returns a copy with one more edge.
    pub fn with_edge(&self, u: NodeId, v: NodeId) -> Result<Self> {
        let mut edges: Vec<_> = self.edges().collect();
        edges.push((u, v));
        Self::from_edges(self.n, &edges)
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.n, self.edge_count)?;
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    /// Parses the edge-list format: a header line `n m_edges` followed by
    /// `m_edges` lines `u v`. Blank lines are skipped.
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input
            .lines()
            .enumerate()
            .filter_map(|(i, line)| match line {
                Ok(l) if l.trim().is_empty() => None,
                other => Some((i + 1, other)),
            });
        let (header_line, header) = match lines.next() {
            Some((i, Ok(l))) => (i, l),
            Some((i, Err(e))) => return Err(parse_err(i, e.to_string())),
            None => return Err(parse_err(1, "missing header `n m_edges`")),
        };
        let (n, expected) = parse_two(&header, header_line)?;

        let mut seen = HashSet::with_capacity(expected);
        let mut pairs = Vec::with_capacity(expected);
        for (line_no, line) in lines {
            let line = line.map_err(|e| parse_err(line_no, e.to_string()))?;
            let (u, v) = parse_two(&line, line_no)?;
            check_pair(n, u, v).map_err(|e| parse_err(line_no, e.to_string()))?;
            let key = ordered(u, v);
            if !seen.insert(key) {
                return Err(parse_err(line_no, format!("duplicate edge {u}-{v}")));
            }
            pairs.push(key);
        }
        if pairs.len() != expected {
            return Err(parse_err(
                header_line,
                format!(
                    "header declares {expected} edges but {} were listed",
                    pairs.len()
                ),
            ));
        }
        Ok(Self::from_unique_pairs(n, pairs.into_iter()))
    }
}

fn ordered(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn check_pair(n: usize, u: NodeId, v: NodeId) -> Result<()> {
    if u == v {
        return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
    }
    if u >= n || v >= n {
        return Err(Error::InvalidGraph(format!(
            "edge {u}-{v} out of range for {n} nodes"
        )));
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_two(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it
            .next()
            .ok_or_else(|| parse_err(line_no, "expected two integers"))?;
        tok.parse()
            .map_err(|_| parse_err(line_no, format!("not a non-negative integer: `{tok}`")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(parse_err(line_no, "trailing tokens"));
    }
    Ok((a, b))
}
