//! Small pattern graphs `R` whose copies are counted in a host graph.

use std::fmt;
use std::str::FromStr;

use crate::edges::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::math::factorial;

/// Custom patterns are limited to this many nodes so that permutation and
/// partition enumerations stay cheap.
pub const MAX_CUSTOM_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Clique(usize),
    Cycle(usize),
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphPattern {
    kind: PatternKind,
    nodes: usize,
    edges: Vec<(usize, usize)>,
    aut: u64,
    connected: bool,
}

impl SubgraphPattern {
    /// The complete graph `K_r`, `r >= 1`.
    pub fn clique(r: usize) -> Result<Self> {
        if r == 0 || r > 20 {
            return Err(Error::InvalidPattern(format!(
                "clique size must be in 1..=20, got {r}"
            )));
        }
        let edges = (0..r)
            .flat_map(|u| (u + 1..r).map(move |v| (u, v)))
            .collect();
        Ok(SubgraphPattern {
            kind: PatternKind::Clique(r),
            nodes: r,
            edges,
            aut: factorial(r as u32),
            connected: true,
        })
    }

    /// The cycle `C_r`, `r >= 3`.
    pub fn cycle(r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::InvalidPattern(format!(
                "cycle length must be at least 3, got {r}"
            )));
        }
        let edges = (0..r).map(|i| sort_pair(i, (i + 1) % r)).collect();
        Ok(SubgraphPattern {
            kind: PatternKind::Cycle(r),
            nodes: r,
            edges,
            aut: 2 * r as u64,
            connected: true,
        })
    }

    /// A connected pattern given by its edge list. Nodes are `0..=max id`
    /// and every node must be incident to an edge.
    pub fn custom(edges: &[(usize, usize)]) -> Result<Self> {
        let p = Self::custom_unchecked_connectivity(edges)?;
        if !p.connected {
            return Err(Error::InvalidPattern("pattern must be connected".into()));
        }
        Ok(p)
    }

    /// Node-disjoint union of two patterns, with `b` relabeled after `a`.
    /// The only place disconnected patterns are built.
    pub fn disjoint_union(a: &SubgraphPattern, b: &SubgraphPattern) -> Result<Self> {
        let shift = a.nodes;
        let edges: Vec<_> = a
            .edges
            .iter()
            .copied()
            .chain(b.edges.iter().map(|&(u, v)| (u + shift, v + shift)))
            .collect();
        Self::custom_unchecked_connectivity(&edges)
    }

    fn custom_unchecked_connectivity(edges: &[(usize, usize)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidPattern(
                "pattern needs at least one edge".into(),
            ));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidPattern(format!("self-loop at {u}")));
            }
            norm.push(sort_pair(u, v));
        }
        norm.sort_unstable();
        let before = norm.len();
        norm.dedup();
        if norm.len() != before {
            return Err(Error::InvalidPattern("duplicate edge".into()));
        }
        let nodes = norm.iter().map(|&(_, v)| v).max().unwrap() + 1;
        if nodes > MAX_CUSTOM_NODES {
            return Err(Error::SizeGuard(format!(
                "custom pattern has {nodes} nodes, limit is {MAX_CUSTOM_NODES}"
            )));
        }
        let mut touched = vec![false; nodes];
        for &(u, v) in &norm {
            touched[u] = true;
            touched[v] = true;
        }
        if let Some(iso) = touched.iter().position(|t| !t) {
            return Err(Error::InvalidPattern(format!(
                "node {iso} has no incident edge"
            )));
        }
        let connected = is_connected(nodes, &norm);
        let aut = count_automorphisms_bruteforce(nodes, &norm)?;
        Ok(SubgraphPattern {
            kind: PatternKind::Custom,
            nodes,
            edges: norm,
            aut,
            connected,
        })
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    /// `r = |V(R)|`.
    pub fn node_count(&self) -> usize {
        self.nodes
    }

    /// `s = |E(R)|`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn automorphisms(&self) -> u64 {
        self.aut
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.nodes, &self.edges).expect("pattern edges are valid")
    }

    /// Node bitmask of each edge, indexed like `edges()`.
    pub(crate) fn edge_node_masks(&self) -> Vec<u32> {
        self.edges
            .iter()
            .map(|&(u, v)| (1 << u) | (1 << v))
            .collect()
    }

    /// `‖E‖` for the edge subset selected by `edge_mask`.
    pub(crate) fn incident_nodes_of_mask(&self, edge_mask: u64) -> usize {
        let mut nodes = 0u32;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if edge_mask >> i & 1 == 1 {
                nodes |= (1 << u) | (1 << v);
            }
        }
        nodes.count_ones() as usize
    }
}

/// `|Aut(R)|`: closed form for cliques and cycles, enumeration otherwise.
pub fn automorphism_count(pattern: &SubgraphPattern) -> u64 {
    pattern.aut
}

/// Counts vertex permutations that map the edge set onto itself.
pub fn count_automorphisms_bruteforce(nodes: usize, edges: &[(usize, usize)]) -> Result<u64> {
    if nodes > MAX_CUSTOM_NODES {
        return Err(Error::SizeGuard(format!(
            "automorphism enumeration limited to {MAX_CUSTOM_NODES} nodes, got {nodes}"
        )));
    }
    let mut adj = vec![0u32; nodes];
    for &(u, v) in edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut perm: Vec<usize> = (0..nodes).collect();
    let mut count = 0;
    loop {
        let preserves = edges.iter().all(|&(u, v)| adj[perm[u]] >> perm[v] & 1 == 1);
        if preserves {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(count)
}

/// Lexicographic successor; returns false after the last permutation.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn sort_pair(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn is_connected(nodes: usize, edges: &[(usize, usize)]) -> bool {
    if nodes == 0 {
        return true;
    }
    let mut reached = 1u32;
    loop {
        let mut grown = reached;
        for &(u, v) in edges {
            if reached >> u & 1 == 1 || reached >> v & 1 == 1 {
                grown |= (1 << u) | (1 << v);
            }
        }
        if grown == reached {
            break;
        }
        reached = grown;
    }
    reached.count_ones() as usize == nodes
}

impl fmt::Display for SubgraphPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PatternKind::Clique(r) => write!(f, "clique:{r}"),
            PatternKind::Cycle(r) => write!(f, "cycle:{r}"),
            PatternKind::Custom => {
                write!(f, "custom:")?;
                for (i, (u, v)) in self.edges.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{u}-{v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Accepts `clique:4`, `cycle:5` and `custom:0-1 1-2` (edges separated by
/// spaces, commas or semicolons).
impl FromStr for SubgraphPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidPattern(format!("expected kind:args, got `{s}`")))?;
        let size = || -> Result<usize> {
            rest.trim()
                .parse()
                .map_err(|_| Error::InvalidPattern(format!("bad size `{rest}`")))
        };
        match kind.trim() {
            "clique" | "K" => Self::clique(size()?),
            "cycle" | "C" => Self::cycle(size()?),
            "custom" => {
                let mut edges = Vec::new();
                for tok in rest.split(|c: char| c == ',' || c == ';' || c.is_whitespace()) {
                    if tok.is_empty() {
                        continue;
                    }
                    let (u, v) = tok
                        .split_once('-')
                        .ok_or_else(|| Error::InvalidPattern(format!("bad edge `{tok}`")))?;
                    let parse = |t: &str| {
                        t.parse::<usize>()
                            .map_err(|_| Error::InvalidPattern(format!("bad node id `{t}`")))
                    };
                    edges.push((parse(u)?, parse(v)?));
                }
                Self::custom(&edges)
            }
            other => Err(Error::InvalidPattern(format!(
                "unknown pattern kind `{other}`"
            ))),
        }
    }
}
