use std::collections::BTreeSet;

use crate::graph::NodeId;

/// An unordered node pair stored as `(low, high)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(NodeId, NodeId);

impl Edge {
    /// Panics on a self-loop.
    pub fn new(u: NodeId, v: NodeId) -> Self {
        assert_ne!(u, v, "self-loop {u}-{v}");
        if u < v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn low(self) -> NodeId {
        self.0
    }

    pub fn high(self) -> NodeId {
        self.1
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSet {
    edges: BTreeSet<Edge>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.edges.insert(e)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.edges.is_subset(&other.edges)
    }

    /// `|E|`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn nodes(&self) -> BTreeSet<NodeId> {
        self.edges.iter().flat_map(|e| [e.0, e.1]).collect()
    }

    /// `‖E‖`.
    pub fn incident_nodes(&self) -> usize {
        incident_node_count(self)
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet {
            edges: iter.into_iter().collect(),
        }
    }
}

impl FromIterator<(NodeId, NodeId)> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = (NodeId, NodeId)>>(iter: I) -> Self {
        iter.into_iter().map(|(u, v)| Edge::new(u, v)).collect()
    }
}

/// Number of distinct nodes incident to at least one edge of `edges`.
pub fn incident_node_count(edges: &EdgeSet) -> usize {
    edges.nodes().len()
}
