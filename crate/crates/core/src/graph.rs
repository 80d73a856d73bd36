//! Undirected graph containers: a simple graph and an edge multiset.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Undirected simple graph: no self-loops, no parallel edges.
///
/// Neighbor sets are ordered, so iteration over nodes, neighbors and edges
/// is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<u32>>,
    n_edges: usize,
}

impl Graph {
    pub fn new(n_nodes: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n_nodes],
            n_edges: 0,
        }
    }

    pub fn from_edges<I>(n_nodes: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n_nodes);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adj.is_empty() {
            return 0.0;
        }
        2.0 * self.n_edges as f64 / self.adj.len() as f64
    }

    fn check_node(&self, u: usize) -> Result<()> {
        if u >= self.adj.len() {
            return Err(Error::IndexOutOfRange {
                index: u,
                len: self.adj.len(),
            });
        }
        Ok(())
    }

    /// Insert edge `{u, v}`. Returns `false` if it was already present.
    /// Self-loops are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::InvalidParameter(format!(
                "self-loop ({u}, {u}) not allowed in a simple graph"
            )));
        }
        let inserted = self.adj[u].insert(v as u32);
        if inserted {
            self.adj[v].insert(u as u32);
            self.n_edges += 1;
        }
        Ok(inserted)
    }

    /// Remove edge `{u, v}` if present; returns whether it existed.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.adj.len() || v >= self.adj.len() {
            return false;
        }
        let removed = self.adj[u].remove(&(v as u32));
        if removed {
            self.adj[v].remove(&(u as u32));
            self.n_edges -= 1;
        }
        removed
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].contains(&(v as u32))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(|s| s.len()).collect()
    }

    /// Neighbors of `u` in ascending order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().map(|&v| v as usize)
    }

    /// All edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// Flattened adjacency (offsets + neighbor array) for traversal-heavy
    /// metrics. Neighbor runs are sorted ascending.
    pub(crate) fn adjacency_csr(&self) -> (Vec<usize>, Vec<u32>) {
        let n = self.adj.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut nbrs = Vec::with_capacity(2 * self.n_edges);
        offsets.push(0);
        for set in &self.adj {
            nbrs.extend(set.iter().copied());
            offsets.push(nbrs.len());
        }
        (offsets, nbrs)
    }
}

/// Undirected multigraph: the edge multiset may contain self-loops and
/// parallel edges. A self-loop contributes 2 to its node's degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n_nodes: usize,
    edges: Vec<(u32, u32)>,
}

impl MultiGraph {
    pub fn new(n_nodes: usize) -> Self {
        MultiGraph {
            n_nodes,
            edges: Vec::new(),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Append edge `{u, v}` (normalized so `u <= v`). Self-loops allowed.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n_nodes || v >= self.n_nodes {
            return Err(Error::IndexOutOfRange {
                index: u.max(v),
                len: self.n_nodes,
            });
        }
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        self.edges.push((a as u32, b as u32));
        Ok(())
    }

    /// Edges in insertion order, normalized `(u, v)` with `u <= v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    /// Degree of every node; each self-loop counts twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n_nodes];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }
}
