//! Undirected simple graphs and the structural quantities computed on them.

mod generators;
mod metrics;
mod spectrum;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub use generators::{complete_graph, cycle_graph, path_graph, ring_lattice};
pub use metrics::{avg_clustering, diameter, girth, is_connected, local_clustering, Girth};
pub use spectrum::{laplacian_matrix, laplacian_spectrum, SpectrumResult};

/// An undirected edge stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Self-loops are representable here but
    /// rejected by [`Topology`].
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn is_loop(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

impl From<(usize, usize)> for Edge {
    fn from((a, b): (usize, usize)) -> Self {
        Edge::new(a, b)
    }
}

/// Undirected simple graph on nodes `0..node_count`.
///
/// Edges are kept in an indexable list (for uniform sampling), a hash index
/// (for membership), and sorted per-node neighbor lists (for traversal). All
/// three are updated together by [`Topology::add_edge`] and
/// [`Topology::remove_edge`].
#[derive(Clone, Debug)]
pub struct Topology {
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl Topology {
    /// A graph with `node_count` isolated nodes.
    pub fn new(node_count: usize) -> Self {
        Topology {
            edges: Vec::new(),
            index: HashMap::new(),
            adjacency: vec![Vec::new(); node_count],
        }
    }

    pub fn from_edges<I, E>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut g = Topology::new(node_count);
        for e in edges {
            g.add_edge(e.into())?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in internal order. The order is an implementation detail and
    /// changes as edges are removed.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().collect()
    }

    /// Sorted neighbor list of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.index.contains_key(&e)
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.has_edge(Edge::new(a, b))
    }

    pub fn add_edge(&mut self, e: Edge) -> Result<()> {
        let n = self.node_count();
        if e.hi >= n {
            return Err(Error::Integrity(format!(
                "edge {e} references a node outside 0..{n}"
            )));
        }
        if e.is_loop() {
            return Err(Error::Integrity(format!("self-loop {e}")));
        }
        if self.index.contains_key(&e) {
            return Err(Error::Integrity(format!("duplicate edge {e}")));
        }
        self.index.insert(e, self.edges.len());
        self.edges.push(e);
        insert_sorted(&mut self.adjacency[e.lo], e.hi);
        insert_sorted(&mut self.adjacency[e.hi], e.lo);
        Ok(())
    }

    pub fn remove_edge(&mut self, e: Edge) -> Result<()> {
        let Some(pos) = self.index.remove(&e) else {
            return Err(Error::Integrity(format!("edge {e} is not present")));
        };
        self.edges.swap_remove(pos);
        if let Some(moved) = self.edges.get(pos) {
            self.index.insert(*moved, pos);
        }
        remove_sorted(&mut self.adjacency[e.lo], e.hi);
        remove_sorted(&mut self.adjacency[e.hi], e.lo);
        Ok(())
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Config("not a permutation of the node set".into()));
        }
        Topology::from_edges(n, self.edges.iter().map(|e| Edge::new(perm[e.lo], perm[e.hi])))
    }
}

impl PartialEq for Topology {
    fn eq(&self, other: &Self) -> bool {
        self.node_count() == other.node_count()
            && self.edge_count() == other.edge_count()
            && self.edges.iter().all(|e| other.has_edge(*e))
    }
}

impl Eq for Topology {}

fn insert_sorted(list: &mut Vec<usize>, v: usize) {
    if let Err(pos) = list.binary_search(&v) {
        list.insert(pos, v);
    }
}

fn remove_sorted(list: &mut Vec<usize>, v: usize) {
    if let Ok(pos) = list.binary_search(&v) {
        list.remove(pos);
    }
}
