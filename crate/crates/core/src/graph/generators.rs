use super::{Edge, Topology};
use crate::error::{Error, Result};

/// Ring lattice: node `i` is joined to `i ± 1, …, i ± k/2 (mod n)`.
pub fn ring_lattice(n: usize, k: usize) -> Result<Topology> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "ring lattice degree must be even and at least 2, got {k}"
        )));
    }
    if k >= n {
        return Err(Error::Config(format!(
            "ring lattice degree {k} must be smaller than the node count {n}"
        )));
    }
    let mut g = Topology::new(n);
    for i in 0..n {
        for offset in 1..=k / 2 {
            g.add_edge(Edge::new(i, (i + offset) % n))?;
        }
    }
    Ok(g)
}

pub fn complete_graph(n: usize) -> Topology {
    let mut g = Topology::new(n);
    for a in 0..n {
        for b in a + 1..n {
            g.add_edge(Edge::new(a, b)).expect("complete graph edges are distinct");
        }
    }
    g
}

/// Cycle on `n ≥ 3` nodes. Smaller `n` yields a path.
pub fn cycle_graph(n: usize) -> Topology {
    let mut g = path_graph(n);
    if n >= 3 {
        g.add_edge(Edge::new(n - 1, 0)).expect("closing edge is new");
    }
    g
}

pub fn path_graph(n: usize) -> Topology {
    let mut g = Topology::new(n);
    for i in 1..n {
        g.add_edge(Edge::new(i - 1, i)).expect("path edges are distinct");
    }
    g
}
