//! Reversible topology edits.

use std::collections::BTreeSet;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::graph::{Edge, Topology};

pub const DEFAULT_MAX_RETRIES: usize = 100;

/// Names accepted by [`mutation_by_name`].
pub const MUTATION_NAMES: [&str; 2] = ["rewire", "rewire_endpoint"];

/// Edge set edit: remove `removed`, then add `added`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MutationProposal {
    pub removed: Vec<Edge>,
    pub added: Vec<Edge>,
}

impl MutationProposal {
    pub fn is_empty(&self) -> bool {
        self.removed.is_empty() && self.added.is_empty()
    }

    pub fn inverse(&self) -> MutationProposal {
        MutationProposal {
            removed: self.added.clone(),
            added: self.removed.clone(),
        }
    }
}

/// Applies `p` to `g`. Nothing is modified when the proposal is inconsistent
/// with the current edge set.
pub fn apply(g: &mut Topology, p: &MutationProposal) -> Result<()> {
    let removed: BTreeSet<Edge> = p.removed.iter().copied().collect();
    if removed.len() != p.removed.len() {
        return Err(Error::Integrity("proposal removes an edge twice".into()));
    }
    if let Some(e) = p.removed.iter().find(|e| !g.has_edge(**e)) {
        return Err(Error::Integrity(format!("proposal removes absent edge {e}")));
    }
    let mut added = BTreeSet::new();
    for e in &p.added {
        if e.is_loop() || e.hi() >= g.node_count() {
            return Err(Error::Integrity(format!("proposal adds invalid edge {e}")));
        }
        if !added.insert(*e) || (g.has_edge(*e) && !removed.contains(e)) {
            return Err(Error::Integrity(format!("proposal duplicates edge {e}")));
        }
    }
    for e in &p.removed {
        g.remove_edge(*e)?;
    }
    for e in &p.added {
        g.add_edge(*e)?;
    }
    Ok(())
}

/// Undoes `p`, which must have been applied to produce `g`.
pub fn revert(g: &mut Topology, p: &MutationProposal) -> Result<()> {
    apply(g, &p.inverse())
}

/// Source of reversible topology edits.
pub trait MutationOperator: Send + Sync {
    fn name(&self) -> &str;

    fn propose(&self, g: &Topology, rng: &mut dyn RngCore) -> Result<MutationProposal>;
}

/// Degree-preserving double-edge swap: `(a,b),(c,d)` becomes `(a,c),(b,d)` or
/// `(a,d),(b,c)`.
#[derive(Clone, Copy, Debug)]
pub struct DoubleEdgeSwap {
    /// Swaps per proposal.
    pub count: usize,
    /// Draws allowed per swap before giving up.
    pub max_retries: usize,
}

impl Default for DoubleEdgeSwap {
    fn default() -> Self {
        DoubleEdgeSwap {
            count: 1,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }
}

fn pick_two_edges(g: &Topology, rng: &mut dyn RngCore) -> (Edge, Edge) {
    let e = g.edge_count();
    let i = rng.random_range(0..e);
    let mut j = rng.random_range(0..e - 1);
    if j >= i {
        j += 1;
    }
    (g.edges()[i], g.edges()[j])
}

impl DoubleEdgeSwap {
    fn one_swap(&self, g: &Topology, rng: &mut dyn RngCore) -> Result<MutationProposal> {
        if g.edge_count() < 2 {
            return Err(Error::NoValidMove("double-edge swap needs at least two edges".into()));
        }
        for _ in 0..self.max_retries {
            let (first, second) = pick_two_edges(g, rng);
            let (a, b) = first.endpoints();
            let (c, d) = second.endpoints();
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let (x, y) = if rng.random_bool(0.5) {
                (Edge::new(a, c), Edge::new(b, d))
            } else {
                (Edge::new(a, d), Edge::new(b, c))
            };
            if g.has_edge(x) || g.has_edge(y) {
                continue;
            }
            return Ok(MutationProposal {
                removed: vec![first, second],
                added: vec![x, y],
            });
        }
        Err(Error::NoValidMove(format!(
            "no valid double-edge swap found in {} draws",
            self.max_retries
        )))
    }
}

impl MutationOperator for DoubleEdgeSwap {
    fn name(&self) -> &str {
        "rewire"
    }

    fn propose(&self, g: &Topology, rng: &mut dyn RngCore) -> Result<MutationProposal> {
        compose(g, self.count, rng, |g, rng| self.one_swap(g, rng))
    }
}

/// Moves one end of a random edge to a random new node. Changes degrees.
#[derive(Clone, Copy, Debug)]
pub struct EndpointRewire {
    pub count: usize,
    pub max_retries: usize,
}

impl Default for EndpointRewire {
    fn default() -> Self {
        EndpointRewire {
            count: 1,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }
}

impl EndpointRewire {
    fn one_move(&self, g: &Topology, rng: &mut dyn RngCore) -> Result<MutationProposal> {
        let n = g.node_count();
        if g.edge_count() == 0 || n < 3 {
            return Err(Error::NoValidMove("endpoint rewire needs an edge and three nodes".into()));
        }
        for _ in 0..self.max_retries {
            let old = g.edges()[rng.random_range(0..g.edge_count())];
            let (a, b) = old.endpoints();
            let kept = if rng.random_bool(0.5) { a } else { b };
            let target = rng.random_range(0..n);
            if target == kept || g.contains(kept, target) {
                continue;
            }
            return Ok(MutationProposal {
                removed: vec![old],
                added: vec![Edge::new(kept, target)],
            });
        }
        Err(Error::NoValidMove(format!(
            "no valid endpoint rewire found in {} draws",
            self.max_retries
        )))
    }
}

impl MutationOperator for EndpointRewire {
    fn name(&self) -> &str {
        "rewire_endpoint"
    }

    fn propose(&self, g: &Topology, rng: &mut dyn RngCore) -> Result<MutationProposal> {
        compose(g, self.count, rng, |g, rng| self.one_move(g, rng))
    }
}

/// Chains `count` single moves, each drawn against the result of the previous
/// one, and returns the net edit.
fn compose<F>(g: &Topology, count: usize, rng: &mut dyn RngCore, mut one: F) -> Result<MutationProposal>
where
    F: FnMut(&Topology, &mut dyn RngCore) -> Result<MutationProposal>,
{
    if count == 0 {
        return Err(Error::Config("mutation count must be at least 1".into()));
    }
    if count == 1 {
        return one(g, rng);
    }
    let mut work = g.clone();
    let mut touched = BTreeSet::new();
    for _ in 0..count {
        let p = one(&work, rng)?;
        touched.extend(p.removed.iter().chain(&p.added).copied());
        apply(&mut work, &p)?;
    }
    let removed = touched
        .iter()
        .filter(|e| g.has_edge(**e) && !work.has_edge(**e))
        .copied()
        .collect();
    let added = touched
        .iter()
        .filter(|e| !g.has_edge(**e) && work.has_edge(**e))
        .copied()
        .collect();
    Ok(MutationProposal { removed, added })
}

/// Draws a proposal of `count` degree-preserving swaps with the default retry
/// budget.
pub fn propose_rewire(g: &Topology, count: usize, rng: &mut dyn RngCore) -> Result<MutationProposal> {
    DoubleEdgeSwap {
        count,
        max_retries: DEFAULT_MAX_RETRIES,
    }
    .propose(g, rng)
}

pub fn mutation_by_name(name: &str, count: usize) -> Result<Box<dyn MutationOperator>> {
    if count == 0 {
        return Err(Error::Config("mutation count must be at least 1".into()));
    }
    match name {
        "rewire" => Ok(Box::new(DoubleEdgeSwap {
            count,
            ..Default::default()
        })),
        "rewire_endpoint" => Ok(Box::new(EndpointRewire {
            count,
            ..Default::default()
        })),
        other => Err(Error::Config(format!(
            "unknown mutation '{other}' (registered: {})",
            MUTATION_NAMES.join(", ")
        ))),
    }
}
