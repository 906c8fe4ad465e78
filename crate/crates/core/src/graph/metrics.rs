use std::collections::VecDeque;
use std::fmt;

use super::Topology;
use crate::error::{Error, Result};

/// Length of the shortest cycle, or `Acyclic` for forests.
///
/// `Acyclic` orders after every finite girth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Cycle(usize),
    Acyclic,
}

impl Girth {
    pub fn length(&self) -> Option<usize> {
        match self {
            Girth::Cycle(n) => Some(*n),
            Girth::Acyclic => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Cycle(n) => write!(f, "{n}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

/// BFS distances from `source`; `usize::MAX` marks unreachable nodes.
fn bfs_distances(g: &Topology, source: usize, dist: &mut [usize], queue: &mut VecDeque<usize>) {
    dist.fill(usize::MAX);
    queue.clear();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
}

pub fn is_connected(g: &Topology) -> bool {
    let n = g.node_count();
    if n <= 1 {
        return true;
    }
    let mut dist = vec![0; n];
    bfs_distances(g, 0, &mut dist, &mut VecDeque::with_capacity(n));
    dist.iter().all(|&d| d != usize::MAX)
}

/// Largest shortest-path distance over all node pairs.
pub fn diameter(g: &Topology) -> Result<usize> {
    let n = g.node_count();
    let mut dist = vec![0; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut best = 0;
    for s in 0..n {
        bfs_distances(g, s, &mut dist, &mut queue);
        for &d in &dist {
            if d == usize::MAX {
                return Err(Error::Domain("diameter of a disconnected graph".into()));
            }
            best = best.max(d);
        }
    }
    Ok(best)
}

/// Fraction of neighbor pairs of `node` that are themselves adjacent; 0 when
/// the degree is below 2.
pub fn local_clustering(g: &Topology, node: usize) -> f64 {
    let nbrs = g.neighbors(node);
    let d = nbrs.len();
    if d < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if g.contains(a, b) {
                links += 1;
            }
        }
    }
    links as f64 / (d * (d - 1) / 2) as f64
}

/// Mean of the local clustering coefficients.
pub fn avg_clustering(g: &Topology) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    (0..n).map(|i| local_clustering(g, i)).sum::<f64>() / n as f64
}

/// Exact girth: a BFS from every root, closing cycles on non-tree edges.
pub fn girth(g: &Topology) -> Girth {
    let n = g.node_count();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    for root in 0..n {
        dist.fill(usize::MAX);
        queue.clear();
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            // Every closed walk found from here is at least 2·dist[u] long.
            if 2 * dist[u] >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                    if best == 3 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 3 {
            break;
        }
    }
    if best == usize::MAX {
        Girth::Acyclic
    } else {
        Girth::Cycle(best)
    }
}
