//! Node vector fields, edge couplings, and the stacked network derivative.
//!
//! Built-in names:
//!
//! | name | kind | params |
//! |------|------|--------|
//! | `Rossler3` | node | `a b c`, default `0.2 0.2 5.7` |
//! | `Null<m>` | node | none; zero field of dimension `m` |
//! | `Linear<m>` | node | `m·m` row-major matrix `A`, field `A·x` |
//! | `Diffuse<m>` | edge | `σ`, coupling `σ(x_j − x_i)` |
//! | `Diffuse3XZOnly` | edge | `σ`, coupling `σ·diag(1,0,1)(x_j − x_i)` |

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, Topology};
use crate::integrator::VectorField;

pub const ROSSLER_DEFAULT_PARAMS: [f64; 3] = [0.2, 0.2, 5.7];
pub const DEFAULT_COUPLING_STRENGTH: f64 = 0.5;

/// Rössler vector field `(−y − z, x + a·y, b + z·(x − c))`.
pub fn rossler(state: &[f64; 3], params: &[f64; 3]) -> [f64; 3] {
    let [x, y, z] = *state;
    let [a, b, c] = *params;
    [-y - z, x + a * y, b + z * (x - c)]
}

/// `σ·(x_j − x_i)` on every component.
pub fn diffusive_full(x_j: &[f64], x_i: &[f64], sigma: f64) -> Result<Vec<f64>> {
    check_same_dim(x_j, x_i)?;
    Ok(x_j.iter().zip(x_i).map(|(a, b)| sigma * (a - b)).collect())
}

/// `σ·(x_j − x_i)` on the first and third components only.
pub fn diffusive_xz(x_j: &[f64], x_i: &[f64], sigma: f64) -> Result<[f64; 3]> {
    check_same_dim(x_j, x_i)?;
    if x_j.len() != 3 {
        return Err(Error::Config(format!(
            "x/z diffusive coupling needs 3-dimensional states, got {}",
            x_j.len()
        )));
    }
    Ok([sigma * (x_j[0] - x_i[0]), 0.0, sigma * (x_j[2] - x_i[2])])
}

fn check_same_dim(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Config(format!(
            "coupling state dimensions differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum NodeKind {
    Rossler,
    Null,
    Linear,
}

/// A named node vector field with its parameter vector.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeDynamics {
    name: String,
    dim: usize,
    params: Vec<f64>,
    kind: NodeKind,
}

/// Parses `<prefix><m>` into `m`.
fn dim_suffix(name: &str, prefix: &str) -> Option<usize> {
    let digits = name.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&m| m >= 1)
}

impl NodeDynamics {
    /// Resolves a registry name. `params = None` selects the defaults.
    pub fn lookup(name: &str, params: Option<&[f64]>) -> Result<Self> {
        let (kind, dim, defaults): (NodeKind, usize, Option<Vec<f64>>) = if name == "Rossler3" {
            (NodeKind::Rossler, 3, Some(ROSSLER_DEFAULT_PARAMS.to_vec()))
        } else if let Some(m) = dim_suffix(name, "Null") {
            (NodeKind::Null, m, Some(Vec::new()))
        } else if let Some(m) = dim_suffix(name, "Linear") {
            (NodeKind::Linear, m, None)
        } else {
            return Err(Error::Config(format!(
                "unknown node dynamics '{name}' (registered: {})",
                Self::registered_names()
            )));
        };
        let params = match (params, defaults) {
            (Some(p), _) => p.to_vec(),
            (None, Some(d)) => d,
            (None, None) => {
                return Err(Error::Config(format!("node dynamics '{name}' requires parameters")))
            }
        };
        let expected = match kind {
            NodeKind::Rossler => 3,
            NodeKind::Null => 0,
            NodeKind::Linear => dim * dim,
        };
        if params.len() != expected {
            return Err(Error::Config(format!(
                "node dynamics '{name}' takes {expected} parameters, got {}",
                params.len()
            )));
        }
        Ok(NodeDynamics {
            name: name.to_string(),
            dim,
            params,
            kind,
        })
    }

    pub fn rossler(a: f64, b: f64, c: f64) -> Self {
        Self::lookup("Rossler3", Some(&[a, b, c])).expect("Rossler3 is registered")
    }

    pub fn null(dim: usize) -> Self {
        Self::lookup(&format!("Null{dim}"), None).expect("Null<m> is registered")
    }

    /// `ẋ = A·x` with `A` given row-major.
    pub fn linear(dim: usize, matrix: &[f64]) -> Result<Self> {
        Self::lookup(&format!("Linear{dim}"), Some(matrix))
    }

    pub fn registered_names() -> &'static str {
        "Rossler3, Null<m>, Linear<m>"
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Writes the derivative of `x` into `out`.
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        match self.kind {
            NodeKind::Rossler => {
                let d = rossler(
                    &[x[0], x[1], x[2]],
                    &[self.params[0], self.params[1], self.params[2]],
                );
                out.copy_from_slice(&d);
            }
            NodeKind::Null => out.fill(0.0),
            NodeKind::Linear => {
                let m = self.dim;
                for (r, o) in out.iter_mut().enumerate() {
                    let row = &self.params[r * m..(r + 1) * m];
                    *o = row.iter().zip(x).map(|(a, v)| a * v).sum();
                }
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(x, &mut out);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CouplingKind {
    Full,
    XzOnly,
}

/// A named edge coupling; `params[0]` is the coupling strength σ.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeCoupling {
    name: String,
    dim: usize,
    params: Vec<f64>,
    kind: CouplingKind,
}

impl EdgeCoupling {
    pub fn lookup(name: &str, params: Option<&[f64]>) -> Result<Self> {
        let (kind, dim) = if name == "Diffuse3XZOnly" {
            (CouplingKind::XzOnly, 3)
        } else if let Some(m) = dim_suffix(name, "Diffuse") {
            (CouplingKind::Full, m)
        } else {
            return Err(Error::Config(format!(
                "unknown edge coupling '{name}' (registered: {})",
                Self::registered_names()
            )));
        };
        let params = params.map_or_else(|| vec![DEFAULT_COUPLING_STRENGTH], <[f64]>::to_vec);
        if params.len() != 1 {
            return Err(Error::Config(format!(
                "edge coupling '{name}' takes 1 parameter, got {}",
                params.len()
            )));
        }
        Ok(EdgeCoupling {
            name: name.to_string(),
            dim,
            params,
            kind,
        })
    }

    pub fn diffuse(dim: usize, sigma: f64) -> Self {
        Self::lookup(&format!("Diffuse{dim}"), Some(&[sigma])).expect("Diffuse<m> is registered")
    }

    pub fn diffuse_xz(sigma: f64) -> Self {
        Self::lookup("Diffuse3XZOnly", Some(&[sigma])).expect("Diffuse3XZOnly is registered")
    }

    pub fn registered_names() -> &'static str {
        "Diffuse<m>, Diffuse3XZOnly"
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn sigma(&self) -> f64 {
        self.params[0]
    }

    /// Adds the contribution of neighbor `x_j` on `x_i` to `out`.
    pub fn accumulate(&self, x_j: &[f64], x_i: &[f64], out: &mut [f64]) {
        let sigma = self.params[0];
        match self.kind {
            CouplingKind::Full => {
                for ((o, a), b) in out.iter_mut().zip(x_j).zip(x_i) {
                    *o += sigma * (a - b);
                }
            }
            CouplingKind::XzOnly => {
                out[0] += sigma * (x_j[0] - x_i[0]);
                out[2] += sigma * (x_j[2] - x_i[2]);
            }
        }
    }

    pub fn eval(&self, x_j: &[f64], x_i: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.accumulate(x_j, x_i, &mut out);
        out
    }
}

/// Topology plus node and edge dynamics.
///
/// Overrides are keyed by node id or edge. An edge override only takes effect
/// while that edge is present, so rewiring an edge away and back restores it.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSystem {
    topology: Topology,
    node_dyn: NodeDynamics,
    edge_dyn: EdgeCoupling,
    node_overrides: BTreeMap<usize, NodeDynamics>,
    edge_overrides: BTreeMap<Edge, EdgeCoupling>,
}

impl NetworkSystem {
    pub fn new(topology: Topology, node_dyn: NodeDynamics, edge_dyn: EdgeCoupling) -> Result<Self> {
        if node_dyn.dim() != edge_dyn.dim() {
            return Err(Error::Config(format!(
                "node dynamics '{}' has dimension {} but edge coupling '{}' has dimension {}",
                node_dyn.name(),
                node_dyn.dim(),
                edge_dyn.name(),
                edge_dyn.dim()
            )));
        }
        Ok(NetworkSystem {
            topology,
            node_dyn,
            edge_dyn,
            node_overrides: BTreeMap::new(),
            edge_overrides: BTreeMap::new(),
        })
    }

    pub fn set_node_override(&mut self, node: usize, dynamics: NodeDynamics) -> Result<()> {
        if node >= self.topology.node_count() {
            return Err(Error::Config(format!("override for unknown node {node}")));
        }
        if dynamics.dim() != self.dim() {
            return Err(Error::Config(format!(
                "node override '{}' has dimension {}, system uses {}",
                dynamics.name(),
                dynamics.dim(),
                self.dim()
            )));
        }
        self.node_overrides.insert(node, dynamics);
        Ok(())
    }

    pub fn set_edge_override(&mut self, edge: Edge, coupling: EdgeCoupling) -> Result<()> {
        if !self.topology.has_edge(edge) {
            return Err(Error::Config(format!("override for absent edge {edge}")));
        }
        if coupling.dim() != self.dim() {
            return Err(Error::Config(format!(
                "edge override '{}' has dimension {}, system uses {}",
                coupling.name(),
                coupling.dim(),
                self.dim()
            )));
        }
        self.edge_overrides.insert(edge, coupling);
        Ok(())
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn topology_mut(&mut self) -> &mut Topology {
        &mut self.topology
    }

    pub fn node_dynamics(&self) -> &NodeDynamics {
        &self.node_dyn
    }

    pub fn edge_coupling(&self) -> &EdgeCoupling {
        &self.edge_dyn
    }

    pub fn node_overrides(&self) -> &BTreeMap<usize, NodeDynamics> {
        &self.node_overrides
    }

    pub fn edge_overrides(&self) -> &BTreeMap<Edge, EdgeCoupling> {
        &self.edge_overrides
    }

    /// Per-node state dimension `m`.
    pub fn dim(&self) -> usize {
        self.node_dyn.dim()
    }

    /// Stacked state length `N·m`.
    pub fn state_len(&self) -> usize {
        self.topology.node_count() * self.dim()
    }

    pub fn node_dynamics_of(&self, node: usize) -> &NodeDynamics {
        self.node_overrides.get(&node).unwrap_or(&self.node_dyn)
    }

    pub fn coupling_of(&self, edge: Edge) -> &EdgeCoupling {
        self.edge_overrides.get(&edge).unwrap_or(&self.edge_dyn)
    }

    /// The stacked derivative `Ẋ_i = f_i(X_i) + Σ_{j ∈ N(i)} g_ij(X_j, X_i)`.
    pub fn field(&self) -> NetworkField<'_> {
        NetworkField { system: self }
    }
}

/// Borrowed view of a [`NetworkSystem`] as an autonomous vector field.
#[derive(Clone, Copy, Debug)]
pub struct NetworkField<'a> {
    system: &'a NetworkSystem,
}

impl VectorField for NetworkField<'_> {
    fn dim(&self) -> usize {
        self.system.state_len()
    }

    fn eval(&self, _t: f64, x: &[f64], dx: &mut [f64]) {
        let sys = self.system;
        let m = sys.dim();
        let g = &sys.topology;
        let uniform_edges = sys.edge_overrides.is_empty();
        for i in 0..g.node_count() {
            let xi = &x[i * m..(i + 1) * m];
            let out = &mut dx[i * m..(i + 1) * m];
            sys.node_dynamics_of(i).eval_into(xi, out);
            // Neighbor lists are sorted, which fixes the summation order.
            for &j in g.neighbors(i) {
                let coupling = if uniform_edges {
                    &sys.edge_dyn
                } else {
                    sys.coupling_of(Edge::new(i, j))
                };
                coupling.accumulate(&x[j * m..(j + 1) * m], xi, out);
            }
        }
    }
}
