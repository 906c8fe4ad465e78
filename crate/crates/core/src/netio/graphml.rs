//! GraphML description of a dynamical network.
//!
//! Dynamics are carried in `<data>` elements under these attribute names:
//!
//! | attr.name | scope | content |
//! |-----------|-------|---------|
//! | `ne_node_dyn` | graph, node | node dynamics registry name |
//! | `ne_node_params` | graph, node | space-separated decimal list |
//! | `ne_edge_dyn` | graph, edge | edge coupling registry name |
//! | `ne_edge_params` | graph, edge | space-separated decimal list |
//!
//! Graph-scope values are the defaults; node and edge values override them.
//! Only `edgedefault="undirected"` graphs are accepted.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::format_f64;
use crate::dynamics::{EdgeCoupling, NetworkSystem, NodeDynamics};
use crate::error::{Error, Result};
use crate::graph::{Edge, Topology};

const NODE_DYN: &str = "ne_node_dyn";
const NODE_PARAMS: &str = "ne_node_params";
const EDGE_DYN: &str = "ne_edge_dyn";
const EDGE_PARAMS: &str = "ne_edge_params";

/// Registry name plus parameter vector.
#[derive(Clone, Debug, PartialEq)]
pub struct DynSpec {
    pub name: String,
    pub params: Vec<f64>,
}

impl DynSpec {
    pub fn new(name: impl Into<String>, params: Vec<f64>) -> Self {
        DynSpec {
            name: name.into(),
            params,
        }
    }
}

/// Per-node or per-edge override. A missing name inherits the graph default;
/// missing params inherit the graph default params when the name is inherited
/// and the registry defaults otherwise.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DynOverride {
    pub name: Option<String>,
    pub params: Option<Vec<f64>>,
}

impl DynOverride {
    fn is_empty(&self) -> bool {
        self.name.is_none() && self.params.is_none()
    }

    fn resolve(&self, default: &DynSpec) -> (String, Option<Vec<f64>>) {
        match (&self.name, &self.params) {
            (Some(n), p) => (n.clone(), p.clone()),
            (None, Some(p)) => (default.name.clone(), Some(p.clone())),
            (None, None) => (default.name.clone(), Some(default.params.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynNetDocument {
    pub topology: Topology,
    pub node_dyn: DynSpec,
    pub edge_dyn: DynSpec,
    pub node_overrides: BTreeMap<usize, DynOverride>,
    pub edge_overrides: BTreeMap<Edge, DynOverride>,
}

impl DynNetDocument {
    pub fn new(topology: Topology, node_dyn: DynSpec, edge_dyn: DynSpec) -> Self {
        DynNetDocument {
            topology,
            node_dyn,
            edge_dyn,
            node_overrides: BTreeMap::new(),
            edge_overrides: BTreeMap::new(),
        }
    }

    /// Resolves every name against the registry.
    pub fn to_system(&self) -> Result<NetworkSystem> {
        let node_dyn = NodeDynamics::lookup(&self.node_dyn.name, Some(&self.node_dyn.params))?;
        let edge_dyn = EdgeCoupling::lookup(&self.edge_dyn.name, Some(&self.edge_dyn.params))?;
        let mut sys = NetworkSystem::new(self.topology.clone(), node_dyn, edge_dyn)?;
        for (&node, o) in &self.node_overrides {
            let (name, params) = o.resolve(&self.node_dyn);
            sys.set_node_override(node, NodeDynamics::lookup(&name, params.as_deref())?)?;
        }
        for (&edge, o) in &self.edge_overrides {
            let (name, params) = o.resolve(&self.edge_dyn);
            sys.set_edge_override(edge, EdgeCoupling::lookup(&name, params.as_deref())?)?;
        }
        Ok(sys)
    }

    /// Document for `sys`; overrides are written out in full.
    pub fn from_system(sys: &NetworkSystem) -> Self {
        let spec = |name: &str, params: &[f64]| DynSpec::new(name, params.to_vec());
        let full = |name: &str, params: &[f64]| DynOverride {
            name: Some(name.to_string()),
            params: Some(params.to_vec()),
        };
        DynNetDocument {
            topology: sys.topology().clone(),
            node_dyn: spec(sys.node_dynamics().name(), sys.node_dynamics().params()),
            edge_dyn: spec(sys.edge_coupling().name(), sys.edge_coupling().params()),
            node_overrides: sys
                .node_overrides()
                .iter()
                .map(|(&n, d)| (n, full(d.name(), d.params())))
                .collect(),
            edge_overrides: sys
                .edge_overrides()
                .iter()
                .filter(|(e, _)| sys.topology().has_edge(**e))
                .map(|(&e, c)| (e, full(c.name(), c.params())))
                .collect(),
        }
    }
}

fn format_params(params: &[f64]) -> String {
    params.iter().map(|v| format_f64(*v)).collect::<Vec<_>>().join(" ")
}

fn parse_params(text: &str, context: &str) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|tok| match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Format(format!("malformed parameter '{tok}' in {context}"))),
        })
        .collect()
}

fn push_data(out: &mut String, indent: &str, key: &str, value: &str) {
    let _ = writeln!(out, "{indent}<data key=\"{key}\">{}</data>", escape(value));
}

fn push_override(out: &mut String, indent: &str, prefix: &str, dyn_key: &str, params_key: &str, o: &DynOverride) {
    if let Some(name) = &o.name {
        push_data(out, indent, &format!("{prefix}_{dyn_key}"), name);
    }
    if let Some(params) = &o.params {
        push_data(out, indent, &format!("{prefix}_{params_key}"), &format_params(params));
    }
}

/// Serializes `doc`. Nodes are written as `n0…n{N-1}`; edges in sorted order.
pub fn to_graphml(doc: &DynNetDocument) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    for (scope, prefix, names) in [
        ("graph", "g", [NODE_DYN, NODE_PARAMS, EDGE_DYN, EDGE_PARAMS].as_slice()),
        ("node", "n", [NODE_DYN, NODE_PARAMS].as_slice()),
        ("edge", "e", [EDGE_DYN, EDGE_PARAMS].as_slice()),
    ] {
        for name in names {
            let _ = writeln!(
                out,
                "  <key id=\"{prefix}_{name}\" for=\"{scope}\" attr.name=\"{name}\" attr.type=\"string\"/>"
            );
        }
    }
    out.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    push_data(&mut out, "    ", &format!("g_{NODE_DYN}"), &doc.node_dyn.name);
    push_data(&mut out, "    ", &format!("g_{NODE_PARAMS}"), &format_params(&doc.node_dyn.params));
    push_data(&mut out, "    ", &format!("g_{EDGE_DYN}"), &doc.edge_dyn.name);
    push_data(&mut out, "    ", &format!("g_{EDGE_PARAMS}"), &format_params(&doc.edge_dyn.params));
    for i in 0..doc.topology.node_count() {
        match doc.node_overrides.get(&i).filter(|o| !o.is_empty()) {
            Some(o) => {
                let _ = writeln!(out, "    <node id=\"n{i}\">");
                push_override(&mut out, "      ", "n", NODE_DYN, NODE_PARAMS, o);
                out.push_str("    </node>\n");
            }
            None => {
                let _ = writeln!(out, "    <node id=\"n{i}\"/>");
            }
        }
    }
    let mut edges: Vec<Edge> = doc.topology.edges().to_vec();
    edges.sort();
    for e in edges {
        let (a, b) = e.endpoints();
        match doc.edge_overrides.get(&e).filter(|o| !o.is_empty()) {
            Some(o) => {
                let _ = writeln!(out, "    <edge source=\"n{a}\" target=\"n{b}\">");
                push_override(&mut out, "      ", "e", EDGE_DYN, EDGE_PARAMS, o);
                out.push_str("    </edge>\n");
            }
            None => {
                let _ = writeln!(out, "    <edge source=\"n{a}\" target=\"n{b}\"/>");
            }
        }
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

pub fn write_graphml(doc: &DynNetDocument, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_graphml(doc)).map_err(|e| Error::io(path, e))
}

pub fn read_graphml(path: impl AsRef<Path>) -> Result<DynNetDocument> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graphml(&text)
}

fn xml_err(e: impl std::fmt::Display) -> Error {
    Error::Format(format!("malformed XML: {e}"))
}

fn attribute(e: &BytesStart<'_>, key: &[u8]) -> Result<Option<String>> {
    for attr in e.attributes() {
        let attr = attr.map_err(xml_err)?;
        if attr.key.local_name().as_ref() == key {
            return Ok(Some(attr.unescape_value().map_err(xml_err)?.into_owned()));
        }
    }
    Ok(None)
}

fn required(e: &BytesStart<'_>, key: &[u8], element: &str) -> Result<String> {
    attribute(e, key)?.ok_or_else(|| {
        Error::Format(format!(
            "<{element}> without '{}' attribute",
            String::from_utf8_lossy(key)
        ))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Scope {
    Graph,
    Node,
    Edge,
}

/// Where a `<data>` value lands.
#[derive(Clone, Copy, Debug)]
enum Owner {
    Graph,
    Node(usize),
    Edge(usize),
}

#[derive(Default)]
struct Collected {
    values: HashMap<&'static str, String>,
}

struct Builder {
    keys: HashMap<String, (Option<Scope>, String)>,
    node_ids: HashMap<String, usize>,
    raw_edges: Vec<(String, String)>,
    graph: Collected,
    nodes: Vec<Collected>,
    edges: Vec<Collected>,
    graphs_seen: usize,
}

impl Builder {
    fn open(&mut self, e: &BytesStart<'_>, stack: &[Owner]) -> Result<Option<Owner>> {
        match e.local_name().as_ref() {
            b"key" => {
                let id = required(e, b"id", "key")?;
                let scope = match attribute(e, b"for")?.as_deref() {
                    Some("graph") => Some(Scope::Graph),
                    Some("node") => Some(Scope::Node),
                    Some("edge") => Some(Scope::Edge),
                    _ => None,
                };
                let name = attribute(e, b"attr.name")?.unwrap_or_else(|| id.clone());
                self.keys.insert(id, (scope, name));
                Ok(None)
            }
            b"graph" => {
                self.graphs_seen += 1;
                if self.graphs_seen > 1 {
                    return Err(Error::Format("nested or multiple <graph> elements".into()));
                }
                match attribute(e, b"edgedefault")?.as_deref() {
                    Some("undirected") => Ok(Some(Owner::Graph)),
                    Some(other) => Err(Error::Format(format!(
                        "edgedefault=\"{other}\" is not supported, graphs must be undirected"
                    ))),
                    None => Err(Error::Format("<graph> without edgedefault".into())),
                }
            }
            b"node" => {
                let id = required(e, b"id", "node")?;
                let idx = self.nodes.len();
                if self.node_ids.insert(id.clone(), idx).is_some() {
                    return Err(Error::Format(format!("duplicate node id '{id}'")));
                }
                self.nodes.push(Collected::default());
                Ok(Some(Owner::Node(idx)))
            }
            b"edge" => {
                if attribute(e, b"directed")?.as_deref() == Some("true") {
                    return Err(Error::Format("directed edges are not supported".into()));
                }
                let source = required(e, b"source", "edge")?;
                let target = required(e, b"target", "edge")?;
                self.raw_edges.push((source, target));
                self.edges.push(Collected::default());
                Ok(Some(Owner::Edge(self.edges.len() - 1)))
            }
            b"data" => {
                if stack.is_empty() {
                    log::warn!("ignoring <data> outside <graph>");
                }
                Ok(None)
            }
            _ => Ok(None),
        }
    }

    fn data(&mut self, owner: Owner, key: &str, value: String) {
        let Some((scope, name)) = self.keys.get(key) else {
            log::warn!("ignoring data for undeclared key '{key}'");
            return;
        };
        let (expected, slot) = match owner {
            Owner::Graph => (Scope::Graph, &mut self.graph),
            Owner::Node(i) => (Scope::Node, &mut self.nodes[i]),
            Owner::Edge(i) => (Scope::Edge, &mut self.edges[i]),
        };
        if scope.is_some_and(|s| s != expected) {
            log::warn!("ignoring key '{key}' used outside its declared scope");
            return;
        }
        let allowed: &[&'static str] = match expected {
            Scope::Graph => &[NODE_DYN, NODE_PARAMS, EDGE_DYN, EDGE_PARAMS],
            Scope::Node => &[NODE_DYN, NODE_PARAMS],
            Scope::Edge => &[EDGE_DYN, EDGE_PARAMS],
        };
        match allowed.iter().find(|a| **a == name.as_str()) {
            Some(a) => {
                slot.values.insert(a, value);
            }
            None => log::warn!("ignoring unknown attribute '{name}'"),
        }
    }

    fn finish(self) -> Result<DynNetDocument> {
        if self.graphs_seen == 0 {
            return Err(Error::Format("no <graph> element".into()));
        }
        let mut topology = Topology::new(self.nodes.len());
        let mut edge_list = Vec::with_capacity(self.raw_edges.len());
        for (s, t) in &self.raw_edges {
            let lookup = |id: &String| {
                self.node_ids
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::Format(format!("edge references unknown node '{id}'")))
            };
            let e = Edge::new(lookup(s)?, lookup(t)?);
            topology
                .add_edge(e)
                .map_err(|err| Error::Format(format!("invalid edge {s}-{t}: {err}")))?;
            edge_list.push(e);
        }

        let default = |key: &'static str, what: &str| {
            self.graph
                .values
                .get(key)
                .cloned()
                .ok_or_else(|| Error::Format(format!("missing graph-level {what} '{key}'")))
        };
        let node_name = default(NODE_DYN, "node dynamics")?;
        let edge_name = default(EDGE_DYN, "edge coupling")?;
        let node_params = match self.graph.values.get(NODE_PARAMS) {
            Some(t) => parse_params(t, NODE_PARAMS)?,
            None => NodeDynamics::lookup(&node_name, None)?.params().to_vec(),
        };
        let edge_params = match self.graph.values.get(EDGE_PARAMS) {
            Some(t) => parse_params(t, EDGE_PARAMS)?,
            None => EdgeCoupling::lookup(&edge_name, None)?.params().to_vec(),
        };

        let to_override = |c: &Collected, dyn_key: &str, params_key: &'static str| -> Result<DynOverride> {
            Ok(DynOverride {
                name: c.values.get(dyn_key).cloned(),
                params: c
                    .values
                    .get(params_key)
                    .map(|t| parse_params(t, params_key))
                    .transpose()?,
            })
        };
        let mut doc = DynNetDocument::new(
            topology,
            DynSpec::new(node_name, node_params),
            DynSpec::new(edge_name, edge_params),
        );
        for (i, c) in self.nodes.iter().enumerate() {
            let o = to_override(c, NODE_DYN, NODE_PARAMS)?;
            if !o.is_empty() {
                doc.node_overrides.insert(i, o);
            }
        }
        for (e, c) in edge_list.iter().zip(&self.edges) {
            let o = to_override(c, EDGE_DYN, EDGE_PARAMS)?;
            if !o.is_empty() {
                doc.edge_overrides.insert(*e, o);
            }
        }
        // Names must resolve against the registry at load time.
        doc.to_system()?;
        Ok(doc)
    }
}

pub fn parse_graphml(text: &str) -> Result<DynNetDocument> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut b = Builder {
        keys: HashMap::new(),
        node_ids: HashMap::new(),
        raw_edges: Vec::new(),
        graph: Collected::default(),
        nodes: Vec::new(),
        edges: Vec::new(),
        graphs_seen: 0,
    };
    // Owners of the enclosing graph/node/edge elements, innermost last.
    let mut owners: Vec<Owner> = Vec::new();
    let mut owner_depths: Vec<usize> = Vec::new();
    let mut depth = 0usize;
    // Key and accumulated text of an open <data> element.
    let mut open_data: Option<(String, String)> = None;

    loop {
        match reader.read_event().map_err(xml_err)? {
            Event::Start(e) => {
                depth += 1;
                if e.local_name().as_ref() == b"data" {
                    open_data = Some((required(&e, b"key", "data")?, String::new()));
                }
                if let Some(owner) = b.open(&e, &owners)? {
                    owners.push(owner);
                    owner_depths.push(depth);
                }
            }
            Event::Empty(e) => {
                if e.local_name().as_ref() == b"data" {
                    let key = required(&e, b"key", "data")?;
                    if let Some(&owner) = owners.last() {
                        b.data(owner, &key, String::new());
                    }
                } else {
                    b.open(&e, &owners)?;
                }
            }
            Event::Text(t) => {
                if let Some((_, buf)) = open_data.as_mut() {
                    buf.push_str(&t.unescape().map_err(xml_err)?);
                }
            }
            Event::CData(t) => {
                if let Some((_, buf)) = open_data.as_mut() {
                    buf.push_str(&String::from_utf8_lossy(&t));
                }
            }
            Event::End(e) => {
                if e.local_name().as_ref() == b"data" {
                    if let (Some((key, value)), Some(&owner)) = (open_data.take(), owners.last()) {
                        b.data(owner, &key, value);
                    }
                }
                if owner_depths.last() == Some(&depth) {
                    owners.pop();
                    owner_depths.pop();
                }
                depth = depth.saturating_sub(1);
            }
            Event::Eof => break,
            _ => {}
        }
    }
    b.finish()
}
