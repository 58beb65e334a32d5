//! Directed labelled multigraphs, signatures and morphisms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub type NodeId = u32;
pub type EdgeId = u32;

/// A node or edge label. Ordered by its text so canonical forms are stable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(s: &str) -> Self {
        Label(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

/// Label used for "unlabelled" nodes.
pub const DEFAULT_NODE_LABEL: &str = "dot";
/// Label used for "unlabelled" edges.
pub const DEFAULT_EDGE_LABEL: &str = "plain";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub node_labels: BTreeSet<Label>,
    pub edge_labels: BTreeSet<Label>,
}

impl Signature {
    pub fn new<'a>(
        nodes: impl IntoIterator<Item = &'a str>,
        edges: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        Signature {
            node_labels: nodes.into_iter().map(Label::new).collect(),
            edge_labels: edges.into_iter().map(Label::new).collect(),
        }
    }

    /// The one-letter signature used for "unlabelled" graphs.
    pub fn unlabelled() -> Self {
        Signature::new([DEFAULT_NODE_LABEL], [DEFAULT_EDGE_LABEL])
    }

    pub fn contains(&self, other: &Signature) -> bool {
        other.node_labels.is_subset(&self.node_labels)
            && other.edge_labels.is_subset(&self.edge_labels)
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            node_labels: self.node_labels.union(&other.node_labels).cloned().collect(),
            edge_labels: self.edge_labels.union(&other.edge_labels).cloned().collect(),
        }
    }

    pub fn difference(&self, other: &Signature) -> Signature {
        Signature {
            node_labels: self.node_labels.difference(&other.node_labels).cloned().collect(),
            edge_labels: self.edge_labels.difference(&other.edge_labels).cloned().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub label: Label,
}

/// A finite directed labelled graph. Loops and parallel edges are allowed.
///
/// Fresh ids handed out by [`Graph::add_node`]/[`Graph::add_edge`] are never
/// reused, even after deletions, so ids stay meaningful along a derivation.
#[derive(Clone, Default)]
pub struct Graph {
    nodes: BTreeMap<NodeId, Label>,
    edges: BTreeMap<EdgeId, Edge>,
    next_node: NodeId,
    next_edge: EdgeId,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph {{ nodes: [")?;
        for (i, (n, l)) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{l}")?;
        }
        write!(f, "], edges: [")?;
        for (i, (e, ed)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}:{}-{}->{}", ed.source, ed.label, ed.target)?;
        }
        write!(f, "] }}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    DanglingSource { edge: EdgeId, node: NodeId },
    DanglingTarget { edge: EdgeId, node: NodeId },
    UnknownNodeLabel { node: NodeId, label: Label },
    UnknownEdgeLabel { edge: EdgeId, label: Label },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::DanglingSource { edge, node } => {
                write!(f, "dangling endpoint: source {node} of edge {edge} is not a node")
            }
            Defect::DanglingTarget { edge, node } => {
                write!(f, "dangling endpoint: target {node} of edge {edge} is not a node")
            }
            Defect::UnknownNodeLabel { node, label } => {
                write!(f, "node {node} has label {label} outside the signature")
            }
            Defect::UnknownEdgeLabel { edge, label } => {
                write!(f, "edge {edge} has label {label} outside the signature")
            }
        }
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// |V| + |E|.
    pub fn size(&self) -> usize {
        self.nodes.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Label)> + '_ {
        self.nodes.iter().map(|(&n, l)| (n, l))
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().map(|(&e, ed)| (e, ed))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn has_node(&self, n: NodeId) -> bool {
        self.nodes.contains_key(&n)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn node_label(&self, n: NodeId) -> Option<&Label> {
        self.nodes.get(&n)
    }

    pub fn edge(&self, e: EdgeId) -> Option<&Edge> {
        self.edges.get(&e)
    }

    /// Adds a node with a fresh id.
    pub fn add_node(&mut self, label: impl Into<Label>) -> NodeId {
        let id = self.next_node;
        self.insert_node(id, label);
        id
    }

    /// Adds an edge with a fresh id. Endpoints are not checked; see [`Graph::validate`].
    pub fn add_edge(&mut self, source: NodeId, target: NodeId, label: impl Into<Label>) -> EdgeId {
        let id = self.next_edge;
        self.insert_edge(id, source, target, label);
        id
    }

    /// Inserts (or replaces) a node with a given id.
    pub fn insert_node(&mut self, id: NodeId, label: impl Into<Label>) {
        self.nodes.insert(id, label.into());
        self.next_node = self.next_node.max(id + 1);
    }

    /// Inserts (or replaces) an edge with a given id.
    pub fn insert_edge(&mut self, id: EdgeId, source: NodeId, target: NodeId, label: impl Into<Label>) {
        self.edges.insert(id, Edge { source, target, label: label.into() });
        self.next_edge = self.next_edge.max(id + 1);
    }

    pub fn remove_node(&mut self, n: NodeId) -> Option<Label> {
        self.nodes.remove(&n)
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Option<Edge> {
        self.edges.remove(&e)
    }

    /// The smallest ids that have never been handed out in this graph's history.
    pub fn watermarks(&self) -> (NodeId, EdgeId) {
        (self.next_node, self.next_edge)
    }

    /// Edges incident to `n` (loops reported once).
    pub fn incident_edges(&self, n: NodeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .filter(move |(_, e)| e.source == n || e.target == n)
            .map(|(&id, _)| id)
    }

    /// Total degree; a loop counts twice.
    pub fn degree(&self, n: NodeId) -> usize {
        self.edges
            .values()
            .map(|e| (e.source == n) as usize + (e.target == n) as usize)
            .sum()
    }

    pub fn out_degree(&self, n: NodeId) -> usize {
        self.edges.values().filter(|e| e.source == n).count()
    }

    pub fn in_degree(&self, n: NodeId) -> usize {
        self.edges.values().filter(|e| e.target == n).count()
    }

    /// The labels actually occurring in the graph.
    pub fn signature(&self) -> Signature {
        Signature {
            node_labels: self.nodes.values().cloned().collect(),
            edge_labels: self.edges.values().map(|e| e.label.clone()).collect(),
        }
    }

    /// Structural defects; empty means the graph is well formed.
    pub fn validate(&self) -> Vec<Defect> {
        let mut out = Vec::new();
        for (&id, e) in &self.edges {
            if !self.nodes.contains_key(&e.source) {
                out.push(Defect::DanglingSource { edge: id, node: e.source });
            }
            if !self.nodes.contains_key(&e.target) {
                out.push(Defect::DanglingTarget { edge: id, node: e.target });
            }
        }
        out
    }

    /// Structural defects plus labels that fall outside `sig`.
    pub fn validate_against(&self, sig: &Signature) -> Vec<Defect> {
        let mut out = self.validate();
        for (&id, l) in &self.nodes {
            if !sig.node_labels.contains(l) {
                out.push(Defect::UnknownNodeLabel { node: id, label: l.clone() });
            }
        }
        for (&id, e) in &self.edges {
            if !sig.edge_labels.contains(&e.label) {
                out.push(Defect::UnknownEdgeLabel { edge: id, label: e.label.clone() });
            }
        }
        out
    }

    /// Is `self` an id-level subgraph of `other` (same ids, labels and endpoints)?
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.nodes.iter().all(|(n, l)| other.nodes.get(n) == Some(l))
            && self.edges.iter().all(|(e, ed)| other.edges.get(e) == Some(ed))
    }

    /// Disjoint union; the nodes and edges of `other` are renumbered past ours.
    /// Returns the renaming applied to `other`.
    pub fn disjoint_union(&mut self, other: &Graph) -> Morphism {
        let mut m = Morphism::default();
        for (n, l) in other.nodes() {
            m.nodes.insert(n, self.add_node(l.clone()));
        }
        for (e, ed) in other.edges() {
            let id = self.add_edge(m.nodes[&ed.source], m.nodes[&ed.target], ed.label.clone());
            m.edges.insert(e, id);
        }
        m
    }
}

/// Convenience constructors for small graphs.
impl Graph {
    /// Nodes `0..labels.len()` with the given labels and edges `(src, tgt, label)`.
    pub fn build(node_labels: &[&str], edges: &[(NodeId, NodeId, &str)]) -> Graph {
        let mut g = Graph::new();
        for l in node_labels {
            g.add_node(*l);
        }
        for &(s, t, l) in edges {
            g.add_edge(s, t, l);
        }
        g
    }

    /// Unlabelled graph with `n` nodes and the given edges.
    pub fn unlabelled(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
        let labels = vec![DEFAULT_NODE_LABEL; n];
        let es: Vec<_> = edges.iter().map(|&(s, t)| (s, t, DEFAULT_EDGE_LABEL)).collect();
        Graph::build(&labels, &es)
    }

    /// Unlabelled directed path with `n` nodes.
    pub fn path(n: usize) -> Graph {
        let es: Vec<_> = (1..n as NodeId).map(|i| (i - 1, i)).collect();
        Graph::unlabelled(n, &es)
    }

    /// Unlabelled directed cycle with `n` nodes.
    pub fn cycle(n: usize) -> Graph {
        let es: Vec<_> = (0..n as NodeId).map(|i| (i, (i + 1) % n as NodeId)).collect();
        Graph::unlabelled(n, &es)
    }
}

/// A (possibly partial) graph morphism given by node and edge id maps.
///
/// Matches and comatches are total; track maps are partial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub nodes: BTreeMap<NodeId, NodeId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MorphismDefect {
    #[error("node {0} is mapped but not in the domain, or its image is not in the codomain")]
    BadNode(NodeId),
    #[error("edge {0} is mapped but not in the domain, or its image is not in the codomain")]
    BadEdge(EdgeId),
    #[error("node {0} changes label")]
    NodeLabel(NodeId),
    #[error("edge {0} changes label")]
    EdgeLabel(EdgeId),
    #[error("edge {0} is not structure preserving")]
    Structure(EdgeId),
    #[error("map is not total")]
    NotTotal,
}

impl Morphism {
    pub fn identity(g: &Graph) -> Morphism {
        Morphism {
            nodes: g.node_ids().map(|n| (n, n)).collect(),
            edges: g.edge_ids().map(|e| (e, e)).collect(),
        }
    }

    pub fn node(&self, n: NodeId) -> Option<NodeId> {
        self.nodes.get(&n).copied()
    }

    pub fn edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.edges.get(&e).copied()
    }

    /// `other ∘ self` (apply `self` first). Partial where either side is.
    pub fn then(&self, other: &Morphism) -> Morphism {
        Morphism {
            nodes: self
                .nodes
                .iter()
                .filter_map(|(&a, b)| other.nodes.get(b).map(|&c| (a, c)))
                .collect(),
            edges: self
                .edges
                .iter()
                .filter_map(|(&a, b)| other.edges.get(b).map(|&c| (a, c)))
                .collect(),
        }
    }

    pub fn is_total_on(&self, dom: &Graph) -> bool {
        dom.node_ids().all(|n| self.nodes.contains_key(&n))
            && dom.edge_ids().all(|e| self.edges.contains_key(&e))
    }

    pub fn is_injective(&self) -> bool {
        let ns: BTreeSet<_> = self.nodes.values().collect();
        let es: BTreeSet<_> = self.edges.values().collect();
        ns.len() == self.nodes.len() && es.len() == self.edges.len()
    }

    pub fn is_surjective_onto(&self, cod: &Graph) -> bool {
        let ns: BTreeSet<_> = self.nodes.values().copied().collect();
        let es: BTreeSet<_> = self.edges.values().copied().collect();
        cod.node_ids().all(|n| ns.contains(&n)) && cod.edge_ids().all(|e| es.contains(&e))
    }

    /// Inverse of an injective morphism.
    pub fn inverse(&self) -> Morphism {
        Morphism {
            nodes: self.nodes.iter().map(|(&a, &b)| (b, a)).collect(),
            edges: self.edges.iter().map(|(&a, &b)| (b, a)).collect(),
        }
    }

    /// Structure and label preservation on the domain of definition.
    pub fn check_partial(&self, dom: &Graph, cod: &Graph) -> Result<(), MorphismDefect> {
        for (&a, &b) in &self.nodes {
            match (dom.node_label(a), cod.node_label(b)) {
                (Some(x), Some(y)) if x == y => {}
                (Some(_), Some(_)) => return Err(MorphismDefect::NodeLabel(a)),
                _ => return Err(MorphismDefect::BadNode(a)),
            }
        }
        for (&a, &b) in &self.edges {
            let (Some(x), Some(y)) = (dom.edge(a), cod.edge(b)) else {
                return Err(MorphismDefect::BadEdge(a));
            };
            if x.label != y.label {
                return Err(MorphismDefect::EdgeLabel(a));
            }
            // On the domain of definition: endpoints that are mapped must commute.
            let src_ok = self.nodes.get(&x.source).map_or(true, |&s| s == y.source);
            let tgt_ok = self.nodes.get(&x.target).map_or(true, |&t| t == y.target);
            if !src_ok || !tgt_ok {
                return Err(MorphismDefect::Structure(a));
            }
        }
        Ok(())
    }

    /// A total, structure- and label-preserving morphism `dom → cod`.
    pub fn check_total(&self, dom: &Graph, cod: &Graph) -> Result<(), MorphismDefect> {
        if !self.is_total_on(dom) || self.nodes.len() != dom.node_count() || self.edges.len() != dom.edge_count() {
            return Err(MorphismDefect::NotTotal);
        }
        self.check_partial(dom, cod)
    }
}
