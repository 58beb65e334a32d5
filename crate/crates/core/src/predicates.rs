//! Language predicates deciding membership in a subgraph closure D̂, plus
//! closedness probing and a sufficient termination check.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::dpo::{step_results, GtSystem};
use crate::enumerate::{enumerate_graphs, GraphBounds};
use crate::graph::{Graph, Label, NodeId, Signature};
use crate::matching::first_monomorphism;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PredicateError {
    #[error("unknown predicate {0:?}")]
    UnknownName(String),
    #[error("predicate {name} failed: {reason}")]
    Evaluation { name: String, reason: String },
}

pub type Membership = Arc<dyn Fn(&Graph) -> Result<bool, PredicateError> + Send + Sync>;

/// How closedness of the language under the rules is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closedness {
    Asserted,
    Probed { max_nodes: usize, max_edges: usize },
    Unknown,
}

/// Decides membership in D̂ (the subgraph closure of a language D). May also
/// know D itself, which only matters when D is not subgraph closed.
#[derive(Clone)]
pub struct LanguagePredicate {
    pub name: String,
    closure: Membership,
    language: Option<Membership>,
    pub subgraph_closed: bool,
    pub closedness: Closedness,
}

impl fmt::Debug for LanguagePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LanguagePredicate")
            .field("name", &self.name)
            .field("subgraph_closed", &self.subgraph_closed)
            .field("closedness", &self.closedness)
            .finish()
    }
}

impl LanguagePredicate {
    /// A subgraph-closed language, so D = D̂.
    pub fn closed(name: impl Into<String>, f: impl Fn(&Graph) -> bool + Send + Sync + 'static) -> Self {
        LanguagePredicate {
            name: name.into(),
            closure: Arc::new(move |g| Ok(f(g))),
            language: None,
            subgraph_closed: true,
            closedness: Closedness::Unknown,
        }
    }

    /// A language D given with a decision procedure for its subgraph closure D̂.
    pub fn with_closure(
        name: impl Into<String>,
        language: impl Fn(&Graph) -> bool + Send + Sync + 'static,
        closure: impl Fn(&Graph) -> bool + Send + Sync + 'static,
    ) -> Self {
        LanguagePredicate {
            name: name.into(),
            closure: Arc::new(move |g| Ok(closure(g))),
            language: Some(Arc::new(move |g| Ok(language(g)))),
            subgraph_closed: false,
            closedness: Closedness::Unknown,
        }
    }

    /// A fallible membership test; the caller declares subgraph-closedness.
    pub fn fallible(name: impl Into<String>, subgraph_closed: bool, f: Membership) -> Self {
        LanguagePredicate {
            name: name.into(),
            closure: f,
            language: None,
            subgraph_closed,
            closedness: Closedness::Unknown,
        }
    }

    pub fn with_closedness(mut self, c: Closedness) -> Self {
        self.closedness = c;
        self
    }

    /// G ∈ D̂ — "non-garbage".
    pub fn in_closure(&self, g: &Graph) -> Result<bool, PredicateError> {
        (self.closure)(g)
    }

    /// G ∈ D, when decidable.
    pub fn in_language(&self, g: &Graph) -> Result<Option<bool>, PredicateError> {
        match &self.language {
            Some(f) => f(g).map(Some),
            None if self.subgraph_closed => self.in_closure(g).map(Some),
            None => Ok(None),
        }
    }
}

/// Languages of the form {H | H → T} for a type graph T.
#[derive(Clone, Debug)]
pub struct TypeGraphPredicate {
    pub type_graph: Graph,
}

impl TypeGraphPredicate {
    /// The 2-cycle over a signature: two copies of every node label and
    /// edges of every label between the copies in both directions.
    pub fn two_colour(sig: &Signature) -> Self {
        let mut t = Graph::new();
        let mut side = [Vec::new(), Vec::new()];
        for ids in side.iter_mut() {
            for l in &sig.node_labels {
                ids.push(t.add_node(l.clone()));
            }
        }
        for c in 0..2 {
            for &a in &side[c] {
                for &b in &side[1 - c] {
                    for l in &sig.edge_labels {
                        t.add_edge(a, b, l.clone());
                    }
                }
            }
        }
        TypeGraphPredicate { type_graph: t }
    }

    pub fn predicate(self, name: impl Into<String>) -> LanguagePredicate {
        LanguagePredicate::closed(name, move |g| type_graph_member(g, &self))
    }
}

/// Is there a (not necessarily injective) morphism `h → t.type_graph`?
pub fn type_graph_member(h: &Graph, t: &TypeGraphPredicate) -> bool {
    let tg = &t.type_graph;
    let tedges: HashSet<(NodeId, NodeId, &Label)> = tg.edges().map(|(_, e)| (e.source, e.target, &e.label)).collect();
    let nodes: Vec<(NodeId, &Label)> = h.nodes().collect();
    let idx: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, (n, _))| (*n, i)).collect();
    // edges of h checked once both endpoints are assigned
    let mut due: Vec<Vec<(usize, usize, &Label)>> = vec![Vec::new(); nodes.len()];
    for (_, e) in h.edges() {
        let (s, t) = (idx[&e.source], idx[&e.target]);
        due[s.max(t)].push((s, t, &e.label));
    }
    fn go(
        i: usize,
        nodes: &[(NodeId, &Label)],
        due: &[Vec<(usize, usize, &Label)>],
        tg: &Graph,
        tedges: &HashSet<(NodeId, NodeId, &Label)>,
        assign: &mut Vec<NodeId>,
    ) -> bool {
        if i == nodes.len() {
            return true;
        }
        for (c, l) in tg.nodes() {
            if l != nodes[i].1 {
                continue;
            }
            assign.push(c);
            let ok = due[i].iter().all(|&(s, t, l)| tedges.contains(&(assign[s], assign[t], l)));
            if ok && go(i + 1, nodes, due, tg, tedges, assign) {
                return true;
            }
            assign.pop();
        }
        false
    }
    go(0, &nodes, &due, tg, &tedges, &mut Vec::new())
}

/// The subgraph closure of a finite language.
#[derive(Clone, Debug)]
pub struct FiniteClosurePredicate {
    pub members: Vec<Graph>,
}

impl FiniteClosurePredicate {
    pub fn predicate(self, name: impl Into<String>) -> LanguagePredicate {
        LanguagePredicate::closed(name, move |g| finite_closure_member(g, &self))
    }
}

pub fn finite_closure_member(h: &Graph, f: &FiniteClosurePredicate) -> bool {
    f.members.iter().any(|m| first_monomorphism(h, m).is_some())
}

/// Directed acyclicity; a loop is a cycle.
pub fn is_acyclic(g: &Graph) -> bool {
    acyclic_ignoring(g, |_| false)
}

/// Every directed cycle contains a t-labelled edge.
pub fn every_cycle_has_t(g: &Graph) -> bool {
    acyclic_ignoring(g, |l| l.as_str() == "t")
}

fn acyclic_ignoring(g: &Graph, skip: impl Fn(&Label) -> bool) -> bool {
    // Kahn's algorithm on the edges that are not skipped
    let mut indeg: BTreeMap<NodeId, usize> = g.node_ids().map(|n| (n, 0)).collect();
    let mut succ: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (_, e) in g.edges().filter(|(_, e)| !skip(&e.label)) {
        *indeg.get_mut(&e.target).unwrap() += 1;
        succ.entry(e.source).or_default().push(e.target);
    }
    let mut stack: Vec<NodeId> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&n, _)| n).collect();
    let mut seen = 0;
    while let Some(n) = stack.pop() {
        seen += 1;
        for &m in succ.get(&n).map(|v| v.as_slice()).unwrap_or(&[]) {
            let d = indeg.get_mut(&m).unwrap();
            *d -= 1;
            if *d == 0 {
                stack.push(m);
            }
        }
    }
    seen == g.node_count()
}

/// The underlying undirected multigraph has no cycles (so no loops and no
/// parallel or antiparallel edges either).
pub fn is_forest(g: &Graph) -> bool {
    let ids: Vec<NodeId> = g.node_ids().collect();
    let mut parent: BTreeMap<NodeId, NodeId> = ids.iter().map(|&n| (n, n)).collect();
    fn find(p: &mut BTreeMap<NodeId, NodeId>, x: NodeId) -> NodeId {
        let mut r = x;
        while p[&r] != r {
            r = p[&r];
        }
        p.insert(x, r);
        r
    }
    for (_, e) in g.edges() {
        let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.target));
        if a == b {
            return false;
        }
        parent.insert(a, b);
    }
    true
}

/// Underlying undirected graph is bipartite (loops excluded).
pub fn is_two_colourable(g: &Graph) -> bool {
    let mut colour: BTreeMap<NodeId, bool> = BTreeMap::new();
    let mut adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (_, e) in g.edges() {
        if e.source == e.target {
            return false;
        }
        adj.entry(e.source).or_default().push(e.target);
        adj.entry(e.target).or_default().push(e.source);
    }
    for start in g.node_ids() {
        if colour.contains_key(&start) {
            continue;
        }
        colour.insert(start, false);
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            let c = colour[&n];
            for &m in adj.get(&n).map(|v| v.as_slice()).unwrap_or(&[]) {
                match colour.get(&m) {
                    Some(&d) if d == c => return false,
                    Some(_) => {}
                    None => {
                        colour.insert(m, !c);
                        stack.push(m);
                    }
                }
            }
        }
    }
    true
}

/// Built-in subgraph-closed predicates by name: `all`, `discrete`, `acyclic`,
/// `forest`, `two_colourable`, `efd_t_cycle`, `bounded_degree(k)`.
pub fn builtin(name: &str) -> Result<LanguagePredicate, PredicateError> {
    let name = name.trim();
    let p = match name {
        "all" => LanguagePredicate::closed(name, |_| true),
        "discrete" => LanguagePredicate::closed(name, |g| g.edge_count() == 0),
        "acyclic" => LanguagePredicate::closed(name, is_acyclic),
        "forest" => LanguagePredicate::closed(name, is_forest),
        "two_colourable" | "two_colorable" => LanguagePredicate::closed("two_colourable", is_two_colourable),
        "efd_t_cycle" => LanguagePredicate::closed(name, every_cycle_has_t),
        _ => {
            let k = name
                .strip_prefix("bounded_degree")
                .map(|r| r.trim_matches(|c| c == '(' || c == ')' || c == ':' || c == '='))
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| PredicateError::UnknownName(name.to_string()))?;
            LanguagePredicate::closed(format!("bounded_degree({k})"), move |g| g.node_ids().all(|n| g.degree(n) <= k))
        }
    };
    Ok(p)
}

pub const BUILTIN_NAMES: &[&str] =
    &["all", "discrete", "acyclic", "forest", "two_colourable", "efd_t_cycle", "bounded_degree(k)"];

/// A graph in D with a successor outside D.
#[derive(Clone, Debug)]
pub struct ClosednessViolation {
    pub graph: Graph,
    pub rule: String,
    pub successor: Graph,
}

/// Checks every graph in D within the bounds (up to isomorphism) for a
/// successor leaving D. D is the predicate's language if known, else D̂.
/// Finding nothing is evidence, not proof.
pub fn closedness_probe(
    sys: &GtSystem,
    pred: &LanguagePredicate,
    bounds: GraphBounds,
) -> Result<Vec<ClosednessViolation>, PredicateError> {
    let member = |g: &Graph| -> Result<bool, PredicateError> {
        Ok(match pred.in_language(g)? {
            Some(b) => b,
            None => pred.in_closure(g)?,
        })
    };
    let err = std::sync::Mutex::new(None);
    let keep = |g: &Graph| match member(g) {
        Ok(b) => b,
        Err(e) => {
            *err.lock().unwrap() = Some(e);
            false
        }
    };
    let sig = sys.signature.clone();
    let graphs = enumerate_graphs(&sig, bounds, &keep, pred.subgraph_closed);
    if let Some(e) = err.into_inner().unwrap() {
        return Err(e);
    }
    let mut out = Vec::new();
    for g in graphs {
        for (r, h) in step_results(&g, sys) {
            if !member(&h)? {
                out.push(ClosednessViolation { graph: g.clone(), rule: r.name.clone(), successor: h });
            }
        }
    }
    Ok(out)
}

/// Every rule strictly shrinks |V| + |E| — sufficient for termination.
pub fn check_size_reducing(sys: &GtSystem) -> bool {
    sys.rules.iter().all(|r| r.size_change() > 0)
}

/// Labels used by any rule that are not in `sig` (diagnostics helper).
pub fn labels_outside(g: &Graph, sig: &Signature) -> BTreeSet<Label> {
    let s = g.signature();
    s.node_labels
        .difference(&sig.node_labels)
        .chain(s.edge_labels.difference(&sig.edge_labels))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpo::Rule;

    fn two_cycle_type() -> TypeGraphPredicate {
        TypeGraphPredicate::two_colour(&Signature::unlabelled())
    }

    #[test]
    fn type_graph_membership() {
        let t = two_cycle_type();
        assert_eq!(t.type_graph.node_count(), 2);
        assert_eq!(t.type_graph.edge_count(), 2);
        assert!(type_graph_member(&Graph::unlabelled(1, &[]), &t));
        assert!(!type_graph_member(&Graph::cycle(3), &t));
        assert!(type_graph_member(&Graph::path(2), &t));
        assert!(type_graph_member(&Graph::cycle(4), &t));
    }

    #[test]
    fn finite_closure() {
        let f = FiniteClosurePredicate { members: vec![Graph::path(2)] };
        assert!(finite_closure_member(&Graph::new(), &f));
        assert!(finite_closure_member(&Graph::path(2), &f));
        assert!(!finite_closure_member(&Graph::path(3), &f));
    }

    #[test]
    fn builtins() {
        let acyclic = builtin("acyclic").unwrap();
        assert!(!acyclic.in_closure(&Graph::cycle(3)).unwrap());
        assert!(acyclic.in_closure(&Graph::path(4)).unwrap());
        let efd = builtin("efd_t_cycle").unwrap();
        let mut c = Graph::cycle(3);
        assert!(!efd.in_closure(&c).unwrap());
        c.insert_edge(2, 2, 0, "t");
        assert!(efd.in_closure(&c).unwrap());
        assert!(!builtin("discrete").unwrap().in_closure(&Graph::path(2)).unwrap());
        let bd = builtin("bounded_degree(2)").unwrap();
        assert!(bd.in_closure(&Graph::cycle(5)).unwrap());
        assert!(!bd.in_closure(&Graph::unlabelled(1, &[(0, 0), (0, 0)])).unwrap());
        assert!(!is_forest(&Graph::unlabelled(2, &[(0, 1), (1, 0)])));
        assert!(is_forest(&Graph::unlabelled(3, &[(0, 1), (2, 1)])));
        assert!(matches!(builtin("planar"), Err(PredicateError::UnknownName(_))));
    }

    fn delete_edge_system() -> GtSystem {
        let l = Graph::path(2);
        let k = Graph::unlabelled(2, &[]);
        GtSystem::new("eg_a", Signature::unlabelled(), vec![Rule::new("r1", l, k.clone(), k).unwrap()]).unwrap()
    }

    #[test]
    fn closedness_probes() {
        let sys = delete_edge_system();
        let v = closedness_probe(&sys, &builtin("acyclic").unwrap(), GraphBounds::nodes(4)).unwrap();
        assert!(v.is_empty());
        let connected = LanguagePredicate::fallible(
            "connected",
            false,
            Arc::new(|g: &Graph| Ok(g.node_count() <= 1 || is_weakly_connected(g))),
        );
        let v = closedness_probe(&sys, &connected, GraphBounds::nodes(2)).unwrap();
        assert!(!v.is_empty());
        let empty = GtSystem::new("none", Signature::unlabelled(), vec![]).unwrap();
        assert!(closedness_probe(&empty, &connected, GraphBounds::nodes(3)).unwrap().is_empty());
    }

    fn is_weakly_connected(g: &Graph) -> bool {
        let ids: Vec<_> = g.node_ids().collect();
        let mut seen = BTreeSet::from([ids[0]]);
        let mut changed = true;
        while changed {
            changed = false;
            for (_, e) in g.edges() {
                if seen.contains(&e.source) != seen.contains(&e.target) {
                    seen.insert(e.source);
                    seen.insert(e.target);
                    changed = true;
                }
            }
        }
        seen.len() == ids.len()
    }

    #[test]
    fn size_reducing() {
        assert!(check_size_reducing(&delete_edge_system()));
        let l = Graph::path(2);
        let id = GtSystem::new("id", Signature::unlabelled(), vec![Rule::new("id", l.clone(), l.clone(), l).unwrap()]).unwrap();
        assert!(!check_size_reducing(&id));
    }
}
