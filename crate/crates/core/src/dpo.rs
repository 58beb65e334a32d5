//! Rules, the dangling condition, double-pushout derivations, inversion and
//! reduction to normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canon::{canonical_key, CanonicalKey};
use crate::graph::{Defect, Graph, Morphism, NodeId, Signature};
use crate::matching::for_each_monomorphism;

pub const DEFAULT_STEP_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("rule {rule}: interface is not a subgraph of the left-hand side")]
    InterfaceNotInLhs { rule: String },
    #[error("rule {rule}: interface is not a subgraph of the right-hand side")]
    InterfaceNotInRhs { rule: String },
    #[error("rule {rule}: {defect}")]
    Malformed { rule: String, defect: Defect },
    #[error("rule {rule} uses labels outside the signature")]
    OutsideSignature { rule: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DpoError {
    #[error("match violates the dangling condition")]
    Dangling,
    #[error("not a match: {0}")]
    NotAMatch(String),
    #[error("step budget of {0} exhausted before reaching a normal form")]
    BudgetExhausted(usize),
}

/// A span of inclusions L ⊇ K ⊆ R; K shares its ids with L and R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub lhs: Graph,
    pub interface: Graph,
    pub rhs: Graph,
}

impl Rule {
    pub fn new(name: impl Into<String>, lhs: Graph, interface: Graph, rhs: Graph) -> Result<Rule, RuleError> {
        let rule = Rule { name: name.into(), lhs, interface, rhs };
        rule.check()?;
        Ok(rule)
    }

    pub fn check(&self) -> Result<(), RuleError> {
        for g in [&self.lhs, &self.interface, &self.rhs] {
            if let Some(d) = g.validate().into_iter().next() {
                return Err(RuleError::Malformed { rule: self.name.clone(), defect: d });
            }
        }
        if !self.interface.is_subgraph_of(&self.lhs) {
            return Err(RuleError::InterfaceNotInLhs { rule: self.name.clone() });
        }
        if !self.interface.is_subgraph_of(&self.rhs) {
            return Err(RuleError::InterfaceNotInRhs { rule: self.name.clone() });
        }
        Ok(())
    }

    /// Swaps the two sides; the name gets (or loses) a `⁻¹` suffix.
    pub fn invert(&self) -> Rule {
        let name = match self.name.strip_suffix("⁻¹") {
            Some(base) => base.to_string(),
            None => format!("{}⁻¹", self.name),
        };
        Rule { name, lhs: self.rhs.clone(), interface: self.interface.clone(), rhs: self.lhs.clone() }
    }

    /// |V|+|E| of L minus that of R.
    pub fn size_change(&self) -> isize {
        self.lhs.size() as isize - self.rhs.size() as isize
    }

    pub fn deletes_node(&self, n: NodeId) -> bool {
        self.lhs.has_node(n) && !self.interface.has_node(n)
    }

    pub fn signature(&self) -> Signature {
        self.lhs.signature().union(&self.rhs.signature())
    }

    /// Automorphisms of L that fix K pointwise. Composing a match with one of
    /// these yields the same derivation.
    pub fn interface_automorphisms(&self) -> Vec<Morphism> {
        crate::matching::automorphisms(&self.lhs)
            .into_iter()
            .filter(|a| {
                self.interface.node_ids().all(|n| a.nodes[&n] == n)
                    && self.interface.edge_ids().all(|e| a.edges[&e] == e)
            })
            .collect()
    }
}

/// A GT system: a signature and an ordered list of rules.
#[derive(Clone, Debug)]
pub struct GtSystem {
    pub name: String,
    pub signature: Signature,
    pub rules: Vec<Arc<Rule>>,
}

impl GtSystem {
    pub fn new(name: impl Into<String>, signature: Signature, rules: Vec<Rule>) -> Result<GtSystem, RuleError> {
        for r in &rules {
            r.check()?;
            if !signature.contains(&r.signature()) {
                return Err(RuleError::OutsideSignature { rule: r.name.clone() });
            }
        }
        Ok(GtSystem { name: name.into(), signature, rules: rules.into_iter().map(Arc::new).collect() })
    }

    /// The system with every rule inverted.
    pub fn inverted(&self) -> GtSystem {
        GtSystem {
            name: self.name.clone(),
            signature: self.signature.clone(),
            rules: self.rules.iter().map(|r| Arc::new(r.invert())).collect(),
        }
    }

    pub fn rule(&self, name: &str) -> Option<&Arc<Rule>> {
        self.rules.iter().find(|r| r.name == name)
    }
}

/// A match of a rule: an injective morphism L → host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub rule: Arc<Rule>,
    pub embedding: Morphism,
}

/// One rule application G ⇒ H with all the maps of the double pushout.
#[derive(Clone, Debug)]
pub struct DirectDerivation {
    pub rule: Arc<Rule>,
    pub host: Graph,
    /// g: L → G
    pub matching: Morphism,
    /// D = G − g(L − K)
    pub context: Graph,
    pub result: Graph,
    /// h: R → H
    pub comatch: Morphism,
    /// D → G (identity on ids)
    pub inclusion_in: Morphism,
    /// D → H (identity on ids)
    pub inclusion_out: Morphism,
    /// partial G → H, defined on items outside g(L − K)
    pub track: Morphism,
}

/// True iff no node of g(L − K) touches an edge of the host outside g(L).
pub fn check_dangling(rule: &Rule, host: &Graph, m: &Morphism) -> bool {
    let deleted: BTreeSet<NodeId> = rule
        .lhs
        .node_ids()
        .filter(|n| !rule.interface.has_node(*n))
        .map(|n| m.nodes[&n])
        .collect();
    if deleted.is_empty() {
        return true;
    }
    let matched: BTreeSet<_> = m.edges.values().copied().collect();
    host.edges()
        .all(|(id, e)| matched.contains(&id) || !(deleted.contains(&e.source) || deleted.contains(&e.target)))
}

/// Matches of `rule` in `host` (dangling condition not checked), canonical order.
pub fn matches(rule: &Arc<Rule>, host: &Graph) -> Vec<Match> {
    crate::matching::enumerate_monomorphisms(&rule.lhs, host)
        .into_iter()
        .map(|embedding| Match { rule: rule.clone(), embedding })
        .collect()
}

/// The result graph and comatch, skipping the bookkeeping of [`apply`].
/// Caller guarantees the dangling condition.
pub fn apply_graph(rule: &Rule, host: &Graph, m: &Morphism) -> (Graph, Morphism) {
    let mut h = host.clone();
    for e in rule.lhs.edge_ids().filter(|e| !rule.interface.has_edge(*e)) {
        h.remove_edge(m.edges[&e]);
    }
    for n in rule.lhs.node_ids().filter(|n| !rule.interface.has_node(*n)) {
        h.remove_node(m.nodes[&n]);
    }
    let mut co = Morphism::default();
    for (n, l) in rule.rhs.nodes() {
        let id = if rule.interface.has_node(n) { m.nodes[&n] } else { h.add_node(l.clone()) };
        co.nodes.insert(n, id);
    }
    for (e, ed) in rule.rhs.edges() {
        let id = if rule.interface.has_edge(e) {
            m.edges[&e]
        } else {
            h.add_edge(co.nodes[&ed.source], co.nodes[&ed.target], ed.label.clone())
        };
        co.edges.insert(e, id);
    }
    (h, co)
}

/// The double-pushout step at match `m`.
pub fn apply(rule: &Arc<Rule>, host: &Graph, m: &Morphism) -> Result<DirectDerivation, DpoError> {
    m.check_total(&rule.lhs, host).map_err(|e| DpoError::NotAMatch(e.to_string()))?;
    if !m.is_injective() {
        return Err(DpoError::NotAMatch("not injective".into()));
    }
    if !check_dangling(rule, host, m) {
        return Err(DpoError::Dangling);
    }
    let mut context = host.clone();
    for e in rule.lhs.edge_ids().filter(|e| !rule.interface.has_edge(*e)) {
        context.remove_edge(m.edges[&e]);
    }
    for n in rule.lhs.node_ids().filter(|n| !rule.interface.has_node(*n)) {
        context.remove_node(m.nodes[&n]);
    }
    let (result, comatch) = apply_graph(rule, host, m);
    let inclusion = Morphism::identity(&context);
    Ok(DirectDerivation {
        rule: rule.clone(),
        host: host.clone(),
        matching: m.clone(),
        context,
        result,
        comatch,
        inclusion_in: inclusion.clone(),
        inclusion_out: inclusion.clone(),
        track: inclusion,
    })
}

/// Applies the inverted rule at the comatch; the result is isomorphic
/// (indeed, up to fresh ids, equal) to the original host.
pub fn derivation_roundtrip(d: &DirectDerivation) -> DirectDerivation {
    let inv = Arc::new(d.rule.invert());
    apply(&inv, &d.result, &d.comatch).expect("the comatch of a derivation satisfies the dangling condition")
}

/// Visits every (rule, match) pair that yields a derivation, in rule order then
/// canonical match order.
pub fn for_each_step(g: &Graph, sys: &GtSystem, mut f: impl FnMut(&Arc<Rule>, &Morphism) -> ControlFlow<()>) {
    for r in &sys.rules {
        let mut flow = ControlFlow::Continue(());
        for_each_monomorphism(&r.lhs, g, |m| {
            if check_dangling(r, g, m) {
                flow = f(r, m);
                flow
            } else {
                ControlFlow::Continue(())
            }
        });
        if flow.is_break() {
            return;
        }
    }
}

/// Classes of interchangeable nodes: same label, mark and loops, identical
/// edges to every other node, and not adjacent to each other. Permuting
/// nodes within a class is an automorphism preserving the marks.
pub fn twin_classes(g: &Graph, marks: &BTreeMap<NodeId, u32>) -> BTreeMap<NodeId, usize> {
    let mut incident: BTreeMap<NodeId, Vec<(NodeId, bool, &str)>> = g.node_ids().map(|n| (n, Vec::new())).collect();
    for (_, e) in g.edges() {
        let l = e.label.as_str();
        incident.get_mut(&e.source).unwrap().push((e.target, true, l));
        if e.source != e.target {
            incident.get_mut(&e.target).unwrap().push((e.source, false, l));
        }
    }
    let mut ids: BTreeMap<(&str, Option<u32>, Vec<(NodeId, bool, &str)>), usize> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for (n, mut inc) in incident {
        inc.sort_unstable();
        let next = ids.len();
        let key = (g.node_label(n).unwrap().as_str(), marks.get(&n).copied(), inc);
        out.insert(n, *ids.entry(key).or_insert(next));
    }
    out
}

/// As [`for_each_step`], but skips matches that differ from an earlier one
/// only by a permutation of twin nodes (see [`twin_classes`]) or of
/// parallel edges; the skipped results are isomorphic (respecting marks)
/// to ones already reported.
pub fn for_each_distinct_step(
    g: &Graph,
    marks: &BTreeMap<NodeId, u32>,
    sys: &GtSystem,
    mut f: impl FnMut(&Arc<Rule>, &Morphism) -> ControlFlow<()>,
) {
    let classes = twin_classes(g, marks);
    let mut seen: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    for (i, r) in sys.rules.iter().enumerate() {
        let mut flow = ControlFlow::Continue(());
        for_each_monomorphism(&r.lhs, g, |m| {
            let sig = m.nodes.values().map(|v| classes[v]).collect();
            if seen.insert((i, sig)) && check_dangling(r, g, m) {
                flow = f(r, m);
                flow
            } else {
                ControlFlow::Continue(())
            }
        });
        if flow.is_break() {
            return;
        }
    }
}

/// All one-step results (not deduplicated), with the rule used.
pub fn step_results(g: &Graph, sys: &GtSystem) -> Vec<(Arc<Rule>, Graph)> {
    let mut out = Vec::new();
    for_each_step(g, sys, |r, m| {
        out.push((r.clone(), apply_graph(r, g, m).0));
        ControlFlow::Continue(())
    });
    out
}

/// One representative derivation per isomorphism class of result.
pub fn successors(g: &Graph, sys: &GtSystem) -> Vec<(DirectDerivation, CanonicalKey)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for_each_distinct_step(g, &BTreeMap::new(), sys, |r, m| {
        let (h, _) = apply_graph(r, g, m);
        let k = canonical_key(&h);
        if seen.insert(k.clone()) {
            out.push((apply(r, g, m).expect("checked match"), k));
        }
        ControlFlow::Continue(())
    });
    out
}

pub fn is_normal_form(g: &Graph, sys: &GtSystem) -> bool {
    let mut found = false;
    for_each_step(g, sys, |_, _| {
        found = true;
        ControlFlow::Break(())
    });
    !found
}

/// How the next step is chosen during reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReductionPolicy {
    /// First rule in declared order, first match in canonical order.
    #[default]
    First,
    /// Uniformly random among all applicable steps, from a seed.
    Seeded(u64),
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub normal_form: Graph,
    pub trace: Vec<DirectDerivation>,
}

pub fn reduce_to_normal_form(
    g: &Graph,
    sys: &GtSystem,
    policy: ReductionPolicy,
    budget: usize,
) -> Result<Reduction, DpoError> {
    let mut rng = match policy {
        ReductionPolicy::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        ReductionPolicy::First => None,
    };
    let mut cur = g.clone();
    let mut trace = Vec::new();
    loop {
        let step = match rng.as_mut() {
            None => {
                let mut first = None;
                for_each_step(&cur, sys, |r, m| {
                    first = Some((r.clone(), m.clone()));
                    ControlFlow::Break(())
                });
                first
            }
            Some(rng) => {
                let mut all = Vec::new();
                for_each_step(&cur, sys, |r, m| {
                    all.push((r.clone(), m.clone()));
                    ControlFlow::Continue(())
                });
                if all.is_empty() {
                    None
                } else {
                    let i = rng.gen_range(0..all.len());
                    Some(all.swap_remove(i))
                }
            }
        };
        let Some((r, m)) = step else {
            return Ok(Reduction { normal_form: cur, trace });
        };
        if trace.len() >= budget {
            return Err(DpoError::BudgetExhausted(budget));
        }
        let d = apply(&r, &cur, &m)?;
        cur = d.result.clone();
        trace.push(d);
    }
}

/// Node-id renaming helper used in tests and builders: `g` with nodes
/// renumbered through `f` (unlisted nodes keep their ids).
pub fn rename_nodes(g: &Graph, f: &BTreeMap<NodeId, NodeId>) -> Graph {
    let mut h = Graph::new();
    for (n, l) in g.nodes() {
        h.insert_node(*f.get(&n).unwrap_or(&n), l.clone());
    }
    for (e, ed) in g.edges() {
        let s = *f.get(&ed.source).unwrap_or(&ed.source);
        let t = *f.get(&ed.target).unwrap_or(&ed.target);
        h.insert_edge(e, s, t, ed.label.clone());
    }
    h
}
