//! Critical pairs, their classification, and analysis verdicts for
//! confluence and subcommutativity up to garbage.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use rayon::prelude::*;

use crate::canon::{canonical_key, colored_key, marked_key, CanonicalKey, ColoredGraph};
use crate::dpo::{apply, apply_graph, check_dangling, for_each_distinct_step, for_each_step, DirectDerivation, GtSystem, Rule};
use crate::enumerate::{all_graphs, GraphBounds};
use crate::graph::{EdgeId, Graph, Morphism, NodeId};
use crate::predicates::{LanguagePredicate, PredicateError};

/// Default number of graphs explored per side when looking for a join.
pub const DEFAULT_JOIN_BUDGET: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriticalError {
    #[error("derivations do not share a host graph")]
    HostMismatch,
    #[error(transparent)]
    Predicate(#[from] PredicateError),
    #[error("search budget of {0} graphs exhausted")]
    BudgetExhausted(usize),
}

/// Two conflicting derivations from a minimal overlap of left-hand sides.
#[derive(Clone, Debug)]
pub struct CriticalPair {
    pub overlap: Graph,
    pub left: DirectDerivation,
    pub right: DirectDerivation,
    /// Overlap nodes kept by both derivations.
    pub persistent: BTreeSet<NodeId>,
}

impl CriticalPair {
    pub fn rules(&self) -> (&str, &str) {
        (&self.left.rule.name, &self.right.rule.name)
    }
}

/// Shared match items all lie in both interfaces.
pub fn parallel_independent(d1: &DirectDerivation, d2: &DirectDerivation) -> Result<bool, CriticalError> {
    if d1.host != d2.host {
        return Err(CriticalError::HostMismatch);
    }
    Ok(independent(&d1.rule, &d1.matching, &d2.rule, &d2.matching))
}

fn independent(r1: &Rule, g1: &Morphism, r2: &Rule, g2: &Morphism) -> bool {
    let kept = |r: &Rule, g: &Morphism| -> (BTreeSet<NodeId>, BTreeSet<EdgeId>) {
        (
            r.interface.node_ids().map(|n| g.nodes[&n]).collect(),
            r.interface.edge_ids().map(|e| g.edges[&e]).collect(),
        )
    };
    let (k1n, k1e) = kept(r1, g1);
    let (k2n, k2e) = kept(r2, g2);
    let n2: BTreeSet<_> = g2.nodes.values().copied().collect();
    let e2: BTreeSet<_> = g2.edges.values().copied().collect();
    g1.nodes.values().filter(|n| n2.contains(n)).all(|n| k1n.contains(n) && k2n.contains(n))
        && g1.edges.values().filter(|e| e2.contains(e)).all(|e| k1e.contains(e) && k2e.contains(e))
}

/// A jointly surjective pair of injective morphisms into a common graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub graph: Graph,
    pub left: Morphism,
    pub right: Morphism,
}

/// All gluings of `l1` and `l2`, one per isomorphism class of the triple.
/// Each class corresponds to exactly one choice of which items are identified.
pub fn enumerate_gluings(l1: &Graph, l2: &Graph) -> Vec<Gluing> {
    let n1: Vec<NodeId> = l1.node_ids().collect();
    let n2: Vec<NodeId> = l2.node_ids().collect();
    let mut out = Vec::new();
    let mut node_map: Vec<Option<NodeId>> = Vec::new();
    glue_nodes(l1, l2, &n1, &n2, &mut node_map, &mut out);
    out
}

fn glue_nodes(
    l1: &Graph,
    l2: &Graph,
    n1: &[NodeId],
    n2: &[NodeId],
    map: &mut Vec<Option<NodeId>>,
    out: &mut Vec<Gluing>,
) {
    let i = map.len();
    if i == n1.len() {
        let nodes: BTreeMap<NodeId, NodeId> =
            n1.iter().zip(map.iter()).filter_map(|(&a, b)| b.map(|b| (a, b))).collect();
        let e1: Vec<EdgeId> = l1.edge_ids().collect();
        glue_edges(l1, l2, &nodes, &e1, &mut Vec::new(), out);
        return;
    }
    map.push(None);
    glue_nodes(l1, l2, n1, n2, map, out);
    map.pop();
    let label = l1.node_label(n1[i]).unwrap();
    for &b in n2 {
        if l2.node_label(b) == Some(label) && !map.contains(&Some(b)) {
            map.push(Some(b));
            glue_nodes(l1, l2, n1, n2, map, out);
            map.pop();
        }
    }
}

fn glue_edges(
    l1: &Graph,
    l2: &Graph,
    nodes: &BTreeMap<NodeId, NodeId>,
    e1: &[EdgeId],
    map: &mut Vec<Option<EdgeId>>,
    out: &mut Vec<Gluing>,
) {
    let i = map.len();
    if i == e1.len() {
        let edges: BTreeMap<EdgeId, EdgeId> =
            e1.iter().zip(map.iter()).filter_map(|(&a, b)| b.map(|b| (a, b))).collect();
        out.push(build_gluing(l1, l2, nodes, &edges));
        return;
    }
    map.push(None);
    glue_edges(l1, l2, nodes, e1, map, out);
    map.pop();
    let e = l1.edge(e1[i]).unwrap();
    let (Some(&s), Some(&t)) = (nodes.get(&e.source), nodes.get(&e.target)) else {
        return;
    };
    for (b, f) in l2.edges() {
        if f.source == s && f.target == t && f.label == e.label && !map.contains(&Some(b)) {
            map.push(Some(b));
            glue_edges(l1, l2, nodes, e1, map, out);
            map.pop();
        }
    }
}

fn build_gluing(
    l1: &Graph,
    l2: &Graph,
    nodes: &BTreeMap<NodeId, NodeId>,
    edges: &BTreeMap<EdgeId, EdgeId>,
) -> Gluing {
    let mut g = Graph::new();
    let mut left = Morphism::default();
    let mut right = Morphism::default();
    for (n, l) in l1.nodes() {
        let id = g.add_node(l.clone());
        left.nodes.insert(n, id);
        if let Some(&m) = nodes.get(&n) {
            right.nodes.insert(m, id);
        }
    }
    for (n, l) in l2.nodes() {
        if !right.nodes.contains_key(&n) {
            right.nodes.insert(n, g.add_node(l.clone()));
        }
    }
    let identified: BTreeMap<EdgeId, EdgeId> = edges.iter().map(|(&a, &b)| (b, a)).collect();
    for (e, ed) in l1.edges() {
        let id = g.add_edge(left.nodes[&ed.source], left.nodes[&ed.target], ed.label.clone());
        left.edges.insert(e, id);
    }
    for (e, ed) in l2.edges() {
        let id = match identified.get(&e) {
            Some(a) => left.edges[a],
            None => g.add_edge(right.nodes[&ed.source], right.nodes[&ed.target], ed.label.clone()),
        };
        right.edges.insert(e, id);
    }
    Gluing { graph: g, left, right }
}

/// Key of (G, g₁, g₂) up to isomorphism of G commuting with both matches.
fn literal_key(g: &Graph, g1: &Morphism, g2: &Morphism) -> CanonicalKey {
    let (mut cg, ids) = ColoredGraph::from_graph(g);
    let index: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    for (side, m) in [(1, g1), (2, g2)] {
        for (&a, b) in &m.nodes {
            cg.node_colors[index[b]].push_str(&format!("\u{0}{side}:{a}"));
        }
    }
    let eids: Vec<EdgeId> = g.edge_ids().collect();
    let eindex: BTreeMap<EdgeId, usize> = eids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    for (side, m) in [(1, g1), (2, g2)] {
        for (&a, b) in &m.edges {
            cg.edges[eindex[b]].2.push_str(&format!("\u{0}{side}:{a}"));
        }
    }
    colored_key(&cg)
}

/// Pair isomorphism: an isomorphism of overlaps commuting with both matches.
pub fn pairs_isomorphic(p: &CriticalPair, q: &CriticalPair) -> bool {
    p.rules() == q.rules()
        && literal_key(&p.overlap, &p.left.matching, &p.right.matching)
            == literal_key(&q.overlap, &q.left.matching, &q.right.matching)
}

/// The equivalence used for deduplication: [`pairs_isomorphic`] after an
/// optional swap of the two sides, and, when both rules are the same,
/// composing each match with an automorphism of L fixing K (which yields
/// the very same derivation).
fn class_key(same: bool, auts: &[Morphism], gl: &Gluing) -> CanonicalKey {
    if !same {
        return literal_key(&gl.graph, &gl.left, &gl.right);
    }
    let mut best: Option<CanonicalKey> = None;
    for a1 in auts {
        for a2 in auts {
            let m1 = a1.then(&gl.left);
            let m2 = a2.then(&gl.right);
            for k in [literal_key(&gl.graph, &m1, &m2), literal_key(&gl.graph, &m2, &m1)] {
                if best.as_ref().map_or(true, |b| k < *b) {
                    best = Some(k);
                }
            }
        }
    }
    best.expect("identity automorphism always present")
}

/// All critical pairs of the system, one per equivalence class, in rule
/// order and then gluing order.
pub fn enumerate_critical_pairs(sys: &GtSystem) -> Vec<CriticalPair> {
    let rules = &sys.rules;
    let mut out = Vec::new();
    for i in 0..rules.len() {
        for j in i..rules.len() {
            let (r1, r2) = (&rules[i], &rules[j]);
            let same = i == j;
            let auts = if same { r1.interface_automorphisms() } else { Vec::new() };
            let mut seen = HashSet::new();
            for gl in enumerate_gluings(&r1.lhs, &r2.lhs) {
                if same && gl.left == gl.right {
                    continue;
                }
                if !check_dangling(r1, &gl.graph, &gl.left) || !check_dangling(r2, &gl.graph, &gl.right) {
                    continue;
                }
                if independent(r1, &gl.left, r2, &gl.right) {
                    continue;
                }
                if !seen.insert(class_key(same, &auts, &gl)) {
                    continue;
                }
                out.push(make_pair(r1, r2, gl));
            }
        }
    }
    out
}

fn make_pair(r1: &Arc<Rule>, r2: &Arc<Rule>, gl: Gluing) -> CriticalPair {
    let left = apply(r1, &gl.graph, &gl.left).expect("dangling condition checked");
    let right = apply(r2, &gl.graph, &gl.right).expect("dangling condition checked");
    let persistent = persistent_of(&gl.graph, &left, &right);
    CriticalPair { overlap: gl.graph, left, right, persistent }
}

fn persistent_of(g: &Graph, l: &DirectDerivation, r: &DirectDerivation) -> BTreeSet<NodeId> {
    g.node_ids().filter(|n| l.track.nodes.contains_key(n) && r.track.nodes.contains_key(n)).collect()
}

pub fn persistent_nodes(p: &CriticalPair) -> BTreeSet<NodeId> {
    persistent_of(&p.overlap, &p.left, &p.right)
}

/// A path of rule applications from one side of a pair to the joining graph.
#[derive(Clone, Debug)]
pub struct JoinWitness {
    pub left: Vec<(String, Graph)>,
    pub right: Vec<(String, Graph)>,
}

impl JoinWitness {
    pub fn steps(&self) -> (usize, usize) {
        (self.left.len(), self.right.len())
    }
}

#[derive(Clone, Debug)]
pub enum Joinability {
    StronglyJoinable(JoinWitness),
    JoinableNotStrong(JoinWitness),
    NotJoinable,
    Unknown { budget: usize },
}

impl Joinability {
    pub fn is_strong(&self) -> bool {
        matches!(self, Joinability::StronglyJoinable(_))
    }

    pub fn is_joinable(&self) -> Option<bool> {
        match self {
            Joinability::StronglyJoinable(_) | Joinability::JoinableNotStrong(_) => Some(true),
            Joinability::NotJoinable => Some(false),
            Joinability::Unknown { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Subcommutativity {
    StronglySubcommutative(JoinWitness),
    NotStronglySubcommutative,
    Unknown,
}

impl Subcommutativity {
    pub fn is_strong(&self) -> bool {
        matches!(self, Subcommutativity::StronglySubcommutative(_))
    }
}

#[derive(Clone, Debug)]
pub struct PairVerdict {
    pub joinability: Joinability,
    pub subcommutativity: Subcommutativity,
    pub garbage: bool,
}

/// How far to search for a join.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinBudget {
    /// Explore at most this many graphs per side.
    Graphs(usize),
    /// Explore the full reachable sets (caller asserts they are finite).
    Exhaustive,
}

impl Default for JoinBudget {
    fn default() -> Self {
        JoinBudget::Graphs(DEFAULT_JOIN_BUDGET)
    }
}

struct State {
    graph: Graph,
    parent: Option<usize>,
    rule: String,
}

/// Breadth-first exploration from one side, deduplicated by the graph shape
/// together with the positions of the surviving persistent nodes.
struct Exploration {
    states: Vec<State>,
    /// key with all persistent nodes marked → state (only states keeping all of them)
    strong: HashMap<CanonicalKey, usize>,
    plain: HashMap<CanonicalKey, usize>,
    complete: bool,
}

fn marks_of(g: &Graph, persistent: &[NodeId]) -> (BTreeMap<NodeId, u32>, bool) {
    let mut marks = BTreeMap::new();
    for (i, &v) in persistent.iter().enumerate() {
        if g.has_node(v) {
            marks.insert(v, i as u32);
        }
    }
    let all = marks.len() == persistent.len();
    (marks, all)
}

fn explore(start: &Graph, persistent: &[NodeId], sys: &GtSystem, limit: Option<usize>, depth: Option<usize>) -> Exploration {
    let mut ex = Exploration { states: Vec::new(), strong: HashMap::new(), plain: HashMap::new(), complete: true };
    let mut seen: HashSet<CanonicalKey> = HashSet::new();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let mut admit = |ex: &mut Exploration, g: Graph, parent: Option<usize>, rule: String| -> Option<usize> {
        let (marks, all) = marks_of(&g, persistent);
        let mk = marked_key(&g, &marks);
        if !seen.insert(mk.clone()) {
            return None;
        }
        let id = ex.states.len();
        ex.plain.entry(canonical_key(&g)).or_insert(id);
        if all {
            ex.strong.entry(mk).or_insert(id);
        }
        ex.states.push(State { graph: g, parent, rule });
        Some(id)
    };
    admit(&mut ex, start.clone(), None, String::new());
    queue.push_back((0, 0));
    while let Some((id, d)) = queue.pop_front() {
        if depth.is_some_and(|m| d >= m) {
            continue;
        }
        let g = ex.states[id].graph.clone();
        let mut next = Vec::new();
        let (marks, _) = marks_of(&g, persistent);
        for_each_distinct_step(&g, &marks, sys, |r, m| {
            next.push((r.name.clone(), apply_graph(r, &g, m).0));
            ControlFlow::Continue(())
        });
        for (rule, h) in next {
            if limit.is_some_and(|l| ex.states.len() >= l) {
                ex.complete = false;
                return ex;
            }
            if let Some(nid) = admit(&mut ex, h, Some(id), rule) {
                queue.push_back((nid, d + 1));
            }
        }
    }
    ex
}

fn path_to(ex: &Exploration, mut id: usize) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    while let Some(p) = ex.states[id].parent {
        out.push((ex.states[id].rule.clone(), ex.states[id].graph.clone()));
        id = p;
    }
    out.reverse();
    out
}

fn common(a: &Exploration, b: &Exploration, strong: bool) -> Option<JoinWitness> {
    let (ma, mb) = if strong { (&a.strong, &b.strong) } else { (&a.plain, &b.plain) };
    // deterministic: prefer the shortest combined witness, then key order
    ma.iter()
        .filter_map(|(k, &i)| mb.get(k).map(|&j| (i, j, k)))
        .min_by(|x, y| (x.0 + x.1, x.2).cmp(&(y.0 + y.1, y.2)))
        .map(|(i, j, _)| JoinWitness { left: path_to(a, i), right: path_to(b, j) })
}

fn sides(p: &CriticalPair) -> (Graph, Graph, Vec<NodeId>) {
    (p.left.result.clone(), p.right.result.clone(), p.persistent.iter().copied().collect())
}

/// Strong joinability: a common reduct where both composed tracks are
/// defined on, and agree on, every persistent node.
pub fn check_strong_joinability(p: &CriticalPair, sys: &GtSystem, budget: JoinBudget) -> Joinability {
    let (h1, h2, pers) = sides(p);
    let limit = match budget {
        JoinBudget::Graphs(n) => Some(n),
        JoinBudget::Exhaustive => None,
    };
    let a = explore(&h1, &pers, sys, limit, None);
    let b = explore(&h2, &pers, sys, limit, None);
    if let Some(w) = common(&a, &b, true) {
        return Joinability::StronglyJoinable(w);
    }
    let complete = a.complete && b.complete;
    match common(&a, &b, false) {
        Some(w) if complete => Joinability::JoinableNotStrong(w),
        None if complete => Joinability::NotJoinable,
        _ => Joinability::Unknown { budget: limit.unwrap_or(usize::MAX) },
    }
}

/// As strong joinability, but with at most one step on each side.
pub fn check_strong_subcommutativity(p: &CriticalPair, sys: &GtSystem) -> Subcommutativity {
    let (h1, h2, pers) = sides(p);
    let a = explore(&h1, &pers, sys, None, Some(1));
    let b = explore(&h2, &pers, sys, None, Some(1));
    match common(&a, &b, true) {
        Some(w) => Subcommutativity::StronglySubcommutative(w),
        None => Subcommutativity::NotStronglySubcommutative,
    }
}

/// Tags each pair: `true` = garbage (overlap outside D̂).
pub fn filter_non_garbage(pairs: &[CriticalPair], pred: &LanguagePredicate) -> Result<Vec<bool>, PredicateError> {
    pairs.iter().map(|p| pred.in_closure(&p.overlap).map(|b| !b)).collect()
}

/// Where an assumption comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Asserted,
    Probed(String),
    Absent,
}

impl Evidence {
    pub fn present(&self) -> bool {
        !matches!(self, Evidence::Absent)
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Asserted => write!(f, "asserted"),
            Evidence::Probed(how) => write!(f, "probed ({how})"),
            Evidence::Absent => write!(f, "absent"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Assumptions {
    /// Termination up to garbage.
    pub termination: Evidence,
    /// Closedness of D under the rules.
    pub closedness: Evidence,
    pub budget: JoinBudget,
}

impl Default for Assumptions {
    fn default() -> Self {
        Assumptions { termination: Evidence::Absent, closedness: Evidence::Absent, budget: JoinBudget::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Confluence,
    Subcommutativity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    ConfluentUpToGarbage,
    SubcommutativeUpToGarbage,
    LocallyConfluentUpToGarbage,
    /// Index of a non-joinable pair whose overlap lies in D.
    NotLocallyConfluentUpToGarbage(usize),
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::ConfluentUpToGarbage => write!(f, "confluent up to garbage"),
            Conclusion::SubcommutativeUpToGarbage => write!(f, "subcommutative up to garbage"),
            Conclusion::LocallyConfluentUpToGarbage => write!(f, "locally confluent up to garbage"),
            Conclusion::NotLocallyConfluentUpToGarbage(i) => {
                write!(f, "not locally confluent up to garbage (pair {})", i + 1)
            }
            Conclusion::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub system: String,
    pub predicate: String,
    pub mode: Mode,
    pub pairs: Vec<CriticalPair>,
    pub verdicts: Vec<PairVerdict>,
    pub assumptions: Assumptions,
    pub conclusion: Conclusion,
    /// Subcommutativity mode with closedness: confluence up to garbage follows too.
    pub also_confluent: bool,
    pub licensed_by: String,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn non_garbage(&self) -> impl Iterator<Item = (usize, &PairVerdict)> {
        self.verdicts.iter().enumerate().filter(|(_, v)| !v.garbage)
    }
}

/// Computes every pair's verdicts and draws the conclusion from the decision table.
pub fn analyze(
    sys: &GtSystem,
    pred: &LanguagePredicate,
    mode: Mode,
    assumptions: Assumptions,
) -> Result<AnalysisReport, CriticalError> {
    let pairs = enumerate_critical_pairs(sys);
    let garbage = filter_non_garbage(&pairs, pred)?;
    let budget = assumptions.budget;
    let verdicts: Vec<PairVerdict> = pairs
        .par_iter()
        .zip(garbage.par_iter())
        .map(|(p, &garbage)| {
            let subcommutativity = check_strong_subcommutativity(p, sys);
            let joinability = match &subcommutativity {
                Subcommutativity::StronglySubcommutative(w) => Joinability::StronglyJoinable(w.clone()),
                _ => check_strong_joinability(p, sys, budget),
            };
            PairVerdict { joinability, subcommutativity, garbage }
        })
        .collect();

    let ng: Vec<(usize, &PairVerdict)> = verdicts.iter().enumerate().filter(|(_, v)| !v.garbage).collect();
    let (conclusion, licensed_by, also_confluent) = match mode {
        Mode::Confluence => {
            if ng.iter().any(|(_, v)| matches!(v.joinability, Joinability::Unknown { .. })) {
                (Conclusion::Inconclusive, "a joinability search ran out of budget".to_string(), false)
            } else if ng.iter().all(|(_, v)| v.joinability.is_strong()) {
                if assumptions.termination.present() && assumptions.closedness.present() {
                    (
                        Conclusion::ConfluentUpToGarbage,
                        "generalised critical pair lemma with generalised Newman's lemma \
                         (all non-garbage pairs strongly joinable, terminating and closed)"
                            .to_string(),
                        false,
                    )
                } else {
                    (
                        Conclusion::LocallyConfluentUpToGarbage,
                        "generalised critical pair lemma (all non-garbage pairs strongly joinable)".to_string(),
                        false,
                    )
                }
            } else {
                let mut witness = None;
                for (i, v) in &ng {
                    if matches!(v.joinability, Joinability::NotJoinable)
                        && pred.in_language(&pairs[*i].overlap)? == Some(true)
                    {
                        witness = Some(*i);
                        break;
                    }
                }
                match witness {
                    Some(i) => (
                        Conclusion::NotLocallyConfluentUpToGarbage(i),
                        format!("pair {} is not joinable and its overlap lies in the language", i + 1),
                        false,
                    ),
                    None => (
                        Conclusion::Inconclusive,
                        "some non-garbage pair is not strongly joinable".to_string(),
                        false,
                    ),
                }
            }
        }
        Mode::Subcommutativity => {
            if ng.iter().all(|(_, v)| v.subcommutativity.is_strong()) {
                let closed = assumptions.closedness.present();
                let mut lic = "strong subcommutativity criterion (all non-garbage pairs strongly subcommutative)"
                    .to_string();
                if closed {
                    lic.push_str("; with closedness, also confluent up to garbage");
                }
                (Conclusion::SubcommutativeUpToGarbage, lic, closed)
            } else {
                (
                    Conclusion::Inconclusive,
                    "some non-garbage pair is not strongly subcommutative".to_string(),
                    false,
                )
            }
        }
    };
    Ok(AnalysisReport {
        system: sys.name.clone(),
        predicate: pred.name.clone(),
        mode,
        pairs,
        verdicts,
        assumptions,
        conclusion,
        also_confluent,
        licensed_by,
        notes: Vec::new(),
    })
}

/// A peak y₁ ⇐ x ⇒ y₂ whose ends have no common reduct.
#[derive(Clone, Debug)]
pub struct Peak {
    pub host: Graph,
    pub left: Graph,
    pub right: Graph,
}

/// Looks for a non-joinable peak at `host`.
pub fn peak_counterexample(sys: &GtSystem, host: &Graph, budget: JoinBudget) -> Result<Option<Peak>, CriticalError> {
    let limit = match budget {
        JoinBudget::Graphs(n) => Some(n),
        JoinBudget::Exhaustive => None,
    };
    let mut succ: Vec<(CanonicalKey, Graph)> = Vec::new();
    let mut seen = HashSet::new();
    for_each_step(host, sys, |r, m| {
        let h = apply_graph(r, host, m).0;
        let k = canonical_key(&h);
        if seen.insert(k.clone()) {
            succ.push((k, h));
        }
        ControlFlow::Continue(())
    });
    let reach: Vec<Exploration> = succ.iter().map(|(_, h)| explore(h, &[], sys, limit, None)).collect();
    let mut exhausted = false;
    for i in 0..succ.len() {
        for j in i + 1..succ.len() {
            let (a, b) = (&reach[i], &reach[j]);
            if common(a, b, false).is_some() {
                continue;
            }
            if a.complete && b.complete {
                return Ok(Some(Peak { host: host.clone(), left: succ[i].1.clone(), right: succ[j].1.clone() }));
            }
            exhausted = true;
        }
    }
    if exhausted {
        return Err(CriticalError::BudgetExhausted(limit.unwrap_or(usize::MAX)));
    }
    Ok(None)
}

/// Brute-force falsifier: the first host within the bounds (enumeration
/// order) with a non-joinable peak.
pub fn confluence_probe(sys: &GtSystem, bounds: GraphBounds, budget: JoinBudget) -> Result<Option<Peak>, CriticalError> {
    let mut exhausted = None;
    for host in all_graphs(&sys.signature, bounds) {
        match peak_counterexample(sys, &host, budget) {
            Ok(Some(p)) => return Ok(Some(p)),
            Ok(None) => {}
            Err(e) => exhausted = Some(e),
        }
    }
    match exhausted {
        Some(e) => Err(e),
        None => Ok(None),
    }
}
