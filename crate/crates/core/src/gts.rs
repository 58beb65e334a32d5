//! The `.gts` text format: a signature, named graphs, rules, an optional
//! grammar start graph, accepting graphs and a predicate, one item per line.
//!
//! ```text
//! # series-parallel graphs
//! system sp
//! signature
//!   nodes dot
//!   edges plain
//! graph P
//!   node 1 dot
//!   node 2 dot
//!   edge e 1 2 plain
//! rule p
//!   lhs
//!     node 1 dot
//!     node 2 dot
//!     edge 0 1 2 plain
//!   interface
//!     node 1 dot
//!     node 2 dot
//!   rhs
//!     node 1 dot
//!     node 2 dot
//!     edge 1 1 2 plain
//!     edge 2 1 2 plain
//! start P
//! predicate all
//! ```
//!
//! Ids are tokens; numeric ids are kept, others get the next free number in
//! their graph (or rule, whose three sections share ids). A document with a
//! `start` line is a grammar: commands that reduce or analyse use its
//! inverted rules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::case_studies::{self, CaseStudy};
use crate::dpo::{GtSystem, Rule, RuleError};
use crate::graph::{Graph, Label, Signature};
use crate::predicates::{self, FiniteClosurePredicate, LanguagePredicate, PredicateError, TypeGraphPredicate};
use crate::recognizer::{grammar_to_recognizer, Grammar, RecognizerSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate {what} id {id:?}")]
    DuplicateId { what: &'static str, id: String },
    #[error("unknown {what} label {label:?}")]
    UnknownLabel { what: &'static str, label: String },
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("unknown graph {0:?}")]
    UnknownGraph(String),
    #[error("broken inclusion in rule {rule}: {detail}")]
    BrokenInclusion { rule: String, detail: String },
}

/// How the document names its language predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredicateSpec {
    /// A built-in or case-study predicate.
    Named(String),
    /// Graphs with a morphism into the named graph.
    TypeGraph(String),
    /// Subgraphs of the named graphs.
    Finite(Vec<String>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GtsDocument {
    pub name: Option<String>,
    pub signature: Option<Signature>,
    pub nonterminals: Signature,
    pub graphs: Vec<(String, Graph)>,
    pub rules: Vec<Rule>,
    pub start: Option<String>,
    pub accepting: Vec<String>,
    pub predicate: Option<PredicateSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn err(self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: self.column, kind }
    }

    fn syntax(self, msg: impl Into<String>) -> ParseError {
        self.err(ParseErrorKind::Syntax(msg.into()))
    }
}

struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

fn tokenize(line: &str, lineno: usize) -> Vec<Token<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                let column = body[..s].chars().count() + 1;
                out.push(Token { text: &body[s..i], pos: Pos { line: lineno, column } });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

struct RawNode {
    side: usize,
    id: String,
    label: String,
    pos: Pos,
}

struct RawEdge {
    side: usize,
    id: String,
    source: (String, Pos),
    target: (String, Pos),
    label: String,
    pos: Pos,
}

/// Nodes and edges of one graph, or of the three sections of one rule.
struct Scope {
    name: String,
    pos: Pos,
    sides: usize,
    nodes: Vec<RawNode>,
    edges: Vec<RawEdge>,
}

fn assign_ids<'a>(tokens: impl Iterator<Item = &'a str>) -> BTreeMap<&'a str, u32> {
    let tokens: Vec<&str> = tokens.collect();
    let mut map = BTreeMap::new();
    let mut next = 0;
    for t in &tokens {
        if let Ok(n) = t.parse::<u32>() {
            map.insert(*t, n);
            next = next.max(n + 1);
        }
    }
    for t in tokens {
        map.entry(t).or_insert_with(|| {
            next += 1;
            next - 1
        });
    }
    map
}

impl Scope {
    fn new(name: &str, pos: Pos, sides: usize) -> Self {
        Scope { name: name.to_string(), pos, sides, nodes: Vec::new(), edges: Vec::new() }
    }

    fn build(self) -> Result<Vec<Graph>, ParseError> {
        let node_ids = assign_ids(self.nodes.iter().map(|n| n.id.as_str()));
        let edge_ids = assign_ids(self.edges.iter().map(|e| e.id.as_str()));
        let mut graphs = vec![Graph::new(); self.sides];
        let mut declared: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); self.sides];
        for n in &self.nodes {
            if !declared[n.side].insert(&n.id) {
                return Err(n.pos.err(ParseErrorKind::DuplicateId { what: "node", id: n.id.clone() }));
            }
            graphs[n.side].insert_node(node_ids[n.id.as_str()], n.label.as_str());
        }
        let mut seen: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); self.sides];
        for e in &self.edges {
            if !seen[e.side].insert(&e.id) {
                return Err(e.pos.err(ParseErrorKind::DuplicateId { what: "edge", id: e.id.clone() }));
            }
            for (end, pos) in [&e.source, &e.target] {
                if !declared[e.side].contains(end.as_str()) {
                    return Err(pos.err(ParseErrorKind::UnknownNode(end.clone())));
                }
            }
            graphs[e.side].insert_edge(
                edge_ids[e.id.as_str()],
                node_ids[e.source.0.as_str()],
                node_ids[e.target.0.as_str()],
                e.label.as_str(),
            );
        }
        Ok(graphs)
    }
}

enum Context {
    Top,
    Signature { nonterminal: bool },
    Graph,
    Rule { side: Option<usize> },
}

struct Parser {
    doc: GtsDocument,
    context: Context,
    scope: Option<Scope>,
    signature: Option<(Signature, Pos)>,
    nonterminals: Option<Signature>,
    graph_refs: Vec<(String, Pos)>,
}

impl Parser {
    fn close(&mut self) -> Result<(), ParseError> {
        if let Some((sig, _)) = self.signature.take() {
            self.doc.signature = Some(sig);
        }
        if let Some(n) = self.nonterminals.take() {
            self.doc.nonterminals = n;
        }
        if let Some(scope) = self.scope.take() {
            let (name, pos, sides) = (scope.name.clone(), scope.pos, scope.sides);
            let mut graphs = scope.build()?;
            if sides == 1 {
                if self.doc.graphs.iter().any(|(n, _)| *n == name) {
                    return Err(pos.err(ParseErrorKind::DuplicateId { what: "graph", id: name }));
                }
                self.doc.graphs.push((name, graphs.pop().unwrap()));
            } else {
                if self.doc.rules.iter().any(|r| r.name == name) {
                    return Err(pos.err(ParseErrorKind::DuplicateId { what: "rule", id: name }));
                }
                let r = graphs.pop().unwrap();
                let k = graphs.pop().unwrap();
                let l = graphs.pop().unwrap();
                let rule = Rule::new(name.clone(), l, k, r).map_err(|e| {
                    pos.err(ParseErrorKind::BrokenInclusion { rule: name.clone(), detail: e.to_string() })
                })?;
                self.doc.rules.push(rule);
            }
        }
        self.context = Context::Top;
        Ok(())
    }

    fn check_label(&self, what: &'static str, tok: &Token) -> Result<(), ParseError> {
        let Some(sig) = &self.doc.signature else { return Ok(()) };
        let label = Label::new(tok.text);
        let nt = &self.doc.nonterminals;
        let known = if what == "node" {
            sig.node_labels.contains(&label) || nt.node_labels.contains(&label)
        } else {
            sig.edge_labels.contains(&label) || nt.edge_labels.contains(&label)
        };
        if known {
            Ok(())
        } else {
            Err(tok.pos.err(ParseErrorKind::UnknownLabel { what, label: tok.text.to_string() }))
        }
    }

    fn line(&mut self, toks: &[Token]) -> Result<(), ParseError> {
        let head = &toks[0];
        let args = &toks[1..];
        let exact = |n: usize, usage: &str| -> Result<(), ParseError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(head.pos.syntax(format!("expected `{usage}`")))
            }
        };
        match head.text {
            "system" => {
                exact(1, "system <name>")?;
                self.close()?;
                self.doc.name = Some(args[0].text.to_string());
            }
            "signature" | "nonterminals" => {
                exact(0, head.text)?;
                self.close()?;
                let nonterminal = head.text == "nonterminals";
                if nonterminal {
                    self.nonterminals = Some(Signature::default());
                } else {
                    self.signature = Some((Signature::default(), head.pos));
                }
                self.context = Context::Signature { nonterminal };
            }
            "nodes" | "edges" => {
                let Context::Signature { nonterminal } = self.context else {
                    return Err(head.pos.syntax(format!("`{}` outside a signature block", head.text)));
                };
                let sig = if nonterminal {
                    self.nonterminals.as_mut().unwrap()
                } else {
                    &mut self.signature.as_mut().unwrap().0
                };
                let set = if head.text == "nodes" { &mut sig.node_labels } else { &mut sig.edge_labels };
                set.extend(args.iter().map(|t| Label::new(t.text)));
            }
            "graph" | "rule" => {
                exact(1, &format!("{} <name>", head.text))?;
                self.close()?;
                let sides = if head.text == "graph" { 1 } else { 3 };
                self.scope = Some(Scope::new(args[0].text, head.pos, sides));
                self.context = if sides == 1 { Context::Graph } else { Context::Rule { side: None } };
            }
            "lhs" | "interface" | "rhs" => {
                exact(0, head.text)?;
                let Context::Rule { side } = &mut self.context else {
                    return Err(head.pos.syntax(format!("`{}` outside a rule", head.text)));
                };
                *side = Some(match head.text {
                    "lhs" => 0,
                    "interface" => 1,
                    _ => 2,
                });
            }
            "node" | "edge" => {
                let side = match self.context {
                    Context::Graph => 0,
                    Context::Rule { side: Some(s) } => s,
                    Context::Rule { side: None } => {
                        return Err(head.pos.syntax("expected `lhs`, `interface` or `rhs` before items"))
                    }
                    _ => return Err(head.pos.syntax(format!("`{}` outside a graph or rule", head.text))),
                };
                if head.text == "node" {
                    exact(2, "node <id> <label>")?;
                    self.check_label("node", &args[1])?;
                    let n = RawNode { side, id: args[0].text.into(), label: args[1].text.into(), pos: args[0].pos };
                    self.scope.as_mut().unwrap().nodes.push(n);
                } else {
                    exact(4, "edge <id> <source> <target> <label>")?;
                    self.check_label("edge", &args[3])?;
                    let e = RawEdge {
                        side,
                        id: args[0].text.into(),
                        source: (args[1].text.into(), args[1].pos),
                        target: (args[2].text.into(), args[2].pos),
                        label: args[3].text.into(),
                        pos: args[0].pos,
                    };
                    self.scope.as_mut().unwrap().edges.push(e);
                }
            }
            "start" => {
                exact(1, "start <graph>")?;
                self.close()?;
                self.doc.start = Some(args[0].text.into());
                self.graph_refs.push((args[0].text.into(), args[0].pos));
            }
            "accepting" => {
                self.close()?;
                if args.is_empty() {
                    return Err(head.pos.syntax("expected `accepting <graph>...`"));
                }
                for a in args {
                    self.doc.accepting.push(a.text.into());
                    self.graph_refs.push((a.text.into(), a.pos));
                }
            }
            "predicate" => {
                self.close()?;
                let spec = match args {
                    [name] => PredicateSpec::Named(name.text.into()),
                    [kind, g] if kind.text == "type-graph" => {
                        self.graph_refs.push((g.text.into(), g.pos));
                        PredicateSpec::TypeGraph(g.text.into())
                    }
                    [kind, gs @ ..] if kind.text == "finite" && !gs.is_empty() => {
                        self.graph_refs.extend(gs.iter().map(|g| (g.text.to_string(), g.pos)));
                        PredicateSpec::Finite(gs.iter().map(|g| g.text.to_string()).collect())
                    }
                    _ => {
                        return Err(head
                            .pos
                            .syntax("expected `predicate <name>`, `predicate type-graph <graph>` or `predicate finite <graph>...`"))
                    }
                };
                self.doc.predicate = Some(spec);
            }
            other => return Err(head.pos.syntax(format!("unknown keyword `{other}`"))),
        }
        Ok(())
    }
}

pub fn parse(text: &str) -> Result<GtsDocument, ParseError> {
    let mut p = Parser {
        doc: GtsDocument::default(),
        context: Context::Top,
        scope: None,
        signature: None,
        nonterminals: None,
        graph_refs: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize(line, i + 1);
        if !toks.is_empty() {
            p.line(&toks)?;
        }
    }
    p.close()?;
    for (g, pos) in &p.graph_refs {
        if p.doc.graph(g).is_none() {
            return Err(pos.err(ParseErrorKind::UnknownGraph(g.clone())));
        }
    }
    Ok(p.doc)
}

fn write_graph(out: &mut String, g: &Graph, indent: &str) {
    for (n, l) in g.nodes() {
        let _ = writeln!(out, "{indent}node {n} {l}");
    }
    for (id, e) in g.edges() {
        let _ = writeln!(out, "{indent}edge {id} {} {} {}", e.source, e.target, e.label);
    }
}

fn write_signature(out: &mut String, head: &str, sig: &Signature) {
    let join = |s: &BTreeSet<Label>| s.iter().map(Label::as_str).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "{head}");
    if !sig.node_labels.is_empty() {
        let _ = writeln!(out, "  nodes {}", join(&sig.node_labels));
    }
    if !sig.edge_labels.is_empty() {
        let _ = writeln!(out, "  edges {}", join(&sig.edge_labels));
    }
}

pub fn serialize(doc: &GtsDocument) -> String {
    let mut out = String::new();
    if let Some(n) = &doc.name {
        let _ = writeln!(out, "system {n}");
    }
    if let Some(sig) = &doc.signature {
        write_signature(&mut out, "signature", sig);
    }
    if doc.nonterminals != Signature::default() {
        write_signature(&mut out, "nonterminals", &doc.nonterminals);
    }
    for (name, g) in &doc.graphs {
        let _ = writeln!(out, "graph {name}");
        write_graph(&mut out, g, "  ");
    }
    for r in &doc.rules {
        let _ = writeln!(out, "rule {}", r.name);
        for (head, g) in [("lhs", &r.lhs), ("interface", &r.interface), ("rhs", &r.rhs)] {
            let _ = writeln!(out, "  {head}");
            write_graph(&mut out, g, "    ");
        }
    }
    if let Some(s) = &doc.start {
        let _ = writeln!(out, "start {s}");
    }
    if !doc.accepting.is_empty() {
        let _ = writeln!(out, "accepting {}", doc.accepting.join(" "));
    }
    match &doc.predicate {
        Some(PredicateSpec::Named(n)) => {
            let _ = writeln!(out, "predicate {n}");
        }
        Some(PredicateSpec::TypeGraph(g)) => {
            let _ = writeln!(out, "predicate type-graph {g}");
        }
        Some(PredicateSpec::Finite(gs)) => {
            let _ = writeln!(out, "predicate finite {}", gs.join(" "));
        }
        None => {}
    }
    out
}

impl GtsDocument {
    pub fn graph(&self, name: &str) -> Option<&Graph> {
        self.graphs.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn is_grammar(&self) -> bool {
        self.start.is_some()
    }

    /// The declared signature, or the labels used by the rules and graphs.
    pub fn effective_signature(&self) -> Signature {
        if let Some(s) = &self.signature {
            return s.union(&self.nonterminals);
        }
        let mut sig = Signature::default();
        for r in &self.rules {
            sig = sig.union(&r.signature());
        }
        for (_, g) in &self.graphs {
            sig = sig.union(&g.signature());
        }
        sig
    }

    /// The rules as written.
    pub fn system(&self) -> Result<GtSystem, RuleError> {
        let name = self.name.clone().unwrap_or_else(|| "system".into());
        GtSystem::new(name, self.effective_signature(), self.rules.clone())
    }

    /// The system that reduces: inverted rules for a grammar, else as written.
    pub fn reduction_system(&self) -> Result<GtSystem, RuleError> {
        let sys = self.system()?;
        Ok(if self.is_grammar() { sys.inverted() } else { sys })
    }

    pub fn grammar(&self) -> Option<Grammar> {
        let start = self.graph(self.start.as_ref()?)?.clone();
        Some(Grammar {
            signature: self.effective_signature(),
            nonterminals: self.nonterminals.clone(),
            rules: self.rules.clone(),
            start,
        })
    }

    /// Recognizer from a grammar, or from the rules plus `accepting` graphs.
    pub fn recognizer(&self) -> Result<Option<RecognizerSpec>, RuleError> {
        if let Some(g) = self.grammar() {
            let name = self.name.clone().unwrap_or_else(|| "grammar".into());
            return grammar_to_recognizer(&name, &g).map(Some);
        }
        if self.accepting.is_empty() {
            return Ok(None);
        }
        let accepting = self.accepting.iter().filter_map(|a| self.graph(a).cloned()).collect();
        Ok(Some(RecognizerSpec {
            system: self.system()?,
            accepting,
            input_signature: self.effective_signature().difference(&self.nonterminals),
        }))
    }

    pub fn language_predicate(&self) -> Result<Option<LanguagePredicate>, PredicateError> {
        self.predicate.as_ref().map(|p| resolve_predicate(self, p)).transpose()
    }

    /// The document form of a case study.
    pub fn from_case(case: &CaseStudy) -> GtsDocument {
        let mut doc = GtsDocument { name: Some(case.name.clone()), ..GtsDocument::default() };
        match (&case.grammar, &case.recognizer) {
            (Some(g), _) => {
                doc.signature = Some(g.signature.difference(&g.nonterminals));
                doc.nonterminals = g.nonterminals.clone();
                doc.graphs.push(("S".into(), g.start.clone()));
                doc.rules = g.rules.clone();
                doc.start = Some("S".into());
            }
            (None, Some(rec)) => {
                doc.signature = Some(case.system.signature.clone());
                doc.rules = case.system.rules.iter().map(|r| (**r).clone()).collect();
                for (i, a) in rec.accepting.iter().enumerate() {
                    let name = format!("A{}", i + 1);
                    doc.graphs.push((name.clone(), a.clone()));
                    doc.accepting.push(name);
                }
            }
            (None, None) => {
                doc.signature = Some(case.system.signature.clone());
                doc.rules = case.system.rules.iter().map(|r| (**r).clone()).collect();
            }
        }
        doc.predicate = Some(match &case.type_graph {
            Some(t) => {
                doc.graphs.push(("T".into(), t.clone()));
                PredicateSpec::TypeGraph("T".into())
            }
            None => PredicateSpec::Named(case.predicate.name.clone()),
        });
        doc
    }
}

/// Looks a predicate name up among the built-ins and the case-study predicates.
pub fn predicate_by_name(name: &str) -> Result<LanguagePredicate, PredicateError> {
    predicates::builtin(name).or_else(|e| case_studies::named_predicate(name).ok_or(e))
}

fn resolve_predicate(doc: &GtsDocument, spec: &PredicateSpec) -> Result<LanguagePredicate, PredicateError> {
    let graph = |n: &str| {
        doc.graph(n).cloned().ok_or_else(|| PredicateError::Evaluation {
            name: n.to_string(),
            reason: "no such graph in the document".into(),
        })
    };
    match spec {
        PredicateSpec::Named(n) => predicate_by_name(n),
        PredicateSpec::TypeGraph(g) => {
            Ok(TypeGraphPredicate { type_graph: graph(g)? }.predicate(format!("type graph {g}")))
        }
        PredicateSpec::Finite(gs) => {
            let members = gs.iter().map(|g| graph(g)).collect::<Result<Vec<_>, _>>()?;
            Ok(FiniteClosurePredicate { members }.predicate(format!("subgraphs of {}", gs.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_graph() {
        let doc = parse("graph P\nnode 1 dot\nnode 2 dot\nedge e 1 2 plain").unwrap();
        let g = doc.graph("P").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert!(crate::isomorphic(g, &Graph::path(2)).is_some());
    }

    #[test]
    fn comments_and_blank_lines() {
        let doc = parse("# header\n\ngraph G   # trailing\n  node a dot\n").unwrap();
        assert_eq!(doc.graph("G").unwrap().node_count(), 1);
    }

    #[test]
    fn interface_node_missing_from_rhs() {
        let text = "rule r\nlhs\nnode 1 dot\ninterface\nnode 1 dot\nrhs\n";
        let e = parse(text).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::BrokenInclusion { .. }), "{e}");
        assert_eq!((e.line, e.column), (1, 1));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("graph G\nnode 1 dot\nnode 1 dot\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateId { what: "node", id: "1".into() });
        assert_eq!((e.line, e.column), (3, 6));

        let e = parse("signature\nnodes dot\nedges plain\ngraph G\n  node 1 box\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownLabel { what: "node", label: "box".into() });
        assert_eq!((e.line, e.column), (5, 10));

        let e = parse("graph G\nnode 1 dot\nedge 0 1 9 plain\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownNode("9".into()));
        assert_eq!((e.line, e.column), (3, 10));

        let e = parse("graph G\nnode 1 dot dot\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));

        let e = parse("start Q\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownGraph("Q".into()));

        let e = parse("rule r\nnode 1 dot\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn symbolic_ids_avoid_numeric_ones() {
        let doc = parse("graph G\nnode x dot\nnode 0 dot\nedge e x 0 plain\nedge 0 0 x plain").unwrap();
        let g = doc.graph("G").unwrap();
        assert_eq!(g.node_ids().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(g.edge(1).unwrap().source, 1);
    }

    #[test]
    fn round_trip_case_documents() {
        for name in case_studies::CASE_NAMES {
            let case = case_studies::build(name).unwrap();
            let doc = GtsDocument::from_case(&case);
            let text = serialize(&doc);
            let back = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
            assert_eq!(back, doc, "{name}");
            assert_eq!(serialize(&back), text);
            let sys = back.reduction_system().unwrap();
            assert_eq!(sys.rules.len(), case.system.rules.len());
            for (a, b) in sys.rules.iter().zip(&case.system.rules) {
                assert_eq!(a, b, "{name}");
            }
            assert!(back.language_predicate().unwrap().is_some());
        }
    }
}
