//! Ready-made systems, predicates and sample graphs: series-parallel graphs,
//! linked series-parallel graphs, extended flow diagrams, and a collection of
//! small systems illustrating where the analysis succeeds or cannot conclude.

use crate::critical::{analyze, AnalysisReport, Assumptions, CriticalError, Evidence, JoinBudget, Mode};
use crate::dpo::{GtSystem, Rule};
use crate::enumerate::GraphBounds;
use crate::graph::{Graph, NodeId, Signature, DEFAULT_EDGE_LABEL as E, DEFAULT_NODE_LABEL as N};
use crate::predicates::{self, check_size_reducing, closedness_probe, is_forest, LanguagePredicate, TypeGraphPredicate};
use crate::recognizer::{grammar_to_recognizer, Grammar, RecognizerSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CaseError {
    #[error("unknown case study {0:?}")]
    UnknownCase(String),
    #[error("unknown sample graph {0:?}")]
    UnknownSample(String),
    #[error(transparent)]
    Analysis(#[from] CriticalError),
}

/// Expected outcome, used by tests and the `case-study` command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expected {
    pub pairs: usize,
    pub non_garbage: Option<usize>,
    pub strongly_joinable: Option<usize>,
}

/// Which assumptions the case's analysis is run with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Setup {
    /// Confluence mode; termination from size reduction; closedness probed
    /// up to this many nodes and then asserted.
    Confluence { probe_nodes: usize },
    /// Confluence mode; termination from size reduction; closedness asserted.
    ConfluenceAssumeClosed,
    /// Confluence mode, no assumptions.
    Plain,
    /// Subcommutativity mode, no termination assumption.
    Subcommutativity,
}

#[derive(Clone, Debug)]
pub struct CaseStudy {
    pub name: String,
    pub system: GtSystem,
    pub predicate: LanguagePredicate,
    pub grammar: Option<Grammar>,
    pub recognizer: Option<RecognizerSpec>,
    /// Set when the predicate is "has a morphism into this graph".
    pub type_graph: Option<Graph>,
    pub expected: Expected,
    pub setup: Setup,
    pub notes: Vec<String>,
}

impl CaseStudy {
    pub fn mode(&self) -> Mode {
        match self.setup {
            Setup::Subcommutativity => Mode::Subcommutativity,
            _ => Mode::Confluence,
        }
    }

    /// Evidence for termination and closedness as prescribed by the setup.
    /// Probe findings are appended to `notes`.
    pub fn assumptions(&self, budget: JoinBudget, notes: &mut Vec<String>) -> Result<Assumptions, CaseError> {
        let mut a = Assumptions { budget, ..Assumptions::default() };
        match self.setup {
            Setup::Plain | Setup::Subcommutativity => {}
            Setup::ConfluenceAssumeClosed => {
                a.termination = size_reducing_evidence(&self.system);
                a.closedness = Evidence::Asserted;
            }
            Setup::Confluence { probe_nodes } => {
                a.termination = size_reducing_evidence(&self.system);
                a.closedness = probed_closedness(&self.system, &self.predicate, probe_nodes, notes)?;
            }
        }
        Ok(a)
    }

    /// Runs the analysis with the case's own setup.
    pub fn run(&self, budget: JoinBudget) -> Result<AnalysisReport, CaseError> {
        let mut notes = self.notes.clone();
        let assumptions = self.assumptions(budget, &mut notes)?;
        let mut report = analyze(&self.system, &self.predicate, self.mode(), assumptions)?;
        report.notes.extend(notes);
        Ok(report)
    }
}

/// Termination evidence from size reduction, if every rule shrinks the graph.
pub fn size_reducing_evidence(sys: &GtSystem) -> Evidence {
    if check_size_reducing(sys) {
        Evidence::Probed("every rule is size reducing".into())
    } else {
        Evidence::Absent
    }
}

/// Runs the closedness probe on graphs up to `nodes` nodes. No violation
/// yields probed evidence; a violation yields none and a note.
pub fn probed_closedness(
    sys: &GtSystem,
    pred: &LanguagePredicate,
    nodes: usize,
    notes: &mut Vec<String>,
) -> Result<Evidence, CriticalError> {
    let bounds = GraphBounds::nodes(nodes);
    let violations = closedness_probe(sys, pred, bounds)?;
    Ok(match violations.first() {
        Some(v) => {
            notes.push(format!(
                "closedness probe: rule {} leaves the language ({} violations within {} nodes)",
                v.rule,
                violations.len(),
                nodes
            ));
            Evidence::Absent
        }
        None => Evidence::Probed(format!(
            "no violation on graphs up to {} nodes and {} edges, then asserted",
            bounds.max_nodes, bounds.max_edges
        )),
    })
}

pub const CASE_NAMES: &[&str] = &["sp", "lsp", "efd", "eg_a", "eg_b", "eg_0", "eg_1", "eg_2", "eg_3", "eg_4", "eg_6", "eg_sub"];

pub const SAMPLE_NAMES: &[&str] = &["sp_example", "eg1_counterexample", "egb_cycle", "triangle", "two_cycle", "path(n)"];

type NodeSpec<'a> = &'a [(NodeId, &'a str)];
type EdgeSpec<'a> = &'a [(u32, NodeId, NodeId, &'a str)];

fn gr(nodes: NodeSpec, edges: EdgeSpec) -> Graph {
    let mut g = Graph::new();
    for &(n, l) in nodes {
        g.insert_node(n, l);
    }
    for &(e, s, t, l) in edges {
        g.insert_edge(e, s, t, l);
    }
    g
}

fn dots(ids: &[NodeId]) -> Vec<(NodeId, &'static str)> {
    ids.iter().map(|&i| (i, N)).collect()
}

fn rule(name: &str, l: Graph, k: Graph, r: Graph) -> Rule {
    Rule::new(name, l, k, r).expect("case-study rules are well formed")
}

fn system(name: &str, sig: Signature, rules: Vec<Rule>) -> GtSystem {
    GtSystem::new(name, sig, rules).expect("case-study systems are well formed")
}

/// The single edge 1 → 2 (with the given edge label).
fn edge12(l: &str) -> Graph {
    gr(&dots(&[1, 2]), &[(0, 1, 2, l)])
}

fn nodes12() -> Graph {
    gr(&dots(&[1, 2]), &[])
}

/// Series-parallel graph grammar: s replaces an edge by a path of two,
/// p by two parallel edges; start graph is a single edge.
pub fn sp_grammar() -> Grammar {
    let s = rule("s", edge12(E), nodes12(), gr(&dots(&[1, 2, 3]), &[(1, 1, 3, E), (2, 3, 2, E)]));
    let p = rule("p", edge12(E), nodes12(), gr(&dots(&[1, 2]), &[(1, 1, 2, E), (2, 1, 2, E)]));
    Grammar { signature: Signature::unlabelled(), nonterminals: Signature::default(), rules: vec![s, p], start: Graph::path(2) }
}

/// Linked series-parallel reduction rules over edge labels {a, b}:
/// s_xy contracts a path x·y into an a-edge; p1..p3 merge parallel pairs.
pub fn lsp_system() -> GtSystem {
    let sig = Signature::new([N], ["a", "b"]);
    let mut rules = Vec::new();
    for (i, (x, y)) in [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")].into_iter().enumerate() {
        rules.push(rule(
            &format!("s{}", i + 1),
            gr(&dots(&[1, 2, 3]), &[(0, 1, 3, x), (1, 3, 2, y)]),
            nodes12(),
            edge12_id(2, "a"),
        ));
    }
    for (i, (x, y)) in [("a", "a"), ("a", "b"), ("b", "b")].into_iter().enumerate() {
        rules.push(rule(
            &format!("p{}", i + 1),
            gr(&dots(&[1, 2]), &[(0, 1, 2, x), (1, 1, 2, y)]),
            nodes12(),
            edge12_id(2, "a"),
        ));
    }
    system("lsp", sig, rules)
}

fn edge12_id(id: u32, l: &str) -> Graph {
    gr(&dots(&[1, 2]), &[(id, 1, 2, l)])
}

pub fn lsp_recognizer() -> RecognizerSpec {
    RecognizerSpec {
        system: lsp_system(),
        accepting: vec![Graph::build(&[N, N], &[(0, 1, "a")]), Graph::build(&[N, N], &[(0, 1, "b")])],
        input_signature: Signature::new([N], ["a", "b"]),
    }
}

pub const EFD_POINT: &str = "dot";
pub const EFD_STATEMENT: &str = "box";
pub const EFD_DECISION: &str = "diamond";

/// Extended flow diagram grammar over points (•), statements (□) and
/// decisions (◇); decisions branch with t- and f-edges. Every rule expands
/// the statement •1 → □3 → •2. `seq` and `dec2` keep the box 3 and re-wire
/// it; the other rules replace it, keeping only the points 1 and 2.
pub fn efd_grammar() -> Grammar {
    let (p, s, d) = (EFD_POINT, EFD_STATEMENT, EFD_DECISION);
    let sig = Signature::new([p, s, d], ["t", "f", E]);
    let lhs = gr(&[(1, p), (2, p), (3, s)], &[(0, 1, 3, E), (1, 3, 2, E)]);
    let points = gr(&[(1, p), (2, p)], &[]);
    let with_box = gr(&[(1, p), (2, p), (3, s)], &[]);
    let seq = rule("seq", lhs.clone(), with_box.clone(), gr(&[(1, p), (2, p), (3, s), (4, s)], &[(2, 1, 3, E), (3, 3, 4, E), (4, 4, 2, E)]));
    let whl = rule(
        "while",
        lhs.clone(),
        points.clone(),
        gr(&[(1, p), (2, p), (4, d), (5, s)], &[(2, 1, 4, E), (3, 4, 5, "t"), (4, 5, 1, E), (5, 4, 2, "f")]),
    );
    let ddec = rule(
        "ddec",
        lhs.clone(),
        points.clone(),
        gr(
            &[(1, p), (2, p), (4, d), (5, s), (6, s)],
            &[(2, 1, 4, E), (3, 4, 5, "t"), (4, 5, 2, E), (5, 4, 6, "f"), (6, 6, 2, E)],
        ),
    );
    let dec1 = rule(
        "dec1",
        lhs.clone(),
        points,
        gr(&[(1, p), (2, p), (4, d), (5, s)], &[(2, 1, 4, E), (3, 4, 5, "t"), (4, 5, 2, E), (5, 4, 2, "f")]),
    );
    let dec2 = rule(
        "dec2",
        lhs,
        with_box,
        gr(&[(1, p), (2, p), (3, s), (4, d), (5, p)], &[(2, 1, 4, E), (3, 4, 2, "t"), (4, 4, 5, "f"), (5, 5, 3, E), (6, 3, 2, E)]),
    );
    Grammar {
        signature: sig,
        nonterminals: Signature::default(),
        rules: vec![seq, whl, ddec, dec1, dec2],
        start: gr(&[(1, p), (2, s), (3, p)], &[(0, 1, 2, E), (1, 2, 3, E)]),
    }
}

/// `eg_a`: Delete an edge; delete an edge together with its target.
pub fn eg_a_system() -> GtSystem {
    let r1 = rule("r1", edge12(E), nodes12(), nodes12());
    let r2 = rule("r2", edge12(E), gr(&dots(&[1]), &[]), gr(&dots(&[1]), &[]));
    system("eg_a", Signature::unlabelled(), vec![r1, r2])
}

/// `eg_0`: Delete an edge and its target; collapse an edge into a node with
/// one loop; or with two loops.
pub fn eg_0_system() -> GtSystem {
    let r1 = rule("r1", edge12(E), gr(&dots(&[1]), &[]), gr(&dots(&[1]), &[]));
    let r2 = rule("r2", edge12(E), Graph::new(), gr(&dots(&[3]), &[(1, 3, 3, E)]));
    let r3 = rule("r3", edge12(E), Graph::new(), gr(&dots(&[3]), &[(1, 3, 3, E), (2, 3, 3, E)]));
    system("eg_0", Signature::unlabelled(), vec![r1, r2, r3])
}

/// `eg_1`: An a-edge becomes a b-loop on its source, or on its target.
pub fn eg_1_system() -> GtSystem {
    let r1 = rule("r1", edge12("a"), nodes12(), gr(&dots(&[1, 2]), &[(1, 1, 1, "b")]));
    let r2 = rule("r2", edge12("a"), nodes12(), gr(&dots(&[1, 2]), &[(1, 2, 2, "b")]));
    system("eg_1", Signature::new([N], ["a", "b"]), vec![r1, r2])
}

/// `eg_2`: Loops on two nodes lose one; a double loop loses one; edges vanish.
pub fn eg_2_system() -> GtSystem {
    let r1 = rule("r1", gr(&dots(&[1, 2]), &[(0, 1, 1, E), (1, 2, 2, E)]), nodes12(), gr(&dots(&[1, 2]), &[(0, 1, 1, E)]));
    let r2 = rule("r2", gr(&dots(&[1]), &[(0, 1, 1, E), (1, 1, 1, E)]), gr(&dots(&[1]), &[]), gr(&dots(&[1]), &[(2, 1, 1, E)]));
    let r3 = rule("r3", edge12(E), nodes12(), nodes12());
    system("eg_2", Signature::unlabelled(), vec![r1, r2, r3])
}

/// `eg_3`: Move a loop along an edge; delete an edge into a looped node together
/// with that node, putting the loop on the source.
pub fn eg_3_system() -> GtSystem {
    let r1 = rule(
        "r1",
        gr(&dots(&[1, 2]), &[(0, 1, 1, E), (1, 1, 2, E)]),
        nodes12(),
        gr(&dots(&[1, 2]), &[(2, 1, 2, E), (3, 2, 2, E)]),
    );
    let r2 = rule(
        "r2",
        gr(&dots(&[1, 2]), &[(0, 1, 2, E), (1, 2, 2, E)]),
        gr(&dots(&[1]), &[]),
        gr(&dots(&[1]), &[(2, 1, 1, E)]),
    );
    system("eg_3", Signature::unlabelled(), vec![r1, r2])
}

/// `eg_6`: A directed triangle collapses into a node with one or two loops.
pub fn eg_6_system() -> GtSystem {
    let tri = gr(&dots(&[1, 2, 3]), &[(0, 1, 2, E), (1, 2, 3, E), (2, 3, 1, E)]);
    let r1 = rule("r1", tri.clone(), Graph::new(), gr(&dots(&[4]), &[(3, 4, 4, E)]));
    let r2 = rule("r2", tri, Graph::new(), gr(&dots(&[4]), &[(3, 4, 4, E), (4, 4, 4, E)]));
    system("eg_6", Signature::unlabelled(), vec![r1, r2])
}

/// `eg_sub`: Add a node next to a node; replace a node by two; delete a looped node.
pub fn eg_sub_system() -> GtSystem {
    let one = gr(&dots(&[1]), &[]);
    let r1 = rule("r1", one.clone(), one.clone(), gr(&dots(&[1, 2]), &[]));
    let r2 = rule("r2", one, Graph::new(), gr(&dots(&[2, 3]), &[]));
    let r3 = rule("r3", gr(&dots(&[1]), &[(0, 1, 1, E)]), Graph::new(), Graph::new());
    system("eg_sub", Signature::unlabelled(), vec![r1, r2, r3])
}

/// Disjoint unions of directed paths.
pub fn is_linear_forest(g: &Graph) -> bool {
    predicates::is_acyclic(g) && g.node_ids().all(|n| g.in_degree(n) <= 1 && g.out_degree(n) <= 1)
}

fn is_single_path(g: &Graph, min_edges: usize) -> bool {
    is_linear_forest(g) && g.edge_count() >= min_edges && g.node_count() == g.edge_count() + 1
}

/// Linked lists (directed paths, including the single node); closure = linear forests.
pub fn linked_lists() -> LanguagePredicate {
    LanguagePredicate::with_closure("linked_lists", |g| is_single_path(g, 0), is_linear_forest)
}

/// Trees (as undirected graphs) carrying exactly one loop; closure = forests
/// with at most one loop.
pub fn trees_with_one_loop() -> LanguagePredicate {
    fn split(g: &Graph) -> (Graph, usize) {
        let mut h = g.clone();
        let loops: Vec<_> = g.edges().filter(|(_, e)| e.source == e.target).map(|(id, _)| id).collect();
        for &l in &loops {
            h.remove_edge(l);
        }
        (h, loops.len())
    }
    LanguagePredicate::with_closure(
        "trees_with_one_loop",
        |g| {
            let (h, loops) = split(g);
            loops == 1 && is_forest(&h) && h.edge_count() + 1 == h.node_count()
        },
        |g| {
            let (h, loops) = split(g);
            loops <= 1 && is_forest(&h)
        },
    )
}

/// Lists with at least two edges; closure = linear forests.
pub fn long_lists() -> LanguagePredicate {
    LanguagePredicate::with_closure("lists_of_two_or_more", |g| is_single_path(g, 2), is_linear_forest)
}

/// Predicates defined here, by the name they report.
pub fn named_predicate(name: &str) -> Option<LanguagePredicate> {
    match name {
        "linked_lists" => Some(linked_lists()),
        "trees_with_one_loop" => Some(trees_with_one_loop()),
        "lists_of_two_or_more" => Some(long_lists()),
        "linear_forests" => Some(LanguagePredicate::closed(name, is_linear_forest)),
        _ => None,
    }
}

pub fn build(name: &str) -> Result<CaseStudy, CaseError> {
    let builtin = |n: &str| predicates::builtin(n).expect("known builtin");
    let exp = |pairs, ng: Option<usize>, sj: Option<usize>| Expected { pairs, non_garbage: ng, strongly_joinable: sj };
    let case = match name {
        "sp" => {
            let grammar = sp_grammar();
            let rec = grammar_to_recognizer("sp", &grammar).expect("well formed");
            CaseStudy {
                name: name.into(),
                system: rec.system.clone(),
                predicate: builtin("all"),
                grammar: Some(grammar),
                recognizer: Some(rec),
                type_graph: None,
                expected: exp(4, Some(4), Some(4)),
                setup: Setup::ConfluenceAssumeClosed,
                notes: vec![],
            }
        }
        "lsp" => CaseStudy {
            name: name.into(),
            system: lsp_system(),
            predicate: builtin("acyclic"),
            grammar: None,
            recognizer: Some(lsp_recognizer()),
            type_graph: None,
            expected: exp(26, Some(18), None),
            setup: Setup::Confluence { probe_nodes: 4 },
            notes: vec!["linked series-parallel graphs are acyclic, so confluence up to garbage on acyclic graphs \
                         carries over to them"
                .into()],
        },
        "efd" => {
            let grammar = efd_grammar();
            let rec = grammar_to_recognizer("efd", &grammar).expect("well formed");
            CaseStudy {
                name: name.into(),
                system: rec.system.clone(),
                predicate: builtin("efd_t_cycle"),
                grammar: Some(grammar),
                recognizer: Some(rec),
                type_graph: None,
                expected: exp(10, Some(9), Some(9)),
                setup: Setup::ConfluenceAssumeClosed,
                notes: vec![],
            }
        }
        "eg_a" => CaseStudy {
            name: name.into(),
            system: eg_a_system(),
            predicate: builtin("discrete"),
            grammar: None,
            recognizer: None,
            type_graph: None,
            expected: exp(enumerate_len(&eg_a_system()), None, None),
            setup: Setup::ConfluenceAssumeClosed,
            notes: vec![],
        },
        "eg_b" | "eg_4" => {
            let sys = GtSystem { name: name.into(), ..lsp_system() };
            let sys = GtSystem { rules: sys.rules[..4].to_vec(), ..sys };
            CaseStudy {
                name: name.into(),
                system: sys,
                predicate: if name == "eg_b" { linked_lists() } else { builtin("acyclic") },
                grammar: None,
                recognizer: None,
                type_graph: None,
                expected: exp(16, Some(8), None),
                setup: Setup::ConfluenceAssumeClosed,
                notes: vec![],
            }
        }
        "eg_0" => CaseStudy {
            name: name.into(),
            system: eg_0_system(),
            predicate: long_lists(),
            grammar: None,
            recognizer: None,
            type_graph: None,
            expected: exp(enumerate_len(&eg_0_system()), None, None),
            setup: Setup::Subcommutativity,
            notes: vec![],
        },
        "eg_1" => CaseStudy {
            name: name.into(),
            system: eg_1_system(),
            predicate: builtin("all"),
            grammar: None,
            recognizer: None,
            type_graph: None,
            expected: exp(1, Some(1), Some(0)),
            setup: Setup::Plain,
            notes: vec![],
        },
        "eg_2" => CaseStudy {
            name: name.into(),
            system: eg_2_system(),
            predicate: builtin("all"),
            grammar: None,
            recognizer: None,
            type_graph: None,
            expected: exp(enumerate_len(&eg_2_system()), None, None),
            setup: Setup::ConfluenceAssumeClosed,
            notes: vec![],
        },
        "eg_3" => CaseStudy {
            name: name.into(),
            system: eg_3_system(),
            predicate: trees_with_one_loop(),
            grammar: None,
            recognizer: None,
            type_graph: None,
            expected: exp(4, None, None),
            setup: Setup::ConfluenceAssumeClosed,
            notes: vec![],
        },
        "eg_6" => CaseStudy {
            name: name.into(),
            system: eg_6_system(),
            predicate: TypeGraphPredicate::two_colour(&Signature::unlabelled()).predicate("two_colourable"),
            grammar: None,
            recognizer: None,
            type_graph: Some(TypeGraphPredicate::two_colour(&Signature::unlabelled()).type_graph),
            expected: exp(5, Some(0), None),
            setup: Setup::ConfluenceAssumeClosed,
            notes: vec![],
        },
        "eg_sub" => CaseStudy {
            name: name.into(),
            system: eg_sub_system(),
            predicate: builtin("discrete"),
            grammar: None,
            recognizer: None,
            type_graph: None,
            expected: exp(2, Some(1), None),
            setup: Setup::Subcommutativity,
            notes: vec![],
        },
        _ => return Err(CaseError::UnknownCase(name.into())),
    };
    Ok(case)
}

fn enumerate_len(sys: &GtSystem) -> usize {
    crate::critical::enumerate_critical_pairs(sys).len()
}

/// Named sample graphs; `path(n)` for any n.
pub fn sample_graph(name: &str) -> Result<Graph, CaseError> {
    let g = match name {
        "sp_example" => sp_example(),
        "eg1_counterexample" => Graph::build(&[N, N], &[(0, 1, "a"), (1, 0, "b")]),
        "egb_cycle" => Graph::build(&[N, N, N], &[(0, 1, "a"), (1, 2, "a"), (2, 0, "b")]),
        "triangle" => Graph::cycle(3),
        "two_cycle" => Graph::cycle(2),
        _ => {
            let n = name
                .strip_prefix("path(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| CaseError::UnknownSample(name.into()))?;
            Graph::path(n)
        }
    };
    Ok(g)
}

/// An eleven-node series-parallel graph from source a to sink m.
fn sp_example() -> Graph {
    // a b c d e f g i j l m
    let (a, b, c, d, e, f, g, i, j, l, m) = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10);
    let edges = [
        (a, b),
        (a, b),
        (a, e),
        (b, d),
        (a, c),
        (c, f),
        (d, g),
        (d, m),
        (e, i),
        (f, i),
        (g, j),
        (i, m),
        (j, l),
        (j, l),
        (l, m),
    ];
    Graph::unlabelled(11, &edges)
}
