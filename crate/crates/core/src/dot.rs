//! DOT export for graphs, rules and critical pairs. Output only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::critical::CriticalPair;
use crate::dpo::Rule;
use crate::graph::{Graph, Morphism, NodeId};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Writes nodes and edges with `prefix` on every DOT id; `numbers` marks
/// persistent nodes, which are drawn bold with their number.
fn body(out: &mut String, g: &Graph, prefix: &str, numbers: &BTreeMap<NodeId, usize>, indent: &str) {
    for (n, l) in g.nodes() {
        match numbers.get(&n) {
            Some(k) => {
                let _ = writeln!(out, "{indent}{prefix}n{n} [label={}, style=bold, xlabel=\"{k}\"];", quote(&format!("{n}: {l}")));
            }
            None => {
                let _ = writeln!(out, "{indent}{prefix}n{n} [label={}];", quote(&format!("{n}: {l}")));
            }
        }
    }
    for (_, e) in g.edges() {
        let _ = writeln!(out, "{indent}{prefix}n{} -> {prefix}n{} [label={}];", e.source, e.target, quote(e.label.as_str()));
    }
}

pub fn graph_to_dot(g: &Graph) -> String {
    if g.is_empty() {
        return "digraph { }\n".to_string();
    }
    let mut out = String::from("digraph {\n");
    body(&mut out, g, "", &BTreeMap::new(), "  ");
    out.push_str("}\n");
    out
}

fn cluster(out: &mut String, name: &str, title: &str, g: &Graph, numbers: &BTreeMap<NodeId, usize>) {
    let _ = writeln!(out, "  subgraph cluster_{name} {{");
    let _ = writeln!(out, "    label={};", quote(title));
    body(out, g, &format!("{name}_"), numbers, "    ");
    out.push_str("  }\n");
}

fn numbering(nodes: &BTreeSet<NodeId>) -> BTreeMap<NodeId, usize> {
    nodes.iter().enumerate().map(|(i, &n)| (n, i + 1)).collect()
}

fn image(numbers: &BTreeMap<NodeId, usize>, track: &Morphism) -> BTreeMap<NodeId, usize> {
    numbers.iter().filter_map(|(&n, &k)| track.node(n).map(|m| (m, k))).collect()
}

/// Overlap G in the middle, the two results H₁ and H₂ either side;
/// persistent nodes carry the same number in all three.
pub fn pair_to_dot(p: &CriticalPair) -> String {
    let numbers = numbering(&p.persistent);
    let (r1, r2) = p.rules();
    let mut out = String::from("digraph {\n  rankdir=LR;\n");
    cluster(&mut out, "H1", &format!("H1 ({r1})"), &p.left.result, &image(&numbers, &p.left.track));
    cluster(&mut out, "G", "G", &p.overlap, &numbers);
    cluster(&mut out, "H2", &format!("H2 ({r2})"), &p.right.result, &image(&numbers, &p.right.track));
    out.push_str("}\n");
    out
}

/// L, K and R side by side; interface nodes numbered.
pub fn rule_to_dot(r: &Rule) -> String {
    let numbers = numbering(&r.interface.node_ids().collect());
    let mut out = format!("digraph {{\n  rankdir=LR;\n  label={};\n", quote(&r.name));
    cluster(&mut out, "L", "L", &r.lhs, &numbers);
    cluster(&mut out, "K", "K", &r.interface, &numbers);
    cluster(&mut out, "R", "R", &r.rhs, &numbers);
    out.push_str("}\n");
    out
}
