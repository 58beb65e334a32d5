//! Exhaustive enumeration of small graphs up to isomorphism.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::canon::{canonical_key, CanonicalKey};
use crate::graph::{Graph, Label, Signature};

/// Size limits for exhaustive enumeration. Graphs with loops and parallel
/// edges are unbounded in edges even for a fixed node count, so both are capped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphBounds {
    pub max_nodes: usize,
    pub max_edges: usize,
}

impl GraphBounds {
    pub fn new(max_nodes: usize, max_edges: usize) -> Self {
        GraphBounds { max_nodes, max_edges }
    }

    /// Default edge cap for a node bound: twice the node count.
    pub fn nodes(max_nodes: usize) -> Self {
        GraphBounds { max_nodes, max_edges: 2 * max_nodes }
    }
}

fn multisets(labels: &[Label], n: usize, start: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for i in start..labels.len() {
        cur.push(labels[i].clone());
        multisets(labels, n, i, cur, out);
        cur.pop();
    }
}

/// All graphs over `sig` within `bounds`, one per isomorphism class, that
/// satisfy `keep`. When `keep_is_subgraph_closed` is set, non-members are
/// pruned during generation (sound because every member is reachable from a
/// smaller member by adding one edge).
pub fn enumerate_graphs(
    sig: &Signature,
    bounds: GraphBounds,
    keep: &(dyn Fn(&Graph) -> bool + Sync),
    keep_is_subgraph_closed: bool,
) -> Vec<Graph> {
    let nlabels: Vec<Label> = sig.node_labels.iter().cloned().collect();
    let elabels: Vec<Label> = sig.edge_labels.iter().cloned().collect();
    let mut out = Vec::new();
    for n in 0..=bounds.max_nodes {
        let mut sets = Vec::new();
        multisets(&nlabels, n, 0, &mut Vec::new(), &mut sets);
        if n > 0 && nlabels.is_empty() {
            continue;
        }
        let mut level: Vec<(CanonicalKey, Graph)> = sets
            .into_iter()
            .map(|ls| {
                let mut g = Graph::new();
                for l in ls {
                    g.add_node(l);
                }
                (canonical_key(&g), g)
            })
            .filter(|(_, g)| !keep_is_subgraph_closed || keep(g))
            .collect();
        level.sort_by(|a, b| a.0.cmp(&b.0));
        for e in 0..=bounds.max_edges {
            out.extend(level.iter().filter(|(_, g)| keep_is_subgraph_closed || keep(g)).map(|(_, g)| g.clone()));
            if e == bounds.max_edges || n == 0 || elabels.is_empty() {
                break;
            }
            let children: Vec<Vec<(CanonicalKey, Graph)>> = level
                .par_iter()
                .map(|(_, g)| {
                    let mut kids = Vec::new();
                    let ids: Vec<_> = g.node_ids().collect();
                    for &s in &ids {
                        for &t in &ids {
                            for l in &elabels {
                                let mut h = g.clone();
                                h.add_edge(s, t, l.clone());
                                if keep_is_subgraph_closed && !keep(&h) {
                                    continue;
                                }
                                kids.push((canonical_key(&h), h));
                            }
                        }
                    }
                    kids
                })
                .collect();
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for (k, h) in children.into_iter().flatten() {
                if seen.insert(k.clone()) {
                    next.push((k, h));
                }
            }
            next.sort_by(|a, b| a.0.cmp(&b.0));
            level = next;
        }
    }
    out
}

pub fn all_graphs(sig: &Signature, bounds: GraphBounds) -> Vec<Graph> {
    enumerate_graphs(sig, bounds, &|_| true, true)
}

/// All graphs within `bounds` that contain `base` as a subgraph, one per
/// isomorphism class. Every such graph arises from `base` by adding nodes and
/// edges one at a time, which is how they are generated.
pub fn supergraphs(base: &Graph, sig: &Signature, bounds: GraphBounds) -> Vec<Graph> {
    let nlabels: Vec<Label> = sig.node_labels.iter().cloned().collect();
    let elabels: Vec<Label> = sig.edge_labels.iter().cloned().collect();
    if base.node_count() > bounds.max_nodes || base.edge_count() > bounds.max_edges {
        return Vec::new();
    }
    let mut seen = HashSet::from([canonical_key(base)]);
    let mut level = vec![base.clone()];
    let mut out = Vec::new();
    while !level.is_empty() {
        let children: Vec<Vec<(CanonicalKey, Graph)>> = level
            .par_iter()
            .map(|g| {
                let mut kids = Vec::new();
                if g.node_count() < bounds.max_nodes {
                    for l in &nlabels {
                        let mut h = g.clone();
                        h.add_node(l.clone());
                        kids.push((canonical_key(&h), h));
                    }
                }
                if g.edge_count() < bounds.max_edges {
                    let ids: Vec<_> = g.node_ids().collect();
                    for &s in &ids {
                        for &t in &ids {
                            for l in &elabels {
                                let mut h = g.clone();
                                h.add_edge(s, t, l.clone());
                                kids.push((canonical_key(&h), h));
                            }
                        }
                    }
                }
                kids
            })
            .collect();
        out.append(&mut level);
        let mut next: Vec<(CanonicalKey, Graph)> =
            children.into_iter().flatten().filter(|(k, _)| seen.insert(k.clone())).collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, g)| g).collect();
    }
    out
}
