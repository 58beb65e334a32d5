//! Brute-force oracles and checks shared by the property and acceptance suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use gtx::critical::{enumerate_critical_pairs, parallel_independent, CriticalPair};
use gtx::dpo::{apply, check_dangling, derivation_roundtrip, matches, GtSystem, ReductionPolicy, Rule};
use gtx::predicates::labels_outside;
use gtx::recognizer::{recognize, recognize_with_backtracking, RecognizerSpec};
use gtx::enumerate::{supergraphs, GraphBounds};
use gtx::graph::{EdgeId, Graph, Label, Morphism, NodeId, Signature};
use gtx::{canonical_key, isomorphic, CanonicalKey};
use rand::seq::SliceRandom;
use rand::Rng;

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism-invariant form by trying every node order: the least
/// (node labels, sorted edge list) over all relabellings to `0..n`.
pub fn brute_form(g: &Graph) -> (Vec<String>, Vec<(usize, usize, String)>) {
    let ids: Vec<NodeId> = g.node_ids().collect();
    let mut best: Option<(Vec<String>, Vec<(usize, usize, String)>)> = None;
    for p in permutations(ids.len()) {
        let pos: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &n)| (n, p[i])).collect();
        let mut labels = vec![String::new(); ids.len()];
        for (n, l) in g.nodes() {
            labels[pos[&n]] = l.to_string();
        }
        let mut edges: Vec<(usize, usize, String)> =
            g.edges().map(|(_, e)| (pos[&e.source], pos[&e.target], e.label.to_string())).collect();
        edges.sort();
        let cand = (labels, edges);
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    }
    best.unwrap()
}

pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.node_count() == h.node_count() && g.edge_count() == h.edge_count() && brute_form(g) == brute_form(h)
}

/// Every labelled graph (not up to isomorphism) with node ids `0..n` for
/// n ≤ `max_nodes`, edges with ids `0..m` for m ≤ `max_edges`, with edges
/// listed in non-decreasing (source, target, label) order.
pub fn raw_graphs(node_labels: &[&str], edge_labels: &[&str], max_nodes: usize, max_edges: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 0..=max_nodes {
        let mut labellings = vec![vec![]];
        for _ in 0..n {
            labellings = labellings
                .into_iter()
                .flat_map(|v: Vec<&str>| node_labels.iter().map(move |l| [v.clone(), vec![*l]].concat()))
                .collect();
        }
        let slots: Vec<(u32, u32, &str)> = (0..n as u32)
            .flat_map(|s| (0..n as u32).flat_map(move |t| edge_labels.iter().map(move |l| (s, t, *l))))
            .collect();
        for labels in &labellings {
            let mut base = Graph::new();
            for (i, l) in labels.iter().enumerate() {
                base.insert_node(i as NodeId, *l);
            }
            edge_multisets(&base, &slots, 0, max_edges, &mut out);
        }
    }
    out
}

fn edge_multisets(g: &Graph, slots: &[(u32, u32, &str)], from: usize, left: usize, out: &mut Vec<Graph>) {
    out.push(g.clone());
    if left == 0 {
        return;
    }
    for (i, &(s, t, l)) in slots.iter().enumerate().skip(from) {
        let mut h = g.clone();
        h.add_edge(s, t, l);
        edge_multisets(&h, slots, i, left - 1, out);
    }
}

/// Injective, label- and incidence-preserving maps, by exhaustive search
/// over node maps and then edge maps.
pub fn brute_monomorphism_count(p: &Graph, h: &Graph) -> usize {
    let pn: Vec<NodeId> = p.node_ids().collect();
    let hn: Vec<NodeId> = h.node_ids().collect();
    let mut count = 0;
    let mut assign: Vec<NodeId> = Vec::new();
    fn nodes(p: &Graph, h: &Graph, pn: &[NodeId], hn: &[NodeId], assign: &mut Vec<NodeId>, count: &mut usize) {
        if assign.len() == pn.len() {
            let map: BTreeMap<NodeId, NodeId> = pn.iter().copied().zip(assign.iter().copied()).collect();
            let pe: Vec<EdgeId> = p.edge_ids().collect();
            *count += edges(p, h, &map, &pe, &mut BTreeSet::new());
            return;
        }
        let lp = p.node_label(pn[assign.len()]);
        for &c in hn {
            if !assign.contains(&c) && h.node_label(c) == lp {
                assign.push(c);
                nodes(p, h, pn, hn, assign, count);
                assign.pop();
            }
        }
    }
    fn edges(p: &Graph, h: &Graph, map: &BTreeMap<NodeId, NodeId>, pe: &[EdgeId], used: &mut BTreeSet<EdgeId>) -> usize {
        let Some((&e, rest)) = pe.split_first() else { return 1 };
        let ed = p.edge(e).unwrap();
        let mut total = 0;
        for (f, fd) in h.edges() {
            if !used.contains(&f) && fd.source == map[&ed.source] && fd.target == map[&ed.target] && fd.label == ed.label {
                used.insert(f);
                total += edges(p, h, map, rest, used);
                used.remove(&f);
            }
        }
        total
    }
    nodes(p, h, &pn, &hn, &mut assign, &mut count);
    count
}

/// Every simple directed cycle (as its edge ids), loops included; found by
/// depth-first search from each start node over edges, starting each cycle
/// at its least node.
pub fn brute_cycles(g: &Graph) -> Vec<Vec<EdgeId>> {
    let mut out = Vec::new();
    for start in g.node_ids() {
        let mut path: Vec<EdgeId> = Vec::new();
        let mut on: BTreeSet<NodeId> = BTreeSet::from([start]);
        fn dfs(g: &Graph, start: NodeId, at: NodeId, path: &mut Vec<EdgeId>, on: &mut BTreeSet<NodeId>, out: &mut Vec<Vec<EdgeId>>) {
            for (id, e) in g.edges() {
                if e.source != at {
                    continue;
                }
                if e.target == start {
                    path.push(id);
                    out.push(path.clone());
                    path.pop();
                } else if e.target > start && !on.contains(&e.target) {
                    path.push(id);
                    on.insert(e.target);
                    dfs(g, start, e.target, path, on, out);
                    on.remove(&e.target);
                    path.pop();
                }
            }
        }
        dfs(g, start, start, &mut path, &mut on, &mut out);
    }
    out
}

pub fn random_graph(rng: &mut impl Rng, node_labels: &[&str], edge_labels: &[&str], max_nodes: usize, max_edges: usize) -> Graph {
    let mut g = Graph::new();
    let n = rng.gen_range(1..=max_nodes);
    for _ in 0..n {
        g.add_node(*node_labels.choose(rng).unwrap());
    }
    let ids: Vec<NodeId> = g.node_ids().collect();
    for _ in 0..rng.gen_range(0..=max_edges) {
        let (s, t) = (*ids.choose(rng).unwrap(), *ids.choose(rng).unwrap());
        g.add_edge(s, t, *edge_labels.choose(rng).unwrap());
    }
    g
}

/// A random rule: L random, K a random subgraph of L, R = K plus fresh items.
pub fn random_rule(rng: &mut impl Rng, node_labels: &[&str], edge_labels: &[&str]) -> Rule {
    let lhs = random_graph(rng, node_labels, edge_labels, 3, 3);
    let mut k = Graph::new();
    for (n, l) in lhs.nodes() {
        if rng.gen_bool(0.6) {
            k.insert_node(n, l.clone());
        }
    }
    for (e, ed) in lhs.edges() {
        if k.has_node(ed.source) && k.has_node(ed.target) && rng.gen_bool(0.5) {
            k.insert_edge(e, ed.source, ed.target, ed.label.clone());
        }
    }
    let mut rhs = k.clone();
    let (nw, ew) = lhs.watermarks();
    let mut next_node = nw;
    for _ in 0..rng.gen_range(0..=2) {
        rhs.insert_node(next_node, *node_labels.choose(rng).unwrap());
        next_node += 1;
    }
    let ids: Vec<NodeId> = rhs.node_ids().collect();
    if !ids.is_empty() {
        for i in 0..rng.gen_range(0..=2) {
            let (s, t) = (*ids.choose(rng).unwrap(), *ids.choose(rng).unwrap());
            rhs.insert_edge(ew + i, s, t, *edge_labels.choose(rng).unwrap());
        }
    }
    Rule::new("random", lhs, k, rhs).expect("K is a subgraph of both sides by construction")
}

/// Applying a rule and then its inverse at the comatch gives back the host.
pub fn check_invertibility(rule: &Arc<Rule>, host: &Graph, m: &Morphism) -> Result<(), String> {
    let d = apply(rule, host, m).map_err(|e| e.to_string())?;
    let back = derivation_roundtrip(&d);
    if isomorphic(&back.result, host).is_none() {
        return Err(format!("roundtrip of {host:?} gave {:?}", back.result));
    }
    if !back.comatch.is_injective() || back.comatch.check_total(&rule.lhs, &back.result).is_err() {
        return Err("inverse comatch is not a match of L".into());
    }
    Ok(())
}

/// All (rule, match) steps on `host`.
pub fn steps(sys: &GtSystem, host: &Graph) -> Vec<(Arc<Rule>, Morphism)> {
    let mut out = Vec::new();
    for r in &sys.rules {
        for m in matches(r, host) {
            if check_dangling(r, host, &m.embedding) {
                out.push((r.clone(), m.embedding));
            }
        }
    }
    out
}

/// Counts (independent, conflicting) step pairs; fails on an independent
/// pair whose two orders of application end in non-isomorphic graphs.
pub fn check_commutativity(sys: &GtSystem, host: &Graph) -> Result<(usize, usize), String> {
    let st = steps(sys, host);
    let (mut independent, mut conflicts) = (0, 0);
    for i in 0..st.len() {
        for j in i + 1..st.len() {
            let (r1, m1) = &st[i];
            let (r2, m2) = &st[j];
            let d1 = apply(r1, host, m1).unwrap();
            let d2 = apply(r2, host, m2).unwrap();
            if !parallel_independent(&d1, &d2).unwrap() {
                conflicts += 1;
                continue;
            }
            independent += 1;
            let m2_after = m2.then(&d1.track);
            let m1_after = m1.then(&d2.track);
            let a = apply(r2, &d1.result, &m2_after).map_err(|e| format!("{} after {}: {e}", r2.name, r1.name))?;
            let b = apply(r1, &d2.result, &m1_after).map_err(|e| format!("{} after {}: {e}", r1.name, r2.name))?;
            if isomorphic(&a.result, &b.result).is_none() {
                return Err(format!("{} and {} do not commute on {host:?}", r1.name, r2.name));
            }
        }
    }
    Ok((independent, conflicts))
}

fn restrict(g: &Graph, m1: &Morphism, m2: &Morphism) -> Graph {
    let nodes: BTreeSet<NodeId> = m1.nodes.values().chain(m2.nodes.values()).copied().collect();
    let edges: BTreeSet<EdgeId> = m1.edges.values().chain(m2.edges.values()).copied().collect();
    let mut s = Graph::new();
    for n in nodes {
        s.insert_node(n, g.node_label(n).unwrap().clone());
    }
    for e in edges {
        let ed = g.edge(e).unwrap();
        s.insert_edge(e, ed.source, ed.target, ed.label.clone());
    }
    s
}

/// `p` embeds the conflict (m1, m2) on `s` = m1(L1) ∪ m2(L2): some
/// isomorphism f of the overlap onto `s` carries p's matches to m1 and m2,
/// up to automorphisms of the left-hand sides that fix the interface.
fn embeds(p: &CriticalPair, s: &Graph, r1: &Rule, m1: &Morphism, r2: &Rule, m2: &Morphism) -> bool {
    if (p.left.rule.name.as_str(), p.right.rule.name.as_str()) != (r1.name.as_str(), r2.name.as_str()) {
        return false;
    }
    let a1 = r1.interface_automorphisms();
    let a2 = r2.interface_automorphisms();
    let mut found = false;
    gtx::matching::for_each_isomorphism(&p.overlap, s, |f| {
        let l = p.left.matching.then(f);
        let r = p.right.matching.then(f);
        found = a1.iter().any(|a| a.then(m1) == l) && a2.iter().any(|a| a.then(m2) == r);
        if found {
            std::ops::ControlFlow::Break(())
        } else {
            std::ops::ControlFlow::Continue(())
        }
    });
    found
}

/// Every conflicting step pair on `host` embeds one of `pairs`. Returns the
/// number of conflicts checked.
pub fn check_completeness(sys: &GtSystem, pairs: &[CriticalPair], host: &Graph) -> Result<usize, String> {
    let st = steps(sys, host);
    let order: HashMap<&str, usize> = sys.rules.iter().enumerate().map(|(i, r)| (r.name.as_str(), i)).collect();
    let mut conflicts = 0;
    for i in 0..st.len() {
        for j in i + 1..st.len() {
            let (mut a, mut b) = (&st[i], &st[j]);
            if order[a.0.name.as_str()] > order[b.0.name.as_str()] {
                std::mem::swap(&mut a, &mut b);
            }
            let ((r1, m1), (r2, m2)) = (a, b);
            let d1 = apply(r1, host, m1).unwrap();
            let d2 = apply(r2, host, m2).unwrap();
            if parallel_independent(&d1, &d2).unwrap() {
                continue;
            }
            conflicts += 1;
            let s = restrict(host, m1, m2);
            let found = pairs
                .iter()
                .any(|p| embeds(p, &s, r1, m1, r2, m2) || (r1.name == r2.name && embeds(p, &s, r2, m2, r1, m1)));
            if !found {
                return Err(format!("conflict {} / {} on {host:?} embeds no critical pair", r1.name, r2.name));
            }
        }
    }
    Ok(conflicts)
}

/// Hosts within `bounds` on which some rule has a match (the only hosts
/// where two steps can exist), one per isomorphism class.
pub fn hosts_with_steps(sys: &GtSystem, bounds: GraphBounds) -> Vec<Graph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in &sys.rules {
        for g in supergraphs(&r.lhs, &sys.signature, bounds) {
            if seen.insert(canonical_key(&g)) {
                out.push(g);
            }
        }
    }
    out
}

/// Runs the commutativity and completeness checks over every host with a step.
pub fn check_system_on_small_hosts(sys: &GtSystem, bounds: GraphBounds) -> Result<(usize, usize, usize), String> {
    let pairs = enumerate_critical_pairs(sys);
    let hosts = hosts_with_steps(sys, bounds);
    let (mut ind, mut conf) = (0, 0);
    for h in &hosts {
        let (i, c) = check_commutativity(sys, h)?;
        ind += i;
        conf += c;
        check_completeness(sys, &pairs, h)?;
    }
    Ok((hosts.len(), ind, conf))
}

/// canonical_key agrees with brute-force isomorphism on every graph of the
/// list: equal keys ⇔ equal brute-force forms. Returns the class count.
pub fn check_canonical_keys(graphs: &[Graph]) -> Result<usize, String> {
    let mut by_form: HashMap<(Vec<String>, Vec<(usize, usize, String)>), CanonicalKey> = HashMap::new();
    let mut by_key: HashMap<CanonicalKey, (Vec<String>, Vec<(usize, usize, String)>)> = HashMap::new();
    for g in graphs {
        let form = brute_form(g);
        let key = canonical_key(g);
        if let Some(k) = by_form.get(&form) {
            if *k != key {
                return Err(format!("isomorphic graphs with different keys: {g:?}"));
            }
        } else {
            by_form.insert(form.clone(), key.clone());
        }
        if let Some(f) = by_key.get(&key) {
            if *f != form {
                return Err(format!("non-isomorphic graphs share a key: {g:?}"));
            }
        } else {
            by_key.insert(key, form);
        }
    }
    Ok(by_form.len())
}

pub fn signature(node_labels: &[&str], edge_labels: &[&str]) -> Signature {
    Signature {
        node_labels: node_labels.iter().map(|l| Label::new(l)).collect(),
        edge_labels: edge_labels.iter().map(|l| Label::new(l)).collect(),
    }
}

/// A random rule and a host containing a copy of its left-hand side, with a
/// match that satisfies the dangling condition; `None` if the chosen copy
/// dangles and no other match does either.
pub fn random_instance(rng: &mut impl Rng, node_labels: &[&str], edge_labels: &[&str]) -> Option<(Arc<Rule>, Graph, Morphism)> {
    let rule = Arc::new(random_rule(rng, node_labels, edge_labels));
    let mut host = random_graph(rng, node_labels, edge_labels, 3, 3);
    let copy = host.disjoint_union(&rule.lhs);
    let ids: Vec<NodeId> = host.node_ids().collect();
    for _ in 0..rng.gen_range(0..=2) {
        let (s, t) = (*ids.choose(rng).unwrap(), *ids.choose(rng).unwrap());
        host.add_edge(s, t, *edge_labels.choose(rng).unwrap());
    }
    if check_dangling(&rule, &host, &copy) {
        return Some((rule, host, copy));
    }
    let m = matches(&rule, &host).into_iter().find(|m| check_dangling(&rule, &host, &m.embedding))?;
    Some((rule, host, m.embedding))
}

/// `recognize` and `recognize_with_backtracking` agree on every graph.
/// Returns the number accepted.
pub fn check_recognition_agreement(spec: &RecognizerSpec, graphs: &[Graph]) -> Result<usize, String> {
    let mut accepted = 0;
    for g in graphs {
        let fast = recognize(spec, g, ReductionPolicy::First, 1_000).map_err(|e| format!("{g:?}: {e}"))?.accepted;
        let slow = recognize_with_backtracking(spec, g, 1_000_000).map_err(|e| format!("{g:?}: {e}"))?;
        if fast != slow {
            return Err(format!("recognize says {fast}, backtracking says {slow} on {g:?}"));
        }
        accepted += fast as usize;
    }
    Ok(accepted)
}

/// Inputs for the recognition comparison: graphs over the input signature
/// within `bounds`, one per isomorphism class.
pub fn recognition_inputs(spec: &RecognizerSpec, bounds: GraphBounds) -> Vec<Graph> {
    gtx::enumerate::all_graphs(&spec.input_signature, bounds)
}

/// Inputs on which some rule applies, plus nothing else: every other input is
/// its own normal form under both procedures.
pub fn recognition_inputs_with_steps(spec: &RecognizerSpec, bounds: GraphBounds) -> Vec<Graph> {
    hosts_with_steps(&spec.system, bounds)
        .into_iter()
        .filter(|g| labels_outside(g, &spec.input_signature).is_empty())
        .collect()
}
