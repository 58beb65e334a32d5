//! Canonical keys: a byte string that is equal for two graphs exactly when
//! they are isomorphic.
//!
//! Colour refinement over (label, neighbourhood) partitions, then
//! individualise-and-refine backtracking; the minimum leaf encoding wins.
//! Interchangeable "twin" nodes are branched on only once.

use std::collections::{BTreeMap, HashMap};

use crate::graph::{Graph, NodeId};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl std::fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CanonicalKey(")?;
        for b in self.0.iter().take(16) {
            write!(f, "{b:02x}")?;
        }
        if self.0.len() > 16 {
            write!(f, "…")?;
        }
        write!(f, ")")
    }
}

/// A graph whose nodes and edges carry arbitrary string colours.
/// Nodes are `0..node_colors.len()`.
#[derive(Clone, Debug, Default)]
pub struct ColoredGraph {
    pub node_colors: Vec<String>,
    pub edges: Vec<(usize, usize, String)>,
}

impl ColoredGraph {
    /// Colours are the labels; also returns the node id of each index.
    pub fn from_graph(g: &Graph) -> (ColoredGraph, Vec<NodeId>) {
        let ids: Vec<NodeId> = g.node_ids().collect();
        let index: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let cg = ColoredGraph {
            node_colors: g.nodes().map(|(_, l)| l.as_str().to_string()).collect(),
            edges: g
                .edges()
                .map(|(_, e)| (index[&e.source], index[&e.target], e.label.as_str().to_string()))
                .collect(),
        };
        (cg, ids)
    }
}

pub fn canonical_key(g: &Graph) -> CanonicalKey {
    colored_key(&ColoredGraph::from_graph(g).0)
}

/// Key of `g` with some nodes individually marked; equal keys mean an
/// isomorphism exists that maps each marked node to the node with the same mark.
pub fn marked_key(g: &Graph, marks: &BTreeMap<NodeId, u32>) -> CanonicalKey {
    let (mut cg, ids) = ColoredGraph::from_graph(g);
    for (i, n) in ids.iter().enumerate() {
        if let Some(m) = marks.get(n) {
            cg.node_colors[i].push_str(&format!("\u{0}#{m}"));
        }
    }
    colored_key(&cg)
}

struct Prepared {
    n: usize,
    init: Vec<u32>,
    // (u, v) → sorted edge colour ranks u→v
    adj: HashMap<(usize, usize), Vec<u32>>,
    // nodes joined to u by an edge in either direction (u itself if looped)
    nbrs: Vec<Vec<usize>>,
}

impl Prepared {
    fn edge(&self, u: usize, v: usize) -> &[u32] {
        self.adj.get(&(u, v)).map_or(&[], Vec::as_slice)
    }
}

pub fn colored_key(cg: &ColoredGraph) -> CanonicalKey {
    let n = cg.node_colors.len();
    let mut ncols: Vec<&String> = cg.node_colors.iter().collect();
    ncols.sort();
    ncols.dedup();
    let mut ecols: Vec<&String> = cg.edges.iter().map(|e| &e.2).collect();
    ecols.sort();
    ecols.dedup();
    let nrank = |s: &String| ncols.binary_search(&s).unwrap() as u32;
    let erank = |s: &String| ecols.binary_search(&s).unwrap() as u32;

    let init: Vec<u32> = cg.node_colors.iter().map(nrank).collect();
    let mut adj: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
    for (u, v, c) in &cg.edges {
        adj.entry((*u, *v)).or_default().push(erank(c));
    }
    let mut nbrs = vec![Vec::new(); n];
    for (u, v, _) in &cg.edges {
        nbrs[*u].push(*v);
        nbrs[*v].push(*u);
    }
    for a in adj.values_mut() {
        a.sort_unstable();
    }
    for l in &mut nbrs {
        l.sort_unstable();
        l.dedup();
    }
    let p = Prepared { n, init, adj, nbrs };

    let colors = refine(&p, p.init.clone());
    let mut best: Option<Vec<u32>> = None;
    search(&p, colors, &mut best);
    let best = best.unwrap_or_default();

    // Turn the winning integer encoding back into label text so keys from
    // different graphs compare meaningfully.
    let mut out = Vec::new();
    push_u32(&mut out, n as u32);
    for &c in &best[1..=n] {
        push_str(&mut out, ncols[c as usize]);
    }
    let rest = &best[n + 1..];
    push_u32(&mut out, (rest.len() / 3) as u32);
    for t in rest.chunks(3) {
        push_u32(&mut out, t[0]);
        push_u32(&mut out, t[1]);
        push_str(&mut out, ecols[t[2] as usize]);
    }
    CanonicalKey(out)
}

fn push_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_be_bytes());
}

fn push_str(out: &mut Vec<u8>, s: &str) {
    push_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

/// Equitable refinement; colours stay ordered consistently with the input colours.
fn refine(p: &Prepared, mut colors: Vec<u32>) -> Vec<u32> {
    let n = p.n;
    let mut classes = count_distinct(&colors);
    loop {
        if classes == n {
            return colors;
        }
        type Sig<'a> = (u32, Vec<(u32, &'a [u32], &'a [u32])>);
        let sigs: Vec<Sig> = (0..n)
            .map(|u| {
                let mut nb: Vec<(u32, &[u32], &[u32])> = p.nbrs[u]
                    .iter()
                    .map(|&v| {
                        // loops are distinguished by the self-colour slot
                        let c = if u == v { u32::MAX } else { colors[v] };
                        (c, p.edge(u, v), p.edge(v, u))
                    })
                    .collect();
                nb.sort_unstable();
                (colors[u], nb)
            })
            .collect();
        let mut sorted: Vec<&Sig> = sigs.iter().collect();
        sorted.sort_unstable();
        sorted.dedup();
        let new: Vec<u32> = sigs
            .iter()
            .map(|s| sorted.binary_search(&s).unwrap() as u32)
            .collect();
        let c = sorted.len();
        colors = new;
        if c == classes {
            return colors;
        }
        classes = c;
    }
}

fn count_distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn twins(p: &Prepared, u: usize, w: usize) -> bool {
    if p.init[u] != p.init[w] || p.edge(u, u) != p.edge(w, w) || p.edge(u, w) != p.edge(w, u) {
        return false;
    }
    let others = |l: &[usize]| l.iter().copied().filter(|&x| x != u && x != w).collect::<Vec<_>>();
    let nu = others(&p.nbrs[u]);
    nu == others(&p.nbrs[w])
        && nu.iter().all(|&x| p.edge(u, x) == p.edge(w, x) && p.edge(x, u) == p.edge(x, w))
}

fn search(p: &Prepared, colors: Vec<u32>, best: &mut Option<Vec<u32>>) {
    let n = p.n;
    // first non-singleton cell (by colour)
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &colors {
        *counts.entry(c).or_default() += 1;
    }
    let Some((&cell, _)) = counts.iter().find(|(_, &k)| k > 1) else {
        let enc = encode(p, &colors);
        if best.as_ref().map_or(true, |b| enc < *b) {
            *best = Some(enc);
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&u| colors[u] == cell).collect();
    let mut reps: Vec<usize> = Vec::new();
    for &u in &members {
        if !reps.iter().any(|&r| twins(p, r, u)) {
            reps.push(u);
        }
    }
    if reps.len() == 1 {
        // the whole cell is interchangeable: any order gives the same leaf
        let mut k = 0;
        let split: Vec<u32> = colors
            .iter()
            .map(|&c| {
                if c == cell {
                    k += 1;
                    c * n as u32 + k - 1
                } else {
                    c * n as u32
                }
            })
            .collect();
        search(p, refine(p, rank(&split)), best);
        return;
    }
    for u in reps {
        // individualise u: it precedes the rest of its cell
        let split: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(v, &c)| 2 * c + (c == cell && v != u) as u32)
            .collect();
        let ranked = rank(&split);
        search(p, refine(p, ranked), best);
    }
}

fn rank(c: &[u32]) -> Vec<u32> {
    let mut s = c.to_vec();
    s.sort_unstable();
    s.dedup();
    c.iter().map(|x| s.binary_search(x).unwrap() as u32).collect()
}

/// Encoding for a discrete colouring (colour = position).
fn encode(p: &Prepared, pos: &[u32]) -> Vec<u32> {
    let n = p.n;
    let mut out = vec![0; n + 1];
    out[0] = n as u32;
    for u in 0..n {
        out[1 + pos[u] as usize] = p.init[u];
    }
    let mut es = Vec::new();
    for (&(u, v), cs) in &p.adj {
        for &c in cs {
            es.push((pos[u], pos[v], c));
        }
    }
    es.sort_unstable();
    for (a, b, c) in es {
        out.extend([a, b, c]);
    }
    out
}
