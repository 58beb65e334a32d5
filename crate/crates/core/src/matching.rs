//! Injective morphism search (subgraph isomorphism) and isomorphism tests.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use crate::graph::{EdgeId, Graph, Label, NodeId, Signature};
use crate::graph::Morphism;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchError {
    #[error("{which} uses labels outside the shared signature")]
    SignatureMismatch { which: &'static str },
}

struct Search<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    exact: bool,
    impossible: bool,
    pnodes: Vec<NodeId>,
    hnodes: Vec<NodeId>,
    plabel: Vec<Option<u32>>,
    hlabel: Vec<u32>,
    pcount: Vec<u16>,
    hcount: Vec<u16>,
    nlab: usize,
    pdeg: Vec<Vec<u32>>,
    hdeg: Vec<Vec<u32>>,
}

impl<'a> Search<'a> {
    fn new(pattern: &'a Graph, host: &'a Graph, exact: bool) -> Self {
        let mut labels: BTreeMap<&Label, u32> = BTreeMap::new();
        for (_, l) in host.nodes() {
            let k = labels.len() as u32;
            labels.entry(l).or_insert(k);
        }
        for (_, e) in host.edges() {
            let k = labels.len() as u32;
            labels.entry(&e.label).or_insert(k);
        }
        let nlab = labels.len().max(1);
        let pnodes: Vec<NodeId> = pattern.node_ids().collect();
        let hnodes: Vec<NodeId> = host.node_ids().collect();
        let pidx: BTreeMap<NodeId, usize> = pnodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let hidx: BTreeMap<NodeId, usize> = hnodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let plabel = pattern.nodes().map(|(_, l)| labels.get(l).copied()).collect();
        let hlabel = host.nodes().map(|(_, l)| labels[l]).collect();

        let m = hnodes.len();
        let mut hcount = vec![0u16; m * m * nlab];
        let mut hdeg = vec![vec![0u32; 2 * nlab]; m];
        for (_, e) in host.edges() {
            let (s, t, l) = (hidx[&e.source], hidx[&e.target], labels[&e.label] as usize);
            hcount[(s * m + t) * nlab + l] += 1;
            hdeg[s][l] += 1;
            hdeg[t][nlab + l] += 1;
        }

        let k = pnodes.len();
        let mut pcount = vec![0u16; k * k * nlab];
        let mut pdeg = vec![vec![0u32; 2 * nlab]; k];
        let mut impossible = false;
        for (_, e) in pattern.edges() {
            let Some(&l) = labels.get(&e.label) else {
                impossible = true;
                continue;
            };
            let (s, t, l) = (pidx[&e.source], pidx[&e.target], l as usize);
            pcount[(s * k + t) * nlab + l] += 1;
            pdeg[s][l] += 1;
            pdeg[t][nlab + l] += 1;
        }
        Search {
            pattern,
            host,
            exact,
            impossible,
            pnodes,
            hnodes,
            plabel,
            hlabel,
            pcount,
            hcount,
            nlab,
            pdeg,
            hdeg,
        }
    }

    fn candidate_ok(&self, i: usize, h: usize, assign: &[usize]) -> bool {
        if self.plabel[i] != Some(self.hlabel[h]) {
            return false;
        }
        let ok_deg = if self.exact {
            self.pdeg[i] == self.hdeg[h]
        } else {
            self.pdeg[i].iter().zip(&self.hdeg[h]).all(|(a, b)| a <= b)
        };
        if !ok_deg {
            return false;
        }
        let (k, m, nl) = (self.pnodes.len(), self.hnodes.len(), self.nlab);
        let fits = |p: u16, q: u16| if self.exact { p == q } else { p <= q };
        for (j, hj) in assign.iter().copied().chain(std::iter::once(h)).enumerate() {
            let j = if j == assign.len() { i } else { j };
            for l in 0..nl {
                let p_out = self.pcount[(i * k + j) * nl + l];
                let h_out = self.hcount[(h * m + hj) * nl + l];
                let p_in = self.pcount[(j * k + i) * nl + l];
                let h_in = self.hcount[(hj * m + h) * nl + l];
                if !fits(p_out, h_out) || !fits(p_in, h_in) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&self, f: &mut dyn FnMut(&Morphism) -> ControlFlow<()>) -> ControlFlow<()> {
        if self.impossible {
            return ControlFlow::Continue(());
        }
        if self.exact
            && (self.pnodes.len() != self.hnodes.len() || self.pattern.edge_count() != self.host.edge_count())
        {
            return ControlFlow::Continue(());
        }
        if self.pnodes.len() > self.hnodes.len() || self.pattern.edge_count() > self.host.edge_count() {
            return ControlFlow::Continue(());
        }
        let mut assign = Vec::with_capacity(self.pnodes.len());
        let mut used = vec![false; self.hnodes.len()];
        self.nodes(&mut assign, &mut used, f)
    }

    fn nodes(
        &self,
        assign: &mut Vec<usize>,
        used: &mut [bool],
        f: &mut dyn FnMut(&Morphism) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let i = assign.len();
        if i == self.pnodes.len() {
            return self.edges(assign, f);
        }
        for h in 0..self.hnodes.len() {
            if used[h] || !self.candidate_ok(i, h, assign) {
                continue;
            }
            used[h] = true;
            assign.push(h);
            let r = self.nodes(assign, used, f);
            assign.pop();
            used[h] = false;
            r?;
        }
        ControlFlow::Continue(())
    }

    fn edges(&self, assign: &[usize], f: &mut dyn FnMut(&Morphism) -> ControlFlow<()>) -> ControlFlow<()> {
        let nodes: BTreeMap<NodeId, NodeId> = self
            .pnodes
            .iter()
            .zip(assign)
            .map(|(&p, &h)| (p, self.hnodes[h]))
            .collect();
        let pedges: Vec<(EdgeId, Vec<EdgeId>)> = self
            .pattern
            .edges()
            .map(|(id, e)| {
                let (s, t) = (nodes[&e.source], nodes[&e.target]);
                let cands = self
                    .host
                    .edges()
                    .filter(|(_, he)| he.source == s && he.target == t && he.label == e.label)
                    .map(|(hid, _)| hid)
                    .collect();
                (id, cands)
            })
            .collect();
        let mut m = Morphism { nodes, edges: BTreeMap::new() };
        let mut used = BTreeSet::new();
        assign_edges(&pedges, 0, &mut m, &mut used, f)
    }
}

fn assign_edges(
    pedges: &[(EdgeId, Vec<EdgeId>)],
    i: usize,
    m: &mut Morphism,
    used: &mut BTreeSet<EdgeId>,
    f: &mut dyn FnMut(&Morphism) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if i == pedges.len() {
        return f(m);
    }
    let (pe, cands) = &pedges[i];
    for &c in cands {
        if used.insert(c) {
            m.edges.insert(*pe, c);
            let r = assign_edges(pedges, i + 1, m, used, f);
            m.edges.remove(pe);
            used.remove(&c);
            r?;
        }
    }
    ControlFlow::Continue(())
}

/// Visits injective morphisms `pattern → host` in canonical order (node maps
/// lexicographic over sorted pattern ids, then edge maps likewise) until `f` breaks.
pub fn for_each_monomorphism(
    pattern: &Graph,
    host: &Graph,
    mut f: impl FnMut(&Morphism) -> ControlFlow<()>,
) {
    let _ = Search::new(pattern, host, false).run(&mut f);
}

pub fn enumerate_monomorphisms(pattern: &Graph, host: &Graph) -> Vec<Morphism> {
    let mut out = Vec::new();
    for_each_monomorphism(pattern, host, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out
}

/// As [`enumerate_monomorphisms`], after checking both graphs against `sig`.
pub fn enumerate_monomorphisms_checked(
    sig: &Signature,
    pattern: &Graph,
    host: &Graph,
) -> Result<Vec<Morphism>, MatchError> {
    if !sig.contains(&pattern.signature()) {
        return Err(MatchError::SignatureMismatch { which: "pattern" });
    }
    if !sig.contains(&host.signature()) {
        return Err(MatchError::SignatureMismatch { which: "host" });
    }
    Ok(enumerate_monomorphisms(pattern, host))
}

pub fn first_monomorphism(pattern: &Graph, host: &Graph) -> Option<Morphism> {
    let mut out = None;
    for_each_monomorphism(pattern, host, |m| {
        out = Some(m.clone());
        ControlFlow::Break(())
    });
    out
}

pub fn for_each_isomorphism(g: &Graph, h: &Graph, mut f: impl FnMut(&Morphism) -> ControlFlow<()>) {
    let _ = Search::new(g, h, true).run(&mut f);
}

/// Some bijective morphism `g → h`, if one exists.
pub fn isomorphic(g: &Graph, h: &Graph) -> Option<Morphism> {
    let mut out = None;
    for_each_isomorphism(g, h, |m| {
        out = Some(m.clone());
        ControlFlow::Break(())
    });
    out
}

pub fn automorphisms(g: &Graph) -> Vec<Morphism> {
    let mut out = Vec::new();
    for_each_isomorphism(g, g, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out
}
