mod common;

use gtx::canonical_key;
use gtx::critical::enumerate_critical_pairs;
use gtx::dpo::{GtSystem, Rule};
use gtx::graph::{Graph, NodeId, DEFAULT_EDGE_LABEL as E, DEFAULT_NODE_LABEL as N};
use gtx::matching::enumerate_monomorphisms;
use gtx::predicates::{self, every_cycle_has_t, is_two_colourable, type_graph_member, TypeGraphPredicate};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NODES: &[&str] = &["x", "y"];
const EDGES: &[&str] = &["a", "b"];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The same graph with node ids shuffled and moved.
fn relabelled(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let mut ids: Vec<NodeId> = g.node_ids().collect();
    let old = ids.clone();
    ids.shuffle(rng);
    let map: std::collections::BTreeMap<NodeId, NodeId> = old.iter().zip(&ids).map(|(&a, &b)| (a, b + 50)).collect();
    let mut h = Graph::new();
    for (n, l) in g.nodes() {
        h.insert_node(map[&n], l.clone());
    }
    let mut edges: Vec<_> = g.edges().map(|(_, e)| e.clone()).collect();
    edges.shuffle(rng);
    for e in edges {
        h.add_edge(map[&e.source], map[&e.target], e.label);
    }
    h
}

/// A random proper subgraph: drop an edge, or a node with its incident edges.
fn shrink(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let mut h = g.clone();
    let edges: Vec<_> = g.edge_ids().collect();
    if !edges.is_empty() && rng.gen_bool(0.5) {
        h.remove_edge(*edges.choose(rng).unwrap());
    } else if let Some(&n) = g.node_ids().collect::<Vec<_>>().choose(rng) {
        for e in g.incident_edges(n).collect::<Vec<_>>() {
            h.remove_edge(e);
        }
        h.remove_node(n);
    }
    h
}

fn brute_two_colourable(g: &Graph) -> bool {
    let ids: Vec<NodeId> = g.node_ids().collect();
    (0u32..1 << ids.len()).any(|mask| {
        let colour = |n: NodeId| mask >> ids.iter().position(|&m| m == n).unwrap() & 1;
        g.edges().all(|(_, e)| colour(e.source) != colour(e.target))
    })
}

fn random_system(rng: &mut ChaCha8Rng) -> GtSystem {
    let rules: Vec<Rule> = (0..rng.gen_range(1..=2))
        .map(|i| Rule { name: format!("r{}", i + 1), ..common::random_rule(rng, NODES, EDGES) })
        .collect();
    GtSystem::new("random", common::signature(NODES, EDGES), rules).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derivations_invert(seed in any::<u64>()) {
        let mut r = rng(seed);
        if let Some((rule, host, m)) = common::random_instance(&mut r, NODES, EDGES) {
            prop_assert_eq!(common::check_invertibility(&rule, &host, &m), Ok(()));
        }
    }

    #[test]
    fn canonical_key_matches_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::random_graph(&mut r, NODES, EDGES, 5, 6);
        let h = common::random_graph(&mut r, NODES, EDGES, 5, 6);
        let g2 = relabelled(&g, &mut r);
        prop_assert_eq!(canonical_key(&g), canonical_key(&g2));
        prop_assert_eq!(canonical_key(&g) == canonical_key(&h), common::brute_isomorphic(&g, &h));
        prop_assert_eq!(gtx::isomorphic(&g, &h).is_some(), common::brute_isomorphic(&g, &h));
    }

    #[test]
    fn monomorphism_counts_match_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = common::random_graph(&mut r, NODES, EDGES, 3, 3);
        let h = common::random_graph(&mut r, NODES, EDGES, 5, 7);
        let found = enumerate_monomorphisms(&p, &h);
        prop_assert_eq!(found.len(), common::brute_monomorphism_count(&p, &h));
        for m in &found {
            prop_assert!(m.is_injective() && m.check_total(&p, &h).is_ok());
        }
    }

    #[test]
    fn independent_steps_commute_and_conflicts_embed_critical_pairs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = random_system(&mut r);
        let pairs = enumerate_critical_pairs(&sys);
        for _ in 0..4 {
            let mut host = common::random_graph(&mut r, NODES, EDGES, 2, 2);
            for rule in &sys.rules {
                host.disjoint_union(&rule.lhs);
            }
            let ids: Vec<NodeId> = host.node_ids().collect();
            for _ in 0..r.gen_range(0..=3) {
                host.add_edge(*ids.choose(&mut r).unwrap(), *ids.choose(&mut r).unwrap(), *EDGES.choose(&mut r).unwrap());
            }
            prop_assert!(common::check_commutativity(&sys, &host).is_ok());
            let done = common::check_completeness(&sys, &pairs, &host);
            prop_assert!(done.is_ok(), "{:?}", done);
        }
    }

    #[test]
    fn builtin_predicates_are_subgraph_closed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::random_graph(&mut r, &[N], &[E, "t"], 5, 6);
        let h = shrink(&g, &mut r);
        for name in ["all", "discrete", "acyclic", "forest", "two_colourable", "efd_t_cycle", "bounded_degree(2)"] {
            let p = predicates::builtin(name).unwrap();
            if p.in_closure(&g).unwrap() {
                prop_assert!(p.in_closure(&h).unwrap(), "{} not closed", name);
            }
        }
    }

    #[test]
    fn two_colourability_is_a_type_graph_language(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::random_graph(&mut r, &[N], &[E], 6, 6);
        let t = TypeGraphPredicate::two_colour(&gtx::Signature::unlabelled());
        prop_assert_eq!(is_two_colourable(&g), brute_two_colourable(&g));
        prop_assert_eq!(type_graph_member(&g, &t), brute_two_colourable(&g));
    }

    #[test]
    fn t_cycles_match_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = common::random_graph(&mut r, &[N], &[E, "t"], 5, 7);
        let brute = common::brute_cycles(&g)
            .iter()
            .all(|c| c.iter().any(|&e| g.edge(e).unwrap().label.as_str() == "t"));
        prop_assert_eq!(every_cycle_has_t(&g), brute);
    }
}
