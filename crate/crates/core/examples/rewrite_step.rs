//! Build a rule by hand and apply it to a host graph: matches, the dangling
//! condition, the derived graph and the inverse step.

use std::sync::Arc;

use gtx::dpo::{apply, check_dangling, derivation_roundtrip, matches};
use gtx::{isomorphic, Graph, Rule};

fn main() {
    // contract a path 1 → 3 → 2 into a single edge 1 → 2
    let lhs = Graph::build(&["dot", "dot", "dot"], &[(0, 2, "plain"), (2, 1, "plain")]);
    let mut interface = Graph::new();
    interface.insert_node(0, "dot");
    interface.insert_node(1, "dot");
    let mut rhs = interface.clone();
    rhs.insert_edge(5, 0, 1, "plain");
    let rule = Arc::new(Rule::new("contract", lhs, interface, rhs).expect("K is a subgraph of L and R"));

    let host = Graph::path(4);
    println!("host: {host:?}");
    for m in matches(&rule, &host) {
        if !check_dangling(&rule, &host, &m.embedding) {
            println!("match {:?} violates the dangling condition", m.embedding.nodes);
            continue;
        }
        let d = apply(&rule, &host, &m.embedding).expect("dangling condition holds");
        let back = derivation_roundtrip(&d);
        println!("match {:?} gives {:?}", m.embedding.nodes, d.result);
        println!("  inverse step restores the host: {}", isomorphic(&back.result, &host).is_some());
    }
}
