//! DOT output for a graph, a rule and a critical pair; pipe into `dot -Tsvg`.

use gtx::case_studies::{build, sample_graph};
use gtx::dot::{graph_to_dot, pair_to_dot, rule_to_dot};
use gtx::enumerate_critical_pairs;

fn main() {
    println!("{}", graph_to_dot(&sample_graph("sp_example").expect("built-in sample")));
    let sp = build("sp").expect("built-in case");
    println!("{}", rule_to_dot(&sp.system.rules[0]));
    let pairs = enumerate_critical_pairs(&sp.system);
    print!("{}", pair_to_dot(&pairs[0]));
}
