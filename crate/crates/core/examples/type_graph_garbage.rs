//! A type-graph language: 2-colourable graphs are those with a morphism into
//! the 2-cycle. Every critical pair of this system lies outside it.

use gtx::case_studies::build;
use gtx::critical::JoinBudget;
use gtx::predicates::{type_graph_member, TypeGraphPredicate};
use gtx::report::pair_table;
use gtx::{Graph, Signature};

fn main() {
    let t = TypeGraphPredicate::two_colour(&Signature::unlabelled());
    for (name, g) in [("path(3)", Graph::path(3)), ("cycle(3)", Graph::cycle(3)), ("cycle(4)", Graph::cycle(4))] {
        println!("{name} maps into the type graph: {}", type_graph_member(&g, &t));
    }
    let eg = build("eg_6").expect("built-in case");
    let report = eg.run(JoinBudget::default()).expect("analysis completes");
    print!("{}", pair_table(&report));
    println!("conclusion: {}", report.conclusion);
}
