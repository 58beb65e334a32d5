//! Strong subcommutativity needs no termination argument: a non-terminating
//! system can still be shown subcommutative up to garbage.

use gtx::case_studies::build;
use gtx::critical::Assumptions;
use gtx::predicates::check_size_reducing;
use gtx::report::render;
use gtx::{analyze, Mode};

fn main() {
    let eg = build("eg_sub").expect("built-in case");
    println!("size reducing: {}", check_size_reducing(&eg.system));
    let report = analyze(&eg.system, &eg.predicate, Mode::Subcommutativity, Assumptions::default()).expect("analysis completes");
    print!("{}", render(&report));
}
