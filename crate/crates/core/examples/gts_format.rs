//! Write a system as `.gts` text, read it back and analyse it.

use gtx::critical::{Assumptions, Evidence};
use gtx::gts::{parse, serialize};
use gtx::report::summary;
use gtx::{analyze, Mode};

const TEXT: &str = "\
system shrink
signature
  nodes dot
  edges plain
rule drop_loop
  lhs
    node 1 dot
    edge e 1 1 plain
  interface
    node 1 dot
  rhs
    node 1 dot
graph G
  node a dot
  edge x a a plain
predicate all
";

fn main() {
    let doc = parse(TEXT).expect("valid document");
    let text = serialize(&doc);
    assert_eq!(parse(&text).expect("round trip"), doc);
    print!("{text}");
    let sys = doc.system().expect("well-formed rules");
    let pred = doc.language_predicate().expect("known predicate").expect("declared");
    let assumptions = Assumptions { termination: Evidence::Asserted, closedness: Evidence::Asserted, ..Default::default() };
    let report = analyze(&sys, &pred, Mode::Confluence, assumptions).expect("analysis completes");
    println!("{}; {}", summary(&report), report.conclusion);
}
