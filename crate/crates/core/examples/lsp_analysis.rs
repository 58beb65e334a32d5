//! Linked series-parallel graphs: 26 critical pairs, of which 18 are
//! non-garbage under acyclicity, all strongly joinable.

use gtx::case_studies::build;
use gtx::critical::JoinBudget;
use gtx::report::render;

fn main() {
    let lsp = build("lsp").expect("built-in case");
    let report = lsp.run(JoinBudget::default()).expect("analysis completes");
    print!("{}", render(&report));
}
