//! Extended flow diagrams: ten critical pairs, one of them not joinable but
//! garbage because its overlap has a cycle without a t-edge.

use gtx::case_studies::build;
use gtx::critical::{Joinability, JoinBudget};
use gtx::report::summary;

fn main() {
    let efd = build("efd").expect("built-in case");
    let report = efd.run(JoinBudget::default()).expect("analysis completes");
    println!("{}", summary(&report));
    for (i, (p, v)) in report.pairs.iter().zip(&report.verdicts).enumerate() {
        if matches!(v.joinability, Joinability::NotJoinable) {
            println!("pair {} ({} / {}) overlap: {:?}", i + 1, p.rules().0, p.rules().1, p.overlap);
        }
    }
    println!("conclusion: {}", report.conclusion);
}
