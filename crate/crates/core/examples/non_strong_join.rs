//! A pair that is joinable but not strongly joinable, so the critical pair
//! lemma does not apply; a brute-force probe finds a genuine non-joinable peak.

use gtx::case_studies::build;
use gtx::critical::{check_strong_joinability, confluence_probe, JoinBudget};
use gtx::{enumerate_critical_pairs, GraphBounds};

fn main() {
    let eg = build("eg_1").expect("built-in case");
    let pairs = enumerate_critical_pairs(&eg.system);
    for p in &pairs {
        let verdict = check_strong_joinability(p, &eg.system, JoinBudget::default());
        println!("{} / {} on {:?}: {verdict:?}", p.rules().0, p.rules().1, p.overlap);
    }
    let report = eg.run(JoinBudget::default()).expect("analysis completes");
    println!("conclusion: {}", report.conclusion);
    match confluence_probe(&eg.system, GraphBounds::nodes(2), JoinBudget::default()).expect("within budget") {
        Some(peak) => println!("non-joinable peak: {:?} ⇒ {:?} and {:?}", peak.host, peak.left, peak.right),
        None => println!("no counterexample up to 2 nodes"),
    }
}
