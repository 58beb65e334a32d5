//! Series-parallel graphs: reduce with the inverted grammar rules and compare
//! the deterministic answer with a full backtracking search.

use gtx::case_studies::{build, sample_graph};
use gtx::{recognize, recognize_with_backtracking, ReductionPolicy};

fn main() {
    let sp = build("sp").expect("built-in case");
    let spec = sp.recognizer.expect("sp has a recognizer");
    for name in ["sp_example", "triangle", "path(5)"] {
        let g = sample_graph(name).expect("built-in sample");
        let r = recognize(&spec, &g, ReductionPolicy::First, 1_000).expect("within budget");
        let oracle = recognize_with_backtracking(&spec, &g, 100_000).expect("within budget");
        let steps: Vec<&str> = r.trace.iter().map(|d| d.rule.name.as_str()).collect();
        println!(
            "{name}: {} after {} steps [{}], normal form {:?} (backtracking agrees: {})",
            if r.accepted { "accepted" } else { "rejected" },
            steps.len(),
            steps.join(" "),
            r.normal_form,
            r.accepted == oracle
        );
    }
}
