//! Text rendering of analysis reports: the pair table, a one-line summary,
//! the full report, and the `key=value` porcelain form. All output is a
//! function of the report alone, so it is stable across runs.

use std::fmt::Write as _;

use crate::critical::{AnalysisReport, Conclusion, Joinability, Mode, PairVerdict, Subcommutativity};

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "?",
    }
}

fn strongly_joinable(v: &PairVerdict) -> Option<bool> {
    match v.joinability {
        Joinability::Unknown { .. } => None,
        ref j => Some(j.is_strong()),
    }
}

fn strongly_subcommutative(v: &PairVerdict) -> Option<bool> {
    match v.subcommutativity {
        Subcommutativity::Unknown => None,
        ref s => Some(s.is_strong()),
    }
}

/// One row per pair: id, rules, joinable, strongly joinable, non-garbage,
/// strongly subcommutative.
pub fn pair_table(r: &AnalysisReport) -> String {
    let rules: Vec<String> = r.pairs.iter().map(|p| format!("{} / {}", p.rules().0, p.rules().1)).collect();
    let w = rules.iter().map(|s| s.chars().count()).chain([5]).max().unwrap_or(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:>4}  {:<w$}  {:<8}  {:<17}  {:<11}  {}", "pair", "rules", "joinable", "strongly joinable", "non-garbage", "strongly subcommutative");
    for (i, (v, rules)) in r.verdicts.iter().zip(&rules).enumerate() {
        let _ = writeln!(
            out,
            "{:>4}  {:<w$}  {:<8}  {:<17}  {:<11}  {}",
            i + 1,
            rules,
            yes_no(v.joinability.is_joinable()),
            yes_no(strongly_joinable(v)),
            yes_no(Some(!v.garbage)),
            yes_no(strongly_subcommutative(v)),
        );
    }
    out
}

fn pair_list(ids: &[usize]) -> String {
    let ids: Vec<String> = ids.iter().map(|i| (i + 1).to_string()).collect();
    match ids.len() {
        1 => format!("pair {}", ids[0]),
        _ => format!("pairs {}", ids.join(", ")),
    }
}

/// e.g. `10 pairs, 9 strongly joinable, 9 non-garbage, all strongly
/// joinable, pair 6 not joinable (garbage)`.
pub fn summary(r: &AnalysisReport) -> String {
    let n = r.pairs.len();
    let sj = r.verdicts.iter().filter(|v| v.joinability.is_strong()).count();
    let ng: Vec<&PairVerdict> = r.non_garbage().map(|(_, v)| v).collect();
    let ng_sj = ng.iter().filter(|v| v.joinability.is_strong()).count();
    let plural = if n == 1 { "" } else { "s" };
    let mut parts = vec![format!("{n} pair{plural}"), format!("{sj} strongly joinable")];
    parts.push(match (ng.len(), ng_sj) {
        (0, _) => "0 non-garbage".to_string(),
        (k, s) if k == s => format!("{k} non-garbage, all strongly joinable"),
        (k, s) => format!("{k} non-garbage, {s} strongly joinable"),
    });
    if r.mode == Mode::Subcommutativity {
        let ssc = ng.iter().filter(|v| v.subcommutativity.is_strong()).count();
        parts.push(if ssc == ng.len() {
            "all non-garbage strongly subcommutative".to_string()
        } else {
            format!("{ssc} non-garbage strongly subcommutative")
        });
    }
    for garbage in [false, true] {
        let which: Vec<usize> = (0..n)
            .filter(|&i| r.verdicts[i].garbage == garbage && r.verdicts[i].joinability.is_joinable() == Some(false))
            .collect();
        if !which.is_empty() {
            let tag = if garbage { "garbage" } else { "non-garbage" };
            parts.push(format!("{} not joinable ({tag})", pair_list(&which)));
        }
        let unknown: Vec<usize> = (0..n)
            .filter(|&i| r.verdicts[i].garbage == garbage && r.verdicts[i].joinability.is_joinable().is_none())
            .collect();
        if !unknown.is_empty() {
            let tag = if garbage { "garbage" } else { "non-garbage" };
            parts.push(format!("{} undecided ({tag})", pair_list(&unknown)));
        }
    }
    parts.join(", ")
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Confluence => "confluence",
        Mode::Subcommutativity => "subcommutativity",
    }
}

pub fn conclusion_key(c: &Conclusion) -> &'static str {
    match c {
        Conclusion::ConfluentUpToGarbage => "confluent_up_to_garbage",
        Conclusion::SubcommutativeUpToGarbage => "subcommutative_up_to_garbage",
        Conclusion::LocallyConfluentUpToGarbage => "locally_confluent_up_to_garbage",
        Conclusion::NotLocallyConfluentUpToGarbage(_) => "not_locally_confluent_up_to_garbage",
        Conclusion::Inconclusive => "inconclusive",
    }
}

pub fn render(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "system: {}", r.system);
    let _ = writeln!(out, "predicate: {}", r.predicate);
    let _ = writeln!(out, "mode: {}", mode_name(r.mode));
    out.push('\n');
    out.push_str(&pair_table(r));
    out.push('\n');
    let _ = writeln!(out, "summary: {}", summary(r));
    let _ = writeln!(out, "termination: {}", r.assumptions.termination);
    let _ = writeln!(out, "closedness: {}", r.assumptions.closedness);
    let _ = writeln!(out, "conclusion: {}", r.conclusion);
    if r.also_confluent {
        let _ = writeln!(out, "also: confluent up to garbage");
    }
    let _ = writeln!(out, "licensed by: {}", r.licensed_by);
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

/// Line-oriented `key=value`; pair keys are `pair.<id>.<field>`.
pub fn porcelain(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{k}={v}");
    };
    kv("system", &r.system);
    kv("predicate", &r.predicate);
    kv("mode", &mode_name(r.mode));
    kv("pairs", &r.pairs.len());
    kv("non_garbage", &r.non_garbage().count());
    kv("strongly_joinable", &r.verdicts.iter().filter(|v| v.joinability.is_strong()).count());
    for (i, (p, v)) in r.pairs.iter().zip(&r.verdicts).enumerate() {
        let id = i + 1;
        let (a, b) = p.rules();
        kv(&format!("pair.{id}.rules"), &format!("{a},{b}"));
        kv(&format!("pair.{id}.joinable"), &yes_no(v.joinability.is_joinable()));
        kv(&format!("pair.{id}.strongly_joinable"), &yes_no(strongly_joinable(v)));
        kv(&format!("pair.{id}.non_garbage"), &yes_no(Some(!v.garbage)));
        kv(&format!("pair.{id}.strongly_subcommutative"), &yes_no(strongly_subcommutative(v)));
    }
    kv("termination", &r.assumptions.termination);
    kv("closedness", &r.assumptions.closedness);
    kv("conclusion", &conclusion_key(&r.conclusion));
    if let Conclusion::NotLocallyConfluentUpToGarbage(i) = r.conclusion {
        kv("witness_pair", &(i + 1));
    }
    kv("also_confluent", &r.also_confluent);
    out
}
