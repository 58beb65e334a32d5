//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use gtx::case_studies::{build, sample_graph, CASE_NAMES};
use gtx::critical::{
    check_strong_joinability, check_strong_subcommutativity, confluence_probe, AnalysisReport, Evidence, JoinBudget,
    Joinability, Subcommutativity,
};
use gtx::dpo::ReductionPolicy;
use gtx::{analyze, enumerate_critical_pairs, isomorphic, recognize, Conclusion, GraphBounds, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn run(name: &str) -> Result<AnalysisReport, String> {
    build(name).and_then(|c| c.run(JoinBudget::default())).map_err(|e| e.to_string())
}

fn count(r: &AnalysisReport, f: impl Fn(usize) -> bool) -> usize {
    (0..r.pairs.len()).filter(|&i| f(i)).count()
}

fn sp() -> Outcome {
    let c = build("sp").map_err(|e| e.to_string())?;
    let pairs = enumerate_critical_pairs(&c.system);
    ensure(pairs.len() == 4, format!("{} pairs, expected 4", pairs.len()))?;
    for (i, p) in pairs.iter().enumerate() {
        ensure(check_strong_joinability(p, &c.system, JoinBudget::default()).is_strong(), format!("pair {} not strongly joinable", i + 1))?;
        ensure(check_strong_subcommutativity(p, &c.system).is_strong(), format!("pair {} not strongly subcommutative", i + 1))?;
    }
    Ok("4 pairs, all strongly joinable and strongly subcommutative".into())
}

fn lsp() -> Outcome {
    let r = run("lsp")?;
    let n = r.pairs.len();
    let seq = r.pairs.iter().filter(|p| p.rules().0.starts_with('s') && p.rules().1.starts_with('s')).count();
    let par = r.pairs.iter().filter(|p| p.rules().0.starts_with('p') && p.rules().1.starts_with('p')).count();
    ensure((n, seq, par) == (26, 16, 10), format!("{n} pairs ({seq} sequential, {par} parallel), expected 26 (16, 10)"))?;
    let ng: Vec<usize> = r.non_garbage().map(|(i, _)| i).collect();
    ensure(ng.len() == 18, format!("{} non-garbage, expected 18", ng.len()))?;
    for &i in &ng {
        let v = &r.verdicts[i];
        ensure(v.joinability.is_strong() && v.subcommutativity.is_strong(), format!("non-garbage pair {} not strong", i + 1))?;
    }
    let nj = count(&r, |i| r.verdicts[i].garbage && r.verdicts[i].joinability.is_joinable() == Some(false));
    ensure(nj >= 1, "no garbage pair is non-joinable")?;
    ensure(r.assumptions.termination.present(), "no termination evidence")?;
    ensure(matches!(r.assumptions.closedness, Evidence::Probed(_)), "closedness probe failed")?;
    ensure(r.conclusion == Conclusion::ConfluentUpToGarbage, format!("concluded {}", r.conclusion))?;
    Ok(format!("26 pairs (16 + 10), 18 non-garbage all strong, {nj} garbage non-joinable, {}", r.conclusion))
}

fn efd() -> Outcome {
    let r = run("efd")?;
    ensure(r.pairs.len() == 10, format!("{} pairs, expected 10", r.pairs.len()))?;
    let nj: Vec<usize> = (0..10).filter(|&i| matches!(r.verdicts[i].joinability, Joinability::NotJoinable)).collect();
    ensure(nj.len() == 1, format!("{} non-joinable pairs, expected 1", nj.len()))?;
    let sj = count(&r, |i| r.verdicts[i].joinability.is_strong());
    ensure(sj == 9, format!("{sj} strongly joinable, expected 9"))?;
    ensure(r.verdicts[nj[0]].garbage, "the non-joinable pair is not garbage")?;
    let ng: Vec<usize> = r.non_garbage().map(|(i, _)| i).collect();
    ensure(ng.len() == 9, format!("{} non-garbage, expected 9", ng.len()))?;
    ensure(ng.iter().all(|&i| r.verdicts[i].subcommutativity.is_strong()), "a non-garbage pair is not strongly subcommutative")?;
    ensure(r.conclusion == Conclusion::ConfluentUpToGarbage, format!("concluded {}", r.conclusion))?;
    Ok(format!("10 pairs, 9 strongly joinable and strongly subcommutative, pair {} non-joinable garbage, {}", nj[0] + 1, r.conclusion))
}

fn eg_1() -> Outcome {
    let c = build("eg_1").map_err(|e| e.to_string())?;
    let pairs = enumerate_critical_pairs(&c.system);
    ensure(pairs.len() == 1, format!("{} pairs, expected 1", pairs.len()))?;
    let j = check_strong_joinability(&pairs[0], &c.system, JoinBudget::default());
    ensure(matches!(j, Joinability::JoinableNotStrong(_)), "pair is not joinable-but-not-strongly")?;
    let r = c.run(JoinBudget::default()).map_err(|e| e.to_string())?;
    ensure(r.conclusion == Conclusion::Inconclusive, format!("concluded {}", r.conclusion))?;
    let peak = confluence_probe(&c.system, GraphBounds::nodes(2), JoinBudget::default()).map_err(|e| e.to_string())?;
    let peak = peak.ok_or("probe found no non-joinable peak")?;
    Ok(format!("1 pair joinable but not strongly, inconclusive, peak on a {}-node host", peak.host.node_count()))
}

fn eg_6() -> Outcome {
    let r = run("eg_6")?;
    ensure(r.pairs.len() == 5, format!("{} pairs, expected 5", r.pairs.len()))?;
    ensure(r.verdicts.iter().all(|v| v.garbage), "a pair is not garbage")?;
    ensure(r.assumptions.termination.present(), "no termination evidence")?;
    ensure(r.conclusion == Conclusion::ConfluentUpToGarbage, format!("concluded {}", r.conclusion))?;
    Ok(format!("5 pairs, all garbage, {}", r.conclusion))
}

fn eg_3() -> Outcome {
    let r = run("eg_3")?;
    ensure(r.pairs.len() == 4, format!("{} pairs, expected 4", r.pairs.len()))?;
    let garbage_nj = count(&r, |i| r.verdicts[i].garbage && r.verdicts[i].joinability.is_joinable() == Some(false));
    ensure(garbage_nj >= 1, "no garbage pair is non-joinable")?;
    let weak = count(&r, |i| !r.verdicts[i].garbage && !r.verdicts[i].joinability.is_strong());
    ensure(weak >= 1, "every non-garbage pair is strongly joinable")?;
    ensure(r.conclusion == Conclusion::Inconclusive, format!("concluded {}", r.conclusion))?;
    Ok(format!("4 pairs, {garbage_nj} garbage non-joinable, {weak} non-garbage not strongly joinable, inconclusive"))
}

fn eg_sub() -> Outcome {
    let c = build("eg_sub").map_err(|e| e.to_string())?;
    let r = analyze(&c.system, &c.predicate, Mode::Subcommutativity, Default::default()).map_err(|e| e.to_string())?;
    ensure(r.pairs.len() == 2, format!("{} pairs, expected 2", r.pairs.len()))?;
    let ng: Vec<usize> = r.non_garbage().map(|(i, _)| i).collect();
    ensure(ng.len() == 1, format!("{} non-garbage, expected 1", ng.len()))?;
    ensure(
        matches!(r.verdicts[ng[0]].subcommutativity, Subcommutativity::StronglySubcommutative(_)),
        "the non-garbage pair is not strongly subcommutative",
    )?;
    ensure(r.conclusion == Conclusion::SubcommutativeUpToGarbage, format!("concluded {}", r.conclusion))?;
    Ok(format!("2 pairs, pair {} strongly subcommutative, the other garbage, {} with no termination evidence", ng[0] + 1, r.conclusion))
}

fn recognition() -> Outcome {
    let sp = build("sp").map_err(|e| e.to_string())?;
    let spec = sp.recognizer.clone().unwrap();
    let start = &sp.grammar.as_ref().unwrap().start;
    let example = sample_graph("sp_example").map_err(|e| e.to_string())?;
    let r = recognize(&spec, &example, ReductionPolicy::First, 1_000).map_err(|e| e.to_string())?;
    ensure(r.accepted && isomorphic(&r.normal_form, start).is_some(), "sp_example not reduced to the start graph")?;
    let triangle = sample_graph("triangle").map_err(|e| e.to_string())?;
    let r = recognize(&spec, &triangle, ReductionPolicy::First, 1_000).map_err(|e| e.to_string())?;
    ensure(!r.accepted, "directed 3-cycle accepted")?;

    let mut parts = Vec::new();
    for (name, bounds) in [("sp", GraphBounds::new(5, 7)), ("lsp", GraphBounds::new(5, 5))] {
        let spec = build(name).map_err(|e| e.to_string())?.recognizer.unwrap();
        let inputs = common::recognition_inputs(&spec, bounds);
        let acc = common::check_recognition_agreement(&spec, &inputs).map_err(|e| format!("{name}: {e}"))?;
        parts.push(format!("{name} {} graphs ({acc} accepted)", inputs.len()));
    }
    let spec = build("efd").map_err(|e| e.to_string())?.recognizer.unwrap();
    let inputs = common::recognition_inputs_with_steps(&spec, GraphBounds::new(5, 6));
    let acc = common::check_recognition_agreement(&spec, &inputs).map_err(|e| format!("efd: {e}"))?;
    parts.push(format!("efd {} reducible graphs ({acc} accepted)", inputs.len()));
    Ok(format!("sp_example accepted, 3-cycle rejected; agreement on {}", parts.join(", ")))
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut cases = 0;
    while cases < 1_000 {
        if let Some((rule, host, m)) = common::random_instance(&mut rng, &["x", "y"], &["a", "b"]) {
            common::check_invertibility(&rule, &host, &m).map_err(|e| format!("invertibility: {e}"))?;
            cases += 1;
        }
    }
    let (mut hosts, mut independent, mut conflicts) = (0, 0, 0);
    for name in CASE_NAMES {
        let c = build(name).map_err(|e| e.to_string())?;
        let (h, i, k) = common::check_system_on_small_hosts(&c.system, GraphBounds::new(4, 5)).map_err(|e| format!("{name}: {e}"))?;
        hosts += h;
        independent += i;
        conflicts += k;
    }
    let graphs = common::raw_graphs(&["x", "y"], &["a", "b"], 4, 3);
    let classes = common::check_canonical_keys(&graphs).map_err(|e| format!("canonical keys: {e}"))?;
    Ok(format!(
        "1000 roundtrips; {independent} independent pairs commute and {conflicts} conflicts embed a critical pair on {hosts} hosts; \
         canonical keys agree on {} graphs ({classes} classes)",
        graphs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("series-parallel critical pairs", sp),
        ("linked series-parallel analysis", lsp),
        ("extended flow diagram analysis", efd),
        ("non-strongly joinable pair", eg_1),
        ("type graph garbage", eg_6),
        ("inconclusive despite confluence", eg_3),
        ("subcommutativity without termination", eg_sub),
        ("recognition agrees with backtracking", recognition),
        ("engine property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
