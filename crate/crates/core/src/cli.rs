//! Command-line entry points. `run` takes the argument vector and two
//! streams and returns the exit code, so it is testable without a process.
//!
//! Exit codes: 0 success, 1 usage, 2 parse error, 3 inconclusive analysis
//! (with `--strict`), 4 search budget exhausted. `GTX_BUDGET` overrides the
//! default search budgets.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::case_studies::{self, probed_closedness, size_reducing_evidence, CaseError, CaseStudy};
use crate::critical::{analyze, AnalysisReport, Assumptions, Conclusion, CriticalError, Evidence, Joinability, JoinBudget, Mode};
use crate::dot;
use crate::dpo::{reduce_to_normal_form, DpoError, ReductionPolicy, RuleError, DEFAULT_STEP_BUDGET};
use crate::graph::Graph;
use crate::gts::{self, GtsDocument, ParseError, PredicateSpec};
use crate::predicates::{LanguagePredicate, PredicateError};
use crate::recognizer::{recognize, RecognizeError};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

pub const BUDGET_ENV: &str = "GTX_BUDGET";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse { .. } | CliError::Invalid(_) => EXIT_PARSE,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<RuleError> for CliError {
    fn from(e: RuleError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<PredicateError> for CliError {
    fn from(e: PredicateError) -> Self {
        match e {
            PredicateError::UnknownName(_) => CliError::Usage(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<CriticalError> for CliError {
    fn from(e: CriticalError) -> Self {
        match e {
            CriticalError::BudgetExhausted(_) => CliError::Budget(e.to_string()),
            CriticalError::Predicate(p) => p.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<CaseError> for CliError {
    fn from(e: CaseError) -> Self {
        match e {
            CaseError::Analysis(c) => c.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DpoError> for CliError {
    fn from(e: DpoError) -> Self {
        match e {
            DpoError::BudgetExhausted(_) => CliError::Budget(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<RecognizeError> for CliError {
    fn from(e: RecognizeError) -> Self {
        match e {
            RecognizeError::Reduction(d) => d.into(),
            RecognizeError::BudgetExhausted(_) => CliError::Budget(e.to_string()),
            RecognizeError::OutsideInputSignature(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "gtx", version, about = "Graph transformation: critical pairs, confluence up to garbage, recognition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A `.gts` file, or `case:NAME` for a built-in case study.
#[derive(Args, Debug)]
struct Source {
    file: String,
}

#[derive(Args, Debug, Default)]
#[group(multiple = false)]
struct PredicateArgs {
    /// Built-in predicate name (e.g. acyclic, forest, efd_t_cycle, bounded_degree(2)).
    #[arg(long)]
    predicate: Option<String>,
    /// Graphs with a morphism into this graph of the document.
    #[arg(long = "type-graph", value_name = "GRAPH")]
    type_graph: Option<String>,
    /// Subgraphs of these graphs of the document.
    #[arg(long, value_delimiter = ',', value_name = "G1,G2,...")]
    finite: Option<Vec<String>>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default)]
enum ModeArg {
    #[default]
    Confluence,
    Subcommutativity,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the critical pair table of the (reduction) system.
    CriticalPairs {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        predicate: PredicateArgs,
        #[arg(long)]
        porcelain: bool,
    },
    /// Decide confluence or subcommutativity up to garbage.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        predicate: PredicateArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Confluence)]
        mode: ModeArg,
        /// Take termination up to garbage as given.
        #[arg(long)]
        assume_terminating: bool,
        /// Take closedness of the language as given.
        #[arg(long)]
        assume_closed: bool,
        /// Probe closedness on all graphs up to N nodes.
        #[arg(long, value_name = "N")]
        probe_size: Option<usize>,
        /// Exit with 3 when the analysis is inconclusive.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        porcelain: bool,
    },
    /// Reduce the input deterministically and compare with the accepting graphs.
    Recognize {
        #[command(flatten)]
        source: Source,
        /// A graph of the document, `sample:NAME`, or a `.gts` file.
        #[arg(long)]
        input: String,
        /// Choose steps at random from this seed instead of first-match.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reduce the input to a normal form and print it.
    Reduce {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        input: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the document with every rule inverted.
    Invert {
        #[command(flatten)]
        source: Source,
    },
    /// Print a graph, rule or critical pair as DOT.
    ExportDot {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: DotTarget,
    },
    /// Run a built-in case study end to end.
    CaseStudy {
        /// Case name; `list` prints the names.
        name: String,
        #[arg(long)]
        porcelain: bool,
        /// Print the case as a `.gts` document instead of analysing it.
        #[arg(long)]
        gts: bool,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DotTarget {
    /// A graph of the document, `sample:NAME`, or a `.gts` file.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    rule: Option<String>,
    /// Critical pair number, as in the pair table.
    #[arg(long)]
    pair: Option<usize>,
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn budget() -> Result<Option<usize>, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn join_budget() -> Result<JoinBudget, CliError> {
    Ok(budget()?.map(JoinBudget::Graphs).unwrap_or_default())
}

fn step_budget() -> Result<usize, CliError> {
    Ok(budget()?.unwrap_or(DEFAULT_STEP_BUDGET))
}

fn load(source: &Source) -> Result<GtsDocument, CliError> {
    if let Some(name) = source.file.strip_prefix("case:") {
        return Ok(GtsDocument::from_case(&case_studies::build(name)?));
    }
    read_document(Path::new(&source.file))
}

fn read_document(path: &Path) -> Result<GtsDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    gts::parse(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

/// A graph of the document, a sample graph, or the first graph of a file.
fn input_graph(doc: &GtsDocument, spec: &str) -> Result<Graph, CliError> {
    if let Some(g) = doc.graph(spec) {
        return Ok(g.clone());
    }
    if let Some(name) = spec.strip_prefix("sample:") {
        return Ok(case_studies::sample_graph(name)?);
    }
    let path = Path::new(spec);
    if path.exists() {
        let other = read_document(path)?;
        return other
            .graphs
            .into_iter()
            .next()
            .map(|(_, g)| g)
            .ok_or_else(|| CliError::Usage(format!("{spec}: no graph in file")));
    }
    Err(CliError::Usage(format!("{spec:?} is not a graph of the document, a sample:NAME or a file")))
}

fn predicate(doc: &GtsDocument, args: &PredicateArgs) -> Result<LanguagePredicate, CliError> {
    let spec = if let Some(n) = &args.predicate {
        Some(PredicateSpec::Named(n.clone()))
    } else if let Some(g) = &args.type_graph {
        Some(PredicateSpec::TypeGraph(g.clone()))
    } else {
        args.finite.clone().map(PredicateSpec::Finite)
    };
    let doc = match spec {
        Some(p) => GtsDocument { predicate: Some(p), ..doc.clone() },
        None if doc.predicate.is_none() => GtsDocument { predicate: Some(PredicateSpec::Named("all".into())), ..doc.clone() },
        None => doc.clone(),
    };
    match doc.language_predicate() {
        Ok(p) => Ok(p.expect("predicate set above")),
        Err(PredicateError::Evaluation { name, reason }) => Err(CliError::Usage(format!("{name}: {reason}"))),
        Err(e) => Err(e.into()),
    }
}

fn budget_hit(r: &AnalysisReport) -> bool {
    r.conclusion == Conclusion::Inconclusive
        && r.non_garbage().any(|(_, v)| matches!(v.joinability, Joinability::Unknown { .. }))
}

fn print_report(out: &mut dyn Write, r: &AnalysisReport, porcelain: bool) -> Result<(), CliError> {
    let text = if porcelain { report::porcelain(r) } else { report::render(r) };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::CriticalPairs { source, predicate: p, porcelain } => {
            let doc = load(&source)?;
            let sys = doc.reduction_system()?;
            let pred = predicate(&doc, &p)?;
            let assumptions = Assumptions { budget: join_budget()?, ..Assumptions::default() };
            let r = analyze(&sys, &pred, Mode::Confluence, assumptions)?;
            if porcelain {
                out.write_all(report::porcelain(&r).as_bytes())?;
            } else {
                out.write_all(report::pair_table(&r).as_bytes())?;
                writeln!(out, "\n{}", report::summary(&r))?;
            }
            Ok(EXIT_OK)
        }
        Command::Analyze { source, predicate: p, mode, assume_terminating, assume_closed, probe_size, strict, porcelain } => {
            let doc = load(&source)?;
            let sys = doc.reduction_system()?;
            let pred = predicate(&doc, &p)?;
            let mut notes = Vec::new();
            let termination = if assume_terminating { Evidence::Asserted } else { size_reducing_evidence(&sys) };
            let closedness = match (assume_closed, probe_size) {
                (true, _) => Evidence::Asserted,
                (false, Some(n)) => probed_closedness(&sys, &pred, n, &mut notes)?,
                (false, None) => Evidence::Absent,
            };
            let mode = match mode {
                ModeArg::Confluence => Mode::Confluence,
                ModeArg::Subcommutativity => Mode::Subcommutativity,
            };
            let assumptions = Assumptions { termination, closedness, budget: join_budget()? };
            let mut r = analyze(&sys, &pred, mode, assumptions)?;
            r.notes.extend(notes);
            print_report(out, &r, porcelain)?;
            Ok(if budget_hit(&r) {
                EXIT_BUDGET
            } else if strict && r.conclusion == Conclusion::Inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            })
        }
        Command::Recognize { source, input, seed } => {
            let doc = load(&source)?;
            let spec = doc
                .recognizer()?
                .ok_or_else(|| CliError::Usage("document has neither a start graph nor accepting graphs".into()))?;
            let g = input_graph(&doc, &input)?;
            let policy = seed.map(ReductionPolicy::Seeded).unwrap_or_default();
            let res = recognize(&spec, &g, policy, step_budget()?)?;
            writeln!(out, "{}", if res.accepted { "accept" } else { "reject" })?;
            write_trace(out, &g, &res.trace)?;
            writeln!(out, "normal form: {} nodes, {} edges", res.normal_form.node_count(), res.normal_form.edge_count())?;
            Ok(EXIT_OK)
        }
        Command::Reduce { source, input, seed } => {
            let doc = load(&source)?;
            let sys = doc.reduction_system()?;
            let g = input_graph(&doc, &input)?;
            let policy = seed.map(ReductionPolicy::Seeded).unwrap_or_default();
            let r = reduce_to_normal_form(&g, &sys, policy, step_budget()?)?;
            write_trace(out, &g, &r.trace)?;
            let nf = GtsDocument { graphs: vec![("normal_form".into(), r.normal_form)], ..GtsDocument::default() };
            out.write_all(gts::serialize(&nf).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Invert { source } => {
            let doc = load(&source)?;
            let mut inv = GtsDocument { rules: doc.rules.iter().map(|r| r.invert()).collect(), ..doc.clone() };
            // the start graph of a grammar is what its inverse accepts
            if let Some(s) = inv.start.take() {
                inv.accepting = vec![s];
            }
            out.write_all(gts::serialize(&inv).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::ExportDot { source, target } => {
            let doc = load(&source)?;
            let text = if let Some(g) = &target.graph {
                dot::graph_to_dot(&input_graph(&doc, g)?)
            } else if let Some(name) = &target.rule {
                let r = doc
                    .rules
                    .iter()
                    .find(|r| &r.name == name)
                    .ok_or_else(|| CliError::Usage(format!("no rule named {name:?}")))?;
                dot::rule_to_dot(r)
            } else {
                let k = target.pair.expect("group is required");
                let pairs = crate::critical::enumerate_critical_pairs(&doc.reduction_system()?);
                let p = k
                    .checked_sub(1)
                    .and_then(|i| pairs.get(i))
                    .ok_or_else(|| CliError::Usage(format!("pair {k} out of range 1..={}", pairs.len())))?;
                dot::pair_to_dot(p)
            };
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::CaseStudy { name, porcelain, gts: as_gts } => {
            if name == "list" {
                for n in case_studies::CASE_NAMES {
                    writeln!(out, "{n}")?;
                }
                return Ok(EXIT_OK);
            }
            let case = case_studies::build(&name)?;
            if as_gts {
                out.write_all(gts::serialize(&GtsDocument::from_case(&case)).as_bytes())?;
                return Ok(EXIT_OK);
            }
            let r = case.run(join_budget()?)?;
            print_report(out, &r, porcelain)?;
            if !porcelain {
                writeln!(out, "expected: {}", expectation(&case, &r))?;
            }
            Ok(if budget_hit(&r) { EXIT_BUDGET } else { EXIT_OK })
        }
    }
}

fn write_trace(out: &mut dyn Write, start: &Graph, trace: &[crate::dpo::DirectDerivation]) -> std::io::Result<()> {
    writeln!(out, "start: {} nodes, {} edges", start.node_count(), start.edge_count())?;
    for (i, d) in trace.iter().enumerate() {
        writeln!(out, "{:>4}. {} -> {} nodes, {} edges", i + 1, d.rule.name, d.result.node_count(), d.result.edge_count())?;
    }
    Ok(())
}

fn expectation(case: &CaseStudy, r: &AnalysisReport) -> String {
    let e = &case.expected;
    let ng = r.non_garbage().count();
    let sj = r.verdicts.iter().filter(|v| v.joinability.is_strong()).count();
    let mut checks = vec![(format!("{} pairs", e.pairs), r.pairs.len() == e.pairs)];
    if let Some(n) = e.non_garbage {
        checks.push((format!("{n} non-garbage"), ng == n));
    }
    if let Some(n) = e.strongly_joinable {
        checks.push((format!("{n} strongly joinable"), sj == n));
    }
    checks
        .into_iter()
        .map(|(what, ok)| format!("{what} {}", if ok { "(ok)" } else { "(MISMATCH)" }))
        .collect::<Vec<_>>()
        .join(", ")
}
