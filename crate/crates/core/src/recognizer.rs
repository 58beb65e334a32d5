//! Graph grammars and membership checking by reduction with the inverted rules.

use std::collections::{HashSet, VecDeque};

use crate::canon::{canonical_key, CanonicalKey};
use crate::dpo::{reduce_to_normal_form, step_results, DirectDerivation, DpoError, GtSystem, ReductionPolicy, Rule};
use crate::graph::{Graph, Label, Signature};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecognizeError {
    #[error("input uses labels outside the input signature: {0:?}")]
    OutsideInputSignature(Vec<Label>),
    #[error(transparent)]
    Reduction(#[from] DpoError),
    #[error("backtracking search budget of {0} graphs exhausted")]
    BudgetExhausted(usize),
}

/// A graph grammar (Σ, N, R, S).
#[derive(Clone, Debug)]
pub struct Grammar {
    pub signature: Signature,
    pub nonterminals: Signature,
    pub rules: Vec<Rule>,
    pub start: Graph,
}

/// A reduction system, the graphs it accepts, and the labels inputs may use.
#[derive(Clone, Debug)]
pub struct RecognizerSpec {
    pub system: GtSystem,
    pub accepting: Vec<Graph>,
    pub input_signature: Signature,
}

#[derive(Clone, Debug)]
pub struct RecognitionResult {
    pub accepted: bool,
    pub normal_form: Graph,
    pub trace: Vec<DirectDerivation>,
}

pub fn terminally_labelled(g: &Graph, nonterminals: &Signature) -> bool {
    g.nodes().all(|(_, l)| !nonterminals.node_labels.contains(l))
        && g.edges().all(|(_, e)| !nonterminals.edge_labels.contains(&e.label))
}

/// Inverted rules, accepting only the start graph, inputs over Σ ∖ N.
pub fn grammar_to_recognizer(name: &str, g: &Grammar) -> Result<RecognizerSpec, crate::dpo::RuleError> {
    let system = GtSystem::new(name, g.signature.clone(), g.rules.iter().map(Rule::invert).collect())?;
    Ok(RecognizerSpec {
        system,
        accepting: vec![g.start.clone()],
        input_signature: g.signature.difference(&g.nonterminals),
    })
}

impl RecognizerSpec {
    fn check_input(&self, g: &Graph) -> Result<(), RecognizeError> {
        let sig = g.signature();
        let bad: Vec<Label> = sig
            .node_labels
            .difference(&self.input_signature.node_labels)
            .chain(sig.edge_labels.difference(&self.input_signature.edge_labels))
            .cloned()
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(RecognizeError::OutsideInputSignature(bad))
        }
    }

    fn accepting_keys(&self) -> HashSet<CanonicalKey> {
        self.accepting.iter().map(canonical_key).collect()
    }
}

/// Deterministic reduction to a normal form, then a comparison with the
/// accepting graphs. Never backtracks; sound when the system is confluent on
/// the language.
pub fn recognize(
    spec: &RecognizerSpec,
    g: &Graph,
    policy: ReductionPolicy,
    budget: usize,
) -> Result<RecognitionResult, RecognizeError> {
    spec.check_input(g)?;
    let r = reduce_to_normal_form(g, &spec.system, policy, budget)?;
    let accepted = spec.accepting_keys().contains(&canonical_key(&r.normal_form));
    Ok(RecognitionResult { accepted, normal_form: r.normal_form, trace: r.trace })
}

/// Breadth-first search over all reduction sequences (the non-deterministic
/// membership test). Used as an oracle.
pub fn recognize_with_backtracking(spec: &RecognizerSpec, g: &Graph, budget: usize) -> Result<bool, RecognizeError> {
    spec.check_input(g)?;
    let accept = spec.accepting_keys();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let k = canonical_key(g);
    if accept.contains(&k) {
        return Ok(true);
    }
    seen.insert(k);
    queue.push_back(g.clone());
    while let Some(cur) = queue.pop_front() {
        for (_, h) in step_results(&cur, &spec.system) {
            let k = canonical_key(&h);
            if accept.contains(&k) {
                return Ok(true);
            }
            if seen.insert(k) {
                if seen.len() > budget {
                    return Err(RecognizeError::BudgetExhausted(budget));
                }
                queue.push_back(h);
            }
        }
    }
    Ok(false)
}
