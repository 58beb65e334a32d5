//! Double-pushout graph transformation, critical pair analysis with
//! confluence up to garbage, and backtracking-free recognition of graph
//! languages.

pub mod canon;
pub mod case_studies;
pub mod cli;
pub mod critical;
pub mod dot;
pub mod dpo;
pub mod enumerate;
pub mod graph;
pub mod gts;
pub mod matching;
pub mod predicates;
pub mod recognizer;
pub mod report;

pub use canon::{canonical_key, marked_key, CanonicalKey};
pub use critical::{analyze, enumerate_critical_pairs, AnalysisReport, Conclusion, CriticalPair, Mode};
pub use dpo::{DirectDerivation, GtSystem, ReductionPolicy, Rule};
pub use enumerate::GraphBounds;
pub use graph::{Edge, EdgeId, Graph, Label, Morphism, NodeId, Signature};
pub use gts::{GtsDocument, ParseError};
pub use matching::{enumerate_monomorphisms, isomorphic};
pub use predicates::LanguagePredicate;
pub use recognizer::{recognize, recognize_with_backtracking, Grammar, RecognizerSpec};
