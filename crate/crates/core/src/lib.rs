//! Uniform reversibility of STRIPS actions: a STRIPS model, a small PDDL
//! front end, bounded search procedures, ASP program generation and
//! benchmark domain generators.

pub mod benchgen;
pub mod bits;
pub mod encodings;
pub mod formula;
pub mod model;
pub mod par;
pub mod pddl;
pub mod reversibility;

pub use bits::FactSet;
pub use formula::{CapExceeded, Formula, FormulaError, Limits, StateSetSpec};
pub use model::{
    Action, ActionId, Domain, DomainBuilder, FactId, ModelError, Plan, PlanningTask, State,
};
pub use reversibility::{
    decide_in_task, decide_over_set, decide_universal, Diagnostic, SearchConfig, SearchMode,
    Status, Verdict, VerdictMode,
};

/// Collapses every run of whitespace to a single space.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
