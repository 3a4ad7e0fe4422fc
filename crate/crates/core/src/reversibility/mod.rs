//! Uniform reversibility of STRIPS actions.
//!
//! An action `a` is uniformly `S`-reversible when one action sequence `π`
//! restores every state `s ∈ S` in which `a` is applicable:
//! `π(a(s)) = s`. This module decides that question for `S = 2^F`
//! ([`decide_universal`]), for explicit or formula-defined sets
//! ([`decide_over_set`]) and for the reachable states of a task
//! ([`decide_in_task`]), and provides a literal brute-force oracle
//! ([`brute_force_universal`]) used to validate the universal procedure.
//!
//! All searches are bounded by a horizon. Results are three-valued: a
//! verdict is only `Irreversible` when the procedure has a proof that no
//! reverse plan of any length exists.

mod belief;
mod oracle;
mod reach;
mod universal;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bits::FactSet;
use crate::formula::{CapExceeded, Formula, Limits};
use crate::model::{Action, ActionId, Domain, Plan, State};

pub use belief::{decide_in_task, decide_over_set, decide_over_states};
pub use oracle::{brute_force_universal, OracleError, ORACLE_MAX_FACTS};
pub use reach::reachable_states;
pub use universal::decide_universal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Only plans of length exactly `horizon`.
    Exact,
    /// Plans of every length `0..=horizon`, shortest first.
    UpTo,
}

impl SearchMode {
    pub fn lengths(self, horizon: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            SearchMode::Exact => horizon..=horizon,
            SearchMode::UpTo => 0..=horizon,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub horizon: usize,
    pub mode: SearchMode,
    /// At most this many witnesses are returned.
    pub max_plans: usize,
    pub limits: Limits,
}

pub const DEFAULT_MAX_PLANS: usize = 10;

impl SearchConfig {
    pub fn exact(horizon: usize) -> Self {
        SearchConfig {
            horizon,
            mode: SearchMode::Exact,
            max_plans: DEFAULT_MAX_PLANS,
            limits: Limits::default(),
        }
    }

    pub fn up_to(horizon: usize) -> Self {
        SearchConfig {
            mode: SearchMode::UpTo,
            ..Self::exact(horizon)
        }
    }

    pub fn with_max_plans(mut self, max_plans: usize) -> Self {
        self.max_plans = max_plans;
        self
    }

    /// Returns every witness.
    pub fn unlimited(self) -> Self {
        self.with_max_plans(usize::MAX)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn validate(&self) -> Result<(), DecideError> {
        if self.max_plans == 0 {
            return Err(DecideError::InvalidConfig(
                "max_plans must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictMode {
    Universal,
    ByFormula(Formula),
    ExplicitSet,
    InTask,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Reversible,
    Irreversible,
    UnknownUpToHorizon,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Reversible => "reversible",
            Status::Irreversible => "irreversible",
            Status::UnknownUpToHorizon => "unknown-up-to-horizon",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Diagnostic {
    /// The action changes facts outside its own precondition, so two start
    /// states collapse into one and no plan can tell them apart.
    RelevanceViolation { facts: Vec<String> },
    /// The action is applicable in no considered state.
    Vacuous,
    /// The witness list was cut at `cap`.
    MorePlansMayExist { cap: usize },
    /// A reverse plan exists; the shortest has this length.
    ShortestReversePlan { length: usize },
    /// Exhaustive search proved that no action sequence restores the start states.
    NoRestoringSequence { explored: usize },
    /// The completeness search stopped after visiting `cap` states.
    CompletenessCapReached { cap: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::RelevanceViolation { facts } => {
                write!(
                    f,
                    "changes facts outside its precondition: {}",
                    facts.join(", ")
                )
            }
            Diagnostic::Vacuous => {
                f.write_str("applicable in no considered state; vacuously reversible")
            }
            Diagnostic::MorePlansMayExist { cap } => {
                write!(f, "stopped after {cap} plans; more may exist")
            }
            Diagnostic::ShortestReversePlan { length } => {
                write!(f, "shortest reverse plan has length {length}")
            }
            Diagnostic::NoRestoringSequence { explored } => {
                write!(f, "no action sequence restores the start state ({explored} search states exhausted)")
            }
            Diagnostic::CompletenessCapReached { cap } => {
                write!(f, "completeness search stopped after {cap} states")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub action: String,
    pub mode: VerdictMode,
    pub horizon: usize,
    pub search: SearchMode,
    pub status: Status,
    pub witnesses: Vec<Plan>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Verdict {
    pub fn is_vacuous(&self) -> bool {
        self.diagnostics.contains(&Diagnostic::Vacuous)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

/// Facts that matter for a universal reverse plan of `a`: `pre(a)`.
pub fn relevant_facts(a: &Action) -> FactSet {
    a.pre().clone()
}

/// `pre(a) ∪ add(a) ∪ del(a) ⊆ scope`.
pub fn obeys_relevance(a: &Action, scope: &FactSet) -> bool {
    a.touched().is_subset(scope)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// Step `index` of the plan could not be applied.
    Inapplicable { index: usize, action: String },
    /// The plan ran but ended somewhere else.
    WrongFinalState { reached: State },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReverseFailure {
    pub state: State,
    pub kind: FailureKind,
}

/// Checks definitionally that `plan` undoes `a` in every `s ∈ states` where
/// `a` is applicable, reporting the first failing start state.
pub fn check_reverse_plan(
    d: &Domain,
    a: ActionId,
    plan: &Plan,
    states: &[State],
) -> Result<(), ReverseFailure> {
    let action = d.action(a);
    for s in states.iter().filter(|s| action.applicable_in(s)) {
        let after = action.successor(s);
        match d.apply_sequence(plan, &after) {
            Ok(end) if &end == s => {}
            Ok(end) => {
                return Err(ReverseFailure {
                    state: s.clone(),
                    kind: FailureKind::WrongFinalState { reached: end },
                })
            }
            Err(crate::model::ModelError::InapplicableAt { index, action, .. }) => {
                return Err(ReverseFailure {
                    state: s.clone(),
                    kind: FailureKind::Inapplicable { index, action },
                })
            }
            Err(e) => unreachable!("plan over the same domain: {e}"),
        }
    }
    Ok(())
}

/// Decides every action of `d` in declaration order with `decide`, fanning
/// out over the thread pool when the `parallel` feature is on.
pub fn check_all<F>(actions: &[ActionId], decide: F) -> Vec<Verdict>
where
    F: Fn(ActionId) -> Verdict + Sync + Send,
{
    crate::par::map(actions, |&a| decide(a))
}

pub fn check_all_seq<F>(actions: &[ActionId], decide: F) -> Vec<Verdict>
where
    F: Fn(ActionId) -> Verdict,
{
    crate::par::map_seq(actions, |&a| decide(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{enumerate_states, StateSetSpec};
    use crate::model::fixtures::{example1, rev2};

    #[test]
    fn check_reverse_plan_examples() {
        let r = rev2();
        let all = enumerate_states(&StateSetSpec::Universe, &r, &Limits::default()).unwrap();
        let del_all = r.action_id("del-all").unwrap();
        assert_eq!(
            check_reverse_plan(&r, del_all, &r.plan(&["add-f0", "add-f1"]).unwrap(), &all),
            Ok(())
        );

        let d = example1();
        let add_f = d.action_id("add-f").unwrap();
        let del_f = d.plan(&["del-f"]).unwrap();
        assert_eq!(
            check_reverse_plan(&d, add_f, &del_f, &[d.empty_state()]),
            Ok(())
        );
        let f = d.state(&["f"]).unwrap();
        assert_eq!(
            check_reverse_plan(&d, add_f, &del_f, &[d.empty_state(), f.clone()]),
            Err(ReverseFailure {
                state: f,
                kind: FailureKind::WrongFinalState {
                    reached: d.empty_state()
                }
            })
        );
        let wrong = d.plan(&["del-f", "del-f"]).unwrap();
        assert_eq!(
            check_reverse_plan(&d, add_f, &wrong, &[d.empty_state()])
                .unwrap_err()
                .kind,
            FailureKind::Inapplicable {
                index: 1,
                action: "del-f".into()
            }
        );
    }

    #[test]
    fn vacuous_check_passes() {
        let d = example1();
        let del_f = d.action_id("del-f").unwrap();
        assert!(
            check_reverse_plan(&d, del_f, &d.plan(&["del-f"]).unwrap(), &[d.empty_state()]).is_ok()
        );
    }

    #[test]
    fn relevance_examples() {
        let d = example1();
        let del_f = d.action(d.action_id("del-f").unwrap());
        let add_f = d.action(d.action_id("add-f").unwrap());
        assert_eq!(d.names(&relevant_facts(del_f)), vec!["f"]);
        assert!(relevant_facts(add_f).is_empty());
        assert!(obeys_relevance(add_f, &relevant_facts(del_f)));
        assert!(!obeys_relevance(add_f, &relevant_facts(add_f)));

        let r = rev2();
        let del_all = r.action(r.action_id("del-all").unwrap());
        assert_eq!(r.names(&relevant_facts(del_all)), vec!["f0", "f1"]);
        let add_f1 = r.action(r.action_id("add-f1").unwrap());
        assert!(!obeys_relevance(add_f1, &r.state(&["f0"]).unwrap()));
    }

    #[test]
    fn empty_plan_reverses_only_identity_effects() {
        let d = crate::model::DomainBuilder::new("noop")
            .facts(["p", "q"])
            .action("look", &["p"], &[], &[])
            .action("drop-q", &[], &[], &["q"])
            .build()
            .unwrap();
        let all = enumerate_states(&StateSetSpec::Universe, &d, &Limits::default()).unwrap();
        assert!(check_reverse_plan(&d, d.action_id("look").unwrap(), &Plan::empty(), &all).is_ok());
        assert!(
            check_reverse_plan(&d, d.action_id("drop-q").unwrap(), &Plan::empty(), &all).is_err()
        );
        let without_q = vec![d.empty_state(), d.state(&["p"]).unwrap()];
        assert!(check_reverse_plan(
            &d,
            d.action_id("drop-q").unwrap(),
            &Plan::empty(),
            &without_q
        )
        .is_ok());
    }
}
