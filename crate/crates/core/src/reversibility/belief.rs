//! Uniform reversibility over a given set of start states.
//!
//! One plan must undo `a` from every applicable start state at once, so the
//! search runs over belief states: the tuple of current states, one per
//! start state, all advanced by the same action.

use std::collections::HashSet;

use super::{obeys_relevance, DecideError, Diagnostic, SearchConfig, Status, Verdict, VerdictMode};
use crate::formula::{enumerate_states, StateSetSpec};
use crate::model::{ActionId, Domain, Plan, PlanningTask, State};

pub fn decide_over_set(
    d: &Domain,
    a: ActionId,
    spec: &StateSetSpec,
    cfg: &SearchConfig,
) -> Result<Verdict, DecideError> {
    cfg.validate()?;
    let mode = match spec {
        StateSetSpec::Universe => VerdictMode::Universal,
        StateSetSpec::ByFormula(phi) => VerdictMode::ByFormula(phi.clone()),
        StateSetSpec::Explicit(_) => VerdictMode::ExplicitSet,
        StateSetSpec::ReachableOf(_) => VerdictMode::InTask,
    };
    let states = enumerate_states(spec, d, &cfg.limits)?;
    decide_over_states(d, a, &states, mode, cfg)
}

/// [`decide_over_set`] over the states reachable in `task`.
pub fn decide_in_task(
    task: &PlanningTask,
    a: ActionId,
    cfg: &SearchConfig,
) -> Result<Verdict, DecideError> {
    decide_over_set(
        &task.domain,
        a,
        &StateSetSpec::ReachableOf(task.clone()),
        cfg,
    )
}

/// [`decide_over_set`] over states enumerated by the caller, so that one
/// enumeration can serve many actions. `mode` is recorded in the verdict;
/// `InTask` disables the full-coverage irreversibility shortcut.
pub fn decide_over_states(
    d: &Domain,
    a: ActionId,
    states: &[State],
    mode: VerdictMode,
    cfg: &SearchConfig,
) -> Result<Verdict, DecideError> {
    cfg.validate()?;
    Ok(decide_states(d, a, states, mode, cfg))
}

fn decide_states(
    d: &Domain,
    a: ActionId,
    states: &[State],
    mode: VerdictMode,
    cfg: &SearchConfig,
) -> Verdict {
    let action = d.action(a);
    let mut verdict = Verdict {
        action: action.name().to_owned(),
        mode,
        horizon: cfg.horizon,
        search: cfg.mode,
        status: Status::UnknownUpToHorizon,
        witnesses: Vec::new(),
        diagnostics: Vec::new(),
    };

    let targets: Vec<State> = states
        .iter()
        .filter(|s| action.applicable_in(s))
        .cloned()
        .collect();
    if targets.is_empty() {
        verdict.status = Status::Reversible;
        verdict.witnesses.push(Plan::empty());
        verdict.diagnostics.push(Diagnostic::Vacuous);
        return verdict;
    }

    // Within a task the bounded search is the only argument offered.
    let free = d.num_facts() - action.pre().len();
    let covers_all = free < usize::BITS as usize && targets.len() == 1usize << free;
    if covers_all && verdict.mode != VerdictMode::InTask && !obeys_relevance(action, action.pre()) {
        let outside = action.touched().difference(action.pre());
        verdict.status = Status::Irreversible;
        verdict.diagnostics.push(Diagnostic::RelevanceViolation {
            facts: d.names(&outside).into_iter().map(str::to_owned).collect(),
        });
        return verdict;
    }

    let start: Vec<State> = targets.iter().map(|s| action.successor(s)).collect();
    let mut search = Search {
        d,
        targets: &targets,
        dead: HashSet::new(),
        cap: cfg.max_plans,
        out: Vec::new(),
    };
    let mut truncated = false;
    for len in cfg.mode.lengths(cfg.horizon) {
        let mut prefix = Vec::with_capacity(len);
        if search.dfs(&start, len, &mut prefix) == Outcome::Capped {
            truncated = true;
            break;
        }
    }
    if !search.out.is_empty() {
        verdict.status = Status::Reversible;
        verdict.witnesses = search.out;
        if truncated {
            verdict
                .diagnostics
                .push(Diagnostic::MorePlansMayExist { cap: cfg.max_plans });
        }
    }
    verdict
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    /// No plan completes from here.
    Dead,
    /// At least one plan was recorded.
    Found,
    /// The witness cap was reached; the subtree was not fully explored.
    Capped,
}

struct Search<'a> {
    d: &'a Domain,
    targets: &'a [State],
    dead: HashSet<(Vec<State>, usize)>,
    cap: usize,
    out: Vec<Plan>,
}

impl Search<'_> {
    fn dfs(&mut self, belief: &[State], remaining: usize, prefix: &mut Vec<ActionId>) -> Outcome {
        if remaining == 0 {
            if belief != self.targets {
                return Outcome::Dead;
            }
            if self.out.len() == self.cap {
                return Outcome::Capped;
            }
            self.out.push(Plan::new(prefix.clone()));
            return Outcome::Found;
        }
        let key = (belief.to_vec(), remaining);
        if self.dead.contains(&key) {
            return Outcome::Dead;
        }
        let mut result = Outcome::Dead;
        for b in self.d.action_ids() {
            let act = self.d.action(b);
            if !belief.iter().all(|s| act.applicable_in(s)) {
                continue;
            }
            let next: Vec<State> = belief.iter().map(|s| act.successor(s)).collect();
            prefix.push(b);
            let r = self.dfs(&next, remaining - 1, prefix);
            prefix.pop();
            match r {
                Outcome::Capped => return Outcome::Capped,
                Outcome::Found => result = Outcome::Found,
                Outcome::Dead => {}
            }
        }
        if result == Outcome::Dead {
            self.dead.insert(key);
        }
        result
    }
}
