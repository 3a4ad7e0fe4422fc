//! Literal brute force for universal reversibility, used to cross-check
//! [`super::decide_universal`]. It shares no search code with it: every plan
//! of each admissible length is enumerated in lexicographic order and checked
//! against all `2^|F|` states.

use std::collections::{BTreeMap, HashSet, VecDeque};

use thiserror::Error;

use super::{check_reverse_plan, Diagnostic, SearchConfig, Status, Verdict, VerdictMode};
use crate::bits::FactSet;
use crate::model::{ActionId, Domain, Plan, State};

pub const ORACLE_MAX_FACTS: usize = 12;
const ORACLE_MAX_PLANS: u128 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle supports at most {max} facts, domain has {facts}")]
    TooManyFacts { facts: usize, max: usize },
    #[error("oracle would enumerate {plans} plans, limit is {max}")]
    TooManyPlans { plans: u128, max: u128 },
}

pub fn brute_force_universal(
    d: &Domain,
    a: ActionId,
    cfg: &SearchConfig,
) -> Result<Verdict, OracleError> {
    let n = d.num_facts();
    if n > ORACLE_MAX_FACTS {
        return Err(OracleError::TooManyFacts {
            facts: n,
            max: ORACLE_MAX_FACTS,
        });
    }
    let m = d.actions().len() as u128;
    let total: u128 = cfg
        .mode
        .lengths(cfg.horizon)
        .map(|l| m.saturating_pow(l as u32))
        .fold(0u128, u128::saturating_add);
    if total > ORACLE_MAX_PLANS {
        return Err(OracleError::TooManyPlans {
            plans: total,
            max: ORACLE_MAX_PLANS,
        });
    }
    Ok(run(d, a, cfg))
}

fn run(d: &Domain, a: ActionId, cfg: &SearchConfig) -> Verdict {
    let n = d.num_facts();
    let all: Vec<State> = (0..1u64 << n).map(|i| FactSet::from_bits(n, i)).collect();
    let action = d.action(a);
    let mut verdict = Verdict {
        action: action.name().to_owned(),
        mode: VerdictMode::Universal,
        horizon: cfg.horizon,
        search: cfg.mode,
        status: Status::UnknownUpToHorizon,
        witnesses: Vec::new(),
        diagnostics: Vec::new(),
    };

    let ids: Vec<ActionId> = d.action_ids().collect();
    let mut truncated = false;
    'lengths: for len in cfg.mode.lengths(cfg.horizon) {
        if len > 0 && ids.is_empty() {
            continue;
        }
        let mut digits = vec![0usize; len];
        loop {
            let plan = Plan::new(digits.iter().map(|&i| ids[i]).collect());
            if check_reverse_plan(d, a, &plan, &all).is_ok() {
                if verdict.witnesses.len() == cfg.max_plans {
                    truncated = true;
                    break 'lengths;
                }
                verdict.witnesses.push(plan);
            }
            // odometer, last position fastest
            let mut pos = len;
            loop {
                if pos == 0 {
                    continue 'lengths;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < ids.len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
    if !verdict.witnesses.is_empty() {
        verdict.status = Status::Reversible;
        if truncated {
            verdict
                .diagnostics
                .push(Diagnostic::MorePlansMayExist { cap: cfg.max_plans });
        }
        return verdict;
    }

    let starts: Vec<State> = all
        .iter()
        .filter(|s| action.applicable_in(s))
        .cloned()
        .collect();
    let collapsed = collisions(d, &starts, |s| action.successor(s));
    if !collapsed.is_empty() {
        verdict.status = Status::Irreversible;
        verdict.diagnostics.push(Diagnostic::RelevanceViolation {
            facts: d.names(&collapsed).into_iter().map(str::to_owned).collect(),
        });
        return verdict;
    }

    // breadth-first over belief states with every action
    let begin: Vec<State> = starts.iter().map(|s| action.successor(s)).collect();
    let mut seen = HashSet::from([begin.clone()]);
    let mut queue = VecDeque::from([(begin, 0usize)]);
    while let Some((belief, dist)) = queue.pop_front() {
        if belief == starts {
            verdict
                .diagnostics
                .push(Diagnostic::ShortestReversePlan { length: dist });
            return verdict;
        }
        for b in d.actions() {
            if belief.iter().all(|s| b.applicable_in(s)) {
                let next: Vec<State> = belief.iter().map(|s| b.successor(s)).collect();
                if seen.insert(next.clone()) {
                    if seen.len() > cfg.limits.max_states {
                        verdict
                            .diagnostics
                            .push(Diagnostic::CompletenessCapReached {
                                cap: cfg.limits.max_states,
                            });
                        return verdict;
                    }
                    queue.push_back((next, dist + 1));
                }
            }
        }
    }
    verdict.status = Status::Irreversible;
    verdict.diagnostics.push(Diagnostic::NoRestoringSequence {
        explored: seen.len(),
    });
    verdict
}

/// Facts on which two distinct states of `states` differ while `f` maps
/// them to the same image.
fn collisions(d: &Domain, states: &[State], f: impl Fn(&State) -> State) -> FactSet {
    let mut first: BTreeMap<State, &State> = BTreeMap::new();
    let mut facts = d.empty_state();
    for s in states {
        let image = f(s);
        match first.get(&image) {
            Some(&t) => facts = facts.union(&s.difference(t).union(&t.difference(s))),
            None => {
                first.insert(image, s);
            }
        }
    }
    facts
}
