//! Universal uniform reversibility.
//!
//! If `a` changes a fact outside `pre(a)`, two start states differing only
//! in that fact are mapped to the same successor and `a` is irreversible.
//! Otherwise every reverse plan may only use actions that stay inside
//! `pre(a)`, facts outside `pre(a)` are frame, and a single start state
//! suffices: `pre(a)` itself. The search then runs from `pre(a) \ del(a)`
//! back to `pre(a)` in the transition system restricted to those actions,
//! whose states are subsets of `pre(a)`.

use std::collections::{HashSet, VecDeque};

use super::{obeys_relevance, Diagnostic, SearchConfig, Status, Verdict, VerdictMode};
use crate::model::{ActionId, Domain, Plan, State};

pub fn decide_universal(d: &Domain, a: ActionId, cfg: &SearchConfig) -> Verdict {
    let action = d.action(a);
    let scope = action.pre();
    let mut verdict = Verdict {
        action: action.name().to_owned(),
        mode: VerdictMode::Universal,
        horizon: cfg.horizon,
        search: cfg.mode,
        status: Status::UnknownUpToHorizon,
        witnesses: Vec::new(),
        diagnostics: Vec::new(),
    };

    if !obeys_relevance(action, scope) {
        let outside = action.touched().difference(scope);
        verdict.status = Status::Irreversible;
        verdict.diagnostics.push(Diagnostic::RelevanceViolation {
            facts: d.names(&outside).into_iter().map(str::to_owned).collect(),
        });
        return verdict;
    }

    let steps: Vec<ActionId> = d
        .action_ids()
        .filter(|&b| obeys_relevance(d.action(b), scope))
        .collect();
    let space = Projected {
        d,
        steps: &steps,
        start: action.successor(scope),
        goal: scope.clone(),
    };

    let (witnesses, truncated) = space.plans(cfg);
    if !witnesses.is_empty() {
        verdict.status = Status::Reversible;
        verdict.witnesses = witnesses;
        if truncated {
            verdict
                .diagnostics
                .push(Diagnostic::MorePlansMayExist { cap: cfg.max_plans });
        }
        return verdict;
    }

    match space.shortest(cfg.limits.max_states) {
        Reach::Distance(length) => verdict
            .diagnostics
            .push(Diagnostic::ShortestReversePlan { length }),
        Reach::Unreachable { explored } => {
            verdict.status = Status::Irreversible;
            verdict
                .diagnostics
                .push(Diagnostic::NoRestoringSequence { explored });
        }
        Reach::CapReached => verdict
            .diagnostics
            .push(Diagnostic::CompletenessCapReached {
                cap: cfg.limits.max_states,
            }),
    }
    verdict
}

struct Projected<'a> {
    d: &'a Domain,
    steps: &'a [ActionId],
    start: State,
    goal: State,
}

enum Reach {
    Distance(usize),
    Unreachable { explored: usize },
    CapReached,
}

impl Projected<'_> {
    fn successors<'s>(&'s self, s: &'s State) -> impl Iterator<Item = (ActionId, State)> + 's {
        self.steps.iter().filter_map(move |&b| {
            let act = self.d.action(b);
            act.applicable_in(s).then(|| (b, act.successor(s)))
        })
    }

    /// Witnesses of the configured lengths, ordered by length then by
    /// action declaration order; the flag is set when `max_plans` cut the list.
    fn plans(&self, cfg: &SearchConfig) -> (Vec<Plan>, bool) {
        // layers[t]: states reachable from start in exactly t steps
        let mut layers: Vec<HashSet<State>> = vec![HashSet::from([self.start.clone()])];
        for t in 1..=cfg.horizon {
            let next: HashSet<State> = layers[t - 1]
                .iter()
                .flat_map(|s| self.successors(s).map(|(_, n)| n))
                .collect();
            let empty = next.is_empty();
            layers.push(next);
            if empty {
                break;
            }
        }

        let mut out = Vec::new();
        for len in cfg.mode.lengths(cfg.horizon) {
            if len >= layers.len() || !layers[len].contains(&self.goal) {
                continue;
            }
            // good[t]: states of layer t that reach the goal in exactly len - t steps
            let mut good: Vec<HashSet<State>> = vec![HashSet::new(); len + 1];
            good[len].insert(self.goal.clone());
            for t in (0..len).rev() {
                let g: HashSet<State> = layers[t]
                    .iter()
                    .filter(|s| self.successors(s).any(|(_, n)| good[t + 1].contains(&n)))
                    .cloned()
                    .collect();
                good[t] = g;
            }
            let mut prefix = Vec::with_capacity(len);
            if self.walk(&self.start, 0, &good, &mut prefix, &mut out, cfg.max_plans) {
                return (out, true);
            }
        }
        (out, false)
    }

    /// Depth-first enumeration along `good`; returns true once `cap` is hit
    /// with plans still unvisited.
    fn walk(
        &self,
        s: &State,
        t: usize,
        good: &[HashSet<State>],
        prefix: &mut Vec<ActionId>,
        out: &mut Vec<Plan>,
        cap: usize,
    ) -> bool {
        if t + 1 == good.len() {
            if out.len() == cap {
                return true;
            }
            out.push(Plan::new(prefix.clone()));
            return false;
        }
        for (b, n) in self.successors(s) {
            if good[t + 1].contains(&n) {
                prefix.push(b);
                let stop = self.walk(&n, t + 1, good, prefix, out, cap);
                prefix.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }

    /// Breadth-first distance from start to goal over the restricted actions.
    fn shortest(&self, cap: usize) -> Reach {
        let mut seen = HashSet::from([self.start.clone()]);
        let mut queue = VecDeque::from([(self.start.clone(), 0usize)]);
        while let Some((s, dist)) = queue.pop_front() {
            if s == self.goal {
                return Reach::Distance(dist);
            }
            for (_, n) in self.successors(&s) {
                if seen.insert(n.clone()) {
                    if seen.len() > cap {
                        return Reach::CapReached;
                    }
                    queue.push_back((n, dist + 1));
                }
            }
        }
        Reach::Unreachable {
            explored: seen.len(),
        }
    }
}
