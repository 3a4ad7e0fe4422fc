//! Propositional STRIPS: facts, actions, states, domains, tasks and plans.
//!
//! Facts are interned per domain and addressed by [`FactId`]; every fact set
//! (precondition, add/delete effects, states) is a [`FactSet`] over the
//! domain's universe. Iteration order is declaration order throughout.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bits::FactSet;

/// A state is the set of facts that are true.
pub type State = FactSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactId(pub(crate) u32);

impl FactId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub(crate) u32);

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fact {
    name: String,
}

impl Fact {
    pub fn name(&self) -> &str {
        &self.name
    }
}

/// A ground STRIPS action `⟨pre, add, del⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Action {
    name: String,
    pre: FactSet,
    add: FactSet,
    del: FactSet,
}

impl Action {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pre(&self) -> &FactSet {
        &self.pre
    }

    pub fn add(&self) -> &FactSet {
        &self.add
    }

    pub fn del(&self) -> &FactSet {
        &self.del
    }

    /// All facts the action mentions: `pre ∪ add ∪ del`.
    pub fn touched(&self) -> FactSet {
        self.pre.union(&self.add).union(&self.del)
    }

    /// `pre(a) ⊆ s`. The caller guarantees `s` is over the same universe.
    #[inline]
    pub fn applicable_in(&self, s: &State) -> bool {
        self.pre.is_subset(s)
    }

    /// `(s \ del(a)) ∪ add(a)`, without checking applicability.
    #[inline]
    pub fn successor(&self, s: &State) -> State {
        s.transition(&self.del, &self.add)
    }
}

/// A sequence of actions of one domain.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plan {
    steps: Vec<ActionId>,
}

impl Plan {
    pub fn new(steps: Vec<ActionId>) -> Self {
        Plan { steps }
    }

    pub fn empty() -> Self {
        Plan::default()
    }

    pub fn steps(&self) -> &[ActionId] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn concat(&self, other: &Plan) -> Plan {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Plan { steps }
    }
}

impl From<Vec<ActionId>> for Plan {
    fn from(steps: Vec<ActionId>) -> Self {
        Plan { steps }
    }
}

/// A well-formedness problem found in a domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    AddDelOverlap { action: String, facts: Vec<String> },
    PreAddOverlap { action: String, facts: Vec<String> },
    DuplicateActionName { action: String },
    DuplicateFactName { fact: String },
    UnknownFact { action: String, fact: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AddDelOverlap { action, facts } => {
                write!(f, "action `{action}` both adds and deletes {facts:?}")
            }
            Violation::PreAddOverlap { action, facts } => {
                write!(
                    f,
                    "action `{action}` adds facts of its own precondition {facts:?}"
                )
            }
            Violation::DuplicateActionName { action } => {
                write!(f, "duplicate action name `{action}`")
            }
            Violation::DuplicateFactName { fact } => write!(f, "duplicate fact name `{fact}`"),
            Violation::UnknownFact { action, fact } => {
                write!(f, "action `{action}` mentions undeclared fact `{fact}`")
            }
        }
    }
}

/// Non-fatal normalization applied in lenient mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    DroppedAddOfPrecondition { action: String, facts: Vec<String> },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DroppedAddOfPrecondition { action, facts } => write!(
                f,
                "action `{action}`: dropped add effects {facts:?} that are already preconditions"
            ),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("fact-universe mismatch: domain has {expected} facts, set has {found}")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("action `{action}` is not applicable, missing {missing:?}")]
    PreconditionViolated {
        action: String,
        missing: Vec<String>,
    },
    #[error("plan step {index} (`{action}`) is not applicable, missing {missing:?}")]
    InapplicableAt {
        index: usize,
        action: String,
        missing: Vec<String>,
    },
    #[error("unknown fact `{0}`")]
    UnknownFact(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("ill-formed domain: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed(Vec<Violation>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strictness {
    /// Any violation refuses construction.
    #[default]
    Strict,
    /// `pre ∩ add` overlaps are dropped from `add` and reported as warnings.
    Lenient,
}

/// A STRIPS domain: fact universe `F` and action set `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    name: String,
    facts: Vec<Fact>,
    actions: Vec<Action>,
    fact_index: HashMap<String, FactId>,
    action_index: HashMap<String, ActionId>,
}

impl Domain {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn num_facts(&self) -> usize {
        self.facts.len()
    }

    pub fn fact_ids(&self) -> impl Iterator<Item = FactId> {
        (0..self.facts.len() as u32).map(FactId)
    }

    pub fn fact_name(&self, id: FactId) -> &str {
        &self.facts[id.index()].name
    }

    pub fn fact_id(&self, name: &str) -> Option<FactId> {
        self.fact_index.get(name).copied()
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn action_ids(&self) -> impl Iterator<Item = ActionId> {
        (0..self.actions.len() as u32).map(ActionId)
    }

    pub fn action(&self, id: ActionId) -> &Action {
        &self.actions[id.index()]
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.action_index.get(name).copied()
    }

    pub fn empty_state(&self) -> State {
        FactSet::empty(self.facts.len())
    }

    pub fn state<S: AsRef<str>>(&self, names: &[S]) -> Result<State, ModelError> {
        let mut s = self.empty_state();
        for n in names {
            let id = self
                .fact_id(n.as_ref())
                .ok_or_else(|| ModelError::UnknownFact(n.as_ref().to_owned()))?;
            s.insert(id.index());
        }
        Ok(s)
    }

    /// Member names of a fact set, in declaration order.
    pub fn names<'a>(&'a self, set: &'a FactSet) -> Vec<&'a str> {
        set.iter().map(|i| self.facts[i].name.as_str()).collect()
    }

    pub fn plan<S: AsRef<str>>(&self, names: &[S]) -> Result<Plan, ModelError> {
        names
            .iter()
            .map(|n| {
                self.action_id(n.as_ref())
                    .ok_or_else(|| ModelError::UnknownAction(n.as_ref().to_owned()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Plan::new)
    }

    pub fn plan_names(&self, plan: &Plan) -> Vec<String> {
        plan.steps()
            .iter()
            .map(|&a| self.action(a).name.clone())
            .collect()
    }

    fn check_universe(&self, s: &FactSet) -> Result<(), ModelError> {
        if s.universe() != self.facts.len() {
            return Err(ModelError::UniverseMismatch {
                expected: self.facts.len(),
                found: s.universe(),
            });
        }
        Ok(())
    }

    pub fn is_applicable(&self, a: ActionId, s: &State) -> Result<bool, ModelError> {
        self.check_universe(s)?;
        Ok(self.action(a).applicable_in(s))
    }

    pub fn apply(&self, a: ActionId, s: &State) -> Result<State, ModelError> {
        self.check_universe(s)?;
        let action = self.action(a);
        if !action.applicable_in(s) {
            return Err(ModelError::PreconditionViolated {
                action: action.name.clone(),
                missing: self.missing(action, s),
            });
        }
        Ok(action.successor(s))
    }

    /// Applies `plan` step by step; fails at the first inapplicable step.
    pub fn apply_sequence(&self, plan: &Plan, s: &State) -> Result<State, ModelError> {
        self.check_universe(s)?;
        let mut cur = s.clone();
        for (index, &a) in plan.steps().iter().enumerate() {
            let action = self.action(a);
            if !action.applicable_in(&cur) {
                return Err(ModelError::InapplicableAt {
                    index,
                    action: action.name.clone(),
                    missing: self.missing(action, &cur),
                });
            }
            cur = action.successor(&cur);
        }
        Ok(cur)
    }

    fn missing(&self, action: &Action, s: &State) -> Vec<String> {
        action
            .pre
            .difference(s)
            .iter()
            .map(|i| self.facts[i].name.clone())
            .collect()
    }

    /// Well-formedness and naming violations; empty for every domain built in strict mode.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashMap::new();
        for f in &self.facts {
            if seen.insert(f.name.as_str(), ()).is_some() {
                out.push(Violation::DuplicateFactName {
                    fact: f.name.clone(),
                });
            }
        }
        let mut seen = HashMap::new();
        for a in &self.actions {
            if seen.insert(a.name.as_str(), ()).is_some() {
                out.push(Violation::DuplicateActionName {
                    action: a.name.clone(),
                });
            }
        }
        for a in &self.actions {
            let ad = a.add.intersection(&a.del);
            if !ad.is_empty() {
                out.push(Violation::AddDelOverlap {
                    action: a.name.clone(),
                    facts: self.names(&ad).into_iter().map(str::to_owned).collect(),
                });
            }
            let pa = a.pre.intersection(&a.add);
            if !pa.is_empty() {
                out.push(Violation::PreAddOverlap {
                    action: a.name.clone(),
                    facts: self.names(&pa).into_iter().map(str::to_owned).collect(),
                });
            }
        }
        out
    }
}

pub fn validate_domain(d: &Domain) -> Vec<Violation> {
    d.validate()
}

/// A STRIPS planning task `⟨F, A, s0, G⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanningTask {
    pub domain: Domain,
    pub init: State,
    pub goal: FactSet,
}

impl PlanningTask {
    pub fn new(domain: Domain, init: State, goal: FactSet) -> Result<Self, ModelError> {
        for s in [&init, &goal] {
            domain.check_universe(s)?;
        }
        Ok(PlanningTask { domain, init, goal })
    }

    pub fn is_goal(&self, s: &State) -> bool {
        self.goal.is_subset(s)
    }
}

struct DraftAction {
    name: String,
    pre: Vec<String>,
    add: Vec<String>,
    del: Vec<String>,
}

/// Collects facts and actions by name and checks well-formedness on build.
pub struct DomainBuilder {
    name: String,
    facts: Vec<String>,
    actions: Vec<DraftAction>,
}

impl DomainBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        DomainBuilder {
            name: name.into(),
            facts: Vec::new(),
            actions: Vec::new(),
        }
    }

    pub fn fact(&mut self, name: impl Into<String>) -> &mut Self {
        self.facts.push(name.into());
        self
    }

    pub fn facts<S: Into<String>, I: IntoIterator<Item = S>>(&mut self, names: I) -> &mut Self {
        self.facts.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn action(
        &mut self,
        name: impl Into<String>,
        pre: &[&str],
        add: &[&str],
        del: &[&str],
    ) -> &mut Self {
        let own = |xs: &[&str]| xs.iter().map(|x| (*x).to_owned()).collect();
        self.actions.push(DraftAction {
            name: name.into(),
            pre: own(pre),
            add: own(add),
            del: own(del),
        });
        self
    }

    pub fn build(&self) -> Result<Domain, ModelError> {
        self.build_with(Strictness::Strict).map(|(d, _)| d)
    }

    pub fn build_with(&self, strictness: Strictness) -> Result<(Domain, Vec<Warning>), ModelError> {
        let (mut domain, mut violations) = self.assemble();
        let mut warnings = Vec::new();
        if strictness == Strictness::Lenient {
            let mut kept = Vec::new();
            for v in violations {
                if let Violation::PreAddOverlap { action, facts } = v {
                    let id = domain.action_index[&action];
                    let a = &mut domain.actions[id.index()];
                    a.add = a.add.difference(&a.pre);
                    warnings.push(Warning::DroppedAddOfPrecondition { action, facts });
                } else {
                    kept.push(v);
                }
            }
            violations = kept;
        }
        if violations.is_empty() {
            Ok((domain, warnings))
        } else {
            Err(ModelError::IllFormed(violations))
        }
    }

    /// Builds without refusing ill-formed actions. Undeclared fact names are
    /// dropped; everything else is kept as written so `validate` can report it.
    pub fn build_unchecked(&self) -> Domain {
        self.assemble().0
    }

    fn assemble(&self) -> (Domain, Vec<Violation>) {
        let n = self.facts.len();
        let mut fact_index = HashMap::new();
        for (i, f) in self.facts.iter().enumerate() {
            fact_index.entry(f.clone()).or_insert(FactId(i as u32));
        }
        let mut unknown = Vec::new();
        let mut actions = Vec::with_capacity(self.actions.len());
        let mut action_index = HashMap::new();
        for (i, da) in self.actions.iter().enumerate() {
            let mut set = |names: &[String]| {
                let mut s = FactSet::empty(n);
                for name in names {
                    match fact_index.get(name) {
                        Some(id) => {
                            s.insert(FactId::index(*id));
                        }
                        None => unknown.push(Violation::UnknownFact {
                            action: da.name.clone(),
                            fact: name.clone(),
                        }),
                    }
                }
                s
            };
            let pre = set(&da.pre);
            let add = set(&da.add);
            let del = set(&da.del);
            action_index
                .entry(da.name.clone())
                .or_insert(ActionId(i as u32));
            actions.push(Action {
                name: da.name.clone(),
                pre,
                add,
                del,
            });
        }
        let domain = Domain {
            name: self.name.clone(),
            facts: self
                .facts
                .iter()
                .map(|f| Fact { name: f.clone() })
                .collect(),
            actions,
            fact_index,
            action_index,
        };
        let mut violations = domain.validate();
        violations.extend(unknown);
        (domain, violations)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn example1() -> Domain {
        DomainBuilder::new("example1")
            .fact("f")
            .action("del-f", &["f"], &[], &["f"])
            .action("add-f", &[], &["f"], &[])
            .build()
            .unwrap()
    }

    pub fn rev2() -> Domain {
        DomainBuilder::new("rev-2")
            .facts(["f0", "f1"])
            .action("del-all", &["f0", "f1"], &[], &["f0", "f1"])
            .action("add-f0", &[], &["f0"], &[])
            .action("add-f1", &["f0"], &["f1"], &[])
            .build()
            .unwrap()
    }
}
