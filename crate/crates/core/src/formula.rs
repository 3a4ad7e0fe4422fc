//! Propositional formulas over a domain's facts and the state sets they define.
//!
//! Concrete syntax is s-expression based, matching PDDL lexing:
//! `f0`, `(f0)`, `(not f0)`, `(and f0 (not f1))`, `(or ...)`, `true`, `false`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bits::FactSet;
use crate::model::{Domain, FactId, PlanningTask, State};
use crate::pddl::sexpr::{read_all, Sexpr};
use crate::pddl::PddlError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(FactId),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    True,
    False,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("formula syntax: {0}")]
    Syntax(String),
    #[error("formula mentions unknown fact `{0}`")]
    UnknownFact(String),
    #[error("fact-universe mismatch: domain has {expected} facts, state has {found}")]
    UniverseMismatch { expected: usize, found: usize },
}

/// Bounds on explicit enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `|F|` for which `2^F` may be enumerated.
    pub max_facts: usize,
    /// Largest number of states a reachability closure may produce.
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_facts: 20,
            max_states: 1 << 20,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CapExceeded {
    #[error("enumeration cap exceeded: {facts} facts, cap is {cap}")]
    Facts { cap: usize, facts: usize },
    #[error("enumeration cap exceeded: more than {cap} states")]
    States { cap: usize },
}

impl Formula {
    pub fn atom(d: &Domain, name: &str) -> Result<Formula, FormulaError> {
        d.fact_id(name)
            .map(Formula::Atom)
            .ok_or_else(|| FormulaError::UnknownFact(name.to_owned()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn parse(text: &str, d: &Domain) -> Result<Formula, FormulaError> {
        let exprs = read_all(text, "<formula>").map_err(|e| match e {
            PddlError::Syntax { loc, message } => {
                FormulaError::Syntax(format!("{}:{}: {message}", loc.line, loc.col))
            }
            other => FormulaError::Syntax(other.to_string()),
        })?;
        match exprs.as_slice() {
            [one] => Self::from_sexpr(one, d),
            [] => Err(FormulaError::Syntax("empty formula".into())),
            _ => Err(FormulaError::Syntax(
                "more than one formula; wrap them in `(and ...)`".into(),
            )),
        }
    }

    fn from_sexpr(e: &Sexpr, d: &Domain) -> Result<Formula, FormulaError> {
        let at = |e: &Sexpr| format!("{}", e.pos());
        match e {
            Sexpr::Symbol(s, _) if s.eq_ignore_ascii_case("true") => Ok(Formula::True),
            Sexpr::Symbol(s, _) if s.eq_ignore_ascii_case("false") => Ok(Formula::False),
            Sexpr::Symbol(s, _) => Formula::atom(d, s),
            Sexpr::List(items, _) => {
                let (head, args) = match items.split_first() {
                    Some((Sexpr::Symbol(h, _), args)) => (h.to_ascii_lowercase(), args),
                    _ => {
                        return Err(FormulaError::Syntax(format!(
                            "{}: expected an operator or fact",
                            at(e)
                        )))
                    }
                };
                let sub = |args: &[Sexpr]| {
                    args.iter()
                        .map(|a| Self::from_sexpr(a, d))
                        .collect::<Result<Vec<_>, _>>()
                };
                match head.as_str() {
                    "not" => match args {
                        [x] => Ok(Formula::not(Self::from_sexpr(x, d)?)),
                        _ => Err(FormulaError::Syntax(format!(
                            "{}: `not` takes one argument",
                            at(e)
                        ))),
                    },
                    "and" | "or" if args.is_empty() => Err(FormulaError::Syntax(format!(
                        "{}: empty `{head}`; use true/false",
                        at(e)
                    ))),
                    "and" => Ok(Formula::And(sub(args)?)),
                    "or" => Ok(Formula::Or(sub(args)?)),
                    _ if args.is_empty() => Self::from_sexpr(&items[0], d),
                    _ => Err(FormulaError::Syntax(format!(
                        "{}: unknown operator `{head}`",
                        at(e)
                    ))),
                }
            }
        }
    }

    pub fn to_text(&self, d: &Domain) -> String {
        match self {
            Formula::Atom(f) => d.fact_name(*f).to_owned(),
            Formula::Not(x) => format!("(not {})", x.to_text(d)),
            Formula::And(xs) => format!(
                "(and {})",
                xs.iter()
                    .map(|x| x.to_text(d))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
            Formula::Or(xs) => format!(
                "(or {})",
                xs.iter()
                    .map(|x| x.to_text(d))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
            Formula::True => "true".into(),
            Formula::False => "false".into(),
        }
    }

    /// Satisfaction without a universe check.
    pub fn holds_in(&self, s: &State) -> bool {
        match self {
            Formula::Atom(f) => s.contains(f.index()),
            Formula::Not(x) => !x.holds_in(s),
            Formula::And(xs) => xs.iter().all(|x| x.holds_in(s)),
            Formula::Or(xs) => xs.iter().any(|x| x.holds_in(s)),
            Formula::True => true,
            Formula::False => false,
        }
    }

    pub fn facts(&self) -> BTreeSet<FactId> {
        let mut out = BTreeSet::new();
        self.collect_facts(&mut out);
        out
    }

    fn collect_facts(&self, out: &mut BTreeSet<FactId>) {
        match self {
            Formula::Atom(f) => {
                out.insert(*f);
            }
            Formula::Not(x) => x.collect_facts(out),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.collect_facts(out)),
            Formula::True | Formula::False => {}
        }
    }
}

/// `s ⊨ φ`, checking that `s` belongs to the domain of `φ`.
pub fn eval(phi: &Formula, s: &State, d: &Domain) -> Result<bool, FormulaError> {
    if s.universe() != d.num_facts() {
        return Err(FormulaError::UniverseMismatch {
            expected: d.num_facts(),
            found: s.universe(),
        });
    }
    if let Some(f) = phi.facts().into_iter().find(|f| f.index() >= d.num_facts()) {
        return Err(FormulaError::UnknownFact(format!("#{}", f.index())));
    }
    Ok(phi.holds_in(s))
}

/// A set of start states `S`.
#[derive(Clone, Debug)]
pub enum StateSetSpec {
    Explicit(Vec<State>),
    ByFormula(Formula),
    ReachableOf(PlanningTask),
    Universe,
}

/// The states of `spec`, deduplicated and ordered as binary numbers over
/// the fact order (fact 0 least significant).
pub fn enumerate_states(
    spec: &StateSetSpec,
    d: &Domain,
    limits: &Limits,
) -> Result<Vec<State>, CapExceeded> {
    enumerate_with(spec, d, limits, false)
}

/// Same as [`enumerate_states`], never using the thread pool.
pub fn enumerate_states_seq(
    spec: &StateSetSpec,
    d: &Domain,
    limits: &Limits,
) -> Result<Vec<State>, CapExceeded> {
    enumerate_with(spec, d, limits, true)
}

fn enumerate_with(
    spec: &StateSetSpec,
    d: &Domain,
    limits: &Limits,
    sequential: bool,
) -> Result<Vec<State>, CapExceeded> {
    let n = d.num_facts();
    let all = |keep: &(dyn Fn(&State) -> bool + Sync)| -> Result<Vec<State>, CapExceeded> {
        if n > limits.max_facts || n >= 64 {
            return Err(CapExceeded::Facts {
                cap: limits.max_facts,
                facts: n,
            });
        }
        let test = |i: u64| keep(&FactSet::from_bits(n, i));
        let idx = if sequential {
            crate::par::filter_range_seq(1u64 << n, test)
        } else {
            crate::par::filter_range(1u64 << n, test)
        };
        Ok(idx.into_iter().map(|i| FactSet::from_bits(n, i)).collect())
    };
    match spec {
        StateSetSpec::Universe => all(&|_| true),
        StateSetSpec::ByFormula(phi) => all(&|s| phi.holds_in(s)),
        StateSetSpec::Explicit(states) => {
            let set: BTreeSet<State> = states.iter().cloned().collect();
            Ok(set.into_iter().collect())
        }
        StateSetSpec::ReachableOf(task) => {
            let mut v: Vec<State> =
                crate::reversibility::reachable_states(task, limits.max_states)?
                    .into_iter()
                    .collect();
            v.sort();
            Ok(v)
        }
    }
}
