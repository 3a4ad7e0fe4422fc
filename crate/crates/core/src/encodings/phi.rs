//! Translation of a state formula into rules deriving `phi_violated`
//! exactly when the guessed time-0 state falsifies it.

use super::{EncodeError, EncodingKind};
use crate::formula::Formula;
use crate::model::{Domain, FactId};

/// Negation normal form; literals carry the value that makes them true.
enum Nnf {
    Lit(FactId, bool),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    True,
    False,
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    match (f, positive) {
        (Formula::Atom(id), _) => Nnf::Lit(*id, positive),
        (Formula::Not(inner), _) => nnf(inner, !positive),
        (Formula::And(xs), true) | (Formula::Or(xs), false) => {
            Nnf::And(xs.iter().map(|x| nnf(x, positive)).collect())
        }
        (Formula::Or(xs), true) | (Formula::And(xs), false) => {
            Nnf::Or(xs.iter().map(|x| nnf(x, positive)).collect())
        }
        (Formula::True, true) | (Formula::False, false) => Nnf::True,
        (Formula::False, true) | (Formula::True, false) => Nnf::False,
    }
}

/// Rules for `phi_violated` (one `phi_node/1` predicate per subformula of
/// the NNF of `not phi`) followed by the hook: a constraint for the ELP
/// kind, a `reversePlan` rule for the saturation-based ASP kind.
pub fn compile_phi_hook(
    kind: EncodingKind,
    phi: &Formula,
    d: &Domain,
) -> Result<String, EncodeError> {
    let hook = match kind {
        EncodingKind::GeneralElp => ":- phi_violated.",
        EncodingKind::GeneralAsp => "reversePlan :- phi_violated.",
        simple => return Err(EncodeError::PhiNotSupported(simple)),
    };
    let mut rules = Vec::new();
    let mut next = 0usize;
    let root = lower(&nnf(phi, false), d, &mut next, &mut rules);
    rules.push(format!("phi_violated :- phi_node({root})."));
    rules.push(hook.to_owned());
    let mut text = rules.join("\n");
    text.push('\n');
    Ok(text)
}

fn lower(n: &Nnf, d: &Domain, next: &mut usize, rules: &mut Vec<String>) -> usize {
    let id = *next;
    *next += 1;
    match n {
        Nnf::Lit(f, value) => rules.push(format!(
            "phi_node({id}) :- holds(\"{}\",{value},0).",
            d.fact_name(*f)
        )),
        Nnf::True => rules.push(format!("phi_node({id}).")),
        Nnf::False => {}
        Nnf::And(xs) if xs.is_empty() => rules.push(format!("phi_node({id}).")),
        Nnf::And(xs) => {
            let kids: Vec<usize> = xs.iter().map(|x| lower(x, d, next, rules)).collect();
            let body: Vec<String> = kids.iter().map(|k| format!("phi_node({k})")).collect();
            rules.push(format!("phi_node({id}) :- {}.", body.join(", ")));
        }
        Nnf::Or(xs) => {
            for x in xs {
                let k = lower(x, d, next, rules);
                rules.push(format!("phi_node({id}) :- phi_node({k})."));
            }
        }
    }
    id
}
