use std::fmt::Write;

use crate::bits::FactSet;
use crate::model::Domain;

/// Serializes a domain back to PDDL; `parse_domain` inverts it.
///
/// The layout follows the rev-i benchmark listings: one action per block,
/// single literals unwrapped, conjunctions as `(and  ... )`, add effects
/// before delete effects.
pub fn pretty_print(d: &Domain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", d.name());
    out.push_str("  (:requirements :strips)\n");
    out.push_str("  (:predicates");
    for f in d.facts() {
        let _ = write!(out, " ({})", f.name());
    }
    out.push_str(" )\n");

    for a in d.actions() {
        let _ = write!(out, "\n  (:action {}\n", a.name());
        if !a.pre().is_empty() {
            let lits: Vec<String> = lits(d, a.pre()).map(|n| format!("({n})")).collect();
            let _ = writeln!(out, "   :precondition {}", conj(&lits));
        }
        let mut effects: Vec<String> = lits(d, a.add()).map(|n| format!("({n})")).collect();
        effects.extend(lits(d, a.del()).map(|n| format!("(not ({n}))")));
        let _ = writeln!(out, "   :effect {} )", conj(&effects));
    }
    out.push_str(")\n");
    out
}

fn lits<'a>(d: &'a Domain, s: &'a FactSet) -> impl Iterator<Item = &'a str> {
    d.names(s).into_iter()
}

fn conj(lits: &[String]) -> String {
    match lits {
        [one] => one.clone(),
        _ => format!("(and  {} )", lits.join(" ")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixtures, DomainBuilder};
    use crate::pddl::{parse_domain, PddlSource};
    use proptest::prelude::*;

    #[test]
    fn rev2_matches_listing_layout() {
        let printed = pretty_print(&fixtures::rev2());
        assert_eq!(printed, include_str!("../../tests/fixtures/rev-2.pddl"));
    }

    proptest! {
        #[test]
        fn round_trip(codes in proptest::collection::vec(proptest::collection::vec(0u8..5, 4), 0..5)) {
            let names = ["a", "b-c", "D", "e_1"];
            let mut b = DomainBuilder::new("rt");
            b.facts(names);
            for (i, code) in codes.iter().enumerate() {
                let (mut pre, mut add, mut del) = (vec![], vec![], vec![]);
                for (f, c) in code.iter().enumerate() {
                    match c {
                        1 => pre.push(names[f]),
                        2 => add.push(names[f]),
                        3 => del.push(names[f]),
                        4 => { pre.push(names[f]); del.push(names[f]); }
                        _ => {}
                    }
                }
                b.action(format!("act-{i}"), &pre, &add, &del);
            }
            let d = b.build().unwrap();
            let back = parse_domain(&PddlSource::from_text(&pretty_print(&d))).unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
