use std::collections::HashSet;

use super::sexpr::{read_all, Pos, Sexpr};
use super::{Loc, PddlError, PddlSource};
use crate::model::{Domain, DomainBuilder, PlanningTask, Strictness, Warning};

struct Ctx<'a> {
    origin: &'a str,
}

impl Ctx<'_> {
    fn loc(&self, p: Pos) -> Loc {
        Loc {
            origin: self.origin.to_owned(),
            line: p.line,
            col: p.col,
        }
    }

    fn syntax<T>(&self, p: Pos, message: impl Into<String>) -> Result<T, PddlError> {
        Err(PddlError::Syntax {
            loc: self.loc(p),
            message: message.into(),
        })
    }

    fn unsupported<T>(&self, p: Pos, feature: impl Into<String>) -> Result<T, PddlError> {
        Err(PddlError::UnsupportedFeature {
            loc: self.loc(p),
            feature: feature.into(),
        })
    }

    fn name(&self, e: &Sexpr) -> Result<String, PddlError> {
        match e {
            Sexpr::Symbol(s, p) => {
                if s.contains('"') || s.starts_with('?') || s.starts_with(':') {
                    return Err(PddlError::InvalidName {
                        loc: self.loc(*p),
                        name: s.clone(),
                    });
                }
                Ok(s.clone())
            }
            Sexpr::List(_, p) => self.syntax(*p, "expected a name"),
        }
    }

    /// Unwraps `(define (<kind> NAME) body...)`.
    fn define<'e>(&self, top: &'e [Sexpr], kind: &str) -> Result<(String, &'e [Sexpr]), PddlError> {
        let first = match top {
            [one] => one,
            [] => return self.syntax(Pos { line: 1, col: 1 }, "empty input"),
            [_, extra, ..] => return self.syntax(extra.pos(), "trailing input after `define`"),
        };
        let items = match first.as_list() {
            Some(items)
                if first
                    .head()
                    .is_some_and(|h| h.eq_ignore_ascii_case("define")) =>
            {
                items
            }
            _ => return self.syntax(first.pos(), "expected `(define ...)`"),
        };
        let header = items
            .get(1)
            .ok_or(())
            .or_else(|_| self.syntax(first.pos(), "missing header"))?;
        match header.as_list() {
            Some([k, n]) if k.as_symbol().is_some_and(|k| k.eq_ignore_ascii_case(kind)) => {
                Ok((self.name(n)?, &items[2..]))
            }
            _ => self.syntax(header.pos(), format!("expected `({kind} NAME)`")),
        }
    }
}

fn is_kw(e: &Sexpr, kw: &str) -> bool {
    e.as_symbol().is_some_and(|s| s.eq_ignore_ascii_case(kw))
}

/// Parses a domain in strict mode.
pub fn parse_domain(src: &PddlSource) -> Result<Domain, PddlError> {
    parse_domain_with(src, Strictness::Strict).map(|(d, _)| d)
}

pub fn parse_domain_with(
    src: &PddlSource,
    strictness: Strictness,
) -> Result<(Domain, Vec<Warning>), PddlError> {
    let cx = Ctx {
        origin: &src.origin,
    };
    let top = read_all(&src.text, &src.origin)?;
    let (name, body) = cx.define(&top, "domain")?;
    let mut builder = DomainBuilder::new(name);
    let mut predicates: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    let mut action_exprs = Vec::new();

    for section in body {
        let items = match section.as_list() {
            Some(items) if !items.is_empty() => items,
            _ => return cx.syntax(section.pos(), "expected a domain section"),
        };
        let head = items[0].as_symbol().unwrap_or("").to_ascii_lowercase();
        match head.as_str() {
            ":requirements" => {
                for r in &items[1..] {
                    match r.as_symbol() {
                        Some(s) if s.eq_ignore_ascii_case(":strips") => {}
                        Some(s) => return cx.unsupported(r.pos(), format!("requirement {s}")),
                        None => return cx.syntax(r.pos(), "expected a requirement keyword"),
                    }
                }
            }
            ":types" => {
                for t in &items[1..] {
                    if !is_kw(t, "object") {
                        return cx.unsupported(t.pos(), "typing");
                    }
                }
            }
            ":predicates" => {
                for p in &items[1..] {
                    match p.as_list() {
                        Some([n]) => {
                            let n = cx.name(n)?;
                            if !seen.insert(n.clone()) {
                                return cx.syntax(p.pos(), format!("duplicate predicate `{n}`"));
                            }
                            predicates.push(n);
                        }
                        Some([_, _, ..]) => {
                            return cx.unsupported(p.pos(), "predicate with arguments")
                        }
                        _ => return cx.syntax(p.pos(), "expected `(NAME)`"),
                    }
                }
            }
            ":action" => action_exprs.push(section),
            ":constants" | ":functions" | ":derived" | ":durative-action" | ":constraints" => {
                return cx.unsupported(items[0].pos(), head);
            }
            _ => return cx.syntax(items[0].pos(), format!("unknown domain section `{head}`")),
        }
    }
    builder.facts(predicates);

    for section in action_exprs {
        let items = section.as_list().unwrap_or_default();
        let name = match items.get(1) {
            Some(n) => cx.name(n)?,
            None => return cx.syntax(section.pos(), "action without a name"),
        };
        let mut pre = Vec::new();
        let mut add = Vec::new();
        let mut del = Vec::new();
        let mut rest = items[2..].iter();
        while let Some(key) = rest.next() {
            let value = rest
                .next()
                .ok_or(())
                .or_else(|_| cx.syntax(key.pos(), "keyword without a value"))?;
            match key.as_symbol().map(str::to_ascii_lowercase).as_deref() {
                Some(":parameters") => match value.as_list() {
                    Some([]) => {}
                    Some(_) => {
                        return cx.unsupported(value.pos(), "action parameters (lifted actions)")
                    }
                    None => return cx.syntax(value.pos(), "expected a parameter list"),
                },
                Some(":precondition") => condition(&cx, value, &seen, &mut pre)?,
                Some(":effect") => effect(&cx, value, &seen, &mut add, &mut del)?,
                _ => return cx.syntax(key.pos(), "expected :parameters, :precondition or :effect"),
            }
        }
        let [pre, add, del] =
            [&pre, &add, &del].map(|xs| xs.iter().map(String::as_str).collect::<Vec<_>>());
        builder.action(name, &pre, &add, &del);
    }

    builder
        .build_with(strictness)
        .map_err(|source| PddlError::Model {
            origin: src.origin.clone(),
            source,
        })
}

fn atom(cx: &Ctx, e: &Sexpr, known: &HashSet<String>) -> Result<Option<String>, PddlError> {
    match e.as_list() {
        Some([Sexpr::Symbol(s, p)]) if !s.starts_with(':') && !s.eq_ignore_ascii_case("and") => {
            let n = cx.name(&Sexpr::Symbol(s.clone(), *p))?;
            if !known.contains(&n) {
                return Err(PddlError::UnknownFact {
                    loc: cx.loc(*p),
                    fact: n,
                });
            }
            Ok(Some(n))
        }
        _ => Ok(None),
    }
}

fn condition(
    cx: &Ctx,
    e: &Sexpr,
    known: &HashSet<String>,
    out: &mut Vec<String>,
) -> Result<(), PddlError> {
    if let Some(f) = atom(cx, e, known)? {
        out.push(f);
        return Ok(());
    }
    let items = match e.as_list() {
        Some(items) => items,
        None => return cx.syntax(e.pos(), "expected a condition"),
    };
    match e.head().map(str::to_ascii_lowercase).as_deref() {
        None if items.is_empty() => Ok(()),
        Some("and") => items[1..]
            .iter()
            .try_for_each(|c| condition(cx, c, known, out)),
        Some("not") => cx.unsupported(e.pos(), "negative precondition"),
        Some("or" | "imply" | "exists" | "forall") => {
            cx.unsupported(e.pos(), "non-conjunctive precondition")
        }
        Some("=") => cx.unsupported(e.pos(), "equality"),
        Some(_) => cx.unsupported(e.pos(), "predicate with arguments"),
        None => cx.syntax(e.pos(), "expected a condition"),
    }
}

fn effect(
    cx: &Ctx,
    e: &Sexpr,
    known: &HashSet<String>,
    add: &mut Vec<String>,
    del: &mut Vec<String>,
) -> Result<(), PddlError> {
    if let Some(f) = atom(cx, e, known)? {
        add.push(f);
        return Ok(());
    }
    let items = match e.as_list() {
        Some(items) => items,
        None => return cx.syntax(e.pos(), "expected an effect"),
    };
    match e.head().map(str::to_ascii_lowercase).as_deref() {
        None if items.is_empty() => Ok(()),
        Some("and") => items[1..]
            .iter()
            .try_for_each(|c| effect(cx, c, known, add, del)),
        Some("not") => match &items[1..] {
            [inner] => match atom(cx, inner, known)? {
                Some(f) => {
                    del.push(f);
                    Ok(())
                }
                None => cx.unsupported(inner.pos(), "complex negated effect"),
            },
            _ => cx.syntax(e.pos(), "`not` takes one argument"),
        },
        Some("when") => cx.unsupported(e.pos(), "conditional effect"),
        Some("forall") => cx.unsupported(e.pos(), "quantified effect"),
        Some("increase" | "decrease" | "assign" | "scale-up" | "scale-down") => {
            cx.unsupported(e.pos(), "numeric effect")
        }
        Some(_) => cx.unsupported(e.pos(), "predicate with arguments"),
        None => cx.syntax(e.pos(), "expected an effect"),
    }
}

/// Parses a problem file against an already parsed domain.
pub fn parse_problem(src: &PddlSource, d: &Domain) -> Result<PlanningTask, PddlError> {
    let cx = Ctx {
        origin: &src.origin,
    };
    let top = read_all(&src.text, &src.origin)?;
    let (_, body) = cx.define(&top, "problem")?;
    let known: HashSet<String> = d.facts().iter().map(|f| f.name().to_owned()).collect();
    let mut init = d.empty_state();
    let mut goal = d.empty_state();

    for section in body {
        let items = match section.as_list() {
            Some(items) if !items.is_empty() => items,
            _ => return cx.syntax(section.pos(), "expected a problem section"),
        };
        let head = items[0].as_symbol().unwrap_or("").to_ascii_lowercase();
        match head.as_str() {
            ":domain" => match &items[1..] {
                [n] if n.as_symbol() == Some(d.name()) => {}
                [n] => {
                    return cx.syntax(
                        n.pos(),
                        format!(
                            "problem is for domain `{}`, not `{}`",
                            n.as_symbol().unwrap_or("?"),
                            d.name()
                        ),
                    )
                }
                _ => return cx.syntax(section.pos(), "expected `(:domain NAME)`"),
            },
            ":objects" => {
                if items.len() > 1 {
                    return cx.unsupported(items[1].pos(), "objects");
                }
            }
            ":init" => {
                for e in &items[1..] {
                    match atom(&cx, e, &known)? {
                        Some(f) => {
                            init.insert(d.fact_id(&f).expect("known fact").index());
                        }
                        None => return cx.unsupported(e.pos(), "non-atomic initial fact"),
                    }
                }
            }
            ":goal" => {
                let mut facts = Vec::new();
                for g in &items[1..] {
                    condition(&cx, g, &known, &mut facts)?;
                }
                for f in facts {
                    goal.insert(d.fact_id(&f).expect("known fact").index());
                }
            }
            ":metric" | ":constraints" => return cx.unsupported(items[0].pos(), head),
            _ => return cx.syntax(items[0].pos(), format!("unknown problem section `{head}`")),
        }
    }
    PlanningTask::new(d.clone(), init, goal).map_err(|source| PddlError::Model {
        origin: src.origin.clone(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;
    use crate::model::ModelError;

    pub const EXAMPLE1: &str = "(define (domain example1)
  (:requirements :strips)
  (:predicates (f) )
  (:action del-f
   :precondition (f)
   :effect (not (f)))
  (:action add-f
   :effect (f)))";

    fn src(t: &str) -> PddlSource {
        PddlSource::from_text(t)
    }

    #[test]
    fn parses_example1() {
        assert_eq!(parse_domain(&src(EXAMPLE1)).unwrap(), fixtures::example1());
    }

    #[test]
    fn parses_rev2_appendix_text() {
        let d = parse_domain(&src(include_str!("../../tests/fixtures/rev-2.pddl"))).unwrap();
        assert_eq!(d, fixtures::rev2());
    }

    #[test]
    fn requirements_are_optional() {
        let d = parse_domain(&src(
            "(define (domain x) (:predicates (p)) (:action a :effect (p)))",
        ))
        .unwrap();
        assert_eq!(d.actions().len(), 1);
    }

    #[test]
    fn rejects_unsupported_features() {
        let cases = [
            ("(define (domain x) (:action a :effect (when (p) (q))))", "conditional effect"),
            ("(define (domain x) (:requirements :strips :typing))", "requirement :typing"),
            ("(define (domain x) (:requirements :adl))", "requirement :adl"),
            ("(define (domain x) (:predicates (at ?x)))", "predicate with arguments"),
            ("(define (domain x) (:predicates (p)) (:action a :precondition (not (p)) :effect (p)))", "negative precondition"),
            ("(define (domain x) (:predicates (p)) (:action a :parameters (?x) :effect (p)))", "action parameters (lifted actions)"),
            ("(define (domain x) (:types block))", "typing"),
        ];
        for (text, feature) in cases {
            match parse_domain(&src(text)) {
                Err(PddlError::UnsupportedFeature { feature: f, .. }) => {
                    assert_eq!(f, feature, "{text}")
                }
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_quotes_in_names_and_unknown_facts() {
        assert!(matches!(
            parse_domain(&src("(define (domain x) (:predicates (p\"q)))")),
            Err(PddlError::InvalidName { .. })
        ));
        assert!(matches!(
            parse_domain(&src("(define (domain x) (:predicates (p)) (:action a :effect (q)))")),
            Err(PddlError::UnknownFact { fact, .. }) if fact == "q"
        ));
    }

    #[test]
    fn ill_formed_actions_are_refused() {
        let t = "(define (domain x) (:predicates (p)) (:action a :effect (and (p) (not (p)))))";
        assert!(matches!(
            parse_domain(&src(t)),
            Err(PddlError::Model {
                source: ModelError::IllFormed(_),
                ..
            })
        ));
        let t = "(define (domain x) (:predicates (p) (q)) (:action a :precondition (p) :effect (and (p) (q))))";
        assert!(parse_domain(&src(t)).is_err());
        let (d, w) = parse_domain_with(&src(t), Strictness::Lenient).unwrap();
        assert_eq!(w.len(), 1);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn names_are_case_sensitive() {
        let t = "(DEFINE (DOMAIN x) (:PREDICATES (P) (p)) (:ACTION a :EFFECT (P)))";
        let d = parse_domain(&src(t)).unwrap();
        assert_eq!(d.num_facts(), 2);
        assert!(matches!(
            parse_domain(&src(
                "(define (domain x) (:predicates (P)) (:action a :effect (p)))"
            )),
            Err(PddlError::UnknownFact { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_location() {
        match parse_domain(&PddlSource::new(
            "(define (domain x)\n  (:predicates (p)",
            "d.pddl",
        )) {
            Err(e @ PddlError::Syntax { .. }) => assert!(e.to_string().starts_with("d.pddl:1:1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn problem_examples() {
        let d = fixtures::example1();
        let t = parse_problem(
            &src("(define (problem p) (:domain example1) (:init (f)) (:goal (f)))"),
            &d,
        )
        .unwrap();
        assert_eq!(t.init, d.state(&["f"]).unwrap());
        assert_eq!(t.goal, d.state(&["f"]).unwrap());

        let t = parse_problem(
            &src("(define (problem p) (:domain example1) (:init) (:goal (and)))"),
            &d,
        )
        .unwrap();
        assert!(t.init.is_empty());

        assert!(matches!(
            parse_problem(&src("(define (problem p) (:domain example1) (:init (g)))"), &d),
            Err(PddlError::UnknownFact { fact, .. }) if fact == "g"
        ));
        assert!(matches!(
            parse_problem(&src("(define (problem p) (:domain other) (:init))"), &d),
            Err(PddlError::Syntax { .. })
        ));
    }
}
