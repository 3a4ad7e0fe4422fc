use crate::model::Domain;

/// ASP facts and rules in the format plasp produces for STRIPS domains,
/// one rule per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaspFactSet {
    pub lines: Vec<String>,
}

impl PlaspFactSet {
    pub fn to_text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

pub fn emit_plasp_facts(d: &Domain) -> PlaspFactSet {
    let mut lines = vec![
        "boolean(true).".to_owned(),
        "boolean(false).".to_owned(),
        r#"type(type("object"))."#.to_owned(),
    ];
    for f in d.facts() {
        lines.push(format!(r#"variable(variable("{}"))."#, f.name()));
    }
    lines.push("contains(X, value(X, B)) :- variable(X), boolean(B).".to_owned());

    for a in d.actions() {
        let an = a.name();
        let guard = format!(r#":- action(action("{an}"))."#);
        lines.push(format!(r#"action(action("{an}"))."#));
        for f in d.names(a.pre()) {
            lines.push(format!(
                r#"precondition(action("{an}"), variable("{f}"), value(variable("{f}"), true)) {guard}"#
            ));
        }
        let effects = d.names(a.add()).into_iter().map(|f| (f, "true"));
        let effects = effects.chain(d.names(a.del()).into_iter().map(|f| (f, "false")));
        for (f, value) in effects {
            lines.push(format!(
                r#"postcondition(action("{an}"), effect(unconditional), variable("{f}"), value(variable("{f}"), {value})) {guard}"#
            ));
        }
    }
    PlaspFactSet { lines }
}
