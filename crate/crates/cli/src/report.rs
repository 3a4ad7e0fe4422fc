//! JSON reports. The layout is versioned by `schema_version`; see the
//! README for the field reference.

use std::fmt::Write as _;

use serde::Serialize;
use striprev::{Diagnostic, Domain, SearchMode, Status, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub domain: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &'static str, domain: &Domain, body: T) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            domain: domain.name().to_owned(),
            body,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckConfig {
    pub mode: &'static str,
    pub horizon: usize,
    pub search: SearchMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub task: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<usize>,
    pub max_plans: usize,
    pub enum_cap: usize,
    pub state_cap: usize,
}

#[derive(Debug, Serialize)]
pub struct CheckBody {
    pub config: CheckConfig,
    pub verdicts: Vec<VerdictEntry>,
}

#[derive(Debug, Serialize)]
pub struct VerdictEntry {
    pub action: String,
    pub status: Status,
    pub witnesses: Vec<Vec<String>>,
    pub diagnostics: Vec<DiagnosticEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct DiagnosticEntry {
    #[serde(flatten)]
    pub data: Diagnostic,
    pub message: String,
}

impl VerdictEntry {
    pub fn new(d: &Domain, v: &Verdict, elapsed_ms: Option<f64>) -> Self {
        VerdictEntry {
            action: v.action.clone(),
            status: v.status,
            witnesses: v.witnesses.iter().map(|p| d.plan_names(p)).collect(),
            diagnostics: v
                .diagnostics
                .iter()
                .map(|x| DiagnosticEntry {
                    data: x.clone(),
                    message: x.to_string(),
                })
                .collect(),
            elapsed_ms,
        }
    }
}

fn plan_text(plan: &[String]) -> String {
    format!("<{}>", plan.join(", "))
}

/// Plain-text table of a check report.
pub fn check_table(domain: &str, body: &CheckBody) -> String {
    let c = &body.config;
    let mut out = format!(
        "domain {domain}: {} mode, horizon {} ({})\n",
        c.mode,
        c.horizon,
        search_word(c.search)
    );
    let width = body
        .verdicts
        .iter()
        .map(|v| v.action.len())
        .max()
        .unwrap_or(0)
        .max("action".len());
    let _ = writeln!(out, "{:width$}  {:21}  witnesses", "action", "status");
    for v in &body.verdicts {
        let witnesses = match v.witnesses.as_slice() {
            [] => "-".to_owned(),
            [only] => plan_text(only),
            [first, rest @ ..] => format!("{} (+{} more)", plan_text(first), rest.len()),
        };
        let _ = writeln!(
            out,
            "{:width$}  {:21}  {witnesses}",
            v.action,
            v.status.to_string()
        );
        for d in &v.diagnostics {
            let _ = writeln!(out, "{:width$}    {}", "", d.message);
        }
    }
    out
}

fn search_word(m: SearchMode) -> &'static str {
    match m {
        SearchMode::Exact => "exact length",
        SearchMode::UpTo => "up to length",
    }
}

#[derive(Debug, Serialize)]
pub struct PlanPair {
    pub action: String,
    pub plan: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CrosscheckBody {
    pub horizon: usize,
    pub solver: String,
    pub agreement: &'static str,
    pub pairs: usize,
    pub internal: Vec<PlanPair>,
    pub external: Vec<PlanPair>,
    pub only_internal: Vec<PlanPair>,
    pub only_external: Vec<PlanPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

pub fn crosscheck_table(domain: &str, body: &CrosscheckBody) -> String {
    let mut out = format!(
        "domain {domain}, horizon {}: {} ({} internal, {} from solver)\n",
        body.horizon,
        body.agreement,
        body.internal.len(),
        body.external.len()
    );
    for (label, pairs) in [
        ("only internal", &body.only_internal),
        ("only solver", &body.only_external),
    ] {
        for p in pairs {
            let _ = writeln!(out, "  {label}: {} {}", p.action, plan_text(&p.plan));
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct ReachableBody {
    pub count: usize,
    pub states: Vec<Vec<String>>,
}

pub fn reachable_table(domain: &str, body: &ReachableBody) -> String {
    let mut out = format!("domain {domain}: {} reachable states\n", body.count);
    for s in &body.states {
        let _ = writeln!(out, "  {{{}}}", s.join(", "));
    }
    out
}
