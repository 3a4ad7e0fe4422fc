//! Running an external answer-set solver and reading plans back.
//!
//! The solver is a subprocess described by a command template with two
//! placeholders: `{program}` (path of the program file) and `{all_models}`
//! (the argument requesting every model, `0` for clingo). Exit codes follow
//! the clingo convention: 10 satisfiable, 20 unsatisfiable, 30 satisfiable
//! and exhausted, 0 when the solver does not report; anything else is a crash.

use std::collections::BTreeMap;
use std::io::{ErrorKind, Write};
use std::process::{Command, Stdio};
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use super::EncodedProgram;

/// Environment variable holding the default solver command template.
pub const SOLVER_ENV: &str = "STRIPREV_SOLVER";

const OK_EXIT_CODES: [i32; 4] = [0, 10, 20, 30];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("no ASP solver found (set {SOLVER_ENV} or install clingo): {0}")]
    SolverNotFound(String),
    #[error("solver failed:\n{0}")]
    SolverCrashed(String),
    #[error("could not parse solver output:\n{0}")]
    ParseFailure(String),
    #[error("inconsistent model: {0}")]
    InconsistentModel(String),
    #[error("invalid solver command template: {0}")]
    BadTemplate(String),
}

/// The `chosen` and `occurs` atoms of one answer set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub chosen: Option<String>,
    pub occurs: BTreeMap<usize, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverResult {
    pub models: Vec<Model>,
    pub raw: String,
    pub exit_code: Option<i32>,
    /// Horizon of the program that was solved, if known.
    pub horizon: Option<usize>,
}

/// A reverse plan as read back from a model: the chosen action and the
/// actions at steps `2..=horizon+1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtractedPlan {
    pub action: String,
    pub plan: Vec<String>,
}

/// The solver command to use when none is given: `$STRIPREV_SOLVER`, then a
/// `clingo` binary on `PATH`, then the `clingo` Python module.
pub fn default_solver_command() -> Option<String> {
    if let Ok(cmd) = std::env::var(SOLVER_ENV) {
        if !cmd.trim().is_empty() {
            return Some(cmd);
        }
    }
    let probe = |prog: &str, args: &[&str]| {
        Command::new(prog)
            .args(args)
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .is_ok_and(|s| s.success())
    };
    if probe("clingo", &["--version"]) {
        return Some("clingo --outf=2 {program} {all_models}".to_owned());
    }
    if probe("python3", &["-m", "clingo", "--version"]) {
        return Some("python3 -m clingo --outf=2 {program} {all_models}".to_owned());
    }
    None
}

pub fn run_external_solver(
    prog: &EncodedProgram,
    template: &str,
) -> Result<SolverResult, SolverError> {
    let mut file = tempfile::Builder::new()
        .prefix("striprev-")
        .suffix(".lp")
        .tempfile()
        .map_err(|e| SolverError::SolverCrashed(format!("cannot create program file: {e}")))?;
    file.write_all(prog.text.as_bytes())
        .map_err(|e| SolverError::SolverCrashed(format!("cannot write program file: {e}")))?;
    let path = file.path().to_string_lossy().into_owned();

    let words =
        shlex::split(template).ok_or_else(|| SolverError::BadTemplate(template.to_owned()))?;
    let args: Vec<String> = words
        .into_iter()
        .map(|w| w.replace("{program}", &path).replace("{all_models}", "0"))
        .filter(|w| !w.is_empty())
        .collect();
    let (bin, rest) = args
        .split_first()
        .ok_or_else(|| SolverError::BadTemplate(template.to_owned()))?;

    let out = match Command::new(bin).args(rest).output() {
        Ok(out) => out,
        Err(e) if e.kind() == ErrorKind::NotFound => {
            return Err(SolverError::SolverNotFound(bin.clone()))
        }
        Err(e) => return Err(SolverError::SolverCrashed(e.to_string())),
    };
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    let stderr = String::from_utf8_lossy(&out.stderr);
    let code = out.status.code();
    if !code.is_some_and(|c| OK_EXIT_CODES.contains(&c)) {
        return Err(SolverError::SolverCrashed(format!(
            "exit status {:?}\n{stdout}{stderr}",
            code
        )));
    }
    let models = parse_solver_output(&stdout)?;
    Ok(SolverResult {
        models,
        raw: stdout,
        exit_code: code,
        horizon: Some(prog.horizon),
    })
}

/// Reads models from clingo's JSON output (`--outf=2`) or its plain text
/// output (`Answer: N` followed by a line of atoms).
pub fn parse_solver_output(raw: &str) -> Result<Vec<Model>, SolverError> {
    let trimmed = raw.trim_start();
    if trimmed.starts_with('{') {
        return parse_json(raw);
    }
    let mut models = Vec::new();
    let mut saw_result = false;
    let mut lines = raw.lines();
    while let Some(line) = lines.next() {
        let line = line.trim();
        if line.starts_with("Answer:") {
            let atoms = lines
                .next()
                .ok_or_else(|| SolverError::ParseFailure(raw.to_owned()))?;
            models.push(model_from_atoms(atoms.split_whitespace())?);
        } else if matches!(
            line,
            "SATISFIABLE" | "UNSATISFIABLE" | "UNKNOWN" | "OPTIMUM FOUND"
        ) {
            saw_result = true;
        }
    }
    if !saw_result && models.is_empty() {
        return Err(SolverError::ParseFailure(raw.to_owned()));
    }
    Ok(models)
}

fn parse_json(raw: &str) -> Result<Vec<Model>, SolverError> {
    let fail = || SolverError::ParseFailure(raw.to_owned());
    let v: serde_json::Value = serde_json::from_str(raw).map_err(|_| fail())?;
    if v.get("Result").is_none() {
        return Err(fail());
    }
    let calls = v.get("Call").and_then(|c| c.as_array()).ok_or_else(fail)?;
    let mut models = Vec::new();
    for call in calls {
        let witnesses = call
            .get("Witnesses")
            .and_then(|w| w.as_array())
            .map(Vec::as_slice)
            .unwrap_or_default();
        for w in witnesses {
            let atoms = w.get("Value").and_then(|v| v.as_array()).ok_or_else(fail)?;
            let atoms: Option<Vec<&str>> = atoms.iter().map(|a| a.as_str()).collect();
            models.push(model_from_atoms(atoms.ok_or_else(fail)?.into_iter())?);
        }
    }
    Ok(models)
}

fn model_from_atoms<'a>(atoms: impl Iterator<Item = &'a str>) -> Result<Model, SolverError> {
    static CHOSEN: OnceLock<Regex> = OnceLock::new();
    static OCCURS: OnceLock<Regex> = OnceLock::new();
    let chosen_re = CHOSEN.get_or_init(|| Regex::new(r#"^chosen\("([^"]*)"\)$"#).unwrap());
    let occurs_re = OCCURS.get_or_init(|| Regex::new(r#"^occurs\("([^"]*)",(\d+)\)$"#).unwrap());

    let mut m = Model::default();
    for atom in atoms {
        if let Some(c) = chosen_re.captures(atom) {
            if m.chosen.replace(c[1].to_owned()).is_some() {
                return Err(SolverError::InconsistentModel(
                    "more than one chosen action".into(),
                ));
            }
        } else if let Some(c) = occurs_re.captures(atom) {
            let step: usize = c[2]
                .parse()
                .map_err(|_| SolverError::InconsistentModel(format!("bad step in {atom}")))?;
            if let Some(prev) = m.occurs.insert(step, c[1].to_owned()) {
                return Err(SolverError::InconsistentModel(format!(
                    "two actions at step {step}: {prev}, {}",
                    &c[1]
                )));
            }
        }
    }
    Ok(m)
}

/// One plan per model, in model order. Step 1 must be the chosen action and
/// steps must be contiguous from 1 (through `horizon + 1` when known).
pub fn extract_plans(r: &SolverResult) -> Result<Vec<ExtractedPlan>, SolverError> {
    r.models.iter().map(|m| extract_one(m, r.horizon)).collect()
}

fn extract_one(m: &Model, horizon: Option<usize>) -> Result<ExtractedPlan, SolverError> {
    let chosen = m
        .chosen
        .as_ref()
        .ok_or_else(|| SolverError::InconsistentModel("no chosen action".into()))?;
    if m.occurs.get(&1) != Some(chosen) {
        return Err(SolverError::InconsistentModel(format!(
            "step 1 is not the chosen action {chosen}"
        )));
    }
    let last = *m.occurs.keys().next_back().unwrap_or(&0);
    if let Some(h) = horizon {
        if last != h + 1 {
            return Err(SolverError::InconsistentModel(format!(
                "plan ends at step {last}, expected {}",
                h + 1
            )));
        }
    }
    if m.occurs.keys().copied().ne(1..=last) {
        return Err(SolverError::InconsistentModel(
            "steps are not contiguous".into(),
        ));
    }
    Ok(ExtractedPlan {
        action: chosen.clone(),
        plan: m.occurs.range(2..).map(|(_, a)| a.clone()).collect(),
    })
}
