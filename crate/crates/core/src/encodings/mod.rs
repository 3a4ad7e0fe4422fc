//! Answer-set programs for universal and `S`-restricted uniform
//! reversibility, in plain ASP and in the `&k{...}` epistemic dialect.
//!
//! A program is the plasp rendering of the domain, followed by one of four
//! fixed rule blocks, the `horizon` constant and, for the general kinds, an
//! optional hook restricting the guessed start state to the models of a
//! formula.

mod phi;
mod solver;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::model::{Domain, Violation};
use crate::pddl::emit_plasp_facts;

pub use phi::compile_phi_hook;
pub use solver::{
    default_solver_command, extract_plans, parse_solver_output, run_external_solver, ExtractedPlan,
    Model, SolverError, SolverResult, SOLVER_ENV,
};

const SIMPLE_ASP: &str = include_str!("templates/simple_asp.lp");
const SIMPLE_ELP: &str = include_str!("templates/simple_elp.lp");
const GENERAL_ASP: &str = include_str!("templates/general_asp.lp");
const GENERAL_ELP: &str = include_str!("templates/general_elp.lp");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingKind {
    SimpleAsp,
    SimpleElp,
    GeneralAsp,
    GeneralElp,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 4] = [
        EncodingKind::SimpleAsp,
        EncodingKind::SimpleElp,
        EncodingKind::GeneralAsp,
        EncodingKind::GeneralElp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EncodingKind::SimpleAsp => "simple-asp",
            EncodingKind::SimpleElp => "simple-elp",
            EncodingKind::GeneralAsp => "general-asp",
            EncodingKind::GeneralElp => "general-elp",
        }
    }

    /// The fixed rule block of this kind.
    pub fn rules(self) -> &'static str {
        match self {
            EncodingKind::SimpleAsp => SIMPLE_ASP,
            EncodingKind::SimpleElp => SIMPLE_ELP,
            EncodingKind::GeneralAsp => GENERAL_ASP,
            EncodingKind::GeneralElp => GENERAL_ELP,
        }
    }

    pub fn is_general(self) -> bool {
        matches!(self, EncodingKind::GeneralAsp | EncodingKind::GeneralElp)
    }

    /// Epistemic kinds need an ELP solver such as eclingo.
    pub fn is_epistemic(self) -> bool {
        matches!(self, EncodingKind::SimpleElp | EncodingKind::GeneralElp)
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EncodingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EncodingKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown encoding kind `{s}` (expected simple-asp, simple-elp, general-asp or general-elp)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedProgram {
    pub kind: EncodingKind,
    pub horizon: usize,
    pub text: String,
    pub phi: Option<Formula>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("{0} encodes universal reversibility only; a state formula needs a general encoding")]
    PhiNotSupported(EncodingKind),
    #[error("domain is not well-formed: {0:?}")]
    IllFormed(Vec<Violation>),
}

/// Builds the complete program text. Output is a pure function of the inputs.
pub fn emit(
    kind: EncodingKind,
    d: &Domain,
    horizon: usize,
    phi: Option<&Formula>,
) -> Result<EncodedProgram, EncodeError> {
    let violations = d.validate();
    if !violations.is_empty() {
        return Err(EncodeError::IllFormed(violations));
    }
    if phi.is_some() && !kind.is_general() {
        return Err(EncodeError::PhiNotSupported(kind));
    }

    let mut text = format!(
        "% {kind} program for domain {}, horizon {horizon}\n\n",
        d.name()
    );
    text.push_str(&emit_plasp_facts(d).to_text());
    text.push('\n');
    text.push_str(kind.rules());
    text.push_str(&format!("\n#const horizon={horizon}.\nhorizon(horizon).\n"));
    if let Some(phi) = phi {
        text.push('\n');
        text.push_str(&compile_phi_hook(kind, phi, d)?);
    }
    Ok(EncodedProgram {
        kind,
        horizon,
        text,
        phi: phi.cloned(),
    })
}
