//! The propositional STRIPS fragment of PDDL, and plasp-style ASP facts.
//!
//! Only zero-arity predicates are accepted. Names are case-sensitive;
//! keywords (`define`, `:action`, ...) are not.

mod parse;
mod plasp;
mod print;
pub mod sexpr;

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::model::ModelError;

pub use parse::{parse_domain, parse_domain_with, parse_problem};
pub use plasp::{emit_plasp_facts, PlaspFactSet};
pub use print::pretty_print;

/// PDDL text together with where it came from.
#[derive(Clone, Debug)]
pub struct PddlSource {
    pub text: String,
    pub origin: String,
}

impl PddlSource {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        PddlSource {
            text: text.into(),
            origin: origin.into(),
        }
    }

    pub fn from_text(text: &str) -> Self {
        PddlSource::new(text, "<string>")
    }

    pub fn stdin(text: impl Into<String>) -> Self {
        PddlSource::new(text, "<stdin>")
    }

    pub fn read(path: &Path) -> std::io::Result<Self> {
        Ok(PddlSource::new(
            std::fs::read_to_string(path)?,
            path.display().to_string(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loc {
    pub origin: String,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.origin, self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PddlError {
    #[error("{loc}: {message}")]
    Syntax { loc: Loc, message: String },
    #[error("{loc}: unsupported feature: {feature}")]
    UnsupportedFeature { loc: Loc, feature: String },
    #[error("{loc}: unknown fact `{fact}`")]
    UnknownFact { loc: Loc, fact: String },
    #[error("{loc}: invalid name `{name}`")]
    InvalidName { loc: Loc, name: String },
    #[error("{origin}: {source}")]
    Model {
        origin: String,
        #[source]
        source: ModelError,
    },
}
