use std::fmt;

use thiserror::Error;

/// A single validation failure, attributed to a level of the system.
///
/// Rendered as `LEVEL n: <message>`, one line per violation, which is the
/// shape emitted on the diagnostic stream by the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub level: u32,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LEVEL {}: {}", self.level, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}", render_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("unknown vertex `{name}` at level {level}")]
    UnknownVertex { level: u32, name: String },

    #[error("level {level} does not exist (system depth is {depth})")]
    UnknownLevel { level: u32, depth: u32 },

    #[error("invalid word at level {level}: {message}")]
    InvalidWord { level: u32, message: String },

    #[error("coherence failure at level {level}: expected `{expected}`, found `{found}`")]
    Coherence {
        level: u32,
        expected: String,
        found: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "ambiguous subword projection at level {level}: vertex `{vertex}` has neighbors with \
         distinct nonempty images {images:?}"
    )]
    AmbiguousInsertion {
        level: u32,
        vertex: String,
        images: Vec<String>,
    },

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

fn render_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(Violation::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;
