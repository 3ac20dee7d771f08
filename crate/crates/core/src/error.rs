use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no actions")]
    NoActions,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("scenario rejected:\n{}", render_violations(.0))]
    Violations(Vec<Violation>),

    #[error(
        "general-family Game I intractable at this size \
         ({outputs} outputs x {levels} payment levels, cap {max_outputs} x {max_levels})"
    )]
    GeneralIntractable { outputs: usize, levels: usize, max_outputs: usize, max_levels: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cost {cost} outside the curve domain [0, {cap}]")]
    OutOfDomain { cost: f64, cap: f64 },

    #[error("inverse of g' undefined: {0}")]
    NotInvertible(String),

    #[error("surplus curve is {found}, operation requires {required}")]
    WrongSurplusClass { required: &'static str, found: &'static str },

    #[error("no positive surplus (non-triviality violated)")]
    NoSurplus,

    #[error("worst-case expected output nonpositive")]
    NonpositiveOutput,

    #[error("payoff ordering violated: {0}")]
    ChainViolation(String),

    /// Parse failure with the offending field path, line and column.
    #[error("{file}: {message}")]
    Document { file: String, message: String },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn render_violations(v: &[Violation]) -> String {
    v.iter().map(|x| format!("  - {x}")).collect::<Vec<_>>().join("\n")
}
