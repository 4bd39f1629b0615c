use thiserror::Error;

use crate::tree::{Diagnostic, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unordered triangular fuzzy number ({lower}, {peak}, {upper})")]
    Unordered { lower: f64, peak: f64, upper: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("poles {0} and {1} coincide; the Heaviside expansion is singular")]
    DegeneratePoles(usize, usize),

    /// A probability at or above `1 - 1e-12` was converted to a rate without clamping.
    #[error("probability {value} saturates the rate conversion{}", at_node(.node))]
    Saturation { value: f64, node: Option<String> },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("tree failed validation ({} diagnostic(s))", .0.len())]
    Invalid(Vec<Diagnostic>),

    #[error("unknown basic event `{0}`")]
    UnknownEvent(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("internal error: {0}")]
    Internal(String),
}

fn at_node(node: &Option<String>) -> String {
    match node {
        Some(id) => format!(" at node `{id}`"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures that stem from numerics rather than input structure.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonFinite(_)
                | Error::Domain(_)
                | Error::DegeneratePoles(..)
                | Error::Saturation { .. }
                | Error::Unordered { .. }
                | Error::Internal(_)
        )
    }
}
