use std::fmt;

use thiserror::Error;

use crate::shape::Shape;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left} vs {right}")]
    ShapeMismatch {
        op: &'static str,
        left: Shape,
        right: Shape,
    },
    #[error("{op}: expected a product shape, found {found}")]
    NotAProduct { op: &'static str, found: Shape },
    #[error("{op}: shape {shape} contains a function type, which this model does not support")]
    HigherOrder { op: &'static str, shape: Shape },
    #[error("arity mismatch: expected {expected} values, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("tower of depth 0 cannot be shifted or linearized")]
    DepthUnderflow,
    #[error("towers have different depths ({0} vs {1})")]
    DepthMismatch(usize, usize),
    #[error("non-scalar value where arithmetic was required")]
    NonScalar,
    #[error("sampled equality gave up: {0}")]
    Sampling(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn mismatch(op: &'static str, left: &Shape, right: &Shape) -> Self {
        Error::ShapeMismatch {
            op,
            left: left.clone(),
            right: right.clone(),
        }
    }
}

/// A parse failure with the byte offset it occurred at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub input: String,
    pub position: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, input: &str, position: usize) -> Self {
        let mut position = position.min(input.len());
        while !input.is_char_boundary(position) {
            position -= 1;
        }
        ParseError {
            message: message.into(),
            input: input.to_string(),
            position,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // caret column counts characters, not bytes
        let col = self.input[..self.position].chars().count();
        writeln!(f, "parse error at position {}: {}", self.position, self.message)?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {}^", " ".repeat(col))
    }
}

impl std::error::Error for ParseError {}
