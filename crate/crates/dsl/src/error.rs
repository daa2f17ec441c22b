use std::fmt;

use thiserror::Error;

/// A position in the source text, 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Unbound,
    Arity,
}

/// A parse-time error with its position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(kind: ErrorKind, pos: Pos, message: impl Into<String>) -> Self {
        ParseError { kind, pos, message: message.into() }
    }
}
