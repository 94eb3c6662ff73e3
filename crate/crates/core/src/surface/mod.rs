//! Concrete ASCII syntax for types, terms and `.sill` session files.
//!
//! | symbol | ASCII |
//! |--------|-------|
//! | `⊗` | `*` |
//! | `⅋` | `par` |
//! | `⊕` | `+` |
//! | `&` | `&` |
//! | `1`, `⊥`, `0`, `⊤` | `1`, `bot`, `0`, `top` |
//! | `A^⊥` | `~A` (expanded while parsing) |

mod lexer;
mod parser;
mod print;
mod session;

use std::fmt;

use thiserror::Error;

pub use parser::{parse_cp, parse_env, parse_hcp, parse_type};
pub use session::{parse_session, print_session, Decl, DeclBody, SessionFile};

/// Line and column, both 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Which calculus a term is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dialect {
    Cp,
    Hcp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    /// A construct of the other calculus, e.g. a bare `(P | Q)` in CP.
    DialectViolation,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: {}: {message}", self.kind_name())]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            kind: ParseErrorKind::Syntax,
            message: message.into(),
        }
    }

    pub(crate) fn dialect(pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            kind: ParseErrorKind::DialectViolation,
            message: message.into(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ParseErrorKind::Syntax => "SyntaxError",
            ParseErrorKind::DialectViolation => "DialectViolation",
        }
    }
}
