use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::name::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TypeErrorKind {
    /// A free name of the process has no declared type.
    UnknownName,
    /// A name used twice where it must be distinct, e.g. `x<->x`.
    NameReuse,
    /// A declared name the process never uses.
    UnusedLinear,
    /// A name needed by two independent parts of the process.
    SplitConflict,
    /// Acting on one endpoint of a channel while holding the other.
    SelfLock,
    /// `&` or `⊤` applied where the judgement has more than one sequent.
    HyperContextForbidden,
    TypeMismatch,
    DialectViolation,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{kind}: {message}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub name: Option<Name>,
    /// The subterm at which checking failed, printed.
    pub subject: String,
    pub expected: Option<String>,
    pub actual: Option<String>,
    pub message: String,
}

impl TypeError {
    pub(crate) fn new(
        kind: TypeErrorKind,
        name: Option<&Name>,
        subject: impl fmt::Display,
        message: impl Into<String>,
    ) -> TypeError {
        TypeError {
            kind,
            name: name.cloned(),
            subject: subject.to_string(),
            expected: None,
            actual: None,
            message: message.into(),
        }
    }

    pub(crate) fn mismatch(
        name: &Name,
        subject: impl fmt::Display,
        expected: impl Into<String>,
        actual: impl fmt::Display,
    ) -> TypeError {
        let expected = expected.into();
        let actual = actual.to_string();
        TypeError {
            kind: TypeErrorKind::TypeMismatch,
            name: Some(name.clone()),
            subject: subject.to_string(),
            message: format!("`{name}` has type {actual}, expected {expected}"),
            expected: Some(expected),
            actual: Some(actual),
        }
    }

    /// One JSON object with the documented keys `kind`, `name`, `loc`,
    /// `expected`, `actual`, plus `message`.
    pub fn to_json(&self, loc: &str) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "name": self.name.as_ref().map(|n| n.to_string()),
            "loc": loc,
            "expected": self.expected,
            "actual": self.actual,
            "message": self.message,
        })
    }

    /// `loc: KIND: message`, where `loc` is usually `file:line:col`.
    pub fn render(&self, loc: &str) -> String {
        format!("{loc}: {}: {}", self.kind, self.message)
    }
}
