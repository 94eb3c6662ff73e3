//! Reduction for both calculi, performed on prenex forms so that the
//! congruence-closure rule never needs explicit rewriting.
//!
//! A redex is a pair of components acting on the same restricted channel
//! with dual outermost constructors, or a link touching a restricted
//! channel. Contracting one rebuilds the term from the remaining binders and
//! components.

mod cp;
mod graph;
mod hcp;
mod measure;
mod trace;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::name::Name;

pub use graph::{explore, GraphEdge, ReductionGraph, GRAPH_BUDGET};
pub use measure::{dm_less, Measure};
pub use trace::{reduce, reduce_with_fuel, Status, Step, Trace};

/// Rule tags, ordered as the deterministic strategy breaks ties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RuleTag {
    Link,
    TensorPar,
    OneBot,
    PlusWith1,
    PlusWith2,
}

impl RuleTag {
    pub fn symbol(self) -> &'static str {
        match self {
            RuleTag::Link => "κ↔",
            RuleTag::TensorPar => "β⊗⅋",
            RuleTag::OneBot => "β1⊥",
            RuleTag::PlusWith1 => "β⊕&₁",
            RuleTag::PlusWith2 => "β⊕&₂",
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A redex in the prenex form of a term. `left` is the link, or the
/// component with the positive constructor (output, halt, selection);
/// `right` is its partner.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Redex {
    pub binder: usize,
    pub rule: RuleTag,
    pub left: usize,
    pub right: usize,
    pub channel: Name,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.rule, self.channel)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("stale redex: {0} does not occur in the term")]
    StaleRedex(Redex),
    #[error("term is not in canonical form")]
    NotCanonical,
}

/// Operations the generic engines need from a calculus.
pub trait Process: Clone + fmt::Display + Send + Sync {
    fn find_redexes(&self) -> Vec<Redex>;
    /// Contracts a redex returned by `find_redexes` on this same term.
    fn step(&self, r: &Redex) -> Result<Self, ReductionError>;
    fn is_canonical(&self) -> bool;
    /// Whether a canonical term is blocked on external communication, as
    /// the canonical-forms corollary requires.
    fn check_blocked(&self) -> Result<bool, ReductionError>;
    fn measure(&self) -> Measure;
    fn equiv(&self, other: &Self) -> bool;
}

pub use cp::canonical_witness_cp;
pub use hcp::canonical_witness_hcp;

/// The deterministic strategy's choice among `redexes`.
pub fn pick(redexes: &[Redex]) -> Option<&Redex> {
    redexes.iter().min()
}

#[cfg(test)]
mod tests;
