//! Relating CP and HCP: typed translation, operational correspondence,
//! disentanglement of hypersequent derivations, and internalisation of
//! environments as single formulas.

mod disentangle;
mod internalize;

use thiserror::Error;

use crate::congruence::equiv_hcp;
use crate::cp::CpTerm;
use crate::env::HyperEnv;
use crate::hcp::HcpTerm;
use crate::reduction::{Process, Trace};
use crate::translate::cp_to_hcp;
use crate::typecheck::{revalidate_cp, CpDerivation, HcpDerivation, Rule};

pub use disentangle::{disentangle, DisentangleResult, DownStep};
pub use internalize::{bigparr, bigtens, parr_collapse, tens_internalize};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BridgeError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no CP step of {source_term} translates to {target} up to congruence")]
    NoMatch { source_term: String, target: String },
}

/// Rebuilds a CP derivation as an HCP derivation of the translated term.
///
/// Cut, ⊗ and 1 gain a mix underneath (H-Mix, H-Mix, H-Mix₀ respectively);
/// every other rule maps to its HCP namesake.
pub fn translate_typed(d: &CpDerivation) -> Result<HcpDerivation, BridgeError> {
    if !revalidate_cp(d) {
        return Err(BridgeError::Precondition(
            "CP derivation does not revalidate".into(),
        ));
    }
    Ok(embed(d))
}

fn embed(d: &CpDerivation) -> HcpDerivation {
    let term = cp_to_hcp(&d.term);
    let hyper = HyperEnv::single(d.env.clone());
    let node = |rule, premises| HcpDerivation {
        rule,
        term: term.clone(),
        hyper: hyper.clone(),
        premises,
    };
    match (&d.term, d.rule) {
        (CpTerm::Cut(..), Rule::Cut) | (CpTerm::Send(..), Rule::Tensor) => {
            let (p, q) = (embed(&d.premises[0]), embed(&d.premises[1]));
            let mix = HcpDerivation {
                rule: Rule::HMix,
                term: HcpTerm::par(p.term.clone(), q.term.clone()),
                hyper: p.hyper.combine(&q.hyper),
                premises: vec![p, q],
            };
            node(
                if d.rule == Rule::Cut {
                    Rule::HCut
                } else {
                    Rule::Tensor
                },
                vec![mix],
            )
        }
        (CpTerm::Halt(_), Rule::One) => {
            let mix0 = HcpDerivation {
                rule: Rule::HMix0,
                term: HcpTerm::Inert,
                hyper: HyperEnv::empty(),
                premises: vec![],
            };
            node(Rule::One, vec![mix0])
        }
        _ => node(d.rule, d.premises.iter().map(embed).collect()),
    }
}

/// Checks that every step of a CP trace from `p` is matched by one HCP step
/// on the translations, up to structural congruence.
pub fn simulate_forward(p: &CpTerm, trace: &Trace<CpTerm>) -> bool {
    let mut cur = p.clone();
    for step in &trace.steps {
        let source = cp_to_hcp(&cur);
        let target = cp_to_hcp(&step.term);
        let matched = source
            .find_redexes()
            .iter()
            .filter_map(|r| source.step(r).ok())
            .any(|t| equiv_hcp(&t, &target));
        if !matched {
            return false;
        }
        cur = step.term.clone();
    }
    true
}

/// Given one HCP step `⟦p⟧ ⟹ r`, finds a CP step `p ⟹ q` with `⟦q⟧ ≡ r`.
pub fn simulate_backward(p: &CpTerm, r: &HcpTerm) -> Result<CpTerm, BridgeError> {
    p.find_redexes()
        .iter()
        .filter_map(|rx| p.step(rx).ok())
        .find(|q| equiv_hcp(r, &cp_to_hcp(q)))
        .ok_or_else(|| BridgeError::NoMatch {
            source_term: p.to_string(),
            target: r.to_string(),
        })
}

#[cfg(test)]
mod tests;
