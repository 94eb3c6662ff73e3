use std::fmt;

use serde::Serialize;

use super::BridgeError;
use crate::cp::CpTerm;
use crate::env::Env;
use crate::hcp::HcpTerm;
use crate::name::Name;
use crate::translate::cp_to_hcp;
use crate::typecheck::{revalidate_hcp, CpDerivation, HcpDerivation, Rule};
use crate::types::Type;

/// One application of a ⤋-rule: the mix above `rule` on `channel` was
/// moved below it, taking `moved` unrelated components along.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DownStep {
    pub rule: Rule,
    pub channel: Name,
    pub moved: usize,
}

impl fmt::Display for DownStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "⤋{} on {} ({} moved)",
            self.rule, self.channel, self.moved
        )
    }
}

#[derive(Clone, Debug)]
pub struct DisentangleResult {
    /// One CP derivation per member of the hyper-environment, in member order.
    pub derivations: Vec<CpDerivation>,
    /// The parallel composition of the translated components.
    pub recombined: HcpTerm,
    pub log: Vec<DownStep>,
}

/// Splits an HCP derivation into independent CP derivations, one per member
/// of its hyper-environment.
///
/// Works bottom-up: each logical rule receives the already separated
/// components of its premise, acts on the one (or two, for H-Cut and ⊗)
/// containing its channel, and passes the rest through untouched. Passing
/// components through is exactly a ⤋-rule firing, and is logged.
pub fn disentangle(d: &HcpDerivation) -> Result<DisentangleResult, BridgeError> {
    if !revalidate_hcp(d) {
        return Err(BridgeError::Precondition(
            "HCP derivation does not revalidate".into(),
        ));
    }
    let mut log = Vec::new();
    let mut derivations = untangle(d, &mut log)?;
    derivations.sort_by(|a, b| a.env.cmp(&b.env));
    let recombined = HcpTerm::par_all(derivations.iter().map(|p| cp_to_hcp(&p.term)).collect());
    Ok(DisentangleResult {
        derivations,
        recombined,
        log,
    })
}

fn broken(what: &str) -> BridgeError {
    BridgeError::Precondition(format!("malformed derivation at {what}"))
}

fn holding(parts: &[CpDerivation], x: &Name) -> Vec<usize> {
    (0..parts.len())
        .filter(|&i| parts[i].env.contains(x))
        .collect()
}

fn take_two(
    mut parts: Vec<CpDerivation>,
    i: usize,
    j: usize,
) -> (CpDerivation, CpDerivation, Vec<CpDerivation>) {
    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
    let a = parts.remove(hi);
    let b = parts.remove(lo);
    let (pi, pj) = if i > j { (a, b) } else { (b, a) };
    (pi, pj, parts)
}

fn note(log: &mut Vec<DownStep>, rule: Rule, x: &Name, moved: usize) {
    if moved > 0 {
        log.push(DownStep {
            rule,
            channel: x.clone(),
            moved,
        });
    }
}

fn untangle(d: &HcpDerivation, log: &mut Vec<DownStep>) -> Result<Vec<CpDerivation>, BridgeError> {
    let leaf = |term: CpTerm, rule| -> Result<Vec<CpDerivation>, BridgeError> {
        let env = d
            .hyper
            .envs()
            .first()
            .ok_or_else(|| broken("leaf"))?
            .clone();
        Ok(vec![CpDerivation {
            rule,
            term,
            env,
            premises: vec![],
        }])
    };
    let premise = |k: usize, log: &mut Vec<DownStep>| -> Result<Vec<CpDerivation>, BridgeError> {
        untangle(d.premises.get(k).ok_or_else(|| broken("premise"))?, log)
    };
    match &d.term {
        HcpTerm::Inert => Ok(vec![]),
        HcpTerm::Link(x, y) => leaf(CpTerm::link(x.clone(), y.clone()), Rule::Ax),
        HcpTerm::Absurd(x) => leaf(CpTerm::absurd(x.clone()), Rule::Top),
        HcpTerm::Par(..) => {
            let mut parts = premise(0, log)?;
            parts.extend(premise(1, log)?);
            Ok(parts)
        }
        HcpTerm::New(x, a, _) => {
            let parts = premise(0, log)?;
            let pos = holding(&parts, x);
            let [i, j] = pos[..] else {
                return Err(broken("H-Cut"));
            };
            let (i, j) = if parts[j].env.get(x) == Some(a) {
                (j, i)
            } else {
                (i, j)
            };
            let (p, q, mut rest) = take_two(parts, i, j);
            note(log, Rule::HCut, x, rest.len());
            let ty = p.env.get(x).cloned().ok_or_else(|| broken("H-Cut"))?;
            let env = p
                .env
                .without(x)
                .union(&q.env.without(x))
                .ok_or_else(|| broken("H-Cut"))?;
            let term = CpTerm::cut(x.clone(), ty, p.term.clone(), q.term.clone());
            rest.push(CpDerivation {
                rule: Rule::Cut,
                term,
                env,
                premises: vec![p, q],
            });
            Ok(rest)
        }
        HcpTerm::Out(x, y, _) => {
            let parts = premise(0, log)?;
            let (Some(&i), Some(&j)) = (holding(&parts, y).first(), holding(&parts, x).first())
            else {
                return Err(broken("⊗"));
            };
            if i == j {
                return Err(broken("⊗"));
            }
            let (p, q, mut rest) = take_two(parts, i, j);
            note(log, Rule::Tensor, x, rest.len());
            let (a, b) = (p.env.get(y).cloned(), q.env.get(x).cloned());
            let (Some(a), Some(b)) = (a, b) else {
                return Err(broken("⊗"));
            };
            let env = p
                .env
                .without(y)
                .union(&q.env.without(x))
                .ok_or_else(|| broken("⊗"))?
                .with(x.clone(), Type::tensor(a, b));
            let term = CpTerm::send(x.clone(), y.clone(), p.term.clone(), q.term.clone());
            rest.push(CpDerivation {
                rule: Rule::Tensor,
                term,
                env,
                premises: vec![p, q],
            });
            Ok(rest)
        }
        HcpTerm::In(x, y, _) => {
            let mut parts = premise(0, log)?;
            let i = *holding(&parts, x).first().ok_or_else(|| broken("⅋"))?;
            let p = parts.remove(i);
            note(log, Rule::Par, x, parts.len());
            let (Some(a), Some(b)) = (p.env.get(y).cloned(), p.env.get(x).cloned()) else {
                return Err(broken("⅋"));
            };
            let env = p.env.without(y).with(x.clone(), Type::par(a, b));
            let term = CpTerm::recv(x.clone(), y.clone(), p.term.clone());
            parts.push(CpDerivation {
                rule: Rule::Par,
                term,
                env,
                premises: vec![p],
            });
            Ok(parts)
        }
        HcpTerm::OutUnit(x, _) => {
            let mut parts = premise(0, log)?;
            note(log, Rule::One, x, parts.len());
            parts.push(CpDerivation {
                rule: Rule::One,
                term: CpTerm::halt(x.clone()),
                env: Env::singleton(x.clone(), Type::One),
                premises: vec![],
            });
            Ok(parts)
        }
        HcpTerm::InUnit(x, _) => {
            let mut parts = premise(0, log)?;
            let member = d
                .hyper
                .position(x)
                .map(|k| d.hyper.envs()[k].clone())
                .ok_or_else(|| broken("⊥"))?;
            let inner = member.without(x);
            let i = parts
                .iter()
                .position(|p| p.env == inner)
                .ok_or_else(|| broken("⊥"))?;
            let p = parts.remove(i);
            note(log, Rule::Bot, x, parts.len());
            let term = CpTerm::wait(x.clone(), p.term.clone());
            parts.push(CpDerivation {
                rule: Rule::Bot,
                term,
                env: member,
                premises: vec![p],
            });
            Ok(parts)
        }
        HcpTerm::Inl(x, _) | HcpTerm::Inr(x, _) => {
            let mut parts = premise(0, log)?;
            let i = *holding(&parts, x).first().ok_or_else(|| broken("⊕"))?;
            let p = parts.remove(i);
            note(log, d.rule, x, parts.len());
            let ty = d
                .hyper
                .position(x)
                .and_then(|k| d.hyper.envs()[k].get(x).cloned());
            let ty = ty.ok_or_else(|| broken("⊕"))?;
            let env = p.env.with(x.clone(), ty);
            let term = if d.rule == Rule::Plus1 {
                CpTerm::inl(x.clone(), p.term.clone())
            } else {
                CpTerm::inr(x.clone(), p.term.clone())
            };
            parts.push(CpDerivation {
                rule: d.rule,
                term,
                env,
                premises: vec![p],
            });
            Ok(parts)
        }
        HcpTerm::Case(x, _, _) => {
            let mut left = premise(0, log)?;
            let mut right = premise(1, log)?;
            if left.len() != 1 || right.len() != 1 || d.hyper.len() != 1 {
                return Err(broken("&"));
            }
            let (p, q) = (left.remove(0), right.remove(0));
            let term = CpTerm::case(x.clone(), p.term.clone(), q.term.clone());
            let env = d.hyper.envs()[0].clone();
            Ok(vec![CpDerivation {
                rule: Rule::With,
                term,
                env,
                premises: vec![p, q],
            }])
        }
    }
}
