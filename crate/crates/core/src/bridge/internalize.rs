use std::collections::BTreeSet;

use super::{disentangle, BridgeError};
use crate::cp::CpTerm;
use crate::env::{Env, HyperEnv};
use crate::name::Name;
use crate::typecheck::{revalidate_cp, revalidate_hcp, CpDerivation, HcpDerivation, Rule};
use crate::types::Type;

/// `⅋Γ`: the types of `env` joined by ⅋ in name order, right-associated;
/// ⊥ for the empty environment.
pub fn bigparr(env: &Env) -> Type {
    fold_right(
        env.iter().map(|(_, t)| t.clone()).collect(),
        Type::Bot,
        Type::par,
    )
}

/// `⊗𝒢`: the ⅋-collapse of every member joined by ⊗ in member order,
/// right-associated; 1 for the empty hyper-environment.
pub fn bigtens(h: &HyperEnv) -> Type {
    fold_right(
        h.envs().iter().map(bigparr).collect(),
        Type::One,
        Type::tensor,
    )
}

fn fold_right(items: Vec<Type>, unit: Type, op: fn(Type, Type) -> Type) -> Type {
    let mut iter = items.into_iter().rev();
    match iter.next() {
        None => unit,
        Some(last) => iter.fold(last, |acc, t| op(t, acc)),
    }
}

/// From `⊢ P : x₁:A₁, …, xₙ:Aₙ` derives `⊢ xₙ(x₁)…xₙ(xₙ₋₁).P : xₙ:⅋Γ`.
pub fn parr_collapse(d: &CpDerivation) -> Result<CpDerivation, BridgeError> {
    if !revalidate_cp(d) {
        return Err(BridgeError::Precondition(
            "CP derivation does not revalidate".into(),
        ));
    }
    let names: Vec<Name> = d.env.names().cloned().collect();
    let Some((z, init)) = names.split_last() else {
        return Err(BridgeError::Precondition(
            "empty environment has no carrier".into(),
        ));
    };
    let mut cur = d.clone();
    for x in init.iter().rev() {
        let (Some(a), Some(b)) = (cur.env.get(x).cloned(), cur.env.get(z).cloned()) else {
            unreachable!("collapse keeps every remaining name")
        };
        let env = cur.env.without(x).with(z.clone(), Type::par(a, b));
        let term = CpTerm::recv(z.clone(), x.clone(), cur.term.clone());
        cur = CpDerivation {
            rule: Rule::Par,
            term,
            env,
            premises: vec![cur],
        };
    }
    Ok(cur)
}

/// From `⊢ P : 𝒢` derives `⊢ Q : z:⊗𝒢` in CP, where `z` is a fresh carrier.
pub fn tens_internalize(d: &HcpDerivation) -> Result<CpDerivation, BridgeError> {
    if !revalidate_hcp(d) {
        return Err(BridgeError::Precondition(
            "HCP derivation does not revalidate".into(),
        ));
    }
    let parts = disentangle(d)?.derivations;
    let collapsed = parts
        .iter()
        .map(parr_collapse)
        .collect::<Result<Vec<_>, _>>()?;
    let mut taken: BTreeSet<Name> = collapsed.iter().flat_map(|c| c.term.all_names()).collect();
    let carrier = Name::new("z").fresh(|n| taken.contains(n));
    taken.insert(carrier.clone());
    let sent = Name::new("y").fresh(|n| taken.contains(n));

    let Some((last, init)) = collapsed.split_last() else {
        return Ok(CpDerivation {
            rule: Rule::One,
            term: CpTerm::halt(carrier.clone()),
            env: Env::singleton(carrier, Type::One),
            premises: vec![],
        });
    };
    let mut acc = rename(last, &carrier_of(last), &carrier);
    for q in init.iter().rev() {
        let q = rename(q, &carrier_of(q), &sent);
        let (Some(a), Some(b)) = (q.env.get(&sent).cloned(), acc.env.get(&carrier).cloned()) else {
            unreachable!("collapsed derivations are typed at their carrier")
        };
        let env = Env::singleton(carrier.clone(), Type::tensor(a, b));
        let term = CpTerm::send(
            carrier.clone(),
            sent.clone(),
            q.term.clone(),
            acc.term.clone(),
        );
        acc = CpDerivation {
            rule: Rule::Tensor,
            term,
            env,
            premises: vec![q, acc],
        };
    }
    Ok(acc)
}

fn carrier_of(d: &CpDerivation) -> Name {
    d.env
        .names()
        .next()
        .cloned()
        .expect("collapsed environment is a singleton")
}

/// Renames a free name throughout a derivation; `to` must be fresh for it.
fn rename(d: &CpDerivation, from: &Name, to: &Name) -> CpDerivation {
    CpDerivation {
        rule: d.rule,
        term: d.term.substitute(to, from),
        env: d.env.rename(from, to),
        premises: d.premises.iter().map(|p| rename(p, from, to)).collect(),
    }
}
