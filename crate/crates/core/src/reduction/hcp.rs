use super::cp::splice;
use super::{Measure, Process, Redex, ReductionError, RuleTag};
use crate::congruence::{equiv_hcp, prenex_hcp, HcpBinder, HcpPrenex};
use crate::hcp::HcpTerm;
use crate::name::Name;
use crate::types::Type;

/// The two halves of a binary connective, read off either orientation of
/// the restriction's annotation (the annotation is only fixed up to duality).
fn halves(ty: &Type) -> Option<(Type, Type)> {
    match ty {
        Type::Tensor(a, b) | Type::Par(a, b) | Type::Plus(a, b) | Type::With(a, b) => {
            Some(((**a).clone(), (**b).clone()))
        }
        _ => None,
    }
}

fn redexes_of(pre: &HcpPrenex) -> Vec<Redex> {
    let mut out = Vec::new();
    let comps = &pre.components;
    for (bi, b) in pre.binders.iter().enumerate() {
        let x = &b.name;
        for (i, c) in comps.iter().enumerate() {
            if let HcpTerm::Link(u, v) = c {
                if u == v || (u != x && v != x) {
                    continue;
                }
                // With the other endpoint absorbed by ⊤, the link simply vanishes.
                let j = (0..comps.len())
                    .find(|&j| j != i && comps[j].is_free(x))
                    .unwrap_or(i);
                out.push(Redex {
                    binder: bi,
                    rule: RuleTag::Link,
                    left: i,
                    right: j,
                    channel: x.clone(),
                });
            }
        }
        for (i, c) in comps.iter().enumerate() {
            if !c.acts_on().contains(x) || matches!(c, HcpTerm::Link(..)) {
                continue;
            }
            for (j, d) in comps.iter().enumerate() {
                if i == j || !d.acts_on().contains(x) {
                    continue;
                }
                let rule = match (c, d) {
                    (HcpTerm::Out(..), HcpTerm::In(..)) => RuleTag::TensorPar,
                    (HcpTerm::OutUnit(..), HcpTerm::InUnit(..)) => RuleTag::OneBot,
                    (HcpTerm::Inl(..), HcpTerm::Case(..)) => RuleTag::PlusWith1,
                    (HcpTerm::Inr(..), HcpTerm::Case(..)) => RuleTag::PlusWith2,
                    _ => continue,
                };
                if rule != RuleTag::OneBot && halves(&b.ty).is_none() {
                    continue;
                }
                out.push(Redex {
                    binder: bi,
                    rule,
                    left: i,
                    right: j,
                    channel: x.clone(),
                });
            }
        }
    }
    out.sort();
    out
}

fn contract(pre: &HcpPrenex, r: &Redex) -> HcpTerm {
    let b = &pre.binders[r.binder];
    let x = &b.name;
    let comps = &pre.components;
    let (c, d) = (&comps[r.left], &comps[r.right]);
    let mut binders = pre.binders.clone();
    let new_comps = match (r.rule, c, d) {
        (RuleTag::Link, HcpTerm::Link(..), _) if r.left == r.right => {
            binders.remove(r.binder);
            splice(comps, r.left, r.right, vec![])
        }
        (RuleTag::Link, HcpTerm::Link(u, v), _) => {
            let w = if u == x { v } else { u };
            binders.remove(r.binder);
            splice(comps, r.left, r.right, vec![d.substitute(w, x)])
        }
        (RuleTag::TensorPar, HcpTerm::Out(_, y, p), HcpTerm::In(_, y2, rr)) => {
            let (a, bt) = halves(&b.ty).expect("checked in redexes_of");
            let new_x = HcpBinder {
                name: x.clone(),
                ty: bt,
            };
            let new_y = HcpBinder {
                name: y.clone(),
                ty: a,
            };
            binders.splice(r.binder..=r.binder, [new_x, new_y]);
            splice(
                comps,
                r.left,
                r.right,
                vec![(**p).clone(), rr.substitute(y, y2)],
            )
        }
        (RuleTag::OneBot, HcpTerm::OutUnit(_, p), HcpTerm::InUnit(_, q)) => {
            binders.remove(r.binder);
            splice(comps, r.left, r.right, vec![(**p).clone(), (**q).clone()])
        }
        (
            RuleTag::PlusWith1 | RuleTag::PlusWith2,
            HcpTerm::Inl(_, p) | HcpTerm::Inr(_, p),
            HcpTerm::Case(_, q, s),
        ) => {
            let (a, bt) = halves(&b.ty).expect("checked in redexes_of");
            let (ty, branch) = if r.rule == RuleTag::PlusWith1 {
                (a, q)
            } else {
                (bt, s)
            };
            binders[r.binder] = HcpBinder {
                name: x.clone(),
                ty,
            };
            splice(
                comps,
                r.left,
                r.right,
                vec![(**p).clone(), (**branch).clone()],
            )
        }
        _ => unreachable!("redex shapes are fixed by redexes_of"),
    };
    HcpPrenex {
        binders,
        components: new_comps,
    }
    .reassemble()
}

/// The prenex decomposition witnessing canonical form, if the term is
/// canonical: no link on a restricted channel, no two components acting on
/// the same restricted channel, and at least one more component than
/// restrictions.
pub fn canonical_witness_hcp(t: &HcpTerm) -> Option<HcpPrenex> {
    let pre = prenex_hcp(t);
    if !pre.binders.is_empty() && pre.components.len() < pre.binders.len() + 1 {
        return None;
    }
    for b in &pre.binders {
        let mut acting = 0;
        for c in &pre.components {
            if !c.acts_on().contains(&b.name) {
                continue;
            }
            if matches!(c, HcpTerm::Link(..)) {
                return None;
            }
            acting += 1;
        }
        if acting > 1 {
            return None;
        }
    }
    Some(pre)
}

impl Process for HcpTerm {
    fn find_redexes(&self) -> Vec<Redex> {
        redexes_of(&prenex_hcp(self))
    }

    fn step(&self, r: &Redex) -> Result<HcpTerm, ReductionError> {
        let pre = prenex_hcp(self);
        if !redexes_of(&pre).contains(r) {
            return Err(ReductionError::StaleRedex(r.clone()));
        }
        Ok(contract(&pre, r))
    }

    fn is_canonical(&self) -> bool {
        canonical_witness_hcp(self).is_some()
    }

    /// At least `components − binders` components act on a free channel.
    fn check_blocked(&self) -> Result<bool, ReductionError> {
        let pre = canonical_witness_hcp(self).ok_or(ReductionError::NotCanonical)?;
        let bound = |n: &Name| pre.binder_of(n).is_some();
        let free_acting = pre
            .components
            .iter()
            .filter(|c| c.acts_on().iter().any(|n| !bound(n)))
            .count();
        Ok(free_acting + pre.binders.len() >= pre.components.len())
    }

    fn measure(&self) -> Measure {
        let mut v = Vec::new();
        self.cut_sizes(&mut v);
        Measure::new(v)
    }

    fn equiv(&self, other: &HcpTerm) -> bool {
        equiv_hcp(self, other)
    }
}
