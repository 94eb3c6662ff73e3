use super::{Measure, Process, Redex, ReductionError, RuleTag};
use crate::congruence::{equiv_cp, prenex_cp, CpBinder, CpPrenex};
use crate::cp::CpTerm;
use crate::name::Name;
use crate::types::Type;

fn endpoint_type(b: &CpBinder, e: &Name) -> Type {
    if *e == b.pos {
        b.ty.clone()
    } else {
        b.ty.dual()
    }
}

fn other_end<'a>(b: &'a CpBinder, e: &Name) -> &'a Name {
    if *e == b.pos {
        &b.neg
    } else {
        &b.pos
    }
}

fn redexes_of(pre: &CpPrenex) -> Vec<Redex> {
    let mut out = Vec::new();
    let comps = &pre.components;
    for (bi, b) in pre.binders.iter().enumerate() {
        for (i, c) in comps.iter().enumerate() {
            if let CpTerm::Link(u, v) = c {
                let e = if *u == b.pos || *u == b.neg {
                    u
                } else if *v == b.pos || *v == b.neg {
                    v
                } else {
                    continue;
                };
                let w = if e == u { v } else { u };
                if w == other_end(b, e) {
                    continue;
                }
                let partner = other_end(b, e);
                // With the partner endpoint absorbed by ⊤, the link simply vanishes.
                let j = (0..comps.len())
                    .find(|&j| j != i && comps[j].is_free(partner))
                    .unwrap_or(i);
                out.push(Redex {
                    binder: bi,
                    rule: RuleTag::Link,
                    left: i,
                    right: j,
                    channel: b.pos.clone(),
                });
            }
        }
        for (i, c) in comps.iter().enumerate() {
            let Some(e) = c.acts_on().into_iter().find(|n| *n == b.pos || *n == b.neg) else {
                continue;
            };
            let partner = other_end(b, &e);
            for (j, d) in comps.iter().enumerate() {
                if i == j || !d.acts_on().contains(partner) {
                    continue;
                }
                let ty = endpoint_type(b, &e);
                let rule = match (c, d, &ty) {
                    (CpTerm::Send(..), CpTerm::Recv(..), Type::Tensor(..)) => RuleTag::TensorPar,
                    (CpTerm::Halt(_), CpTerm::Wait(..), Type::One) => RuleTag::OneBot,
                    (CpTerm::Inl(..), CpTerm::Case(..), Type::Plus(..)) => RuleTag::PlusWith1,
                    (CpTerm::Inr(..), CpTerm::Case(..), Type::Plus(..)) => RuleTag::PlusWith2,
                    _ => continue,
                };
                out.push(Redex {
                    binder: bi,
                    rule,
                    left: i,
                    right: j,
                    channel: b.pos.clone(),
                });
            }
        }
    }
    out.sort();
    out
}

/// Replaces components `i` and `j` by `new`, keeping the order of the rest.
pub(crate) fn splice<T: Clone>(comps: &[T], i: usize, j: usize, new: Vec<T>) -> Vec<T> {
    let at = i.min(j);
    let mut out = Vec::new();
    for (k, c) in comps.iter().enumerate() {
        if k == at {
            out.extend(new.iter().cloned());
        }
        if k != i && k != j {
            out.push(c.clone());
        }
    }
    out
}

fn contract(pre: &CpPrenex, r: &Redex) -> CpTerm {
    let b = &pre.binders[r.binder];
    let comps = &pre.components;
    let (c, d) = (&comps[r.left], &comps[r.right]);
    let mut binders = pre.binders.clone();
    let new_comps = match (r.rule, c, d) {
        (RuleTag::Link, CpTerm::Link(..), _) if r.left == r.right => {
            binders.remove(r.binder);
            splice(comps, r.left, r.right, vec![])
        }
        (RuleTag::Link, CpTerm::Link(u, v), _) => {
            let (e, w) = if *u == b.pos || *u == b.neg {
                (u, v)
            } else {
                (v, u)
            };
            binders.remove(r.binder);
            let body = d.substitute(w, other_end(b, e));
            splice(comps, r.left, r.right, vec![body])
        }
        (RuleTag::TensorPar, CpTerm::Send(e1, y, p, q), CpTerm::Recv(e2, y2, rr)) => {
            let Type::Tensor(a, bt) = endpoint_type(b, e1) else {
                unreachable!("checked in redexes_of")
            };
            let yneg = crate::congruence::neg_name(y);
            let new_y = CpBinder {
                pos: y.clone(),
                neg: yneg.clone(),
                ty: *a,
            };
            let new_x = CpBinder {
                pos: e1.clone(),
                neg: e2.clone(),
                ty: *bt,
            };
            binders.splice(r.binder..=r.binder, [new_y, new_x]);
            let rr = rr.substitute(&yneg, y2);
            splice(
                comps,
                r.left,
                r.right,
                vec![(**p).clone(), (**q).clone(), rr],
            )
        }
        (RuleTag::OneBot, CpTerm::Halt(_), CpTerm::Wait(_, p)) => {
            binders.remove(r.binder);
            splice(comps, r.left, r.right, vec![(**p).clone()])
        }
        (
            RuleTag::PlusWith1 | RuleTag::PlusWith2,
            CpTerm::Inl(e1, p) | CpTerm::Inr(e1, p),
            CpTerm::Case(e2, q, s),
        ) => {
            let Type::Plus(a, bt) = endpoint_type(b, e1) else {
                unreachable!("checked in redexes_of")
            };
            let (ty, branch) = if r.rule == RuleTag::PlusWith1 {
                (*a, q)
            } else {
                (*bt, s)
            };
            binders[r.binder] = CpBinder {
                pos: e1.clone(),
                neg: e2.clone(),
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
    CpPrenex {
        binders,
        components: new_comps,
    }
    .reassemble()
}

/// The prenex decomposition witnessing canonical form, if the term is canonical.
pub fn canonical_witness_cp(t: &CpTerm) -> Option<CpPrenex> {
    let pre = prenex_cp(t);
    for b in &pre.binders {
        let mut acting = 0;
        for c in &pre.components {
            let acts = c.acts_on();
            if !acts.iter().any(|n| *n == b.pos || *n == b.neg) {
                continue;
            }
            if matches!(c, CpTerm::Link(..)) {
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

impl Process for CpTerm {
    fn find_redexes(&self) -> Vec<Redex> {
        redexes_of(&prenex_cp(self))
    }

    fn step(&self, r: &Redex) -> Result<CpTerm, ReductionError> {
        let pre = prenex_cp(self);
        if !redexes_of(&pre).contains(r) {
            return Err(ReductionError::StaleRedex(r.clone()));
        }
        Ok(contract(&pre, r))
    }

    fn is_canonical(&self) -> bool {
        canonical_witness_cp(self).is_some()
    }

    fn check_blocked(&self) -> Result<bool, ReductionError> {
        let pre = canonical_witness_cp(self).ok_or(ReductionError::NotCanonical)?;
        let bound = |n: &Name| pre.binder_of(n).is_some();
        Ok(pre
            .components
            .iter()
            .any(|c| c.acts_on().iter().any(|n| !bound(n))))
    }

    fn measure(&self) -> Measure {
        let mut v = Vec::new();
        self.cut_sizes(&mut v);
        Measure::new(v)
    }

    fn equiv(&self, other: &CpTerm) -> bool {
        equiv_cp(self, other)
    }
}
