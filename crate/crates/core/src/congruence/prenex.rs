use std::collections::BTreeSet;

use crate::cp::CpTerm;
use crate::hcp::HcpTerm;
use crate::name::Name;
use crate::types::Type;

/// A cut pulled to the front. The two endpoints carry distinct names so the
/// components can be rearranged freely; `ty` is the type of `pos`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpBinder {
    pub pos: Name,
    pub neg: Name,
    pub ty: Type,
}

/// `new x₁ (… new xₙ (P₁ | … | Pₙ₊₁))` with no `Pᵢ` a cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpPrenex {
    pub binders: Vec<CpBinder>,
    pub components: Vec<CpTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HcpBinder {
    pub name: Name,
    pub ty: Type,
}

/// `new x₁. … new xₙ. (P₁ | … | Pₖ)` with no `Pᵢ` a restriction, a
/// composition or `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HcpPrenex {
    pub binders: Vec<HcpBinder>,
    pub components: Vec<HcpTerm>,
}

/// Name for the negative endpoint of a cut on `x`. `~` cannot occur in
/// surface names, so this never clashes.
pub(crate) fn neg_name(x: &Name) -> Name {
    Name::new(format!("{x}~"))
}

pub fn prenex_cp(t: &CpTerm) -> CpPrenex {
    prenex_cp_raw(&t.freshen(&BTreeSet::new()))
}

/// Prenex form of a term whose binders are already distinct from each other
/// and from its free names.
pub(crate) fn prenex_cp_raw(t: &CpTerm) -> CpPrenex {
    let mut out = CpPrenex {
        binders: Vec::new(),
        components: Vec::new(),
    };
    collect_cp(t, &mut out);
    out
}

fn collect_cp(t: &CpTerm, out: &mut CpPrenex) {
    match t {
        CpTerm::Cut(x, ty, p, q) => {
            let neg = neg_name(x);
            out.binders.push(CpBinder {
                pos: x.clone(),
                neg: neg.clone(),
                ty: ty.clone(),
            });
            collect_cp(p, out);
            collect_cp(&q.substitute(&neg, x), out);
        }
        _ => out.components.push(t.clone()),
    }
}

impl CpPrenex {
    /// Rebuilds a cut tree. Each cut splits the components along the
    /// connections made by the remaining cuts; pieces connected to neither
    /// endpoint go to the right.
    pub fn reassemble(&self) -> CpTerm {
        assemble(self.binders.clone(), self.components.clone())
    }

    pub fn binder_of(&self, name: &Name) -> Option<usize> {
        self.binders
            .iter()
            .position(|b| &b.pos == name || &b.neg == name)
    }
}

fn assemble(binders: Vec<CpBinder>, comps: Vec<CpTerm>) -> CpTerm {
    search(&binders, &comps).unwrap_or_else(|| split_by_connection(binders, comps))
}

/// Finds a cut tree in which every cut separates its two endpoints and every
/// endpoint that occurs nowhere (absorbed by ⊤) has an absorbing component
/// on its side. Components linked by a cut whose endpoints both occur must
/// stay together, so only the resulting groups are distributed.
fn search(binders: &[CpBinder], comps: &[CpTerm]) -> Option<CpTerm> {
    if binders.is_empty() {
        return if comps.len() == 1 {
            Some(comps[0].clone())
        } else {
            None
        };
    }
    if binders.len() + 1 != comps.len() {
        return None;
    }
    let owner = |n: &Name| comps.iter().position(|c| c.is_free(n));
    for (bi, b) in binders.iter().enumerate() {
        let rest: Vec<&CpBinder> = binders
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != bi)
            .map(|(_, r)| r)
            .collect();
        let mut group: Vec<usize> = (0..comps.len()).collect();
        loop {
            let mut changed = false;
            for r in &rest {
                if let (Some(i), Some(j)) = (owner(&r.pos), owner(&r.neg)) {
                    let (gi, gj) = (group[i], group[j]);
                    let m = gi.min(gj);
                    for g in group.iter_mut() {
                        if (*g == gi || *g == gj) && *g != m {
                            *g = m;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let ids: BTreeSet<usize> = group.iter().copied().collect();
        let ids: Vec<usize> = ids.into_iter().collect();
        if ids.len() > 12 {
            continue;
        }
        let slot = |c: usize| ids.iter().position(|&g| g == group[c]).unwrap_or(0);
        let (pos_g, neg_g) = (owner(&b.pos).map(slot), owner(&b.neg).map(slot));
        if pos_g.is_some() && pos_g == neg_g {
            continue;
        }
        for mask in 1..(1u32 << ids.len()) - 1 {
            let on_left = |c: usize| mask & (1 << slot(c)) != 0;
            if pos_g.is_some_and(|g| mask & (1 << g) == 0)
                || neg_g.is_some_and(|g| mask & (1 << g) != 0)
            {
                continue;
            }
            let (left, right): (Vec<usize>, Vec<usize>) =
                (0..comps.len()).partition(|&c| on_left(c));
            let absorbs = |side: &[usize]| side.iter().any(|&c| comps[c].absorbs());
            if (pos_g.is_none() && !absorbs(&left)) || (neg_g.is_none() && !absorbs(&right)) {
                continue;
            }
            let (mut lb, mut rb, mut free) = (Vec::new(), Vec::new(), Vec::new());
            for r in &rest {
                match owner(&r.pos).or(owner(&r.neg)) {
                    Some(c) if on_left(c) => lb.push((*r).clone()),
                    Some(_) => rb.push((*r).clone()),
                    None => free.push((*r).clone()),
                }
            }
            if lb.len() + 1 > left.len() || rb.len() + 1 > right.len() {
                continue;
            }
            let take = left.len() - 1 - lb.len();
            if take > free.len() || free.len() - take != right.len() - 1 - rb.len() {
                continue;
            }
            rb.extend(free.split_off(take));
            lb.extend(free);
            let pick = |side: &[usize]| side.iter().map(|&c| comps[c].clone()).collect::<Vec<_>>();
            let (Some(p), Some(q)) = (search(&lb, &pick(&left)), search(&rb, &pick(&right))) else {
                continue;
            };
            let p = p.substitute(&b.pos, &b.neg);
            let q = q.substitute(&b.pos, &b.neg);
            return Some(CpTerm::cut(b.pos.clone(), b.ty.clone(), p, q));
        }
    }
    None
}

/// Fallback for configurations no cut tree types: split along connections.
fn split_by_connection(mut binders: Vec<CpBinder>, mut comps: Vec<CpTerm>) -> CpTerm {
    if binders.is_empty() || comps.len() < 2 {
        // Only reachable for ill-formed configurations; keep every piece.
        return match comps.len() {
            0 => CpTerm::Halt(Name::new("?")),
            _ => comps.swap_remove(0),
        };
    }
    let b = binders.remove(0);
    let owner = |n: &Name, comps: &[CpTerm]| comps.iter().position(|c| c.is_free(n));
    // Union-find over components joined by the other binders.
    let mut parent: Vec<usize> = (0..comps.len()).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for other in &binders {
        if let (Some(i), Some(j)) = (owner(&other.pos, &comps), owner(&other.neg, &comps)) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
    }
    let neg_owner = owner(&b.neg, &comps);
    let neg_root = neg_owner.map(|j| find(&mut parent, j));
    // An endpoint absorbed by ⊤ occurs nowhere; then the positive side is
    // some group apart from the negative one, preferably one that absorbs.
    let pos_root = match owner(&b.pos, &comps) {
        Some(i) => i,
        None => {
            let apart: Vec<usize> = (0..comps.len())
                .filter(|&i| Some(find(&mut parent, i)) != neg_root)
                .collect();
            apart
                .iter()
                .copied()
                .find(|&i| comps[i].absorbs())
                .or(apart.first().copied())
                .unwrap_or(0)
        }
    };
    let root = find(&mut parent, pos_root);
    let mut left_idx: BTreeSet<usize> = (0..comps.len())
        .filter(|&i| find(&mut parent, i) == root)
        .collect();
    if let Some(j) = neg_owner {
        if left_idx.contains(&j) {
            // A cycle; only possible for ill-typed input. Split it anyway.
            left_idx = [pos_root].into();
        }
    }
    if left_idx.len() == comps.len() {
        left_idx.remove(&(comps.len() - 1));
    }
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (i, c) in comps.into_iter().enumerate() {
        if left_idx.contains(&i) {
            left.push(c);
        } else {
            right.push(c);
        }
    }
    let in_side = |bb: &CpBinder, side: &[CpTerm]| {
        side.iter()
            .any(|c| c.is_free(&bb.pos) || c.is_free(&bb.neg))
    };
    let (mut lb, mut rb): (Vec<CpBinder>, Vec<CpBinder>) =
        binders.into_iter().partition(|bb| in_side(bb, &left));
    // Unused binders fill whichever side needs one to keep n cuts over n+1 pieces.
    let mut spare: Vec<CpBinder> = Vec::new();
    lb.retain(|bb| {
        let used = in_side(bb, &left);
        if !used {
            spare.push(bb.clone());
        }
        used
    });
    rb.retain(|bb| {
        let used = in_side(bb, &right);
        if !used {
            spare.push(bb.clone());
        }
        used
    });
    for bb in spare {
        if lb.len() + 1 < left.len() {
            lb.push(bb);
        } else {
            rb.push(bb);
        }
    }
    let p = split_by_connection(lb, left).substitute(&b.pos, &b.neg);
    let q = split_by_connection(rb, right).substitute(&b.pos, &b.neg);
    CpTerm::cut(b.pos, b.ty, p, q)
}

pub fn prenex_hcp(t: &HcpTerm) -> HcpPrenex {
    prenex_hcp_raw(&t.freshen(&BTreeSet::new()))
}

/// Prenex form of a term whose binders are already distinct from each other
/// and from its free names; scope extrusion is then always admissible.
pub(crate) fn prenex_hcp_raw(t: &HcpTerm) -> HcpPrenex {
    let mut out = HcpPrenex {
        binders: Vec::new(),
        components: Vec::new(),
    };
    collect_hcp(t, &mut out);
    out
}

fn collect_hcp(t: &HcpTerm, out: &mut HcpPrenex) {
    match t {
        HcpTerm::New(x, ty, p) => {
            out.binders.push(HcpBinder {
                name: x.clone(),
                ty: ty.clone(),
            });
            collect_hcp(p, out);
        }
        HcpTerm::Par(p, q) => {
            collect_hcp(p, out);
            collect_hcp(q, out);
        }
        HcpTerm::Inert => {}
        _ => out.components.push(t.clone()),
    }
}

impl HcpPrenex {
    pub fn reassemble(&self) -> HcpTerm {
        let body = HcpTerm::par_all(self.components.clone());
        self.binders.iter().rev().fold(body, |acc, b| {
            HcpTerm::new_(b.name.clone(), b.ty.clone(), acc)
        })
    }

    pub fn binder_of(&self, name: &Name) -> Option<usize> {
        self.binders.iter().position(|b| &b.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{parse_cp, parse_hcp};

    #[test]
    fn hcp_drops_units_and_extrudes_scope() {
        let t = parse_hcp("(a[].0 | 0)").unwrap();
        assert_eq!(prenex_hcp(&t).components.len(), 1);
        let t = parse_hcp("new x:1. (a[].0 | new y:bot. (x[].0 | y().y[].0))").unwrap();
        let p = prenex_hcp(&t);
        let names: Vec<&str> = p.binders.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(names, ["x", "y"]);
        assert_eq!(p.components.len(), 3);
    }

    #[test]
    fn cp_flattens_cut_spine() {
        let t = parse_cp("new x:1 (x[].0 | new y:1 (x().y[].0 | y().w[].0))").unwrap();
        let p = prenex_cp(&t);
        assert_eq!(p.binders.len(), 2);
        assert_eq!(p.components.len(), 3);
        assert!(p.components[1].is_free(&Name::new("x~")));
        let back = p.reassemble();
        assert!(back.alpha_eq(&t), "{back}");
    }
}
