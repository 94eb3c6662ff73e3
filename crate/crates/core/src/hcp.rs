//! Terms of Hypersequent Classical Processes.

use std::collections::BTreeSet;

use crate::cp::{enter_binder, FreeNames, Renaming};
use crate::name::Name;
use crate::types::Type;

/// An HCP process term.
///
/// `New(x, A, P)` binds `x` in `P`; both endpoints of the channel are called
/// `x`, one of them typed `A` and the other `A^⊥`. `Out(x, y, P)` (bound
/// output) and `In(x, y, P)` bind `y` in `P`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HcpTerm {
    Link(Name, Name),
    Inert,
    New(Name, Type, Box<HcpTerm>),
    Par(Box<HcpTerm>, Box<HcpTerm>),
    Out(Name, Name, Box<HcpTerm>),
    In(Name, Name, Box<HcpTerm>),
    OutUnit(Name, Box<HcpTerm>),
    InUnit(Name, Box<HcpTerm>),
    Inl(Name, Box<HcpTerm>),
    Inr(Name, Box<HcpTerm>),
    Case(Name, Box<HcpTerm>, Box<HcpTerm>),
    Absurd(Name),
}

impl HcpTerm {
    pub fn link(x: impl Into<Name>, y: impl Into<Name>) -> HcpTerm {
        HcpTerm::Link(x.into(), y.into())
    }

    pub fn new_(x: impl Into<Name>, ty: Type, p: HcpTerm) -> HcpTerm {
        HcpTerm::New(x.into(), ty, Box::new(p))
    }

    pub fn par(p: HcpTerm, q: HcpTerm) -> HcpTerm {
        HcpTerm::Par(Box::new(p), Box::new(q))
    }

    pub fn out(x: impl Into<Name>, y: impl Into<Name>, p: HcpTerm) -> HcpTerm {
        HcpTerm::Out(x.into(), y.into(), Box::new(p))
    }

    pub fn input(x: impl Into<Name>, y: impl Into<Name>, p: HcpTerm) -> HcpTerm {
        HcpTerm::In(x.into(), y.into(), Box::new(p))
    }

    pub fn out_unit(x: impl Into<Name>, p: HcpTerm) -> HcpTerm {
        HcpTerm::OutUnit(x.into(), Box::new(p))
    }

    pub fn in_unit(x: impl Into<Name>, p: HcpTerm) -> HcpTerm {
        HcpTerm::InUnit(x.into(), Box::new(p))
    }

    pub fn inl(x: impl Into<Name>, p: HcpTerm) -> HcpTerm {
        HcpTerm::Inl(x.into(), Box::new(p))
    }

    pub fn inr(x: impl Into<Name>, p: HcpTerm) -> HcpTerm {
        HcpTerm::Inr(x.into(), Box::new(p))
    }

    pub fn case(x: impl Into<Name>, p: HcpTerm, q: HcpTerm) -> HcpTerm {
        HcpTerm::Case(x.into(), Box::new(p), Box::new(q))
    }

    pub fn absurd(x: impl Into<Name>) -> HcpTerm {
        HcpTerm::Absurd(x.into())
    }

    /// Right-nested parallel composition of `parts`; `Inert` when empty.
    pub fn par_all(parts: Vec<HcpTerm>) -> HcpTerm {
        let mut iter = parts.into_iter().rev();
        match iter.next() {
            None => HcpTerm::Inert,
            Some(last) => iter.fold(last, |acc, p| HcpTerm::par(p, acc)),
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    pub fn is_free(&self, name: &Name) -> bool {
        match self {
            HcpTerm::Link(x, y) => x == name || y == name,
            HcpTerm::Inert => false,
            HcpTerm::New(x, _, p) => x != name && p.is_free(name),
            HcpTerm::Par(p, q) => p.is_free(name) || q.is_free(name),
            HcpTerm::Out(x, y, p) | HcpTerm::In(x, y, p) => {
                x == name || (y != name && p.is_free(name))
            }
            HcpTerm::OutUnit(x, p)
            | HcpTerm::InUnit(x, p)
            | HcpTerm::Inl(x, p)
            | HcpTerm::Inr(x, p) => x == name || p.is_free(name),
            HcpTerm::Case(x, p, q) => x == name || p.is_free(name) || q.is_free(name),
            HcpTerm::Absurd(x) => x == name,
        }
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            HcpTerm::Link(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            HcpTerm::Inert => {}
            HcpTerm::New(x, _, p) => {
                let mut inner = p.free_names();
                inner.remove(x);
                out.extend(inner);
            }
            HcpTerm::Par(p, q) => {
                p.collect_free(out);
                q.collect_free(out);
            }
            HcpTerm::Out(x, y, p) | HcpTerm::In(x, y, p) => {
                out.insert(x.clone());
                let mut inner = p.free_names();
                inner.remove(y);
                out.extend(inner);
            }
            HcpTerm::OutUnit(x, p)
            | HcpTerm::InUnit(x, p)
            | HcpTerm::Inl(x, p)
            | HcpTerm::Inr(x, p) => {
                out.insert(x.clone());
                p.collect_free(out);
            }
            HcpTerm::Case(x, p, q) => {
                out.insert(x.clone());
                p.collect_free(out);
                q.collect_free(out);
            }
            HcpTerm::Absurd(x) => {
                out.insert(x.clone());
            }
        }
    }

    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |n| {
            out.insert(n.clone());
        });
        out
    }

    fn visit_names(&self, f: &mut impl FnMut(&Name)) {
        match self {
            HcpTerm::Link(x, y) => {
                f(x);
                f(y);
            }
            HcpTerm::Inert => {}
            HcpTerm::New(x, _, p) => {
                f(x);
                p.visit_names(f);
            }
            HcpTerm::Par(p, q) => {
                p.visit_names(f);
                q.visit_names(f);
            }
            HcpTerm::Out(x, y, p) | HcpTerm::In(x, y, p) => {
                f(x);
                f(y);
                p.visit_names(f);
            }
            HcpTerm::OutUnit(x, p)
            | HcpTerm::InUnit(x, p)
            | HcpTerm::Inl(x, p)
            | HcpTerm::Inr(x, p) => {
                f(x);
                p.visit_names(f);
            }
            HcpTerm::Case(x, p, q) => {
                f(x);
                p.visit_names(f);
                q.visit_names(f);
            }
            HcpTerm::Absurd(x) => f(x),
        }
    }

    /// `self{w/x}`, capture-avoiding.
    pub fn substitute(&self, w: &Name, x: &Name) -> HcpTerm {
        let mut map = Renaming::new();
        map.insert(x.clone(), w.clone());
        self.rename(&map)
    }

    pub(crate) fn rename(&self, map: &Renaming) -> HcpTerm {
        if map.is_empty() {
            return self.clone();
        }
        let r = |n: &Name| map.get(n).cloned().unwrap_or_else(|| n.clone());
        match self {
            HcpTerm::Link(x, y) => HcpTerm::Link(r(x), r(y)),
            HcpTerm::Inert => HcpTerm::Inert,
            HcpTerm::New(x, ty, p) => {
                let (x2, inner) = enter_binder(x, &[p], map);
                HcpTerm::new_(x2, ty.clone(), p.rename(&inner))
            }
            HcpTerm::Par(p, q) => HcpTerm::par(p.rename(map), q.rename(map)),
            HcpTerm::Out(x, y, p) => {
                let (y2, inner) = enter_binder(y, &[p], map);
                HcpTerm::out(r(x), y2, p.rename(&inner))
            }
            HcpTerm::In(x, y, p) => {
                let (y2, inner) = enter_binder(y, &[p], map);
                HcpTerm::input(r(x), y2, p.rename(&inner))
            }
            HcpTerm::OutUnit(x, p) => HcpTerm::out_unit(r(x), p.rename(map)),
            HcpTerm::InUnit(x, p) => HcpTerm::in_unit(r(x), p.rename(map)),
            HcpTerm::Inl(x, p) => HcpTerm::inl(r(x), p.rename(map)),
            HcpTerm::Inr(x, p) => HcpTerm::inr(r(x), p.rename(map)),
            HcpTerm::Case(x, p, q) => HcpTerm::case(r(x), p.rename(map), q.rename(map)),
            HcpTerm::Absurd(x) => HcpTerm::Absurd(r(x)),
        }
    }

    /// Renames binders apart from each other, from free names and from `avoid`.
    pub fn freshen(&self, avoid: &BTreeSet<Name>) -> HcpTerm {
        let mut used: BTreeSet<Name> = avoid.clone();
        used.extend(self.free_names());
        self.freshen_with(&mut used)
    }

    pub(crate) fn freshen_with(&self, used: &mut BTreeSet<Name>) -> HcpTerm {
        let bind = |x: &Name, used: &mut BTreeSet<Name>| {
            let x2 = x.fresh(|n| used.contains(n));
            used.insert(x2.clone());
            x2
        };
        match self {
            HcpTerm::Link(..) | HcpTerm::Inert | HcpTerm::Absurd(_) => self.clone(),
            HcpTerm::New(x, ty, p) => {
                let x2 = bind(x, used);
                HcpTerm::new_(
                    x2.clone(),
                    ty.clone(),
                    p.substitute(&x2, x).freshen_with(used),
                )
            }
            HcpTerm::Par(p, q) => {
                let p = p.freshen_with(used);
                HcpTerm::par(p, q.freshen_with(used))
            }
            HcpTerm::Out(x, y, p) => {
                let y2 = bind(y, used);
                HcpTerm::out(
                    x.clone(),
                    y2.clone(),
                    p.substitute(&y2, y).freshen_with(used),
                )
            }
            HcpTerm::In(x, y, p) => {
                let y2 = bind(y, used);
                HcpTerm::input(
                    x.clone(),
                    y2.clone(),
                    p.substitute(&y2, y).freshen_with(used),
                )
            }
            HcpTerm::OutUnit(x, p) => HcpTerm::out_unit(x.clone(), p.freshen_with(used)),
            HcpTerm::InUnit(x, p) => HcpTerm::in_unit(x.clone(), p.freshen_with(used)),
            HcpTerm::Inl(x, p) => HcpTerm::inl(x.clone(), p.freshen_with(used)),
            HcpTerm::Inr(x, p) => HcpTerm::inr(x.clone(), p.freshen_with(used)),
            HcpTerm::Case(x, p, q) => {
                let p = p.freshen_with(used);
                HcpTerm::case(x.clone(), p, q.freshen_with(used))
            }
        }
    }

    /// Binder-indexed form; see [`crate::cp::CpTerm::canonical`].
    pub fn canonical(&self) -> HcpTerm {
        let mut next = 0;
        self.canonical_with(&mut next)
    }

    fn canonical_with(&self, next: &mut usize) -> HcpTerm {
        let mut bind = || {
            let n = Name::indexed(*next);
            *next += 1;
            n
        };
        match self {
            HcpTerm::Link(..) | HcpTerm::Inert | HcpTerm::Absurd(_) => self.clone(),
            HcpTerm::New(x, ty, p) => {
                let n = bind();
                HcpTerm::new_(
                    n.clone(),
                    ty.clone(),
                    p.substitute(&n, x).canonical_with(next),
                )
            }
            HcpTerm::Par(p, q) => {
                let p = p.canonical_with(next);
                HcpTerm::par(p, q.canonical_with(next))
            }
            HcpTerm::Out(x, y, p) => {
                let n = bind();
                HcpTerm::out(
                    x.clone(),
                    n.clone(),
                    p.substitute(&n, y).canonical_with(next),
                )
            }
            HcpTerm::In(x, y, p) => {
                let n = bind();
                HcpTerm::input(
                    x.clone(),
                    n.clone(),
                    p.substitute(&n, y).canonical_with(next),
                )
            }
            HcpTerm::OutUnit(x, p) => HcpTerm::out_unit(x.clone(), p.canonical_with(next)),
            HcpTerm::InUnit(x, p) => HcpTerm::in_unit(x.clone(), p.canonical_with(next)),
            HcpTerm::Inl(x, p) => HcpTerm::inl(x.clone(), p.canonical_with(next)),
            HcpTerm::Inr(x, p) => HcpTerm::inr(x.clone(), p.canonical_with(next)),
            HcpTerm::Case(x, p, q) => {
                let p = p.canonical_with(next);
                HcpTerm::case(x.clone(), p, q.canonical_with(next))
            }
        }
    }

    pub fn alpha_eq(&self, other: &HcpTerm) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn acts_on(&self) -> Vec<Name> {
        match self {
            HcpTerm::Link(x, y) => vec![x.clone(), y.clone()],
            HcpTerm::Inert | HcpTerm::New(..) | HcpTerm::Par(..) => vec![],
            HcpTerm::Out(x, ..)
            | HcpTerm::In(x, ..)
            | HcpTerm::OutUnit(x, _)
            | HcpTerm::InUnit(x, _)
            | HcpTerm::Inl(x, _)
            | HcpTerm::Inr(x, _)
            | HcpTerm::Case(x, ..)
            | HcpTerm::Absurd(x) => vec![x.clone()],
        }
    }

    pub fn size(&self) -> usize {
        match self {
            HcpTerm::Link(..) | HcpTerm::Inert | HcpTerm::Absurd(_) => 1,
            HcpTerm::Par(p, q) | HcpTerm::Case(_, p, q) => 1 + p.size() + q.size(),
            HcpTerm::New(_, _, p)
            | HcpTerm::Out(_, _, p)
            | HcpTerm::In(_, _, p)
            | HcpTerm::OutUnit(_, p)
            | HcpTerm::InUnit(_, p)
            | HcpTerm::Inl(_, p)
            | HcpTerm::Inr(_, p) => 1 + p.size(),
        }
    }

    /// See [`crate::cp::CpTerm::absorbs`].
    pub fn absorbs(&self) -> bool {
        match self {
            HcpTerm::Absurd(_) => true,
            HcpTerm::Link(..) | HcpTerm::Inert => false,
            HcpTerm::Par(p, q) => p.absorbs() || q.absorbs(),
            HcpTerm::Case(_, p, q) => p.absorbs() && q.absorbs(),
            HcpTerm::New(_, _, p)
            | HcpTerm::Out(_, _, p)
            | HcpTerm::In(_, _, p)
            | HcpTerm::OutUnit(_, p)
            | HcpTerm::InUnit(_, p)
            | HcpTerm::Inl(_, p)
            | HcpTerm::Inr(_, p) => p.absorbs(),
        }
    }

    /// Sizes of all restriction annotations in the term.
    pub fn cut_sizes(&self, out: &mut Vec<usize>) {
        match self {
            HcpTerm::Link(..) | HcpTerm::Inert | HcpTerm::Absurd(_) => {}
            HcpTerm::New(_, ty, p) => {
                out.push(ty.size());
                p.cut_sizes(out);
            }
            HcpTerm::Par(p, q) | HcpTerm::Case(_, p, q) => {
                p.cut_sizes(out);
                q.cut_sizes(out);
            }
            HcpTerm::Out(_, _, p)
            | HcpTerm::In(_, _, p)
            | HcpTerm::OutUnit(_, p)
            | HcpTerm::InUnit(_, p)
            | HcpTerm::Inl(_, p)
            | HcpTerm::Inr(_, p) => p.cut_sizes(out),
        }
    }
}

impl FreeNames for Box<HcpTerm> {
    fn has_free(&self, name: &Name) -> bool {
        self.is_free(name)
    }
}

impl FreeNames for HcpTerm {
    fn has_free(&self, name: &Name) -> bool {
        self.is_free(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_binds_both_endpoints() {
        let t = HcpTerm::new_(
            "x",
            Type::Bot,
            HcpTerm::par(
                HcpTerm::in_unit("x", HcpTerm::out_unit("w", HcpTerm::Inert)),
                HcpTerm::out_unit("x", HcpTerm::Inert),
            ),
        );
        assert_eq!(t.free_names(), [Name::new("w")].into());
    }

    #[test]
    fn par_all_nests_to_the_right() {
        let a = HcpTerm::absurd("a");
        let b = HcpTerm::absurd("b");
        let c = HcpTerm::absurd("c");
        assert_eq!(
            HcpTerm::par_all(vec![a.clone(), b.clone(), c.clone()]),
            HcpTerm::par(a, HcpTerm::par(b, c))
        );
        assert_eq!(HcpTerm::par_all(vec![]), HcpTerm::Inert);
    }

    #[test]
    fn substitution_renames_capturing_binder() {
        let t = HcpTerm::out(
            "x",
            "w",
            HcpTerm::par(HcpTerm::link("w", "z"), HcpTerm::Inert),
        );
        let s = t.substitute(&Name::new("w"), &Name::new("z"));
        assert!(s.alpha_eq(&HcpTerm::out(
            "x",
            "v",
            HcpTerm::par(HcpTerm::link("v", "w"), HcpTerm::Inert)
        )));
    }
}
