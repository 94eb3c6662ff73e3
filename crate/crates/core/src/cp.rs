//! Terms of Classical Processes.

use std::collections::{BTreeMap, BTreeSet};

use crate::name::Name;
use crate::types::Type;

/// A CP process term.
///
/// In `Cut(x, A, P, Q)` the name `x` is bound in both branches and `A` is the
/// type of the endpoint used by `P` (so `Q` sees `x : A^⊥`). In
/// `Send(x, y, P, Q)` the name `y` is bound in `P` only, and `Q` continues on
/// `x`. In `Recv(x, y, P)` the name `y` is bound in `P`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CpTerm {
    Link(Name, Name),
    Cut(Name, Type, Box<CpTerm>, Box<CpTerm>),
    Send(Name, Name, Box<CpTerm>, Box<CpTerm>),
    Recv(Name, Name, Box<CpTerm>),
    Halt(Name),
    Wait(Name, Box<CpTerm>),
    Inl(Name, Box<CpTerm>),
    Inr(Name, Box<CpTerm>),
    Case(Name, Box<CpTerm>, Box<CpTerm>),
    Absurd(Name),
}

pub(crate) type Renaming = BTreeMap<Name, Name>;

impl CpTerm {
    pub fn link(x: impl Into<Name>, y: impl Into<Name>) -> CpTerm {
        CpTerm::Link(x.into(), y.into())
    }

    pub fn cut(x: impl Into<Name>, ty: Type, p: CpTerm, q: CpTerm) -> CpTerm {
        CpTerm::Cut(x.into(), ty, Box::new(p), Box::new(q))
    }

    pub fn send(x: impl Into<Name>, y: impl Into<Name>, p: CpTerm, q: CpTerm) -> CpTerm {
        CpTerm::Send(x.into(), y.into(), Box::new(p), Box::new(q))
    }

    pub fn recv(x: impl Into<Name>, y: impl Into<Name>, p: CpTerm) -> CpTerm {
        CpTerm::Recv(x.into(), y.into(), Box::new(p))
    }

    pub fn halt(x: impl Into<Name>) -> CpTerm {
        CpTerm::Halt(x.into())
    }

    pub fn wait(x: impl Into<Name>, p: CpTerm) -> CpTerm {
        CpTerm::Wait(x.into(), Box::new(p))
    }

    pub fn inl(x: impl Into<Name>, p: CpTerm) -> CpTerm {
        CpTerm::Inl(x.into(), Box::new(p))
    }

    pub fn inr(x: impl Into<Name>, p: CpTerm) -> CpTerm {
        CpTerm::Inr(x.into(), Box::new(p))
    }

    pub fn case(x: impl Into<Name>, p: CpTerm, q: CpTerm) -> CpTerm {
        CpTerm::Case(x.into(), Box::new(p), Box::new(q))
    }

    pub fn absurd(x: impl Into<Name>) -> CpTerm {
        CpTerm::Absurd(x.into())
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    pub fn is_free(&self, name: &Name) -> bool {
        match self {
            CpTerm::Link(x, y) => x == name || y == name,
            CpTerm::Cut(x, _, p, q) => x != name && (p.is_free(name) || q.is_free(name)),
            CpTerm::Send(x, y, p, q) => {
                x == name || (y != name && p.is_free(name)) || q.is_free(name)
            }
            CpTerm::Recv(x, y, p) => x == name || (y != name && p.is_free(name)),
            CpTerm::Halt(x) | CpTerm::Absurd(x) => x == name,
            CpTerm::Wait(x, p) | CpTerm::Inl(x, p) | CpTerm::Inr(x, p) => {
                x == name || p.is_free(name)
            }
            CpTerm::Case(x, p, q) => x == name || p.is_free(name) || q.is_free(name),
        }
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            CpTerm::Link(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            CpTerm::Cut(x, _, p, q) => {
                let mut inner = p.free_names();
                inner.extend(q.free_names());
                inner.remove(x);
                out.extend(inner);
            }
            CpTerm::Send(x, y, p, q) => {
                out.insert(x.clone());
                let mut inner = p.free_names();
                inner.remove(y);
                out.extend(inner);
                q.collect_free(out);
            }
            CpTerm::Recv(x, y, p) => {
                out.insert(x.clone());
                let mut inner = p.free_names();
                inner.remove(y);
                out.extend(inner);
            }
            CpTerm::Halt(x) | CpTerm::Absurd(x) => {
                out.insert(x.clone());
            }
            CpTerm::Wait(x, p) | CpTerm::Inl(x, p) | CpTerm::Inr(x, p) => {
                out.insert(x.clone());
                p.collect_free(out);
            }
            CpTerm::Case(x, p, q) => {
                out.insert(x.clone());
                p.collect_free(out);
                q.collect_free(out);
            }
        }
    }

    /// Every name occurring in the term, free or bound.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |n| {
            out.insert(n.clone());
        });
        out
    }

    fn visit_names(&self, f: &mut impl FnMut(&Name)) {
        match self {
            CpTerm::Link(x, y) => {
                f(x);
                f(y);
            }
            CpTerm::Cut(x, _, p, q) => {
                f(x);
                p.visit_names(f);
                q.visit_names(f);
            }
            CpTerm::Send(x, y, p, q) => {
                f(x);
                f(y);
                p.visit_names(f);
                q.visit_names(f);
            }
            CpTerm::Recv(x, y, p) => {
                f(x);
                f(y);
                p.visit_names(f);
            }
            CpTerm::Halt(x) | CpTerm::Absurd(x) => f(x),
            CpTerm::Wait(x, p) | CpTerm::Inl(x, p) | CpTerm::Inr(x, p) => {
                f(x);
                p.visit_names(f);
            }
            CpTerm::Case(x, p, q) => {
                f(x);
                p.visit_names(f);
                q.visit_names(f);
            }
        }
    }

    /// `self{w/x}`: replaces free occurrences of `x` by `w`, renaming binders
    /// that would capture `w`.
    pub fn substitute(&self, w: &Name, x: &Name) -> CpTerm {
        let mut map = Renaming::new();
        map.insert(x.clone(), w.clone());
        self.rename(&map)
    }

    /// Simultaneous capture-avoiding renaming of free names.
    pub(crate) fn rename(&self, map: &Renaming) -> CpTerm {
        if map.is_empty() {
            return self.clone();
        }
        let r = |n: &Name| map.get(n).cloned().unwrap_or_else(|| n.clone());
        match self {
            CpTerm::Link(x, y) => CpTerm::Link(r(x), r(y)),
            CpTerm::Cut(x, ty, p, q) => {
                let (x2, inner) = enter_binder(x, &[p, q], map);
                CpTerm::cut(x2, ty.clone(), p.rename(&inner), q.rename(&inner))
            }
            CpTerm::Send(x, y, p, q) => {
                let (y2, inner) = enter_binder(y, &[p], map);
                CpTerm::send(r(x), y2, p.rename(&inner), q.rename(map))
            }
            CpTerm::Recv(x, y, p) => {
                let (y2, inner) = enter_binder(y, &[p], map);
                CpTerm::recv(r(x), y2, p.rename(&inner))
            }
            CpTerm::Halt(x) => CpTerm::Halt(r(x)),
            CpTerm::Absurd(x) => CpTerm::Absurd(r(x)),
            CpTerm::Wait(x, p) => CpTerm::wait(r(x), p.rename(map)),
            CpTerm::Inl(x, p) => CpTerm::inl(r(x), p.rename(map)),
            CpTerm::Inr(x, p) => CpTerm::inr(r(x), p.rename(map)),
            CpTerm::Case(x, p, q) => CpTerm::case(r(x), p.rename(map), q.rename(map)),
        }
    }

    /// Renames binders so that they are pairwise distinct and distinct from
    /// every free name and every name in `avoid`. Binders already satisfying
    /// this keep their surface name.
    pub fn freshen(&self, avoid: &BTreeSet<Name>) -> CpTerm {
        let mut used: BTreeSet<Name> = avoid.clone();
        used.extend(self.free_names());
        self.freshen_with(&mut used)
    }

    pub(crate) fn freshen_with(&self, used: &mut BTreeSet<Name>) -> CpTerm {
        let bind = |x: &Name, used: &mut BTreeSet<Name>| {
            let x2 = x.fresh(|n| used.contains(n));
            used.insert(x2.clone());
            x2
        };
        match self {
            CpTerm::Link(..) | CpTerm::Halt(_) | CpTerm::Absurd(_) => self.clone(),
            CpTerm::Cut(x, ty, p, q) => {
                let x2 = bind(x, used);
                let p = p.substitute(&x2, x).freshen_with(used);
                let q = q.substitute(&x2, x).freshen_with(used);
                CpTerm::cut(x2, ty.clone(), p, q)
            }
            CpTerm::Send(x, y, p, q) => {
                let y2 = bind(y, used);
                let p = p.substitute(&y2, y).freshen_with(used);
                let q = q.freshen_with(used);
                CpTerm::send(x.clone(), y2, p, q)
            }
            CpTerm::Recv(x, y, p) => {
                let y2 = bind(y, used);
                let p = p.substitute(&y2, y).freshen_with(used);
                CpTerm::recv(x.clone(), y2, p)
            }
            CpTerm::Wait(x, p) => CpTerm::wait(x.clone(), p.freshen_with(used)),
            CpTerm::Inl(x, p) => CpTerm::inl(x.clone(), p.freshen_with(used)),
            CpTerm::Inr(x, p) => CpTerm::inr(x.clone(), p.freshen_with(used)),
            CpTerm::Case(x, p, q) => {
                let p = p.freshen_with(used);
                let q = q.freshen_with(used);
                CpTerm::case(x.clone(), p, q)
            }
        }
    }

    /// The binder-indexed form: every binder is renamed to `#k`, with `k`
    /// counted in pre-order. α-equivalent terms have identical canonical forms.
    pub fn canonical(&self) -> CpTerm {
        let mut next = 0;
        self.canonical_with(&mut next)
    }

    fn canonical_with(&self, next: &mut usize) -> CpTerm {
        let bind = |x: &Name, next: &mut usize| {
            let n = Name::indexed(*next);
            *next += 1;
            (n, x.clone())
        };
        match self {
            CpTerm::Link(..) | CpTerm::Halt(_) | CpTerm::Absurd(_) => self.clone(),
            CpTerm::Cut(x, ty, p, q) => {
                let (n, x) = bind(x, next);
                let p = p.substitute(&n, &x).canonical_with(next);
                let q = q.substitute(&n, &x).canonical_with(next);
                CpTerm::cut(n, ty.clone(), p, q)
            }
            CpTerm::Send(x, y, p, q) => {
                let (n, y) = bind(y, next);
                let p = p.substitute(&n, &y).canonical_with(next);
                let q = q.canonical_with(next);
                CpTerm::send(x.clone(), n, p, q)
            }
            CpTerm::Recv(x, y, p) => {
                let (n, y) = bind(y, next);
                let p = p.substitute(&n, &y).canonical_with(next);
                CpTerm::recv(x.clone(), n, p)
            }
            CpTerm::Wait(x, p) => CpTerm::wait(x.clone(), p.canonical_with(next)),
            CpTerm::Inl(x, p) => CpTerm::inl(x.clone(), p.canonical_with(next)),
            CpTerm::Inr(x, p) => CpTerm::inr(x.clone(), p.canonical_with(next)),
            CpTerm::Case(x, p, q) => {
                let p = p.canonical_with(next);
                CpTerm::case(x.clone(), p, q.canonical_with(next))
            }
        }
    }

    pub fn alpha_eq(&self, other: &CpTerm) -> bool {
        self.canonical() == other.canonical()
    }

    /// Names the outermost constructor acts on.
    pub fn acts_on(&self) -> Vec<Name> {
        match self {
            CpTerm::Link(x, y) => vec![x.clone(), y.clone()],
            CpTerm::Cut(..) => vec![],
            CpTerm::Send(x, ..)
            | CpTerm::Recv(x, ..)
            | CpTerm::Halt(x)
            | CpTerm::Wait(x, _)
            | CpTerm::Inl(x, _)
            | CpTerm::Inr(x, _)
            | CpTerm::Case(x, ..)
            | CpTerm::Absurd(x) => vec![x.clone()],
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            CpTerm::Link(..) | CpTerm::Halt(_) | CpTerm::Absurd(_) => 1,
            CpTerm::Cut(_, _, p, q) | CpTerm::Send(_, _, p, q) | CpTerm::Case(_, p, q) => {
                1 + p.size() + q.size()
            }
            CpTerm::Recv(_, _, p) | CpTerm::Wait(_, p) | CpTerm::Inl(_, p) | CpTerm::Inr(_, p) => {
                1 + p.size()
            }
        }
    }

    /// True when the term can type extra unused names through a `⊤` leaf
    /// reachable from its root (both branches of an offer must absorb).
    pub fn absorbs(&self) -> bool {
        match self {
            CpTerm::Absurd(_) => true,
            CpTerm::Link(..) | CpTerm::Halt(_) => false,
            CpTerm::Cut(_, _, p, q) | CpTerm::Send(_, _, p, q) => p.absorbs() || q.absorbs(),
            CpTerm::Case(_, p, q) => p.absorbs() && q.absorbs(),
            CpTerm::Recv(_, _, p) | CpTerm::Wait(_, p) | CpTerm::Inl(_, p) | CpTerm::Inr(_, p) => {
                p.absorbs()
            }
        }
    }

    /// Sizes of all cut annotations in the term.
    pub fn cut_sizes(&self, out: &mut Vec<usize>) {
        match self {
            CpTerm::Link(..) | CpTerm::Halt(_) | CpTerm::Absurd(_) => {}
            CpTerm::Cut(_, ty, p, q) => {
                out.push(ty.size());
                p.cut_sizes(out);
                q.cut_sizes(out);
            }
            CpTerm::Send(_, _, p, q) | CpTerm::Case(_, p, q) => {
                p.cut_sizes(out);
                q.cut_sizes(out);
            }
            CpTerm::Recv(_, _, p) | CpTerm::Wait(_, p) | CpTerm::Inl(_, p) | CpTerm::Inr(_, p) => {
                p.cut_sizes(out)
            }
        }
    }
}

/// Shared binder handling for capture-avoiding renaming: removes the binder
/// from the map and renames it when it would capture a substituted name.
pub(crate) fn enter_binder<T: FreeNames>(
    x: &Name,
    bodies: &[&T],
    map: &Renaming,
) -> (Name, Renaming) {
    let mut inner = map.clone();
    inner.remove(x);
    let captures = inner
        .iter()
        .any(|(k, v)| v == x && bodies.iter().any(|b| b.has_free(k)));
    if !captures {
        return (x.clone(), inner);
    }
    let x2 = x.fresh(|n| {
        inner.contains_key(n)
            || inner.values().any(|v| v == n)
            || bodies.iter().any(|b| b.has_free(n))
    });
    inner.insert(x.clone(), x2.clone());
    (x2, inner)
}

pub(crate) trait FreeNames {
    fn has_free(&self, name: &Name) -> bool;
}

impl FreeNames for CpTerm {
    fn has_free(&self, name: &Name) -> bool {
        self.is_free(name)
    }
}

impl FreeNames for Box<CpTerm> {
    fn has_free(&self, name: &Name) -> bool {
        self.is_free(name)
    }
}
