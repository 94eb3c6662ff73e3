use std::collections::{BTreeMap, BTreeSet};

use super::prenex::{prenex_cp_raw, prenex_hcp_raw};
use crate::cp::CpTerm;
use crate::hcp::HcpTerm;
use crate::name::Name;
use crate::types::Type;

/// A restriction not yet matched with one on the other side.
#[derive(Clone, Debug)]
struct Pending {
    /// Type at this endpoint.
    ty: Type,
    /// The other endpoint's name (CP only; HCP uses one name for both).
    partner: Option<Name>,
}

/// Matching state: a partial bijection between the bound names of the two
/// terms, plus the restrictions still free to be paired.
#[derive(Clone, Debug, Default)]
struct State {
    fwd: BTreeMap<Name, Name>,
    bwd: BTreeMap<Name, Name>,
    left: BTreeMap<Name, Pending>,
    right: BTreeMap<Name, Pending>,
}

type K<'a> = &'a mut dyn FnMut(State) -> bool;

impl State {
    fn bind(mut self, a: &Name, b: &Name) -> State {
        self.fwd.insert(a.clone(), b.clone());
        self.bwd.insert(b.clone(), a.clone());
        self
    }

    /// Whether `a` (left term) and `b` (right term) denote the same channel,
    /// pairing two pending restrictions if needed.
    fn names(&self, a: &Name, b: &Name, up_to_dual: bool) -> Option<State> {
        if let Some(b2) = self.fwd.get(a) {
            return (b2 == b).then(|| self.clone());
        }
        if self.bwd.contains_key(b) {
            return None;
        }
        match (self.left.get(a), self.right.get(b)) {
            (Some(pa), Some(pb)) => {
                let ok = if up_to_dual {
                    pa.ty.same_up_to_duality(&pb.ty)
                } else {
                    pa.ty == pb.ty
                };
                if !ok {
                    return None;
                }
                let mut st = self.clone();
                st.left.remove(a);
                st.right.remove(b);
                st = st.bind(a, b);
                if let (Some(a2), Some(b2)) = (&pa.partner, &pb.partner) {
                    st.left.remove(a2);
                    st.right.remove(b2);
                    st = st.bind(a2, b2);
                }
                Some(st)
            }
            (None, None) => (a == b).then(|| self.clone()),
            _ => None,
        }
    }

    /// Restrictions of one level that no component uses must agree as a
    /// multiset of types.
    fn close_level(mut self, left: &[Name], right: &[Name], up_to_dual: bool) -> Option<State> {
        let norm = |t: &Type| {
            if up_to_dual {
                t.clone().min(t.dual())
            } else {
                t.clone()
            }
        };
        let mut tl: Vec<Type> = Vec::new();
        for n in left {
            if let Some(p) = self.left.remove(n) {
                if p.partner.is_none() || n.as_str().ends_with('~') {
                    tl.push(norm(&p.ty));
                }
            }
        }
        let mut tr: Vec<Type> = Vec::new();
        for n in right {
            if let Some(p) = self.right.remove(n) {
                if p.partner.is_none() || n.as_str().ends_with('~') {
                    tr.push(norm(&p.ty));
                }
            }
        }
        tl.sort();
        tr.sort();
        (tl == tr).then_some(self)
    }
}

/// Matches `left[0..]` against unused members of `right`, calling `k` on
/// every complete matching until it accepts one.
fn match_all<T>(
    left: &[T],
    right: &[T],
    used: Vec<bool>,
    st: State,
    comp: &dyn Fn(&T, &T, State, K) -> bool,
    k: K,
) -> bool {
    let Some((first, rest)) = left.split_first() else {
        return k(st);
    };
    for j in 0..right.len() {
        if used[j] {
            continue;
        }
        let mut taken = used.clone();
        taken[j] = true;
        if comp(first, &right[j], st.clone(), &mut |s| {
            match_all(rest, right, taken.clone(), s, comp, k)
        }) {
            return true;
        }
    }
    false
}

pub fn equiv_cp(t1: &CpTerm, t2: &CpTerm) -> bool {
    if t1.free_names() != t2.free_names() {
        return false;
    }
    let fv: BTreeSet<Name> = t1.free_names();
    let a = t1.freshen(&fv);
    let mut avoid = fv;
    avoid.extend(a.all_names());
    let b = t2.freshen(&avoid);
    cp_term(&a, &b, State::default(), &mut |_| true)
}

fn cp_term(a: &CpTerm, b: &CpTerm, st: State, k: K) -> bool {
    let (pa, pb) = (prenex_cp_raw(a), prenex_cp_raw(b));
    if pa.binders.len() != pb.binders.len() || pa.components.len() != pb.components.len() {
        return false;
    }
    let mut st = st;
    let (mut ln, mut rn) = (Vec::new(), Vec::new());
    for bd in &pa.binders {
        st.left.insert(
            bd.pos.clone(),
            Pending {
                ty: bd.ty.clone(),
                partner: Some(bd.neg.clone()),
            },
        );
        st.left.insert(
            bd.neg.clone(),
            Pending {
                ty: bd.ty.dual(),
                partner: Some(bd.pos.clone()),
            },
        );
        ln.extend([bd.pos.clone(), bd.neg.clone()]);
    }
    for bd in &pb.binders {
        st.right.insert(
            bd.pos.clone(),
            Pending {
                ty: bd.ty.clone(),
                partner: Some(bd.neg.clone()),
            },
        );
        st.right.insert(
            bd.neg.clone(),
            Pending {
                ty: bd.ty.dual(),
                partner: Some(bd.pos.clone()),
            },
        );
        rn.extend([bd.pos.clone(), bd.neg.clone()]);
    }
    let used = vec![false; pb.components.len()];
    match_all(
        &pa.components,
        &pb.components,
        used,
        st,
        &cp_comp,
        &mut |s| match s.close_level(&ln, &rn, true) {
            Some(s) => k(s),
            None => false,
        },
    )
}

fn cp_comp(a: &CpTerm, b: &CpTerm, st: State, k: K) -> bool {
    let names = |st: &State, x: &Name, y: &Name| st.names(x, y, false);
    match (a, b) {
        (CpTerm::Link(x, y), CpTerm::Link(u, v)) => {
            let straight = names(&st, x, u).and_then(|s| names(&s, y, v));
            if straight.is_some_and(&mut *k) {
                return true;
            }
            names(&st, x, v)
                .and_then(|s| names(&s, y, u))
                .is_some_and(k)
        }
        (CpTerm::Send(x, y, p, q), CpTerm::Send(u, v, r, s)) => match names(&st, x, u) {
            Some(st) => cp_term(p, r, st.bind(y, v), &mut |st2| cp_term(q, s, st2, k)),
            None => false,
        },
        (CpTerm::Recv(x, y, p), CpTerm::Recv(u, v, r)) => match names(&st, x, u) {
            Some(st) => cp_term(p, r, st.bind(y, v), k),
            None => false,
        },
        (CpTerm::Halt(x), CpTerm::Halt(u)) | (CpTerm::Absurd(x), CpTerm::Absurd(u)) => {
            names(&st, x, u).is_some_and(k)
        }
        (CpTerm::Wait(x, p), CpTerm::Wait(u, r))
        | (CpTerm::Inl(x, p), CpTerm::Inl(u, r))
        | (CpTerm::Inr(x, p), CpTerm::Inr(u, r)) => match names(&st, x, u) {
            Some(st) => cp_term(p, r, st, k),
            None => false,
        },
        (CpTerm::Case(x, p, q), CpTerm::Case(u, r, s)) => match names(&st, x, u) {
            Some(st) => cp_term(p, r, st, &mut |st2| cp_term(q, s, st2, k)),
            None => false,
        },
        _ => false,
    }
}

pub fn equiv_hcp(t1: &HcpTerm, t2: &HcpTerm) -> bool {
    if t1.free_names() != t2.free_names() {
        return false;
    }
    let fv: BTreeSet<Name> = t1.free_names();
    let a = t1.freshen(&fv);
    let mut avoid = fv;
    avoid.extend(a.all_names());
    let b = t2.freshen(&avoid);
    hcp_term(&a, &b, State::default(), &mut |_| true)
}

fn hcp_term(a: &HcpTerm, b: &HcpTerm, st: State, k: K) -> bool {
    let (pa, pb) = (prenex_hcp_raw(a), prenex_hcp_raw(b));
    if pa.binders.len() != pb.binders.len() || pa.components.len() != pb.components.len() {
        return false;
    }
    let mut st = st;
    for bd in &pa.binders {
        st.left.insert(
            bd.name.clone(),
            Pending {
                ty: bd.ty.clone(),
                partner: None,
            },
        );
    }
    for bd in &pb.binders {
        st.right.insert(
            bd.name.clone(),
            Pending {
                ty: bd.ty.clone(),
                partner: None,
            },
        );
    }
    let ln: Vec<Name> = pa.binders.iter().map(|b| b.name.clone()).collect();
    let rn: Vec<Name> = pb.binders.iter().map(|b| b.name.clone()).collect();
    let used = vec![false; pb.components.len()];
    match_all(
        &pa.components,
        &pb.components,
        used,
        st,
        &hcp_comp,
        &mut |s| match s.close_level(&ln, &rn, true) {
            Some(s) => k(s),
            None => false,
        },
    )
}

fn hcp_comp(a: &HcpTerm, b: &HcpTerm, st: State, k: K) -> bool {
    let names = |st: &State, x: &Name, y: &Name| st.names(x, y, true);
    match (a, b) {
        (HcpTerm::Link(x, y), HcpTerm::Link(u, v)) => {
            let straight = names(&st, x, u).and_then(|s| names(&s, y, v));
            if straight.is_some_and(&mut *k) {
                return true;
            }
            names(&st, x, v)
                .and_then(|s| names(&s, y, u))
                .is_some_and(k)
        }
        (HcpTerm::Out(x, y, p), HcpTerm::Out(u, v, r))
        | (HcpTerm::In(x, y, p), HcpTerm::In(u, v, r)) => match names(&st, x, u) {
            Some(st) => hcp_term(p, r, st.bind(y, v), k),
            None => false,
        },
        (HcpTerm::Absurd(x), HcpTerm::Absurd(u)) => names(&st, x, u).is_some_and(k),
        (HcpTerm::OutUnit(x, p), HcpTerm::OutUnit(u, r))
        | (HcpTerm::InUnit(x, p), HcpTerm::InUnit(u, r))
        | (HcpTerm::Inl(x, p), HcpTerm::Inl(u, r))
        | (HcpTerm::Inr(x, p), HcpTerm::Inr(u, r)) => match names(&st, x, u) {
            Some(st) => hcp_term(p, r, st, k),
            None => false,
        },
        (HcpTerm::Case(x, p, q), HcpTerm::Case(u, r, s)) => match names(&st, x, u) {
            Some(st) => hcp_term(p, r, st, &mut |st2| hcp_term(q, s, st2, k)),
            None => false,
        },
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{parse_cp, parse_hcp};

    fn cp(s: &str) -> CpTerm {
        parse_cp(s).unwrap()
    }

    fn hcp(s: &str) -> HcpTerm {
        parse_hcp(s).unwrap()
    }

    #[test]
    fn links_are_symmetric() {
        assert!(equiv_cp(&cp("x<->y"), &cp("y<->x")));
        assert!(equiv_hcp(&hcp("x<->y"), &hcp("y<->x")));
        assert!(!equiv_cp(&cp("x<->y"), &cp("x<->z")));
    }

    #[test]
    fn mix_laws() {
        assert!(equiv_hcp(&hcp("(a[].0 | b[].0)"), &hcp("(b[].0 | a[].0)")));
        assert!(equiv_hcp(
            &hcp("((a[].0 | b[].0) | c().0)"),
            &hcp("(c().0 | a[].0 | b[].0)")
        ));
        assert!(equiv_hcp(&hcp("(a[].0 | 0)"), &hcp("a[].0")));
        assert!(!equiv_hcp(&hcp("(a[].0 | b[].0)"), &hcp("(a[].0 | a[].0)")));
    }

    #[test]
    fn restrictions_commute_and_extrude() {
        let l = hcp("new x:1. new y:bot. (x[].0 | y().a[].0 | x().y[].0)");
        let r = hcp("new y:1. (new z:bot. (z().y().a[].0 | z[].0))");
        assert!(!equiv_hcp(&l, &r));
        let r = hcp("new q:1. (q().y[].0 | new x:1. (x[].0 | q[].0) | 0)");
        let l = hcp("new y:bot. new x:1. (x[].0 | y().a[].0 | x().y[].0)");
        assert!(!equiv_hcp(&l, &r));
        let a = hcp("new x:1. (x[].0 | new y:bot. (y().a[].0 | x().y[].0))");
        let b = hcp("new y:1. new x:bot. ((x().y[].0 | y().a[].0) | x[].0)");
        assert!(equiv_hcp(&a, &b));
    }

    #[test]
    fn cut_commutes_with_annotation_flipped() {
        let a = cp("new x:1 (x[].0 | x().w[].0)");
        let b = cp("new z:bot (z().w[].0 | z[].0)");
        assert!(equiv_cp(&a, &b));
        let c = cp("new x:bot (x[].0 | x().w[].0)");
        assert!(!equiv_cp(&a, &c));
        let d = cp("new x:1 (x[].0 | x().v[].0)");
        assert!(!equiv_cp(&a, &d));
    }

    #[test]
    fn cuts_associate() {
        let a = cp("new x:1 (x[].0 | new y:1 (x().y[].0 | y().w[].0))");
        let b = cp("new y:1 (new x:1 (x[].0 | x().y[].0) | y().w[].0)");
        assert!(equiv_cp(&a, &b));
    }

    #[test]
    fn congruence_reaches_under_prefixes() {
        let a = cp("w(u).new x:1 (x[].0 | x().u<->w)");
        let b = cp("w(v).new x:bot (x().w<->v | x[].0)");
        assert!(equiv_cp(&a, &b));
    }
}
