use crate::bridge::translate_typed;
use crate::cp::CpTerm;
use crate::env::Env;
use crate::hcp::HcpTerm;
use crate::typecheck::{CpDerivation, HcpDerivation, Rule, Tree};
use crate::types::Type;

/// A one-rule derivation of exactly `env`, when there is one.
pub(crate) fn leaf_for(env: &Env) -> Option<CpDerivation> {
    let bindings: Vec<_> = env.iter().collect();
    let (rule, term) = if let Some((x, _)) = bindings.iter().find(|(_, t)| **t == Type::Top) {
        (Rule::Top, CpTerm::absurd((*x).clone()))
    } else {
        match bindings[..] {
            [(x, Type::One)] => (Rule::One, CpTerm::halt(x.clone())),
            [(x, a), (y, b)] if *b == a.dual() => (Rule::Ax, CpTerm::link(x.clone(), y.clone())),
            _ => return None,
        }
    };
    Some(CpDerivation {
        rule,
        term,
        env: env.clone(),
        premises: vec![],
    })
}

fn rebuild_cp(t: &CpTerm, kids: &[CpDerivation]) -> CpTerm {
    let k = |i: usize| kids[i].term.clone();
    match t {
        CpTerm::Cut(x, a, _, _) => CpTerm::cut(x.clone(), a.clone(), k(0), k(1)),
        CpTerm::Send(x, y, _, _) => CpTerm::send(x.clone(), y.clone(), k(0), k(1)),
        CpTerm::Recv(x, y, _) => CpTerm::recv(x.clone(), y.clone(), k(0)),
        CpTerm::Wait(x, _) => CpTerm::wait(x.clone(), k(0)),
        CpTerm::Inl(x, _) => CpTerm::inl(x.clone(), k(0)),
        CpTerm::Inr(x, _) => CpTerm::inr(x.clone(), k(0)),
        CpTerm::Case(x, _, _) => CpTerm::case(x.clone(), k(0), k(1)),
        CpTerm::Link(..) | CpTerm::Halt(_) | CpTerm::Absurd(_) => t.clone(),
    }
}

fn rebuild_hcp(t: &HcpTerm, kids: &[HcpDerivation]) -> HcpTerm {
    let k = |i: usize| kids[i].term.clone();
    match t {
        HcpTerm::New(x, a, _) => HcpTerm::new_(x.clone(), a.clone(), k(0)),
        HcpTerm::Par(..) => HcpTerm::par(k(0), k(1)),
        HcpTerm::Out(x, y, _) => HcpTerm::out(x.clone(), y.clone(), k(0)),
        HcpTerm::In(x, y, _) => HcpTerm::input(x.clone(), y.clone(), k(0)),
        HcpTerm::OutUnit(x, _) => HcpTerm::out_unit(x.clone(), k(0)),
        HcpTerm::InUnit(x, _) => HcpTerm::in_unit(x.clone(), k(0)),
        HcpTerm::Inl(x, _) => HcpTerm::inl(x.clone(), k(0)),
        HcpTerm::Inr(x, _) => HcpTerm::inr(x.clone(), k(0)),
        HcpTerm::Case(x, _, _) => HcpTerm::case(x.clone(), k(0), k(1)),
        HcpTerm::Link(..) | HcpTerm::Inert | HcpTerm::Absurd(_) => t.clone(),
    }
}

/// Node paths in preorder.
fn paths<T: Tree>(d: &T) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for (i, c) in d.children().into_iter().enumerate() {
        out.extend(paths(c).into_iter().map(|mut p| {
            p.insert(0, i);
            p
        }));
    }
    out
}

fn replace_cp(d: &CpDerivation, path: &[usize], with: &CpDerivation) -> CpDerivation {
    match path.split_first() {
        None => with.clone(),
        Some((&i, rest)) => {
            let mut premises = d.premises.clone();
            premises[i] = replace_cp(&premises[i], rest, with);
            CpDerivation {
                term: rebuild_cp(&d.term, &premises),
                premises,
                ..d.clone()
            }
        }
    }
}

fn replace_hcp(d: &HcpDerivation, path: &[usize], with: &HcpDerivation) -> HcpDerivation {
    match path.split_first() {
        None => with.clone(),
        Some((&i, rest)) => {
            let mut premises = d.premises.clone();
            premises[i] = replace_hcp(&premises[i], rest, with);
            HcpDerivation {
                term: rebuild_hcp(&d.term, &premises),
                premises,
                ..d.clone()
            }
        }
    }
}

fn node_at<'a, T: Tree>(d: &'a T, path: &[usize]) -> &'a T {
    path.iter().fold(d, |n, &i| n.children()[i])
}

/// Greedily replaces subderivations by leaves while `fails` still holds.
pub fn shrink_cp(d: &CpDerivation, fails: impl Fn(&CpDerivation) -> bool) -> CpDerivation {
    let mut cur = d.clone();
    'outer: loop {
        for path in paths(&cur) {
            let sub = node_at(&cur, &path);
            let Some(leaf) = leaf_for(&sub.env) else {
                continue;
            };
            if sub.count_nodes() <= 1 {
                continue;
            }
            let candidate = replace_cp(&cur, &path, &leaf);
            if fails(&candidate) {
                cur = candidate;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// As `shrink_cp`, replacing single-sequent subderivations by the image of a
/// CP leaf.
pub fn shrink_hcp(d: &HcpDerivation, fails: impl Fn(&HcpDerivation) -> bool) -> HcpDerivation {
    let mut cur = d.clone();
    'outer: loop {
        for path in paths(&cur) {
            let sub = node_at(&cur, &path);
            if sub.hyper.len() != 1 || sub.count_nodes() <= 2 {
                continue;
            }
            let Some(leaf) = leaf_for(&sub.hyper.envs()[0]).and_then(|l| translate_typed(&l).ok())
            else {
                continue;
            };
            let candidate = replace_hcp(&cur, &path, &leaf);
            if fails(&candidate) {
                cur = candidate;
                continue 'outer;
            }
        }
        return cur;
    }
}
