use std::collections::HashSet;
use std::hash::Hash;

use thiserror::Error;

use crate::congruence::{rewrites_cp, rewrites_hcp};
use crate::cp::CpTerm;
use crate::env::HyperEnv;
use crate::hcp::HcpTerm;
use crate::name::Name;
use crate::reduction::{explore, Process, ReductionGraph};
use crate::typecheck::HcpDerivation;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("reduction graph exceeded the budget of {0} nodes")]
    BudgetExceeded(usize),
}

/// The full reduction graph of `t`, or an error when it has more than `cap`
/// ≡-classes.
pub fn reduction_graph<T: Process>(t: &T, cap: usize) -> Result<ReductionGraph<T>, OracleError> {
    let g = explore(t, cap);
    if g.complete {
        Ok(g)
    } else {
        Err(OracleError::BudgetExceeded(cap))
    }
}

fn ball<T: Clone + Eq + Hash>(
    t: &T,
    radius: usize,
    key: impl Fn(&T) -> T,
    step: impl Fn(&T) -> Vec<T>,
) -> HashSet<T> {
    let mut seen = HashSet::from([key(t)]);
    let mut frontier = vec![t.clone()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for u in &frontier {
            for v in step(u) {
                if seen.insert(key(&v)) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Whether `a` and `b` are joined by at most `2 * radius` single axiom
/// rewrites, searching from both ends. α-equivalent terms are identified.
pub fn bfs_equiv_cp(a: &CpTerm, b: &CpTerm, radius: usize) -> bool {
    let left = ball(a, radius, CpTerm::canonical, rewrites_cp);
    let right = ball(b, radius, CpTerm::canonical, rewrites_cp);
    !left.is_disjoint(&right)
}

pub fn bfs_equiv_hcp(a: &HcpTerm, b: &HcpTerm, radius: usize) -> bool {
    let left = ball(a, radius, HcpTerm::canonical, rewrites_hcp);
    let right = ball(b, radius, HcpTerm::canonical, rewrites_hcp);
    !left.is_disjoint(&right)
}

/// Term-level replay of the ⤋-rules, independent of the CP derivations that
/// `disentangle` builds: every prefix keeps only the parallel components
/// that mention its channels, and the rest float out beside it.
pub fn float_mixes(d: &HcpDerivation) -> HcpTerm {
    HcpTerm::par_all(components(d).into_iter().map(|(_, t)| t).collect())
}

type Component = (HyperEnv, HcpTerm);

fn mentions(c: &Component, names: &[&Name]) -> bool {
    names.iter().any(|n| c.0.position(n).is_some())
}

fn gather(parts: Vec<Component>, names: &[&Name]) -> (Vec<Component>, Vec<Component>) {
    parts.into_iter().partition(|c| mentions(c, names))
}

fn joined(parts: Vec<Component>) -> HcpTerm {
    HcpTerm::par_all(parts.into_iter().map(|c| c.1).collect())
}

/// The members of `h` left after removing those of every component in `rest`.
fn own_hyper(h: &HyperEnv, rest: &[Component]) -> HyperEnv {
    let mut envs = h.envs().to_vec();
    for c in rest {
        for e in c.0.envs() {
            if let Some(k) = envs.iter().position(|f| f == e) {
                envs.remove(k);
            }
        }
    }
    HyperEnv::from_envs(envs)
}

fn wrap(d: &HcpDerivation, mut rest: Vec<Component>, term: HcpTerm) -> Vec<Component> {
    let own = own_hyper(&d.hyper, &rest);
    rest.push((own, term));
    rest
}

fn components(d: &HcpDerivation) -> Vec<Component> {
    let sub = |k: usize| components(&d.premises[k]);
    match &d.term {
        HcpTerm::Inert => vec![],
        HcpTerm::Par(..) => {
            let mut parts = sub(0);
            parts.extend(sub(1));
            parts
        }
        HcpTerm::Link(..) | HcpTerm::Absurd(_) | HcpTerm::Case(..) => {
            vec![(d.hyper.clone(), d.term.clone())]
        }
        HcpTerm::New(x, a, _) => {
            let (inside, rest) = gather(sub(0), &[x]);
            wrap(d, rest, HcpTerm::new_(x.clone(), a.clone(), joined(inside)))
        }
        HcpTerm::Out(x, y, _) => {
            let (inside, rest) = gather(sub(0), &[x, y]);
            wrap(d, rest, HcpTerm::out(x.clone(), y.clone(), joined(inside)))
        }
        HcpTerm::In(x, y, _) => {
            let (inside, rest) = gather(sub(0), &[x, y]);
            wrap(
                d,
                rest,
                HcpTerm::input(x.clone(), y.clone(), joined(inside)),
            )
        }
        HcpTerm::Inl(x, _) => {
            let (inside, rest) = gather(sub(0), &[x]);
            wrap(d, rest, HcpTerm::inl(x.clone(), joined(inside)))
        }
        HcpTerm::Inr(x, _) => {
            let (inside, rest) = gather(sub(0), &[x]);
            wrap(d, rest, HcpTerm::inr(x.clone(), joined(inside)))
        }
        HcpTerm::OutUnit(x, _) => wrap(d, sub(0), HcpTerm::out_unit(x.clone(), HcpTerm::Inert)),
        HcpTerm::InUnit(x, _) => {
            // The component holding the member that gains x in the conclusion.
            let member = d.hyper.position(x).map(|k| d.hyper.envs()[k].without(x));
            let (inside, rest): (Vec<Component>, Vec<Component>) = {
                let mut parts = sub(0);
                let k = parts
                    .iter()
                    .position(|c| c.0.envs().iter().any(|e| Some(e) == member.as_ref()))
                    .unwrap_or(0);
                if parts.is_empty() {
                    (vec![], vec![])
                } else {
                    let c = parts.remove(k);
                    (vec![c], parts)
                }
            };
            wrap(d, rest, HcpTerm::in_unit(x.clone(), joined(inside)))
        }
    }
}
