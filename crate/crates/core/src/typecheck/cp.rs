use std::collections::BTreeSet;

use super::derivation::{CpDerivation, Rule};
use super::error::{TypeError, TypeErrorKind};
use crate::cp::CpTerm;
use crate::env::Env;
use crate::name::Name;
use crate::types::Type;

/// Typechecks a CP process against a declared environment.
///
/// Bound names that clash with declared names or with each other are
/// renamed first, so the derivation's term may differ from `t` up to α.
pub fn check_cp(t: &CpTerm, env: &Env) -> Result<CpDerivation, TypeError> {
    if let Some(x) = t.free_names().into_iter().find(|x| !env.contains(x)) {
        return Err(TypeError::new(
            TypeErrorKind::UnknownName,
            Some(&x),
            t,
            format!("`{x}` is free in the process but not declared"),
        ));
    }
    let avoid: BTreeSet<Name> = env.names().cloned().collect();
    check(&t.freshen(&avoid), env)
}

fn lookup<'a>(env: &'a Env, x: &Name, t: &CpTerm) -> Result<&'a Type, TypeError> {
    env.get(x).ok_or_else(|| {
        TypeError::new(
            TypeErrorKind::UnknownName,
            Some(x),
            t,
            format!("`{x}` is not available here"),
        )
    })
}

fn node(rule: Rule, t: &CpTerm, env: &Env, premises: Vec<CpDerivation>) -> CpDerivation {
    CpDerivation {
        rule,
        term: t.clone(),
        env: env.clone(),
        premises,
    }
}

/// Splits `rest` between two independent subprocesses.
///
/// Every name goes to the side where it is free. Names free on neither side
/// may only be absorbed by a `⊤` leaf, so they go to a side that can absorb;
/// when both can, every distribution is returned.
pub(crate) fn route(
    rest: &Env,
    in_p: impl Fn(&Name) -> bool,
    in_q: impl Fn(&Name) -> bool,
    absorbs: (bool, bool),
    subject: &dyn std::fmt::Display,
) -> Result<Vec<(Env, Env)>, TypeError> {
    let mut p = Env::new();
    let mut q = Env::new();
    let mut orphans = Vec::new();
    for (x, ty) in rest.iter() {
        match (in_p(x), in_q(x)) {
            (true, true) => {
                return Err(TypeError::new(
                    TypeErrorKind::SplitConflict,
                    Some(x),
                    subject,
                    format!("`{x}` is used by both independent subprocesses"),
                ))
            }
            (true, false) => {
                p.insert(x.clone(), ty.clone());
            }
            (false, true) => {
                q.insert(x.clone(), ty.clone());
            }
            (false, false) => orphans.push((x.clone(), ty.clone())),
        }
    }
    if orphans.is_empty() {
        return Ok(vec![(p, q)]);
    }
    match absorbs {
        (false, false) => {
            let x = &orphans[0].0;
            Err(TypeError::new(
                TypeErrorKind::UnusedLinear,
                Some(x),
                subject,
                format!("`{x}` is never used"),
            ))
        }
        (true, false) => Ok(vec![(
            p.union(&orphans.into_iter().collect()).unwrap_or_default(),
            q,
        )]),
        (false, true) => Ok(vec![(
            p,
            q.union(&orphans.into_iter().collect()).unwrap_or_default(),
        )]),
        (true, true) => {
            // Orphans are rare; the subset enumeration stays small in practice.
            let k = orphans.len().min(16);
            let mut out = Vec::new();
            for mask in 0u32..(1 << k) {
                let (mut pp, mut qq) = (p.clone(), q.clone());
                for (i, (x, ty)) in orphans.iter().enumerate() {
                    if i < k && mask & (1 << i) != 0 {
                        qq.insert(x.clone(), ty.clone());
                    } else {
                        pp.insert(x.clone(), ty.clone());
                    }
                }
                out.push((pp, qq));
            }
            Ok(out)
        }
    }
}

fn first_success(
    options: Vec<(Env, Env)>,
    mut attempt: impl FnMut(Env, Env) -> Result<(CpDerivation, CpDerivation), TypeError>,
) -> Result<(CpDerivation, CpDerivation), TypeError> {
    let mut first_err = None;
    for (p, q) in options {
        match attempt(p, q) {
            Ok(ds) => return Ok(ds),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("route returns at least one option"))
}

fn unused(env: &Env, t: &CpTerm, used: &[&Name]) -> Result<(), TypeError> {
    match env.names().find(|x| !used.contains(x)) {
        Some(x) => Err(TypeError::new(
            TypeErrorKind::UnusedLinear,
            Some(x),
            t,
            format!("`{x}` is never used"),
        )),
        None => Ok(()),
    }
}

pub(crate) fn check(t: &CpTerm, env: &Env) -> Result<CpDerivation, TypeError> {
    match t {
        CpTerm::Link(x, y) => {
            if x == y {
                return Err(TypeError::new(
                    TypeErrorKind::NameReuse,
                    Some(x),
                    t,
                    format!("a link needs two distinct names, got `{x}` twice"),
                ));
            }
            let a = lookup(env, x, t)?;
            let b = lookup(env, y, t)?;
            if *b != a.dual() {
                return Err(TypeError::mismatch(y, t, a.dual().to_string(), b));
            }
            unused(env, t, &[x, y])?;
            Ok(node(Rule::Ax, t, env, vec![]))
        }
        CpTerm::Cut(x, a, p, q) => {
            let options = route(
                env,
                |n| p.is_free(n),
                |n| q.is_free(n),
                (p.absorbs(), q.absorbs()),
                t,
            )?;
            let (dp, dq) = first_success(options, |gp, gq| {
                Ok((
                    check(p, &gp.with(x.clone(), a.clone()))?,
                    check(q, &gq.with(x.clone(), a.dual()))?,
                ))
            })?;
            Ok(node(Rule::Cut, t, env, vec![dp, dq]))
        }
        CpTerm::Send(x, y, p, q) => {
            let (a, b) = match lookup(env, x, t)? {
                Type::Tensor(a, b) => ((**a).clone(), (**b).clone()),
                other => return Err(TypeError::mismatch(x, t, "_ * _", other)),
            };
            if p.is_free(x) {
                return Err(TypeError::new(
                    TypeErrorKind::SplitConflict,
                    Some(x),
                    t,
                    format!(
                        "`{x}` continues in the right process and cannot be used by the left one"
                    ),
                ));
            }
            let rest = env.without(x);
            let options = route(
                &rest,
                |n| p.is_free(n),
                |n| q.is_free(n),
                (p.absorbs(), q.absorbs()),
                t,
            )?;
            let (dp, dq) = first_success(options, |gp, gq| {
                Ok((
                    check(p, &gp.with(y.clone(), a.clone()))?,
                    check(q, &gq.with(x.clone(), b.clone()))?,
                ))
            })?;
            Ok(node(Rule::Tensor, t, env, vec![dp, dq]))
        }
        CpTerm::Recv(x, y, p) => {
            let (a, b) = match lookup(env, x, t)? {
                Type::Par(a, b) => ((**a).clone(), (**b).clone()),
                other => return Err(TypeError::mismatch(x, t, "_ par _", other)),
            };
            let inner = env.with(x.clone(), b).with(y.clone(), a);
            Ok(node(Rule::Par, t, env, vec![check(p, &inner)?]))
        }
        CpTerm::Halt(x) => {
            let a = lookup(env, x, t)?;
            if *a != Type::One {
                return Err(TypeError::mismatch(x, t, "1", a));
            }
            unused(env, t, &[x])?;
            Ok(node(Rule::One, t, env, vec![]))
        }
        CpTerm::Wait(x, p) => {
            let a = lookup(env, x, t)?;
            if *a != Type::Bot {
                return Err(TypeError::mismatch(x, t, "bot", a));
            }
            Ok(node(Rule::Bot, t, env, vec![check(p, &env.without(x))?]))
        }
        CpTerm::Inl(x, p) | CpTerm::Inr(x, p) => {
            let left = matches!(t, CpTerm::Inl(..));
            let (a, b) = match lookup(env, x, t)? {
                Type::Plus(a, b) => ((**a).clone(), (**b).clone()),
                other => return Err(TypeError::mismatch(x, t, "_ + _", other)),
            };
            let (chosen, rule) = if left {
                (a, Rule::Plus1)
            } else {
                (b, Rule::Plus2)
            };
            Ok(node(
                rule,
                t,
                env,
                vec![check(p, &env.with(x.clone(), chosen))?],
            ))
        }
        CpTerm::Case(x, p, q) => {
            let (a, b) = match lookup(env, x, t)? {
                Type::With(a, b) => ((**a).clone(), (**b).clone()),
                other => return Err(TypeError::mismatch(x, t, "_ & _", other)),
            };
            let dp = check(p, &env.with(x.clone(), a))?;
            let dq = check(q, &env.with(x.clone(), b))?;
            Ok(node(Rule::With, t, env, vec![dp, dq]))
        }
        CpTerm::Absurd(x) => {
            let a = lookup(env, x, t)?;
            if *a != Type::Top {
                return Err(TypeError::mismatch(x, t, "top", a));
            }
            Ok(node(Rule::Top, t, env, vec![]))
        }
    }
}

/// True when every node of `d` follows from its premises by its rule.
pub fn revalidate_cp(d: &CpDerivation) -> bool {
    local_ok(d) && d.premises.iter().all(revalidate_cp)
}

fn local_ok(d: &CpDerivation) -> bool {
    let env = &d.env;
    let ps = &d.premises;
    let arity = |n: usize| ps.len() == n;
    let prem_term = |i: usize, t: &CpTerm| ps[i].term.alpha_eq(t);
    match (&d.term, d.rule) {
        (CpTerm::Link(x, y), Rule::Ax) => {
            arity(0)
                && x != y
                && env.len() == 2
                && matches!((env.get(x), env.get(y)), (Some(a), Some(b)) if *b == a.dual())
        }
        (CpTerm::Cut(x, a, p, q), Rule::Cut) => {
            arity(2)
                && prem_term(0, p)
                && prem_term(1, q)
                && !env.contains(x)
                && ps[0].env.get(x) == Some(a)
                && ps[1].env.get(x) == Some(&a.dual())
                && ps[0].env.without(x).union(&ps[1].env.without(x)).as_ref() == Some(env)
        }
        (CpTerm::Send(x, y, p, q), Rule::Tensor) => {
            let (Some(a), Some(b)) = (
                ps.first().and_then(|d| d.env.get(y)),
                ps.get(1).and_then(|d| d.env.get(x)),
            ) else {
                return false;
            };
            arity(2)
                && x != y
                && prem_term(0, p)
                && prem_term(1, q)
                && !ps[0].env.contains(x)
                && ps[0]
                    .env
                    .without(y)
                    .union(&ps[1].env.without(x))
                    .map(|g| g.with(x.clone(), Type::tensor(a.clone(), b.clone())))
                    .as_ref()
                    == Some(env)
                && !env.contains(y)
        }
        (CpTerm::Recv(x, y, p), Rule::Par) => {
            let Some(prem) = ps.first() else { return false };
            let (Some(a), Some(b)) = (prem.env.get(y), prem.env.get(x)) else {
                return false;
            };
            arity(1)
                && x != y
                && prem_term(0, p)
                && !env.contains(y)
                && prem
                    .env
                    .without(y)
                    .with(x.clone(), Type::par(a.clone(), b.clone()))
                    == *env
        }
        (CpTerm::Halt(x), Rule::One) => arity(0) && *env == Env::singleton(x.clone(), Type::One),
        (CpTerm::Wait(x, p), Rule::Bot) => {
            arity(1)
                && prem_term(0, p)
                && env.get(x) == Some(&Type::Bot)
                && !ps[0].env.contains(x)
                && ps[0].env == env.without(x)
        }
        (CpTerm::Inl(x, p), Rule::Plus1) | (CpTerm::Inr(x, p), Rule::Plus2) => {
            let Some(Type::Plus(a, b)) = env.get(x) else {
                return false;
            };
            let chosen = if d.rule == Rule::Plus1 { a } else { b };
            arity(1) && prem_term(0, p) && ps[0].env == env.with(x.clone(), (**chosen).clone())
        }
        (CpTerm::Case(x, p, q), Rule::With) => {
            let Some(Type::With(a, b)) = env.get(x) else {
                return false;
            };
            arity(2)
                && prem_term(0, p)
                && prem_term(1, q)
                && ps[0].env == env.with(x.clone(), (**a).clone())
                && ps[1].env == env.with(x.clone(), (**b).clone())
        }
        (CpTerm::Absurd(x), Rule::Top) => arity(0) && env.get(x) == Some(&Type::Top),
        _ => false,
    }
}
