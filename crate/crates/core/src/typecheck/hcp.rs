use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use super::derivation::{HcpDerivation, Rule};
use super::error::{TypeError, TypeErrorKind};
use crate::env::{Env, HyperEnv};
use crate::hcp::HcpTerm;
use crate::name::Name;
use crate::types::Type;

/// Switches for the two hypersequent restrictions. Both are on by default;
/// turning one off yields the weaker system the restriction exists to rule out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Side condition `x ∉ 𝒢` on every logical rule.
    pub self_lock: bool,
    /// `&` only in a single-sequent judgement.
    pub strict_with: bool,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions {
            self_lock: true,
            strict_with: true,
        }
    }
}

/// Typechecks an HCP process against a flat name→type map, inferring the
/// hyper-environment partition. When several partitions are derivable the
/// first one found is returned.
pub fn check_hcp(t: &HcpTerm, names: &Env) -> Result<HcpDerivation, TypeError> {
    check_hcp_with(t, names, CheckOptions::default())
}

pub fn check_hcp_with(
    t: &HcpTerm,
    names: &Env,
    opts: CheckOptions,
) -> Result<HcpDerivation, TypeError> {
    check_hcp_all(t, names, opts).map(|mut ds| ds.swap_remove(0))
}

/// Every derivable partition, one derivation each, in a deterministic order.
pub fn check_hcp_all(
    t: &HcpTerm,
    names: &Env,
    opts: CheckOptions,
) -> Result<Vec<HcpDerivation>, TypeError> {
    run(t, names, opts, None)
}

/// Typechecks an HCP process at a given hyper-environment. Partial results
/// that already join names from different target sequents are discarded
/// early, which keeps the search small when many names are absorbed by `⊤`.
pub fn check_hcp_at(
    t: &HcpTerm,
    hyper: &HyperEnv,
    opts: CheckOptions,
) -> Result<HcpDerivation, TypeError> {
    let names = hyper.flatten().ok_or_else(|| {
        TypeError::new(
            TypeErrorKind::HyperContextForbidden,
            None,
            t,
            "a name occurs in two sequents",
        )
    })?;
    let owner = hyper
        .envs()
        .iter()
        .enumerate()
        .flat_map(|(i, env)| env.names().map(move |x| (x.clone(), i)))
        .collect();
    run(t, &names, opts, Some(owner))?
        .into_iter()
        .find(|d| d.hyper == *hyper)
        .ok_or_else(|| {
            TypeError::new(
                TypeErrorKind::TypeMismatch,
                None,
                t,
                format!("not derivable at {hyper}"),
            )
        })
}

fn run(
    t: &HcpTerm,
    names: &Env,
    opts: CheckOptions,
    owner: Option<HashMap<Name, usize>>,
) -> Result<Vec<HcpDerivation>, TypeError> {
    if let Some(x) = t.free_names().into_iter().find(|x| !names.contains(x)) {
        return Err(TypeError::new(
            TypeErrorKind::UnknownName,
            Some(&x),
            t,
            format!("`{x}` is free in the process but not declared"),
        ));
    }
    let avoid: BTreeSet<Name> = names.names().cloned().collect();
    let t = t.freshen(&avoid);
    let ctx = Ctx(names.iter().map(|(x, a)| (x.clone(), a.clone())).collect());
    let checker = Checker {
        opts,
        owner,
        memo: RefCell::default(),
    };
    let ds = checker.go(&t, &ctx)?;
    Ok(ds.iter().map(|d| d.to_derivation()).collect())
}

/// The names available to a subterm. A name restricted above the subterm
/// can appear twice, once per endpoint.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct Ctx(Vec<(Name, Type)>);

impl Ctx {
    fn types(&self, x: &Name) -> Vec<Type> {
        self.0
            .iter()
            .filter(|(n, _)| n == x)
            .map(|(_, a)| a.clone())
            .collect()
    }

    fn add(&self, x: &Name, a: Type) -> Ctx {
        let mut v = self.0.clone();
        v.push((x.clone(), a));
        v.sort();
        Ctx(v)
    }

    fn remove_one(&self, x: &Name, a: &Type) -> Ctx {
        let mut v = self.0.clone();
        if let Some(i) = v.iter().position(|(n, b)| n == x && b == a) {
            v.remove(i);
        }
        Ctx(v)
    }

    fn as_env(&self) -> Option<Env> {
        let env: Env = self.0.iter().cloned().collect();
        (env.len() == self.0.len()).then_some(env)
    }
}

struct Checker<'a> {
    opts: CheckOptions,
    /// Target sequent of each declared name, when checking at a known partition.
    owner: Option<HashMap<Name, usize>>,
    /// Results per subterm and context; the splits revisit the same pairs often.
    memo: RefCell<HashMap<(usize, Ctx), Outcomes<'a>>>,
}

/// A derivation under construction. Premises are shared, since the search
/// combines the same partial derivations many times.
struct Part<'a> {
    rule: Rule,
    term: &'a HcpTerm,
    hyper: HyperEnv,
    premises: Vec<D<'a>>,
}

type D<'a> = Rc<Part<'a>>;

impl Part<'_> {
    fn to_derivation(&self) -> HcpDerivation {
        HcpDerivation {
            rule: self.rule,
            term: self.term.clone(),
            hyper: self.hyper.clone(),
            premises: self.premises.iter().map(|d| d.to_derivation()).collect(),
        }
    }
}

type Outcomes<'a> = Result<Vec<D<'a>>, TypeError>;

fn node<'a>(rule: Rule, t: &'a HcpTerm, hyper: HyperEnv, premises: Vec<D<'a>>) -> D<'a> {
    Rc::new(Part {
        rule,
        term: t,
        hyper,
        premises,
    })
}

/// Collects the successes of several attempts. Outcomes with equal
/// partitions are merged. When every attempt fails the most specific error
/// wins: a wrong guess of which endpoint goes where usually shows up as a
/// plain type mismatch, which would hide the real problem.
fn gather<'a>(attempts: impl IntoIterator<Item = Outcomes<'a>>) -> Outcomes<'a> {
    let mut out: Vec<D<'a>> = Vec::new();
    let mut seen: HashSet<HyperEnv> = HashSet::new();
    let mut first_err = None;
    for attempt in attempts {
        match attempt {
            Ok(ds) => {
                for d in ds {
                    if seen.insert(d.hyper.clone()) {
                        out.push(d);
                    }
                }
            }
            Err(e) => {
                if first_err
                    .as_ref()
                    .is_none_or(|f: &TypeError| specificity(e.kind) > specificity(f.kind))
                {
                    first_err = Some(e);
                }
            }
        }
    }
    if out.is_empty() {
        Err(first_err.unwrap_or_else(|| {
            TypeError::new(
                TypeErrorKind::TypeMismatch,
                None,
                "",
                "no typing rule applies",
            )
        }))
    } else {
        Ok(out)
    }
}

fn specificity(kind: TypeErrorKind) -> u8 {
    match kind {
        TypeErrorKind::SelfLock | TypeErrorKind::HyperContextForbidden => 4,
        TypeErrorKind::SplitConflict | TypeErrorKind::NameReuse => 3,
        TypeErrorKind::UnusedLinear => 2,
        TypeErrorKind::TypeMismatch | TypeErrorKind::DialectViolation => 1,
        TypeErrorKind::UnknownName => 0,
    }
}

fn replace(h: &HyperEnv, i: usize, env: Env) -> HyperEnv {
    let mut envs = h.envs().to_vec();
    envs[i] = env;
    HyperEnv::from_envs(envs)
}

fn members_with(h: &HyperEnv, x: &Name, a: &Type) -> Vec<usize> {
    (0..h.len())
        .filter(|&i| h.envs()[i].get(x) == Some(a))
        .collect()
}

fn err(kind: TypeErrorKind, x: &Name, t: &HcpTerm, msg: impl Into<String>) -> TypeError {
    TypeError::new(kind, Some(x), t, msg)
}

impl<'a> Checker<'a> {
    /// The possible types of the subject `x`, each with the remaining context.
    fn subject(&self, x: &Name, ctx: &Ctx, t: &HcpTerm) -> Result<Vec<(Type, Ctx)>, TypeError> {
        let tys = ctx.types(x);
        if tys.is_empty() {
            return Err(err(
                TypeErrorKind::UnknownName,
                x,
                t,
                format!("`{x}` is not available here"),
            ));
        }
        if tys.len() > 1 && self.opts.self_lock {
            return Err(err(
                TypeErrorKind::SelfLock,
                x,
                t,
                format!("cannot act on one endpoint of `{x}` while holding the other"),
            ));
        }
        Ok(tys
            .into_iter()
            .map(|a| (a.clone(), ctx.remove_one(x, &a)))
            .collect())
    }

    fn go(&self, t: &'a HcpTerm, ctx: &Ctx) -> Outcomes<'a> {
        let key = (t as *const HcpTerm as usize, ctx.clone());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let out = self.derive(t, ctx).and_then(|ds| self.within_target(t, ds));
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// Whether a side may hold the unused entry `x` without joining names of
    /// different target sequents.
    fn may_host(&self, side: &HcpTerm, x: &Name) -> bool {
        let Some(owner) = &self.owner else {
            return true;
        };
        let Some(home) = owner.get(x) else {
            return true;
        };
        restricts(side)
            || side
                .free_names()
                .iter()
                .any(|n| owner.get(n).is_none_or(|o| o == home))
    }

    fn within_target(&self, t: &'a HcpTerm, ds: Vec<D<'a>>) -> Outcomes<'a> {
        let Some(owner) = &self.owner else {
            return Ok(ds);
        };
        let fits = |env: &Env| {
            let mut owners = env.names().filter_map(|x| owner.get(x));
            owners.next().is_none_or(|first| owners.all(|o| o == first))
        };
        let ds: Vec<D<'a>> = ds
            .into_iter()
            .filter(|d| d.hyper.envs().iter().all(fits))
            .collect();
        if ds.is_empty() {
            return Err(TypeError::new(
                TypeErrorKind::TypeMismatch,
                None,
                t,
                "joins names of different target sequents",
            ));
        }
        Ok(ds)
    }

    fn derive(&self, t: &'a HcpTerm, ctx: &Ctx) -> Outcomes<'a> {
        match t {
            HcpTerm::Inert => match ctx.0.first() {
                None => Ok(vec![node(Rule::HMix0, t, HyperEnv::empty(), vec![])]),
                Some((x, _)) => Err(err(TypeErrorKind::UnusedLinear, x, t, format!("`{x}` is never used"))),
            },
            HcpTerm::Link(x, y) => {
                if x == y {
                    return Err(err(
                        TypeErrorKind::NameReuse,
                        x,
                        t,
                        format!("a link needs two distinct names, got `{x}` twice"),
                    ));
                }
                let (xs, ys) = (ctx.types(x), ctx.types(y));
                if xs.len() > 1 || ys.len() > 1 {
                    let z = if xs.len() > 1 { x } else { y };
                    return Err(err(
                        TypeErrorKind::SelfLock,
                        z,
                        t,
                        format!("a link cannot hold both endpoints of `{z}`"),
                    ));
                }
                let (Some(a), Some(b)) = (xs.first(), ys.first()) else {
                    let z = if xs.is_empty() { x } else { y };
                    return Err(err(TypeErrorKind::UnknownName, z, t, format!("`{z}` is not available here")));
                };
                if *b != a.dual() {
                    return Err(TypeError::mismatch(y, t, a.dual().to_string(), b));
                }
                if let Some((z, _)) = ctx.0.iter().find(|(n, _)| n != x && n != y) {
                    return Err(err(TypeErrorKind::UnusedLinear, z, t, format!("`{z}` is never used")));
                }
                let env = Env::singleton(x.clone(), a.clone()).with(y.clone(), b.clone());
                Ok(vec![node(Rule::Ax, t, HyperEnv::single(env), vec![])])
            }
            HcpTerm::New(x, a, p) => {
                let inner = ctx.add(x, a.clone()).add(x, a.dual());
                let ds = self.go(p, &inner)?;
                gather(ds.into_iter().map(|d| {
                    let pos = d.hyper.positions(x);
                    if pos.len() != 2 {
                        return Err(err(
                            TypeErrorKind::SplitConflict,
                            x,
                            t,
                            format!("the endpoints of `{x}` must lie in two independent sequents"),
                        ));
                    }
                    let merged = d.hyper.envs()[pos[0]].without(x).union(&d.hyper.envs()[pos[1]].without(x));
                    let Some(merged) = merged else {
                        return Err(err(
                            TypeErrorKind::SplitConflict,
                            x,
                            t,
                            format!("cutting `{x}` would join both endpoints of another channel"),
                        ));
                    };
                    let mut envs: Vec<Env> = d.hyper.envs().to_vec();
                    envs.remove(pos[1]);
                    envs.remove(pos[0]);
                    envs.push(merged);
                    Ok(vec![node(Rule::HCut, t, HyperEnv::from_envs(envs), vec![d])])
                }))
            }
            HcpTerm::Par(p, q) => self.par(t, p, q, ctx),
            HcpTerm::Out(x, y, p) => self.tensor(t, x, y, p, ctx),
            HcpTerm::In(x, y, p) => gather(self.subject(x, ctx, t)?.into_iter().map(|(ty, rest)| {
                let Type::Par(a, b) = ty else {
                    return Err(TypeError::mismatch(x, t, "_ par _", ty));
                };
                let inner = rest.add(y, (*a).clone()).add(x, (*b).clone());
                gather(self.go(p, &inner)?.into_iter().map(|d| {
                    let hits: Vec<usize> = members_with(&d.hyper, x, &b)
                        .into_iter()
                        .filter(|&i| d.hyper.envs()[i].get(y) == Some(&*a))
                        .collect();
                    if hits.is_empty() {
                        return Err(err(
                            TypeErrorKind::SplitConflict,
                            x,
                            t,
                            format!("`{y}` and `{x}` must be used by one sequential process"),
                        ));
                    }
                    Ok(hits
                        .into_iter()
                        .map(|i| {
                            let env = d.hyper.envs()[i].without(y).with(x.clone(), Type::Par(a.clone(), b.clone()));
                            node(Rule::Par, t, replace(&d.hyper, i, env), vec![d.clone()])
                        })
                        .collect())
                }))
            })),
            HcpTerm::OutUnit(x, p) => gather(self.subject(x, ctx, t)?.into_iter().map(|(ty, rest)| {
                if ty != Type::One {
                    return Err(TypeError::mismatch(x, t, "1", ty));
                }
                Ok(self
                    .go(p, &rest)?
                    .into_iter()
                    .map(|d| {
                        let h = d.hyper.combine(&HyperEnv::single(Env::singleton(x.clone(), Type::One)));
                        node(Rule::One, t, h, vec![d])
                    })
                    .collect())
            })),
            HcpTerm::InUnit(x, p) => gather(self.subject(x, ctx, t)?.into_iter().map(|(ty, rest)| {
                if ty != Type::Bot {
                    return Err(TypeError::mismatch(x, t, "bot", ty));
                }
                gather(self.go(p, &rest)?.into_iter().map(|d| {
                    let opts: Vec<D<'a>> = (0..d.hyper.len())
                        .filter(|&i| !d.hyper.envs()[i].contains(x))
                        .map(|i| {
                            let env = d.hyper.envs()[i].with(x.clone(), Type::Bot);
                            node(Rule::Bot, t, replace(&d.hyper, i, env), vec![d.clone()])
                        })
                        .collect();
                    if opts.is_empty() {
                        return Err(err(
                            TypeErrorKind::TypeMismatch,
                            x,
                            t,
                            format!("the continuation of `{x}()` has no sequent for `{x}` to join"),
                        ));
                    }
                    Ok(opts)
                }))
            })),
            HcpTerm::Inl(x, p) | HcpTerm::Inr(x, p) => {
                let left = matches!(t, HcpTerm::Inl(..));
                gather(self.subject(x, ctx, t)?.into_iter().map(|(ty, rest)| {
                    let Type::Plus(a, b) = &ty else {
                        return Err(TypeError::mismatch(x, t, "_ + _", &ty));
                    };
                    let (chosen, rule) = if left { (a, Rule::Plus1) } else { (b, Rule::Plus2) };
                    let ds = self.go(p, &rest.add(x, (**chosen).clone()))?;
                    Ok(ds
                        .into_iter()
                        .flat_map(|d| {
                            members_with(&d.hyper, x, chosen)
                                .into_iter()
                                .map(|i| {
                                    let env = d.hyper.envs()[i].with(x.clone(), ty.clone());
                                    node(rule, t, replace(&d.hyper, i, env), vec![d.clone()])
                                })
                                .collect::<Vec<_>>()
                        })
                        .collect())
                }))
            }
            HcpTerm::Case(x, p, q) => self.with(t, x, p, q, ctx),
            HcpTerm::Absurd(x) => gather(self.subject(x, ctx, t)?.into_iter().map(|(ty, _)| {
                if ty != Type::Top {
                    return Err(TypeError::mismatch(x, t, "top", ty));
                }
                match ctx.as_env() {
                    Some(env) => Ok(vec![node(Rule::Top, t, HyperEnv::single(env), vec![])]),
                    None => Err(err(
                        TypeErrorKind::HyperContextForbidden,
                        x,
                        t,
                        "⊤ requires a single sequent, but the context holds both endpoints of a channel",
                    )),
                }
            })),
        }
    }

    fn tensor(
        &self,
        t: &'a HcpTerm,
        x: &Name,
        y: &Name,
        p: &'a HcpTerm,
        ctx: &Ctx,
    ) -> Outcomes<'a> {
        gather(self.subject(x, ctx, t)?.into_iter().map(|(ty, rest)| {
            let Type::Tensor(a, b) = &ty else {
                return Err(TypeError::mismatch(x, t, "_ * _", &ty));
            };
            let inner = rest.add(y, (**a).clone()).add(x, (**b).clone());
            gather(self.go(p, &inner)?.into_iter().map(|d| {
                let ys = members_with(&d.hyper, y, a);
                let mut out = Vec::new();
                let mut failure = None;
                for i in ys {
                    for j in members_with(&d.hyper, x, b) {
                        if i == j {
                            failure = Some(err(
                                TypeErrorKind::SplitConflict,
                                x,
                                t,
                                format!("`{y}` and `{x}` must be used by independent processes"),
                            ));
                            continue;
                        }
                        let envs = d.hyper.envs();
                        let Some(merged) = envs[i].without(y).union(&envs[j].without(x)) else {
                            failure = Some(err(
                                TypeErrorKind::SplitConflict,
                                x,
                                t,
                                "the two sides of the output would share both endpoints of a channel",
                            ));
                            continue;
                        };
                        let mut rest: Vec<Env> =
                            (0..envs.len()).filter(|&k| k != i && k != j).map(|k| envs[k].clone()).collect();
                        rest.push(merged.with(x.clone(), ty.clone()));
                        out.push(node(Rule::Tensor, t, HyperEnv::from_envs(rest), vec![d.clone()]));
                    }
                }
                match (out.is_empty(), failure) {
                    (true, Some(e)) => Err(e),
                    _ => Ok(out),
                }
            }))
        }))
    }

    fn with(
        &self,
        t: &'a HcpTerm,
        x: &Name,
        p: &'a HcpTerm,
        q: &'a HcpTerm,
        ctx: &Ctx,
    ) -> Outcomes<'a> {
        gather(self.subject(x, ctx, t)?.into_iter().map(|(ty, rest)| {
            let Type::With(a, b) = &ty else {
                return Err(TypeError::mismatch(x, t, "_ & _", &ty));
            };
            let dps = self.go(p, &rest.add(x, (**a).clone()))?;
            let dqs = self.go(q, &rest.add(x, (**b).clone()))?;
            let forbidden = || {
                err(
                    TypeErrorKind::HyperContextForbidden,
                    x,
                    t,
                    format!("the branches of `{x}?{{...}}` must each form a single sequent"),
                )
            };
            let mut out = Vec::new();
            if self.opts.strict_with {
                for dp in dps.iter().filter(|d| d.hyper.len() == 1) {
                    for dq in dqs.iter().filter(|d| d.hyper.len() == 1) {
                        let gp = dp.hyper.envs()[0].without(x);
                        if gp == dq.hyper.envs()[0].without(x) {
                            let h = HyperEnv::single(gp.with(x.clone(), ty.clone()));
                            out.push(node(Rule::With, t, h, vec![dp.clone(), dq.clone()]));
                        }
                    }
                }
            } else {
                for dp in &dps {
                    for dq in &dqs {
                        if let Some(h) = liberal_with(&dp.hyper, &dq.hyper, x, &ty) {
                            out.push(node(Rule::With, t, h, vec![dp.clone(), dq.clone()]));
                        }
                    }
                }
            }
            if out.is_empty() {
                Err(forbidden())
            } else {
                Ok(out)
            }
        }))
    }

    fn par(&self, t: &'a HcpTerm, p: &'a HcpTerm, q: &'a HcpTerm, ctx: &Ctx) -> Outcomes<'a> {
        gather(
            split(ctx, p, q, t, |side, x| self.may_host(side, x))?
                .into_iter()
                .map(|(cp, cq)| {
                    let dps = self.go(p, &cp)?;
                    let dqs = self.go(q, &cq)?;
                    let mut out = Vec::new();
                    for dp in &dps {
                        for dq in &dqs {
                            let h = dp.hyper.combine(&dq.hyper);
                            out.push(node(Rule::HMix, t, h, vec![dp.clone(), dq.clone()]));
                        }
                    }
                    Ok(out)
                }),
        )
    }
}

/// The `&` rule without the single-sequent restriction: both branches must
/// agree on every sequent except the one holding `x`.
fn liberal_with(hp: &HyperEnv, hq: &HyperEnv, x: &Name, ty: &Type) -> Option<HyperEnv> {
    let (Type::With(a, b), ip, iq) = (ty, hp.position(x)?, hq.position(x)?) else {
        return None;
    };
    if hp.envs()[ip].get(x) != Some(a) || hq.envs()[iq].get(x) != Some(b) {
        return None;
    }
    let (gp, rp) = hp.take(ip);
    let (gq, rq) = hq.take(iq);
    let (gp, gq) = (gp.without(x), gq.without(x));
    (gp == gq && HyperEnv::from_envs(rp.clone()) == HyperEnv::from_envs(rq)).then(|| {
        let mut envs = rp;
        envs.push(gp.with(x.clone(), ty.clone()));
        HyperEnv::from_envs(envs)
    })
}

/// All ways of distributing the context between the two sides of a parallel
/// composition. A restricted name free on both sides sends one endpoint each
/// way; unused entries go to a side that can absorb them. `host` tells
/// whether a side may end up holding a given unused entry.
fn split(
    ctx: &Ctx,
    p: &HcpTerm,
    q: &HcpTerm,
    t: &HcpTerm,
    host: impl Fn(&HcpTerm, &Name) -> bool,
) -> Result<Vec<(Ctx, Ctx)>, TypeError> {
    type Side = Vec<(Name, Type)>;
    let mut options: Vec<(Side, Side)> = vec![(Vec::new(), Vec::new())];
    let names: BTreeSet<&Name> = ctx.0.iter().map(|(n, _)| n).collect();
    let (pa, qa) = (p.absorbs(), q.absorbs());
    for x in names {
        let tys = ctx.types(x);
        let alternatives: Vec<(Vec<Type>, Vec<Type>)> = match (p.is_free(x), q.is_free(x)) {
            (true, true) if tys.len() == 2 => {
                vec![
                    (vec![tys[0].clone()], vec![tys[1].clone()]),
                    (vec![tys[1].clone()], vec![tys[0].clone()]),
                ]
            }
            (true, true) => {
                return Err(err(
                    TypeErrorKind::SplitConflict,
                    x,
                    t,
                    format!("`{x}` is used by both independent subprocesses"),
                ))
            }
            // One endpoint may also be absorbed by ⊤ on the other side.
            (true, false) => {
                let mut alts = vec![(tys.clone(), vec![])];
                if tys.len() == 2 && qa {
                    alts.push((vec![tys[0].clone()], vec![tys[1].clone()]));
                    alts.push((vec![tys[1].clone()], vec![tys[0].clone()]));
                }
                alts
            }
            (false, true) => {
                let mut alts = vec![(vec![], tys.clone())];
                if tys.len() == 2 && pa {
                    alts.push((vec![tys[0].clone()], vec![tys[1].clone()]));
                    alts.push((vec![tys[1].clone()], vec![tys[0].clone()]));
                }
                alts
            }
            (false, false) => {
                let (to_p, to_q) = (pa && host(p, x), qa && host(q, x));
                if !to_p && !to_q {
                    return Err(err(
                        TypeErrorKind::UnusedLinear,
                        x,
                        t,
                        format!("`{x}` is never used"),
                    ));
                }
                // Each unused entry goes to either side independently.
                let mut alts: Vec<(Vec<Type>, Vec<Type>)> = vec![(vec![], vec![])];
                for a in tys {
                    alts = alts
                        .into_iter()
                        .flat_map(|(l, r)| {
                            let mut next = Vec::new();
                            if to_p {
                                next.push(([l.clone(), vec![a.clone()]].concat(), r.clone()));
                            }
                            if to_q {
                                next.push((l.clone(), [r.clone(), vec![a.clone()]].concat()));
                            }
                            next
                        })
                        .collect();
                }
                alts
            }
        };
        options = options
            .into_iter()
            .flat_map(|(cp, cq)| {
                alternatives.iter().map(move |(ap, aq)| {
                    let mut cp = cp.clone();
                    let mut cq = cq.clone();
                    cp.extend(ap.iter().map(|a| (x.clone(), a.clone())));
                    cq.extend(aq.iter().map(|a| (x.clone(), a.clone())));
                    (cp, cq)
                })
            })
            .collect();
    }
    Ok(options
        .into_iter()
        .map(|(mut cp, mut cq)| {
            cp.sort();
            cq.sort();
            (Ctx(cp), Ctx(cq))
        })
        .collect())
}

/// True when the term restricts a channel, so that one of its sequents may
/// end up holding none of its free names.
fn restricts(t: &HcpTerm) -> bool {
    let mut sizes = Vec::new();
    t.cut_sizes(&mut sizes);
    !sizes.is_empty()
}

pub fn revalidate_hcp(d: &HcpDerivation) -> bool {
    local_ok(d, CheckOptions::default()) && d.premises.iter().all(revalidate_hcp)
}

fn others_lack(h: &HyperEnv, i: usize, x: &Name) -> bool {
    (0..h.len()).all(|k| k == i || !h.envs()[k].contains(x))
}

/// Conclusions derivable by a unary logical rule: the premise with member
/// `i` replaced by `f(member)`, over every `i` accepted by `f`.
fn unary_options(prem: &HyperEnv, x: &Name, f: impl Fn(&Env) -> Option<Env>) -> Vec<HyperEnv> {
    (0..prem.len())
        .filter_map(|i| f(&prem.envs()[i]).map(|env| (i, env)))
        .filter(|(i, env)| {
            let h = replace(prem, *i, env.clone());
            h.positions(x).len() == 1 && others_lack(&h, h.position(x).unwrap_or(0), x)
        })
        .map(|(i, env)| replace(prem, i, env))
        .collect()
}

impl fmt::Display for CheckOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "self_lock={} strict_with={}",
            self.self_lock, self.strict_with
        )
    }
}

fn local_ok(d: &HcpDerivation, opts: CheckOptions) -> bool {
    let h = &d.hyper;
    let ps = &d.premises;
    let arity = |n: usize| ps.len() == n;
    let prem_term = |i: usize, t: &HcpTerm| ps[i].term.alpha_eq(t);
    match (&d.term, d.rule) {
        (HcpTerm::Inert, Rule::HMix0) => arity(0) && h.is_empty(),
        (HcpTerm::Link(x, y), Rule::Ax) => {
            arity(0)
                && x != y
                && h.len() == 1
                && h.envs()[0].len() == 2
                && matches!((h.envs()[0].get(x), h.envs()[0].get(y)), (Some(a), Some(b)) if *b == a.dual())
        }
        (HcpTerm::Par(p, q), Rule::HMix) => {
            arity(2)
                && prem_term(0, p)
                && prem_term(1, q)
                && ps[0].hyper.combine(&ps[1].hyper) == *h
        }
        (HcpTerm::New(x, a, p), Rule::HCut) => {
            if !arity(1) || !prem_term(0, p) || h.position(x).is_some() {
                return false;
            }
            let prem = &ps[0].hyper;
            let pos = prem.positions(x);
            if pos.len() != 2 {
                return false;
            }
            let (e0, e1) = (&prem.envs()[pos[0]], &prem.envs()[pos[1]]);
            let (Some(t0), Some(t1)) = (e0.get(x), e1.get(x)) else {
                return false;
            };
            if !(t0.same_up_to_duality(a) && *t1 == t0.dual()) {
                return false;
            }
            let Some(merged) = e0.without(x).union(&e1.without(x)) else {
                return false;
            };
            let mut envs = prem.envs().to_vec();
            envs.remove(pos[1]);
            envs.remove(pos[0]);
            envs.push(merged);
            HyperEnv::from_envs(envs) == *h
        }
        (HcpTerm::Out(x, y, p), Rule::Tensor) => {
            if !arity(1) || !prem_term(0, p) || x == y {
                return false;
            }
            let prem = &ps[0].hyper;
            let (Some(i), Some(j)) = (prem.position(y), prem.position(x)) else {
                return false;
            };
            if i == j || prem.positions(x).len() != 1 || prem.positions(y).len() != 1 {
                return false;
            }
            let (Some(a), Some(b)) = (prem.envs()[i].get(y), prem.envs()[j].get(x)) else {
                return false;
            };
            let Some(merged) = prem.envs()[i].without(y).union(&prem.envs()[j].without(x)) else {
                return false;
            };
            let mut envs: Vec<Env> = (0..prem.len())
                .filter(|&k| k != i && k != j)
                .map(|k| prem.envs()[k].clone())
                .collect();
            envs.push(merged.with(x.clone(), Type::tensor(a.clone(), b.clone())));
            HyperEnv::from_envs(envs) == *h && h.positions(y).is_empty()
        }
        (HcpTerm::In(x, y, p), Rule::Par) => {
            arity(1)
                && prem_term(0, p)
                && x != y
                && unary_options(&ps[0].hyper, x, |e| {
                    let (a, b) = (e.get(y)?, e.get(x)?);
                    Some(
                        e.without(y)
                            .with(x.clone(), Type::par(a.clone(), b.clone())),
                    )
                })
                .contains(h)
                && ps[0].hyper.positions(y).len() == 1
        }
        (HcpTerm::OutUnit(x, p), Rule::One) => {
            arity(1)
                && prem_term(0, p)
                && ps[0].hyper.position(x).is_none()
                && ps[0]
                    .hyper
                    .combine(&HyperEnv::single(Env::singleton(x.clone(), Type::One)))
                    == *h
        }
        (HcpTerm::InUnit(x, p), Rule::Bot) => {
            arity(1)
                && prem_term(0, p)
                && ps[0].hyper.position(x).is_none()
                && unary_options(&ps[0].hyper, x, |e| Some(e.with(x.clone(), Type::Bot)))
                    .contains(h)
        }
        (HcpTerm::Inl(x, p), Rule::Plus1) | (HcpTerm::Inr(x, p), Rule::Plus2) => {
            let left = d.rule == Rule::Plus1;
            arity(1)
                && prem_term(0, p)
                && ps[0].hyper.positions(x).len() == 1
                && (0..h.len()).any(|i| {
                    let Some(Type::Plus(a, b)) = h.envs()[i].get(x) else {
                        return false;
                    };
                    let chosen = if left { a } else { b };
                    replace(h, i, h.envs()[i].with(x.clone(), (**chosen).clone())) == ps[0].hyper
                })
                && h.positions(x).len() == 1
        }
        (HcpTerm::Case(x, p, q), Rule::With) => {
            if !arity(2) || !prem_term(0, p) || !prem_term(1, q) {
                return false;
            }
            let Some(i) = h.position(x) else { return false };
            let Some(Type::With(a, b)) = h.envs()[i].get(x) else {
                return false;
            };
            let ok_p = replace(h, i, h.envs()[i].with(x.clone(), (**a).clone())) == ps[0].hyper;
            let ok_q = replace(h, i, h.envs()[i].with(x.clone(), (**b).clone())) == ps[1].hyper;
            ok_p && ok_q && (!opts.strict_with || h.len() == 1) && h.positions(x).len() == 1
        }
        (HcpTerm::Absurd(x), Rule::Top) => {
            arity(0) && h.len() == 1 && h.envs()[0].get(x) == Some(&Type::Top)
        }
        _ => false,
    }
}
