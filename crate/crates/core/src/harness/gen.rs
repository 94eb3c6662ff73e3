use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::GenConfig;
use crate::bridge::translate_typed;
use crate::cp::CpTerm;
use crate::env::{Env, HyperEnv};
use crate::hcp::HcpTerm;
use crate::name::Name;
use crate::typecheck::{CpDerivation, HcpDerivation, Rule};
use crate::types::Type;

/// Builds CP derivations root first, so every sample is well typed by
/// construction. A goal lists bindings that must appear in the conclusion;
/// rules may add fresh names when a goal cannot be closed exactly.
pub(crate) struct Gen<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    next: usize,
}

type Goal = Vec<(Name, Type)>;

impl<'a> Gen<'a> {
    pub(crate) fn new(cfg: &'a GenConfig, rng: ChaCha8Rng) -> Gen<'a> {
        Gen { cfg, rng, next: 0 }
    }

    fn fresh(&mut self, prefix: &str) -> Name {
        self.next += 1;
        Name::new(format!("{prefix}{}", self.next))
    }

    fn weighted<T: Copy>(&mut self, options: &[(u32, T)]) -> T {
        let total: u32 = options.iter().map(|(w, _)| w).sum();
        let mut pick = self.rng.gen_range(0..total.max(1));
        for &(w, v) in options {
            if pick < w {
                return v;
            }
            pick -= w;
        }
        options[options.len() - 1].1
    }

    pub(crate) fn ty(&mut self, budget: usize) -> Type {
        let w = self.cfg.weights;
        let compound = if budget >= 3 { w.compound_type } else { 0 };
        let choice = self.weighted(&[
            (w.unit_type, 0),
            (w.unit_type, 1),
            (w.top_type, 2),
            (w.top_type, 3),
            (compound, 4),
        ]);
        match choice {
            0 => Type::One,
            1 => Type::Bot,
            2 => Type::Top,
            3 => Type::Zero,
            _ => {
                let left = self.rng.gen_range(1..=budget - 2);
                let a = self.ty(left);
                let b = self.ty(budget - 1 - left);
                match self.rng.gen_range(0..4) {
                    0 => Type::tensor(a, b),
                    1 => Type::par(a, b),
                    2 => Type::plus(a, b),
                    _ => Type::with(a, b),
                }
            }
        }
    }

    fn split(&mut self, goal: Goal) -> (Goal, Goal) {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for b in goal {
            if self.rng.gen_bool(0.5) {
                l.push(b);
            } else {
                r.push(b);
            }
        }
        (l, r)
    }

    /// Random root environment, then a derivation for it.
    pub(crate) fn cp(&mut self) -> CpDerivation {
        let k = self.rng.gen_range(1..=3);
        let goal: Goal = ["a", "b", "c"][..k]
            .iter()
            .map(|n| (Name::new(n), self.ty(self.cfg.max_type_size)))
            .collect();
        self.derive(goal, self.cfg.max_depth)
    }

    pub(crate) fn derive(&mut self, goal: Goal, depth: usize) -> CpDerivation {
        let w = self.cfg.weights;
        if goal.len() == 2
            && goal[0].1.dual() == goal[1].1
            && self.rng.gen_ratio(w.axiom, w.axiom + w.focus)
        {
            return axiom(&goal[0].0, &goal[1].0, &goal[0].1);
        }
        if depth == 0 {
            return self.leaf(goal);
        }
        let focusable: Vec<usize> = (0..goal.len()).filter(|&i| focusable(&goal, i)).collect();
        let focus = if focusable.is_empty() { 0 } else { w.focus };
        let absurd = if goal.iter().any(|(_, t)| *t == Type::Top) {
            w.absurd
        } else {
            0
        };
        match self.weighted(&[(focus, 0), (w.cut, 1), (absurd, 2), (w.absurd, 3)]) {
            0 => {
                let newest = *focusable.last().unwrap_or(&0);
                let i = if self.rng.gen_bool(0.5) {
                    newest
                } else {
                    *focusable.choose(&mut self.rng).unwrap_or(&0)
                };
                self.focus(goal, i, depth)
            }
            1 => self.cut(goal, depth),
            _ => self.leaf(goal),
        }
    }

    fn leaf(&mut self, goal: Goal) -> CpDerivation {
        let env: Env = goal.iter().cloned().collect();
        if let Some((x, _)) = goal.iter().find(|(_, t)| *t == Type::Top) {
            return node(Rule::Top, CpTerm::absurd(x.clone()), env, vec![]);
        }
        match &goal[..] {
            [(x, Type::One)] => node(Rule::One, CpTerm::halt(x.clone()), env, vec![]),
            [(x, a)] => {
                let y = self.fresh("y");
                axiom(x, &y, a)
            }
            [(x, a), (y, b)] if *b == a.dual() => axiom(x, y, a),
            _ => {
                let z = self.fresh("t");
                node(
                    Rule::Top,
                    CpTerm::absurd(z.clone()),
                    env.with(z, Type::Top),
                    vec![],
                )
            }
        }
    }

    fn focus(&mut self, mut goal: Goal, i: usize, depth: usize) -> CpDerivation {
        let (x, a) = goal.remove(i);
        let d = depth - 1;
        match a {
            Type::One => node(
                Rule::One,
                CpTerm::halt(x.clone()),
                Env::singleton(x, Type::One),
                vec![],
            ),
            Type::Top => {
                goal.push((x.clone(), Type::Top));
                node(
                    Rule::Top,
                    CpTerm::absurd(x),
                    goal.into_iter().collect(),
                    vec![],
                )
            }
            Type::Bot => {
                if goal.is_empty() {
                    let w = self.fresh("a");
                    let t = self.ty(self.cfg.max_type_size);
                    goal.push((w, t));
                }
                let p = self.derive(goal, d);
                let env = p.env.with(x.clone(), Type::Bot);
                node(Rule::Bot, CpTerm::wait(x, p.term.clone()), env, vec![p])
            }
            Type::Tensor(b, c) => {
                let y = self.fresh("y");
                let (mut l, mut r) = self.split(goal);
                l.push((y.clone(), *b.clone()));
                r.push((x.clone(), *c.clone()));
                let p = self.derive(l, d);
                let q = self.derive(r, d);
                let env = p
                    .env
                    .without(&y)
                    .union(&q.env.without(&x))
                    .expect("generated names are fresh")
                    .with(x.clone(), Type::Tensor(b, c));
                let term = CpTerm::send(x, y, p.term.clone(), q.term.clone());
                node(Rule::Tensor, term, env, vec![p, q])
            }
            Type::Par(b, c) => {
                let y = self.fresh("y");
                goal.push((y.clone(), *b.clone()));
                goal.push((x.clone(), *c.clone()));
                let p = self.derive(goal, d);
                let env = p.env.without(&y).with(x.clone(), Type::Par(b, c));
                node(Rule::Par, CpTerm::recv(x, y, p.term.clone()), env, vec![p])
            }
            Type::Plus(b, c) => {
                let left = self.rng.gen_bool(0.5);
                goal.push((x.clone(), if left { *b.clone() } else { *c.clone() }));
                let p = self.derive(goal, d);
                let env = p.env.with(x.clone(), Type::Plus(b, c));
                let (rule, term) = if left {
                    (Rule::Plus1, CpTerm::inl(x, p.term.clone()))
                } else {
                    (Rule::Plus2, CpTerm::inr(x, p.term.clone()))
                };
                node(rule, term, env, vec![p])
            }
            Type::With(b, c) => {
                let mut left_goal = goal.clone();
                left_goal.push((x.clone(), *b.clone()));
                let p = self.derive(left_goal, d);
                let right_env = p.env.with(x.clone(), *c.clone());
                match self.exact(&right_env, 2 * self.cfg.max_depth + 4) {
                    Some(q) => {
                        let env = p.env.with(x.clone(), Type::With(b, c));
                        let term = CpTerm::case(x, p.term.clone(), q.term.clone());
                        node(Rule::With, term, env, vec![p, q])
                    }
                    None => {
                        goal.push((x, Type::With(b, c)));
                        self.leaf(goal)
                    }
                }
            }
            Type::Zero => unreachable!("0 is never focused"),
        }
    }

    fn cut(&mut self, goal: Goal, depth: usize) -> CpDerivation {
        let z = self.fresh("x");
        let b = self.ty(self.cfg.max_type_size);
        let (mut l, mut r) = self.split(goal);
        l.push((z.clone(), b.clone()));
        r.push((z.clone(), b.dual()));
        let p = self.derive(l, depth - 1);
        let q = self.derive(r, depth - 1);
        let env = p
            .env
            .without(&z)
            .union(&q.env.without(&z))
            .expect("generated names are fresh");
        let term = CpTerm::cut(z, b, p.term.clone(), q.term.clone());
        node(Rule::Cut, term, env, vec![p, q])
    }

    /// Cut-free proof search for exactly `goal`; complete up to `fuel` rules.
    pub(crate) fn exact(&mut self, goal: &Env, fuel: usize) -> Option<CpDerivation> {
        if fuel == 0 || goal.is_empty() {
            return None;
        }
        let bindings: Vec<(Name, Type)> =
            goal.iter().map(|(n, t)| (n.clone(), t.clone())).collect();
        if let Some((x, _)) = bindings.iter().find(|(_, t)| *t == Type::Top) {
            return Some(node(
                Rule::Top,
                CpTerm::absurd(x.clone()),
                goal.clone(),
                vec![],
            ));
        }
        match &bindings[..] {
            [(x, Type::One)] => {
                return Some(node(
                    Rule::One,
                    CpTerm::halt(x.clone()),
                    goal.clone(),
                    vec![],
                ))
            }
            [(x, a), (y, b)] if *b == a.dual() => return Some(axiom(x, y, a)),
            _ => {}
        }
        for (x, a) in &bindings {
            let rest = goal.without(x);
            let found = match a {
                Type::Bot if !rest.is_empty() => self.exact(&rest, fuel - 1).map(|p| {
                    node(
                        Rule::Bot,
                        CpTerm::wait(x.clone(), p.term.clone()),
                        goal.clone(),
                        vec![p],
                    )
                }),
                Type::Par(b, c) => {
                    let y = self.fresh("y");
                    let inner = rest
                        .with(y.clone(), (**b).clone())
                        .with(x.clone(), (**c).clone());
                    self.exact(&inner, fuel - 1).map(|p| {
                        node(
                            Rule::Par,
                            CpTerm::recv(x.clone(), y, p.term.clone()),
                            goal.clone(),
                            vec![p],
                        )
                    })
                }
                Type::Plus(b, c) => {
                    let left = self.exact(&rest.with(x.clone(), (**b).clone()), fuel - 1);
                    match left {
                        Some(p) => Some(node(
                            Rule::Plus1,
                            CpTerm::inl(x.clone(), p.term.clone()),
                            goal.clone(),
                            vec![p],
                        )),
                        None => self
                            .exact(&rest.with(x.clone(), (**c).clone()), fuel - 1)
                            .map(|p| {
                                node(
                                    Rule::Plus2,
                                    CpTerm::inr(x.clone(), p.term.clone()),
                                    goal.clone(),
                                    vec![p],
                                )
                            }),
                    }
                }
                Type::With(b, c) => {
                    let p = self.exact(&rest.with(x.clone(), (**b).clone()), fuel - 1);
                    match p {
                        Some(p) => self
                            .exact(&rest.with(x.clone(), (**c).clone()), fuel - 1)
                            .map(|q| {
                                let term = CpTerm::case(x.clone(), p.term.clone(), q.term.clone());
                                node(Rule::With, term, goal.clone(), vec![p, q])
                            }),
                        None => None,
                    }
                }
                Type::Tensor(b, c) => self.exact_tensor(goal, x, b, c, fuel),
                _ => None,
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn exact_tensor(
        &mut self,
        goal: &Env,
        x: &Name,
        b: &Type,
        c: &Type,
        fuel: usize,
    ) -> Option<CpDerivation> {
        let rest: Vec<(Name, Type)> = goal
            .without(x)
            .iter()
            .map(|(n, t)| (n.clone(), t.clone()))
            .collect();
        let y = self.fresh("y");
        for mask in 0..(1usize << rest.len()) {
            let l: Env = (0..rest.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| rest[i].clone())
                .collect();
            let r: Env = (0..rest.len())
                .filter(|i| mask & (1 << i) == 0)
                .map(|i| rest[i].clone())
                .collect();
            let Some(p) = self.exact(&l.with(y.clone(), b.clone()), fuel - 1) else {
                continue;
            };
            let Some(q) = self.exact(&r.with(x.clone(), c.clone()), fuel - 1) else {
                continue;
            };
            let term = CpTerm::send(x.clone(), y.clone(), p.term.clone(), q.term.clone());
            return Some(node(Rule::Tensor, term, goal.clone(), vec![p, q]));
        }
        None
    }

    /// HCP derivations: translated CP derivations combined with free mixes,
    /// hypersequent cuts and tensors, and logical rules applied over mixes.
    pub(crate) fn hcp(&mut self, depth: usize) -> HcpDerivation {
        let w = self.cfg.weights;
        let deeper = if depth > 0 { 1 } else { 0 };
        match self.weighted(&[
            (w.focus, 0),
            (w.mix * deeper, 1),
            (w.cut * deeper, 2),
            (w.cut * deeper, 3),
            (w.focus * deeper, 4),
        ]) {
            0 => {
                let name = self.fresh("a");
                let t = self.ty(self.cfg.max_type_size);
                self.embedded(vec![(name, t)], depth)
            }
            1 => {
                let p = self.hcp(depth - 1);
                let q = self.hcp(depth - 1);
                mix(p, q)
            }
            2 => {
                let z = self.fresh("x");
                let b = self.ty(self.cfg.max_type_size);
                let p = self.embedded(vec![(z.clone(), b.clone())], depth - 1);
                let q = self.embedded(vec![(z.clone(), b.dual())], depth - 1);
                let inner = self.maybe_extra(mix(p, q), depth);
                let hyper = hcut_hyper(&inner.hyper, &z);
                let term = HcpTerm::new_(z, b, inner.term.clone());
                HcpDerivation {
                    rule: Rule::HCut,
                    term,
                    hyper,
                    premises: vec![inner],
                }
            }
            3 => {
                let (x, y) = (self.fresh("x"), self.fresh("y"));
                let (b, c) = (
                    self.ty(self.cfg.max_type_size / 2 + 1),
                    self.ty(self.cfg.max_type_size / 2 + 1),
                );
                let p = self.embedded(vec![(y.clone(), b.clone())], depth - 1);
                let q = self.embedded(vec![(x.clone(), c.clone())], depth - 1);
                let inner = self.maybe_extra(mix(p, q), depth);
                let (i, j) = (
                    inner.hyper.position(&y).unwrap_or(0),
                    inner.hyper.position(&x).unwrap_or(0),
                );
                let merged = inner.hyper.envs()[i]
                    .without(&y)
                    .union(&inner.hyper.envs()[j].without(&x))
                    .expect("generated names are fresh")
                    .with(x.clone(), Type::tensor(b, c));
                let hyper = replace_two(&inner.hyper, i, j, merged);
                let term = HcpTerm::out(x, y, inner.term.clone());
                HcpDerivation {
                    rule: Rule::Tensor,
                    term,
                    hyper,
                    premises: vec![inner],
                }
            }
            _ => {
                let p = self.hcp(depth - 1);
                self.unary_over(p)
            }
        }
    }

    fn embedded(&mut self, goal: Goal, depth: usize) -> HcpDerivation {
        let d = self.derive(goal, depth);
        translate_typed(&d).expect("generated derivations are valid")
    }

    fn maybe_extra(&mut self, d: HcpDerivation, depth: usize) -> HcpDerivation {
        if depth > 1
            && self.rng.gen_ratio(
                self.cfg.weights.mix,
                self.cfg.weights.mix + self.cfg.weights.focus,
            )
        {
            let extra = self.hcp(depth - 2);
            mix(d, extra)
        } else {
            d
        }
    }

    /// One logical rule applied on top of an arbitrary hypersequent.
    fn unary_over(&mut self, p: HcpDerivation) -> HcpDerivation {
        let members = p.hyper.len();
        if members == 0 || self.rng.gen_bool(0.25) {
            let x = self.fresh("u");
            let hyper = p
                .hyper
                .combine(&HyperEnv::single(Env::singleton(x.clone(), Type::One)));
            let term = HcpTerm::out_unit(x, p.term.clone());
            return HcpDerivation {
                rule: Rule::One,
                term,
                hyper,
                premises: vec![p],
            };
        }
        let i = self.rng.gen_range(0..members);
        let member = p.hyper.envs()[i].clone();
        let names: Vec<Name> = member.names().cloned().collect();
        match self.rng.gen_range(0..3) {
            0 if names.len() >= 2 => {
                let mut pick = names.clone();
                pick.shuffle(&mut self.rng);
                let (x, y) = (pick[0].clone(), pick[1].clone());
                let (a, b) = (
                    member.get(&y).cloned().unwrap_or(Type::One),
                    member.get(&x).cloned().unwrap_or(Type::One),
                );
                let env = member.without(&y).with(x.clone(), Type::par(a, b));
                let hyper = replace_one(&p.hyper, i, env);
                let term = HcpTerm::input(x, y, p.term.clone());
                HcpDerivation {
                    rule: Rule::Par,
                    term,
                    hyper,
                    premises: vec![p],
                }
            }
            1 => {
                let x = names
                    .choose(&mut self.rng)
                    .cloned()
                    .unwrap_or_else(|| Name::new("a"));
                let a = member.get(&x).cloned().unwrap_or(Type::One);
                let other = self.ty(2);
                let left = self.rng.gen_bool(0.5);
                let ty = if left {
                    Type::plus(a, other)
                } else {
                    Type::plus(other, a)
                };
                let hyper = replace_one(&p.hyper, i, member.with(x.clone(), ty));
                let (rule, term) = if left {
                    (Rule::Plus1, HcpTerm::inl(x, p.term.clone()))
                } else {
                    (Rule::Plus2, HcpTerm::inr(x, p.term.clone()))
                };
                HcpDerivation {
                    rule,
                    term,
                    hyper,
                    premises: vec![p],
                }
            }
            _ => {
                let x = self.fresh("v");
                let hyper = replace_one(&p.hyper, i, member.with(x.clone(), Type::Bot));
                let term = HcpTerm::in_unit(x, p.term.clone());
                HcpDerivation {
                    rule: Rule::Bot,
                    term,
                    hyper,
                    premises: vec![p],
                }
            }
        }
    }
}

fn focusable(goal: &Goal, i: usize) -> bool {
    match goal[i].1 {
        Type::Zero => false,
        Type::One => goal.len() == 1,
        _ => true,
    }
}

fn node(rule: Rule, term: CpTerm, env: Env, premises: Vec<CpDerivation>) -> CpDerivation {
    CpDerivation {
        rule,
        term,
        env,
        premises,
    }
}

fn axiom(x: &Name, y: &Name, a: &Type) -> CpDerivation {
    let env = Env::singleton(x.clone(), a.clone()).with(y.clone(), a.dual());
    node(Rule::Ax, CpTerm::link(x.clone(), y.clone()), env, vec![])
}

pub(crate) fn mix(p: HcpDerivation, q: HcpDerivation) -> HcpDerivation {
    HcpDerivation {
        rule: Rule::HMix,
        term: HcpTerm::par(p.term.clone(), q.term.clone()),
        hyper: p.hyper.combine(&q.hyper),
        premises: vec![p, q],
    }
}

fn hcut_hyper(h: &HyperEnv, z: &Name) -> HyperEnv {
    let pos = h.positions(z);
    let merged = h.envs()[pos[0]]
        .without(z)
        .union(&h.envs()[pos[1]].without(z))
        .expect("generated names are fresh");
    replace_two(h, pos[0], pos[1], merged)
}

fn replace_one(h: &HyperEnv, i: usize, env: Env) -> HyperEnv {
    let mut envs = h.envs().to_vec();
    envs[i] = env;
    HyperEnv::from_envs(envs)
}

fn replace_two(h: &HyperEnv, i: usize, j: usize, env: Env) -> HyperEnv {
    let envs = (0..h.len())
        .filter(|&k| k != i && k != j)
        .map(|k| h.envs()[k].clone());
    HyperEnv::from_envs(envs.chain(std::iter::once(env)).collect())
}
