use super::*;
use crate::cp::CpTerm;
use crate::env::{Env, HyperEnv};
use crate::hcp::HcpTerm;
use crate::surface::{parse_cp, parse_env, parse_hcp};
use crate::types::Type;

fn env(s: &str) -> Env {
    parse_env(s).unwrap()
}

fn rules(d: &CpDerivation, out: &mut Vec<Rule>) {
    out.push(d.rule);
    d.premises.iter().for_each(|p| rules(p, out));
}

#[test]
fn axiom_at_dual_types() {
    let d = check_cp(&CpTerm::link("x", "y"), &env("x:bot, y:1")).unwrap();
    assert_eq!(d.rule, Rule::Ax);
    let e = check_cp(&CpTerm::link("x", "y"), &env("x:bot, y:bot")).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::TypeMismatch);
}

#[test]
fn halt_is_a_leaf_at_exactly_one_name() {
    let d = check_cp(&CpTerm::halt("x"), &env("x:1")).unwrap();
    assert_eq!((d.rule, d.premises.len()), (Rule::One, 0));
    let e = check_cp(&CpTerm::halt("x"), &env("x:1, z:1")).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::UnusedLinear);
    assert_eq!(e.name.unwrap().as_str(), "z");
}

#[test]
fn tensor_par_cut() {
    let t = CpTerm::cut(
        "x",
        Type::tensor(Type::One, Type::One),
        CpTerm::send("x", "y", CpTerm::halt("y"), CpTerm::halt("x")),
        CpTerm::recv(
            "x",
            "y",
            CpTerm::wait("y", CpTerm::wait("x", CpTerm::halt("w"))),
        ),
    );
    let d = check_cp(&t, &env("w:1")).unwrap();
    let mut rs = Vec::new();
    rules(&d, &mut rs);
    for r in [Rule::Cut, Rule::Tensor, Rule::Par, Rule::One, Rule::Bot] {
        assert!(rs.contains(&r), "{r} missing");
    }
    assert!(revalidate_cp(&d));
    // Each subterm checks on its own against the environment its node records.
    for p in &d.premises {
        assert_eq!(check_cp(&p.term, &p.env).unwrap().env, p.env);
    }
}

#[test]
fn split_conflicts_and_unknown_names() {
    let t = parse_cp("new x:1 (x[].0 | x().w<->z)").unwrap();
    assert!(check_cp(&t, &env("w:1, z:bot")).is_ok());
    let t = parse_cp("x[y].(y<->w | x<->w)").unwrap();
    let e = check_cp(&t, &env("x:1 * 1, w:bot")).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::SplitConflict);
    let e = check_cp(&CpTerm::halt("q"), &env("x:1")).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::UnknownName);
    let e = check_cp(&CpTerm::link("x", "x"), &env("x:1")).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::NameReuse);
}

#[test]
fn top_absorbs_unused_names_across_a_cut() {
    let t = parse_cp("new x:1 (x[].0 | x().y?{})").unwrap();
    let d = check_cp(&t, &env("y:top, z:1 * bot")).unwrap();
    assert!(revalidate_cp(&d));
    let t = parse_cp("new x:1 (x[].0 | x().y[].0)").unwrap();
    assert_eq!(
        check_cp(&t, &env("y:1, z:1")).unwrap_err().kind,
        TypeErrorKind::UnusedLinear
    );
}

#[test]
fn bound_names_shadowing_declared_ones_are_renamed() {
    let t = parse_cp("new w:1 (w[].0 | w().x<->y)").unwrap();
    let d = check_cp(&t, &env("w:1 + top, x:bot, y:1")).unwrap_err();
    assert_eq!(d.kind, TypeErrorKind::UnusedLinear);
    let d = check_cp(&t, &env("x:bot, y:1")).unwrap();
    assert!(d.term.alpha_eq(&t));
}

#[test]
fn hcp_mix_keeps_sequents_apart() {
    let t = HcpTerm::par(
        HcpTerm::out_unit("x", HcpTerm::Inert),
        HcpTerm::out_unit("w", HcpTerm::Inert),
    );
    let d = check_hcp(&t, &env("x:1, w:1")).unwrap();
    assert_eq!(d.hyper, HyperEnv::from_envs(vec![env("x:1"), env("w:1")]));
    assert!(revalidate_hcp(&d));
}

#[test]
fn hcp_cut_joins_sequents() {
    let t = HcpTerm::new_(
        "x",
        Type::Bot,
        HcpTerm::par(
            HcpTerm::in_unit("x", HcpTerm::out_unit("w", HcpTerm::Inert)),
            HcpTerm::out_unit("x", HcpTerm::Inert),
        ),
    );
    let d = check_hcp(&t, &env("w:1")).unwrap();
    assert_eq!(d.hyper, HyperEnv::single(env("w:1")));
    assert!(revalidate_hcp(&d));
}

#[test]
fn self_lock() {
    let t = HcpTerm::new_(
        "x",
        Type::Bot,
        HcpTerm::in_unit("x", HcpTerm::out_unit("x", HcpTerm::Inert)),
    );
    let e = check_hcp(&t, &Env::new()).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::SelfLock);
    assert_eq!(e.name.unwrap().as_str(), "x");

    let t = parse_hcp("new x:bot. x().(x[].0 | w[].0)").unwrap();
    assert_eq!(
        check_hcp(&t, &env("w:1")).unwrap_err().kind,
        TypeErrorKind::SelfLock
    );
    let off = CheckOptions {
        self_lock: false,
        ..CheckOptions::default()
    };
    let d = check_hcp_with(&t, &env("w:1"), off).unwrap();
    assert_eq!(d.hyper, HyperEnv::single(env("w:1")));
}

const STUCK: &str = "new x:1 & 1. new y:bot + bot. (\
    x?{inl: (y!inl.y().z[].0 | x[].0); inr: (y!inr.y().z[].0 | x[].0)} | \
    y?{inl: (x!inl.x().w[].0 | y[].0); inr: (x!inr.x().w[].0 | y[].0)})";

#[test]
fn with_forbids_hyper_environments() {
    let t = parse_hcp(STUCK).unwrap();
    let e = check_hcp(&t, &env("z:1, w:1")).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::HyperContextForbidden);
    let liberal = CheckOptions {
        strict_with: false,
        ..CheckOptions::default()
    };
    let d = check_hcp_with(&t, &env("z:1, w:1"), liberal).unwrap();
    assert_eq!(d.hyper, HyperEnv::from_envs(vec![env("z:1"), env("w:1")]));
}

#[test]
fn corrupted_premise_fails_revalidation() {
    let t = parse_cp("new x:1 (x[].0 | x().w[].0)").unwrap();
    let mut d = check_cp(&t, &env("w:1")).unwrap();
    assert!(revalidate_cp(&d));
    d.premises[1].env = env("x:bot, w:bot");
    assert!(!revalidate_cp(&d));

    let h = parse_hcp("(x[].0 | w[].0)").unwrap();
    let mut d = check_hcp(&h, &env("x:1, w:1")).unwrap();
    d.hyper = HyperEnv::single(env("x:1, w:1"));
    assert!(!revalidate_hcp(&d));
}

#[test]
fn renders_tree_and_json() {
    let t = parse_cp("new x:1 (x[].0 | x().w[].0)").unwrap();
    let d = check_cp(&t, &env("w:1")).unwrap();
    let text = d.render_tree();
    assert!(text.starts_with("(Cut) ⊢ new x:1 (x[].0 | x().w[].0) : w:1\n"));
    assert_eq!(d.render_json_lines().lines().count(), d.count_nodes());
}
