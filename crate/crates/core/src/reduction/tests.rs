use super::*;
use crate::cp::CpTerm;
use crate::hcp::HcpTerm;
use crate::surface::{parse_cp, parse_hcp};
use crate::types::Type;

fn cp(s: &str) -> CpTerm {
    parse_cp(s).unwrap()
}

fn hcp(s: &str) -> HcpTerm {
    parse_hcp(s).unwrap()
}

fn tensor_fixture() -> CpTerm {
    CpTerm::cut(
        "x",
        Type::tensor(Type::One, Type::One),
        CpTerm::send("x", "y", CpTerm::halt("y"), CpTerm::halt("x")),
        CpTerm::recv(
            "x",
            "y",
            CpTerm::wait("y", CpTerm::wait("x", CpTerm::halt("w"))),
        ),
    )
}

#[test]
fn one_bot_redex() {
    let t = cp("new x:1 (x[].0 | x().w[].0)");
    let rs = t.find_redexes();
    assert_eq!(rs.len(), 1);
    assert_eq!((rs[0].rule, rs[0].channel.as_str()), (RuleTag::OneBot, "x"));
    assert_eq!(t.step(&rs[0]).unwrap(), CpTerm::halt("w"));
}

#[test]
fn link_redex_substitutes() {
    let t = cp("new x:bot (w<->x | x[].0)");
    let rs = t.find_redexes();
    assert_eq!(rs[0].rule, RuleTag::Link);
    assert_eq!(t.step(&rs[0]).unwrap(), CpTerm::halt("w"));
}

#[test]
fn hcp_one_bot_yields_composition() {
    let t = hcp("new x:1. (x[].a[].0 | x().b[].0)");
    let rs = t.find_redexes();
    assert_eq!(rs.len(), 1);
    let next = t.step(&rs[0]).unwrap();
    assert_eq!(next, hcp("(a[].0 | b[].0)"));
}

#[test]
fn hcp_tensor_par_opens_two_restrictions() {
    let t = hcp("new x:1 * 1. (x[y].(y[].0 | x[].0) | x(z).z().x().w[].0)");
    let r = &t.find_redexes()[0];
    assert_eq!(r.rule, RuleTag::TensorPar);
    let next = t.step(r).unwrap();
    let expected = hcp("new x:1. new y:1. ((y[].0 | x[].0) | y().x().w[].0)");
    assert_eq!(next, expected);
}

#[test]
fn cp_tensor_par_nests_two_cuts() {
    let t = tensor_fixture();
    let r = &t.find_redexes()[0];
    assert_eq!(r.rule, RuleTag::TensorPar);
    let next = t.step(r).unwrap();
    assert_eq!(
        next,
        cp("new y:1 (y[].0 | new x:1 (x[].0 | y().x().w[].0))")
    );
    let trace = reduce(&t);
    assert_eq!(trace.steps.len(), 3);
    assert_eq!(trace.status, Status::Canonical);
    assert_eq!(*trace.last(), CpTerm::halt("w"));
    assert!(trace.measure_decreases());
    assert_eq!(
        trace.render().lines().next().unwrap(),
        "step 1: β⊗⅋ on x ⇒ new y:1 (y[].0 | new x:1 (x[].0 | y().x().w[].0)) [measure: {1, 1}]"
    );
}

#[test]
fn tensor_fixture_graph_is_a_single_path() {
    let g = explore(&tensor_fixture(), GRAPH_BUDGET);
    assert!(g.complete);
    assert!(g.is_path());
    assert_eq!(g.path_lengths(), vec![3]);
    assert_eq!(g.nodes.len(), 4);
}

#[test]
fn free_links_are_canonical() {
    let t = cp("x<->y");
    assert!(t.is_canonical());
    assert_eq!(reduce(&t).steps.len(), 0);
    assert!(hcp("(x<->y | z<->w)").is_canonical());
    assert!(!hcp("new x:1. (x[].0 | x().0)").is_canonical());
}

#[test]
fn canonical_terms_are_blocked() {
    let t = cp("new x:bot (new y:bot (a().x().y().c[].0 | y[].0) | x[].0)");
    assert!(t.find_redexes().is_empty());
    assert!(t.is_canonical());
    assert_eq!(t.check_blocked(), Ok(true));

    let h = hcp("new x:1. (a().x().b[].0 | c[].0 | x[].0)");
    assert!(h.is_canonical());
    assert_eq!(h.check_blocked(), Ok(true));

    assert!(HcpTerm::Inert.is_canonical());
    assert_eq!(HcpTerm::Inert.check_blocked(), Ok(true));
    assert_eq!(
        cp("new x:1 (x[].0 | x().w[].0)").check_blocked(),
        Err(ReductionError::NotCanonical)
    );
}

#[test]
fn stale_redex_is_rejected() {
    let t = cp("new x:1 (x[].0 | x().w[].0)");
    let r = t.find_redexes()[0].clone();
    let next = t.step(&r).unwrap();
    assert!(matches!(next.step(&r), Err(ReductionError::StaleRedex(_))));
}

#[test]
fn choice_redexes() {
    let t = cp("new x:1 + bot (x!inr.x().w[].0 | x?{inl: x().w[].0; inr: x[].0})");
    let trace = reduce(&t);
    assert_eq!(trace.steps[0].redex.rule, RuleTag::PlusWith2);
    assert_eq!(trace.steps.len(), 2);
    assert_eq!(*trace.last(), CpTerm::halt("w"));
}
