use super::*;
use crate::congruence::equiv_hcp;
use crate::env::Env;
use crate::reduction::reduce;
use crate::surface::{parse_cp, parse_env, parse_hcp};
use crate::typecheck::{check_cp, check_hcp, revalidate_hcp, Tree};
use crate::types::Type;

fn env(s: &str) -> Env {
    parse_env(s).unwrap()
}

fn cp_d(t: &str, e: &str) -> CpDerivation {
    check_cp(&parse_cp(t).unwrap(), &env(e)).unwrap()
}

fn hcp_d(t: &str, e: &str) -> HcpDerivation {
    check_hcp(&parse_hcp(t).unwrap(), &env(e)).unwrap()
}

const TENSOR: &str = "new x:1 * 1 (x[y].(y[].0 | x[].0) | x(y).y().x().w[].0)";

fn nodes<'a>(d: &'a HcpDerivation, out: &mut Vec<&'a HcpDerivation>) {
    out.push(d);
    for p in &d.premises {
        nodes(p, out);
    }
}

#[test]
fn translation_inserts_mixes_under_cut_tensor_and_one() {
    let d = cp_d(TENSOR, "w:1");
    let h = translate_typed(&d).unwrap();
    assert!(revalidate_hcp(&h));
    assert_eq!(h.term, cp_to_hcp(&d.term));
    assert_eq!(h.hyper, HyperEnv::single(d.env.clone()));
    assert_eq!(h.rule, Rule::HCut);
    assert_eq!(h.premises[0].rule, Rule::HMix);
    let mut all = Vec::new();
    nodes(&h, &mut all);
    for n in all {
        match n.rule {
            Rule::One => assert_eq!(n.premises[0].rule, Rule::HMix0),
            Rule::Tensor => assert_eq!(n.premises[0].rule, Rule::HMix),
            _ => {}
        }
    }
}

#[test]
fn translation_rejects_corrupt_derivations() {
    let mut d = cp_d("x[].0", "x:1");
    d.env = env("x:bot");
    assert!(matches!(
        translate_typed(&d),
        Err(BridgeError::Precondition(_))
    ));
}

#[test]
fn forward_simulation_on_the_tensor_fixture() {
    let p = parse_cp(TENSOR).unwrap();
    let trace = reduce(&p);
    assert_eq!(trace.steps.len(), 3);
    assert!(simulate_forward(&p, &trace));
    let empty = Trace {
        initial: p.clone(),
        steps: vec![],
        status: trace.status,
    };
    assert!(simulate_forward(&p, &empty));
}

#[test]
fn forward_simulation_detects_a_bogus_step() {
    let p = parse_cp(TENSOR).unwrap();
    let mut trace = reduce(&p);
    trace.steps[0].term = parse_cp("w[].0").unwrap();
    assert!(!simulate_forward(&p, &trace));
}

#[test]
fn every_hcp_step_maps_back() {
    let p = parse_cp(TENSOR).unwrap();
    let image = cp_to_hcp(&p);
    let steps: Vec<HcpTerm> = image
        .find_redexes()
        .iter()
        .map(|r| image.step(r).unwrap())
        .collect();
    assert!(!steps.is_empty());
    for r in steps {
        let q = simulate_backward(&p, &r).unwrap();
        assert!(equiv_hcp(&r, &cp_to_hcp(&q)));
    }
    let unrelated = parse_hcp("w[].0").unwrap();
    assert!(matches!(
        simulate_backward(&p, &unrelated),
        Err(BridgeError::NoMatch { .. })
    ));
}

/// Prefix ⤋-rules change the term beyond congruence (`x[].(P | Q)` becomes
/// `(x[].P | Q)`), so `congruent` is only expected when none of them fired.
fn check_result(d: &HcpDerivation, r: &DisentangleResult, congruent: bool) {
    assert_eq!(
        equiv_hcp(&r.recombined, &d.term),
        congruent,
        "{} vs {}",
        r.recombined,
        d.term
    );
    let members: Vec<Env> = r.derivations.iter().map(|p| p.env.clone()).collect();
    assert_eq!(HyperEnv::from_envs(members), d.hyper);
    for p in &r.derivations {
        assert!(revalidate_cp(p), "{p}");
        assert!(check_cp(&p.term, &p.env).is_ok());
    }
}

#[test]
fn root_mixes_need_no_rule() {
    let d = hcp_d("(x[].0 | w[].0)", "x:1, w:1");
    let r = disentangle(&d).unwrap();
    assert_eq!(r.derivations.len(), 2);
    assert!(r.log.is_empty());
    check_result(&d, &r, true);
}

#[test]
fn mixes_move_below_cut_and_one() {
    let d = hcp_d("new x:1. (x[].0 | x().w[].0 | v[].0)", "w:1, v:1");
    let r = disentangle(&d).unwrap();
    assert_eq!(
        r.log,
        vec![DownStep {
            rule: Rule::HCut,
            channel: "x".into(),
            moved: 1
        }]
    );
    check_result(&d, &r, true);
    assert_eq!(
        r.derivations
            .iter()
            .find(|p| p.env.contains(&"w".into()))
            .unwrap()
            .rule,
        Rule::Cut
    );

    let d = hcp_d("x[].(w[].0 | v[].0)", "x:1, w:1, v:1");
    let r = disentangle(&d).unwrap();
    assert_eq!(
        r.log,
        vec![DownStep {
            rule: Rule::One,
            channel: "x".into(),
            moved: 2
        }]
    );
    check_result(&d, &r, false);
}

#[test]
fn mixes_move_below_unary_rules() {
    let d = hcp_d("x(y).y().x().(w[].0 | v[].0)", "x:bot par bot, w:1, v:1");
    let r = disentangle(&d).unwrap();
    let fired: Vec<Rule> = r.log.iter().map(|s| s.rule).collect();
    assert_eq!(fired, vec![Rule::Bot, Rule::Bot, Rule::Par]);
    check_result(&d, &r, false);

    let d = hcp_d("x!inl.(x[].0 | v[].0)", "x:1 + bot, v:1");
    let r = disentangle(&d).unwrap();
    assert_eq!(
        r.log,
        vec![DownStep {
            rule: Rule::Plus1,
            channel: "x".into(),
            moved: 1
        }]
    );
    check_result(&d, &r, false);
}

#[test]
fn reduced_translations_disentangle() {
    let p = parse_cp(TENSOR).unwrap();
    let trace = reduce(&cp_to_hcp(&p));
    let mut terms = vec![trace.initial.clone()];
    terms.extend(trace.steps.iter().map(|s| s.term.clone()));
    for t in terms {
        let d = check_hcp(&t, &env("w:1")).unwrap();
        check_result(&d, &disentangle(&d).unwrap(), true);
    }
}

#[test]
fn big_connectives() {
    assert_eq!(bigparr(&Env::new()), Type::Bot);
    assert_eq!(bigtens(&HyperEnv::empty()), Type::One);
    let h = HyperEnv::from_envs(vec![env("x:1"), env("w:1")]);
    assert_eq!(bigtens(&h), Type::tensor(Type::One, Type::One));
    assert_eq!(
        bigparr(&env("c:1, a:bot, b:top")),
        Type::par(Type::Bot, Type::par(Type::Top, Type::One))
    );
}

#[test]
fn parr_collapse_stacks_inputs_on_the_last_name() {
    let single = cp_d("x[].0", "x:1");
    assert_eq!(parr_collapse(&single).unwrap(), single);

    let d = cp_d("w().z[].0", "w:bot, z:1");
    let c = parr_collapse(&d).unwrap();
    assert_eq!(c.term.to_string(), "z(w).w().z[].0");
    assert_eq!(c.env, env("z:bot par 1"));
    assert!(revalidate_cp(&c));
    assert!(check_cp(&c.term, &c.env).is_ok());
}

#[test]
fn internalize_inert_and_two_singletons() {
    let d = hcp_d("0", "");
    let q = tens_internalize(&d).unwrap();
    assert_eq!(q.term.to_string(), "z[].0");
    assert_eq!(q.env, env("z:1"));

    let d = hcp_d("(x[].0 | w[].0)", "x:1, w:1");
    let q = tens_internalize(&d).unwrap();
    assert_eq!(
        q.env,
        Env::singleton("z".into(), Type::tensor(Type::One, Type::One))
    );
    assert!(revalidate_cp(&q));
    assert!(check_cp(&q.term, &q.env).is_ok());
    assert_eq!(q.count_nodes(), 3);
}

#[test]
fn internalize_single_sequent_is_a_collapse() {
    let d = hcp_d("w().z[].0", "w:bot, z:1");
    let q = tens_internalize(&d).unwrap();
    assert_eq!(q.rule, Rule::Par);
    let (_, ty) = q.env.iter().next().unwrap();
    assert_eq!(q.env.len(), 1);
    assert_eq!(*ty, Type::par(Type::Bot, Type::One));
    assert!(check_cp(&q.term, &q.env).is_ok());
}
