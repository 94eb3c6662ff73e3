use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    absorbers, bump, gen_cp, gen_hcp, shrink_cp, shrink_hcp, stream, Counters, GenConfig,
    SampleOutcome, Suite,
};
use super::{
    float_mixes, reduction_graph, SELF_LOCK_ENV, SELF_LOCK_FIXTURE, WITH_ENV, WITH_FIXTURE,
};
use crate::bridge::{
    bigtens, disentangle, simulate_backward, simulate_forward, tens_internalize, translate_typed,
};
use crate::congruence::{equiv_cp, equiv_hcp, rewrites_cp};
use crate::env::HyperEnv;
use crate::hcp::HcpTerm;
use crate::reduction::{reduce, Process, Status};
use crate::surface::{parse_env, parse_hcp, Dialect};
use crate::translate::cp_to_hcp;
use crate::typecheck::{
    check_cp, check_hcp, check_hcp_at, check_hcp_with, revalidate_cp, revalidate_hcp, CheckOptions,
    CpDerivation, HcpDerivation, Rule,
};

type Check<D> = fn(&D, &GenConfig, usize, &mut Counters) -> Result<(), String>;

pub(super) fn sample(suite: Suite, cfg: &GenConfig, index: usize) -> (SampleOutcome, Counters) {
    let hcp_suite = |check: Check<HcpDerivation>| run_hcp(cfg, index, check);
    let cp_suite = |check: Check<CpDerivation>| run_cp(cfg, index, check);
    match suite {
        Suite::PreservationCp => cp_suite(preservation_cp),
        Suite::PreservationHcp => hcp_suite(preservation_hcp),
        Suite::Progress if cfg.dialect == Dialect::Hcp => hcp_suite(progress_hcp),
        Suite::Progress => cp_suite(progress_cp),
        Suite::Termination if cfg.dialect == Dialect::Hcp => hcp_suite(termination_hcp),
        Suite::Termination => cp_suite(termination_cp),
        Suite::EquivPreservation => cp_suite(equiv_preservation),
        Suite::TranslateTyping => cp_suite(translate_typing),
        Suite::SimulateForward => cp_suite(forward),
        Suite::SimulateBackward => cp_suite(backward),
        Suite::Disentangle if index % 2 == 1 => run_reduced(cfg, index, disentangles),
        Suite::Disentangle => hcp_suite(disentangles),
        Suite::Internalize => hcp_suite(internalizes),
    }
}

fn outcome(
    index: usize,
    result: Result<(), String>,
    shrunk: impl FnOnce() -> String,
) -> SampleOutcome {
    match result {
        Ok(()) => SampleOutcome {
            index,
            passed: true,
            counterexample: None,
            detail: None,
        },
        Err(e) => SampleOutcome {
            index,
            passed: false,
            counterexample: Some(shrunk()),
            detail: Some(e),
        },
    }
}

fn run_cp(cfg: &GenConfig, index: usize, check: Check<CpDerivation>) -> (SampleOutcome, Counters) {
    let (_, _, d) = gen_cp(cfg, index);
    let mut counters = Counters::new();
    let result = check(&d, cfg, index, &mut counters);
    let out = outcome(index, result, || {
        let s = shrink_cp(&d, |c| check(c, cfg, index, &mut Counters::new()).is_err());
        format!("{} : {}", s.term, s.env)
    });
    (out, counters)
}

fn run_hcp(
    cfg: &GenConfig,
    index: usize,
    check: Check<HcpDerivation>,
) -> (SampleOutcome, Counters) {
    let (_, _, d) = gen_hcp(cfg, index);
    run_hcp_on(cfg, index, d, check)
}

fn run_hcp_on(
    cfg: &GenConfig,
    index: usize,
    d: HcpDerivation,
    check: Check<HcpDerivation>,
) -> (SampleOutcome, Counters) {
    let mut counters = Counters::new();
    let result = check(&d, cfg, index, &mut counters);
    let out = outcome(index, result, || {
        let s = shrink_hcp(&d, |c| check(c, cfg, index, &mut Counters::new()).is_err());
        format!("{} : {}", s.term, s.hyper)
    });
    (out, counters)
}

/// An HCP derivation of a translated CP sample after a random number of
/// reduction steps; these have mixes only directly under cuts and tensors.
fn run_reduced(
    cfg: &GenConfig,
    index: usize,
    check: Check<HcpDerivation>,
) -> (SampleOutcome, Counters) {
    let (p, env, d) = gen_cp(cfg, index);
    let h = cp_to_hcp(&p);
    // Reducts of wide samples are prenex terms with many absorbing
    // components, whose typing is too costly to infer; those run unreduced.
    if absorbers(&h) > cfg.max_absorbers {
        return match translate_typed(&d) {
            Ok(h) => run_hcp_on(cfg, index, h, check),
            Err(e) => (
                SampleOutcome {
                    index,
                    passed: false,
                    counterexample: Some(p.to_string()),
                    detail: Some(e.to_string()),
                },
                Counters::new(),
            ),
        };
    }
    let trace = reduce(&h);
    let k = stream(cfg, index, 2).gen_range(0..=trace.steps.len());
    let t = if k == 0 {
        trace.initial.clone()
    } else {
        trace.steps[k - 1].term.clone()
    };
    match check_hcp_at(&t, &HyperEnv::single(env.clone()), CheckOptions::default()) {
        Ok(d) => run_hcp_on(cfg, index, d, check),
        Err(e) => {
            let detail = Some(format!("reduct of a translated sample is ill-typed: {e}"));
            let counterexample = Some(format!("{t} : {env}"));
            (
                SampleOutcome {
                    index,
                    passed: false,
                    counterexample,
                    detail,
                },
                Counters::new(),
            )
        }
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn self_check_cp(d: &CpDerivation) -> Result<(), String> {
    ensure(revalidate_cp(d), || {
        "sample derivation does not revalidate".into()
    })?;
    check_cp(&d.term, &d.env)
        .map(|_| ())
        .map_err(|e| format!("sample rejected by the checker: {e}"))
}

fn self_check_hcp(d: &HcpDerivation) -> Result<(), String> {
    ensure(revalidate_hcp(d), || {
        "sample derivation does not revalidate".into()
    })?;
    let env = d.hyper.flatten().ok_or("sample environment is not flat")?;
    check_hcp(&d.term, &env)
        .map(|_| ())
        .map_err(|e| format!("sample rejected by the checker: {e}"))
}

/// The start term, every term on its trace, and every one-step reduct of those.
fn reachable<T: Process>(t: &T) -> Vec<T> {
    let trace = reduce(t);
    let mut out = vec![trace.initial.clone()];
    out.extend(trace.steps.iter().map(|s| s.term.clone()));
    let succ: Vec<T> = out
        .iter()
        .flat_map(|u| {
            u.find_redexes()
                .into_iter()
                .filter_map(|r| u.step(&r).ok())
                .collect::<Vec<_>>()
        })
        .collect();
    out.extend(succ);
    out
}

fn preservation_cp(
    d: &CpDerivation,
    _: &GenConfig,
    _: usize,
    c: &mut Counters,
) -> Result<(), String> {
    self_check_cp(d)?;
    for t in reachable(&d.term) {
        bump(c, "reducts");
        check_cp(&t, &d.env).map_err(|e| format!("reduct {t} is ill-typed: {e}"))?;
    }
    Ok(())
}

fn preservation_hcp(
    d: &HcpDerivation,
    cfg: &GenConfig,
    _: usize,
    c: &mut Counters,
) -> Result<(), String> {
    self_check_hcp(d)?;
    for t in reachable(&d.term) {
        bump(c, "reducts");
        check_hcp_at(&t, &d.hyper, cfg.opts).map_err(|e| {
            format!(
                "reduct {t} is not typed at the original hyper-environment {}: {e}",
                d.hyper
            )
        })?;
    }
    Ok(())
}

fn progress_on<T: Process>(t: &T, c: &mut Counters) -> Result<(), String> {
    let trace = reduce(t);
    let mut terms = vec![trace.initial.clone()];
    terms.extend(trace.steps.iter().map(|s| s.term.clone()));
    for u in &terms {
        if u.find_redexes().is_empty() {
            ensure(u.is_canonical(), || {
                format!("{u} has no redex and is not canonical")
            })?;
            ensure(u.check_blocked() == Ok(true), || {
                format!("canonical {u} is not blocked on a free name")
            })?;
            bump(c, "canonical");
        }
    }
    ensure(trace.status == Status::Canonical, || {
        format!("reduction ended {:?}", trace.status)
    })
}

fn progress_cp(d: &CpDerivation, _: &GenConfig, _: usize, c: &mut Counters) -> Result<(), String> {
    self_check_cp(d)?;
    progress_on(&d.term, c)
}

fn progress_hcp(
    d: &HcpDerivation,
    _: &GenConfig,
    _: usize,
    c: &mut Counters,
) -> Result<(), String> {
    self_check_hcp(d)?;
    progress_on(&d.term, c)
}

fn termination_on<T: Process>(t: &T, cfg: &GenConfig, c: &mut Counters) -> Result<(), String> {
    let bound = t.measure().total();
    let trace = reduce(t);
    for s in &trace.steps {
        bump(c, s.redex.rule.symbol());
    }
    ensure(trace.status == Status::Canonical, || {
        format!("reduction ended {:?}", trace.status)
    })?;
    ensure(trace.steps.len() <= bound, || {
        format!(
            "{} steps exceed the measure total {bound}",
            trace.steps.len()
        )
    })?;
    ensure(trace.measure_decreases(), || {
        "measure did not decrease at some step".into()
    })?;
    let g = reduction_graph(t, cfg.graph_budget).map_err(|e| e.to_string())?;
    let longest = g.path_lengths().into_iter().max().unwrap_or(0);
    ensure(longest <= bound, || {
        format!("graph path of length {longest} exceeds the measure total {bound}")
    })?;
    ensure(
        g.terminals().iter().all(|&k| g.nodes[k].is_canonical()),
        || "terminal node is not canonical".into(),
    )
}

fn termination_cp(
    d: &CpDerivation,
    cfg: &GenConfig,
    _: usize,
    c: &mut Counters,
) -> Result<(), String> {
    self_check_cp(d)?;
    termination_on(&d.term, cfg, c)
}

fn termination_hcp(
    d: &HcpDerivation,
    cfg: &GenConfig,
    _: usize,
    c: &mut Counters,
) -> Result<(), String> {
    self_check_hcp(d)?;
    termination_on(&d.term, cfg, c)
}

fn equiv_preservation(
    d: &CpDerivation,
    cfg: &GenConfig,
    index: usize,
    c: &mut Counters,
) -> Result<(), String> {
    let mut rng = stream(cfg, index, 3);
    let mut q = d.term.clone();
    for _ in 0..rng.gen_range(1..=4) {
        let next = rewrites_cp(&q);
        match next.choose(&mut rng) {
            Some(r) => q = r.clone(),
            None => break,
        }
    }
    bump(
        c,
        if q.alpha_eq(&d.term) {
            "identical"
        } else {
            "rewritten"
        },
    );
    check_cp(&q, &d.env).map_err(|e| format!("rewrite {q} is ill-typed: {e}"))?;
    ensure(equiv_cp(&d.term, &q), || format!("{} ≢ {q} in CP", d.term))?;
    ensure(equiv_hcp(&cp_to_hcp(&d.term), &cp_to_hcp(&q)), || {
        format!("translations of {} and {q} differ", d.term)
    })
}

fn translate_typing(
    d: &CpDerivation,
    _: &GenConfig,
    _: usize,
    _: &mut Counters,
) -> Result<(), String> {
    let h = translate_typed(d).map_err(|e| e.to_string())?;
    ensure(revalidate_hcp(&h), || {
        "translated derivation does not revalidate".into()
    })?;
    ensure(h.hyper == HyperEnv::single(d.env.clone()), || {
        format!("translated conclusion is {}", h.hyper)
    })?;
    ensure(h.term == cp_to_hcp(&d.term), || {
        "translated derivation concludes another term".into()
    })?;
    check_hcp_at(&h.term, &h.hyper, CheckOptions::default())
        .map(|_| ())
        .map_err(|e| format!("translation rejected: {e}"))
}

fn forward(d: &CpDerivation, _: &GenConfig, _: usize, c: &mut Counters) -> Result<(), String> {
    let trace = reduce(&d.term);
    for _ in &trace.steps {
        bump(c, "steps");
    }
    ensure(simulate_forward(&d.term, &trace), || {
        "a CP step has no matching HCP step".into()
    })
}

fn backward(d: &CpDerivation, _: &GenConfig, _: usize, c: &mut Counters) -> Result<(), String> {
    let trace = reduce(&d.term);
    let mut terms = vec![trace.initial.clone()];
    terms.extend(trace.steps.iter().map(|s| s.term.clone()));
    for p in &terms {
        let image = cp_to_hcp(p);
        for r in image.find_redexes() {
            let next = image.step(&r).map_err(|e| e.to_string())?;
            let q = simulate_backward(p, &next).map_err(|e| e.to_string())?;
            bump(c, "reflected");
            ensure(equiv_hcp(&next, &cp_to_hcp(&q)), || {
                format!("{q} does not match {next}")
            })?;
        }
    }
    Ok(())
}

fn disentangles(
    d: &HcpDerivation,
    _: &GenConfig,
    _: usize,
    c: &mut Counters,
) -> Result<(), String> {
    let r = disentangle(d).map_err(|e| e.to_string())?;
    let members = HyperEnv::from_envs(r.derivations.iter().map(|p| p.env.clone()).collect());
    ensure(members == d.hyper, || {
        format!("components type {members}, expected {}", d.hyper)
    })?;
    for p in &r.derivations {
        check_cp(&p.term, &p.env)
            .map_err(|e| format!("component {} : {} rejected: {e}", p.term, p.env))?;
    }
    let expected = float_mixes(d);
    ensure(equiv_hcp(&r.recombined, &expected), || {
        format!("{} ≢ {expected}", r.recombined)
    })?;
    if r.log.iter().all(|s| s.rule == Rule::HCut) {
        bump(c, "congruent to input");
        ensure(equiv_hcp(&r.recombined, &d.term), || {
            format!("{} ≢ input {}", r.recombined, d.term)
        })?;
    } else {
        bump(c, "prefix moves");
    }
    if d.hyper.len() >= 3 {
        bump(c, "three or more members");
    }
    Ok(())
}

fn internalizes(
    d: &HcpDerivation,
    _: &GenConfig,
    _: usize,
    _: &mut Counters,
) -> Result<(), String> {
    let q = tens_internalize(d).map_err(|e| e.to_string())?;
    let mut bindings = q.env.iter();
    let (Some((_, ty)), None) = (bindings.next(), bindings.next()) else {
        return Err(format!(
            "internalized environment {} is not a single binding",
            q.env
        ));
    };
    ensure(*ty == bigtens(&d.hyper), || {
        format!("internalized at {ty}, expected {}", bigtens(&d.hyper))
    })?;
    ensure(revalidate_cp(&q), || {
        "internalized derivation does not revalidate".into()
    })?;
    check_cp(&q.term, &q.env)
        .map(|_| ())
        .map_err(|e| format!("{} rejected: {e}", q.term))
}

/// Negative controls run by the progress suite after the samples: the
/// self-locking and &-fixtures. Rejected fixtures pass; accepted ones must
/// still make progress, which they do not.
pub(super) fn controls(suite: Suite, cfg: &GenConfig) -> Vec<SampleOutcome> {
    if suite != Suite::Progress {
        return vec![];
    }
    [(SELF_LOCK_FIXTURE, SELF_LOCK_ENV), (WITH_FIXTURE, WITH_ENV)]
        .iter()
        .enumerate()
        .map(|(k, (src, env))| {
            let t: HcpTerm = parse_hcp(src).expect("fixture parses");
            let env = parse_env(env).expect("fixture parses");
            let result = match check_hcp_with(&t, &env, cfg.opts) {
                Err(_) => Ok(()),
                Ok(_) => progress_on(&t, &mut Counters::new()),
            };
            outcome(cfg.count + k, result, || format!("{t} : {env}"))
        })
        .collect()
}
