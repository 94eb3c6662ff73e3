//! Acceptance suite: one pass/fail line per criterion.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sill_core::bridge::{bigparr, bigtens};
use sill_core::congruence::{equiv_cp, equiv_hcp, rewrites_cp, rewrites_hcp};
use sill_core::harness::{
    bfs_equiv_cp, bfs_equiv_hcp, gen_cp, gen_hcp, run_suite, GenConfig, Suite, SELF_LOCK_ENV,
    SELF_LOCK_FIXTURE, WITH_ENV, WITH_FIXTURE,
};
use sill_core::reduction::{explore, reduce, Process, Status};
use sill_core::surface::{parse_env, parse_hcp, parse_session, print_session, DeclBody, Dialect};
use sill_core::typecheck::{check_hcp_with, CheckOptions, TypeErrorKind};
use sill_core::{Env, HyperEnv, Type};

const SEED: u64 = 42;
const METATHEORY_SAMPLES: usize = 500;
const TRANSLATION_SAMPLES: usize = 500;
const DISENTANGLE_SAMPLES: usize = 300;
const INTERNALIZE_SAMPLES: usize = 300;
const ORACLE_PAIRS: usize = 200;
const TIME_LIMIT: Duration = Duration::from_secs(60);
/// Rewrites from each end in the BFS oracle; pairs are at most this many
/// rewrites apart on either side.
const BFS_RADIUS: usize = 2;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn config(count: usize, dialect: Dialect) -> GenConfig {
    GenConfig {
        seed: SEED,
        count,
        dialect,
        ..GenConfig::default()
    }
}

fn suites(list: &[Suite], count: usize, dialects: &[Dialect]) -> Verdict {
    let mut failed = Vec::new();
    let mut samples = 0;
    for &dialect in dialects {
        for &suite in list {
            let report = run_suite(suite, &config(count, dialect));
            samples += report.samples.len();
            if !report.passed() {
                failed.push(format!(
                    "{suite} ({dialect:?}): {}",
                    report.render_text().trim_end()
                ));
            }
        }
    }
    if failed.is_empty() {
        Ok(format!("{samples} samples"))
    } else {
        Err(failed.join("; "))
    }
}

fn metatheory() -> Verdict {
    let start = Instant::now();
    let list = [
        Suite::PreservationCp,
        Suite::PreservationHcp,
        Suite::Progress,
        Suite::Termination,
    ];
    let detail = suites(&list, METATHEORY_SAMPLES, &[Dialect::Cp, Dialect::Hcp])?;
    let elapsed = start.elapsed();
    if elapsed > TIME_LIMIT {
        return Err(format!("{detail} in {elapsed:.1?}, over {TIME_LIMIT:?}"));
    }
    Ok(format!("{detail} in {elapsed:.1?}"))
}

fn bound_violations<T: Process>(t: &T) -> usize {
    let trace = reduce(t);
    let within = trace.steps.len() <= t.measure().total();
    usize::from(!within)
        + usize::from(!trace.measure_decreases())
        + usize::from(trace.status != Status::Canonical)
}

fn termination_bound() -> Verdict {
    let cp = config(METATHEORY_SAMPLES, Dialect::Cp);
    let hcp = config(METATHEORY_SAMPLES, Dialect::Hcp);
    let mut violations = 0;
    let mut steps = 0;
    for i in 0..METATHEORY_SAMPLES {
        let (p, _, _) = gen_cp(&cp, i);
        let (h, _, _) = gen_hcp(&hcp, i);
        violations += bound_violations(&p) + bound_violations(&h);
        steps += reduce(&p).steps.len() + reduce(&h).steps.len();
    }
    if violations == 0 {
        Ok(format!(
            "{} traces, {steps} steps, 0 violations",
            2 * METATHEORY_SAMPLES
        ))
    } else {
        Err(format!("{violations} violations"))
    }
}

fn translation() -> Verdict {
    let list = [
        Suite::TranslateTyping,
        Suite::EquivPreservation,
        Suite::SimulateForward,
        Suite::SimulateBackward,
    ];
    suites(&list, TRANSLATION_SAMPLES, &[Dialect::Cp])
}

fn disentanglement() -> Verdict {
    suites(&[Suite::Disentangle], DISENTANGLE_SAMPLES, &[Dialect::Hcp])
}

fn internalization() -> Verdict {
    if bigparr(&Env::new()) != Type::Bot {
        return Err(format!("bigparr(∅) = {}", bigparr(&Env::new())));
    }
    if bigtens(&HyperEnv::empty()) != Type::One {
        return Err(format!("bigtens(∅) = {}", bigtens(&HyperEnv::empty())));
    }
    suites(&[Suite::Internalize], INTERNALIZE_SAMPLES, &[Dialect::Hcp])
        .map(|d| format!("empty cases exact, {d}"))
}

fn negative_controls() -> Verdict {
    let fixtures = [
        (
            SELF_LOCK_FIXTURE,
            SELF_LOCK_ENV,
            TypeErrorKind::SelfLock,
            CheckOptions {
                self_lock: false,
                ..CheckOptions::default()
            },
        ),
        (
            WITH_FIXTURE,
            WITH_ENV,
            TypeErrorKind::HyperContextForbidden,
            CheckOptions {
                strict_with: false,
                ..CheckOptions::default()
            },
        ),
    ];
    for (src, env, kind, lax) in fixtures {
        let t = parse_hcp(src).map_err(|e| e.to_string())?;
        let env = parse_env(env).map_err(|e| e.to_string())?;
        match check_hcp_with(&t, &env, CheckOptions::default()) {
            Err(e) if e.kind == kind => {}
            Err(e) => return Err(format!("{src}: expected {kind:?}, got {:?}", e.kind)),
            Ok(_) => return Err(format!("{src}: accepted")),
        }
        check_hcp_with(&t, &env, lax)
            .map_err(|e| format!("{src}: rejected with the check off: {e}"))?;
        let status = reduce(&t).status;
        if status != Status::Stuck {
            return Err(format!("{src}: reduction ended {status:?}, not stuck"));
        }
    }
    let mut caught = 0;
    for (_, _, _, lax) in fixtures {
        let cfg = GenConfig {
            opts: lax,
            ..config(METATHEORY_SAMPLES, Dialect::Hcp)
        };
        caught += usize::from(!run_suite(Suite::Progress, &cfg).passed());
    }
    if caught == 2 {
        Ok(
            "both rejected; with each check off the fixture is stuck and the progress suite fails"
                .into(),
        )
    } else {
        Err(format!("progress suite failed for {caught} of 2 mutations"))
    }
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn determinism() -> Verdict {
    let mut files = 0;
    let mut entries: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "sill"))
        .collect();
    entries.sort();
    for path in &entries {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let file = parse_session(&text).map_err(|e| format!("{}:{e}", path.display()))?;
        let printed = print_session(&file);
        let again =
            parse_session(&printed).map_err(|e| format!("{}: reprint: {e}", path.display()))?;
        let same = file.decls.len() == again.decls.len()
            && file.decls.iter().zip(&again.decls).all(|(a, b)| {
                a.name == b.name
                    && a.env == b.env
                    && match (&a.body, &b.body) {
                        (DeclBody::Cp(x), DeclBody::Cp(y)) => x == y,
                        (DeclBody::Hcp(x), DeclBody::Hcp(y)) => x == y,
                        _ => false,
                    }
            });
        if !same || print_session(&again) != printed {
            return Err(format!(
                "{}: parse∘print is not the identity",
                path.display()
            ));
        }
        files += 1;
    }
    for dialect in [Dialect::Cp, Dialect::Hcp] {
        let cfg = config(100, dialect);
        for suite in [Suite::Termination, Suite::SimulateForward] {
            if run_suite(suite, &cfg).render_json_lines()
                != run_suite(suite, &cfg).render_json_lines()
            {
                return Err(format!("{suite} report differs between runs"));
            }
        }
        for i in 0..cfg.count {
            let (p, _, _) = gen_cp(&cfg, i);
            let (h, _, _) = gen_hcp(&cfg, i);
            if reduce(&p).render() != reduce(&gen_cp(&cfg, i).0).render()
                || reduce(&h).render_json_lines() != reduce(&gen_hcp(&cfg, i).0).render_json_lines()
            {
                return Err(format!("trace of sample {i} differs between runs"));
            }
        }
    }
    Ok(format!(
        "{files} fixture files round-trip; reports and traces byte-identical"
    ))
}

/// A pair `(t, u)` with `u` a rewrite chain of `t`, a one-step reduct of
/// `t`, or another sample.
fn pair<T: Process>(rng: &mut ChaCha8Rng, t: &T, other: &T, rewrites: impl Fn(&T) -> Vec<T>) -> T {
    match rng.gen_range(0..3) {
        0 => {
            let mut u = t.clone();
            for _ in 0..rng.gen_range(1..=BFS_RADIUS) {
                if let Some(v) = rewrites(&u).choose(rng) {
                    u = v.clone();
                }
            }
            u
        }
        1 => match t.find_redexes().choose(rng) {
            Some(r) => t.step(r).expect("redex of this term"),
            None => other.clone(),
        },
        _ => other.clone(),
    }
}

fn oracles() -> Verdict {
    let small = GenConfig {
        max_depth: 2,
        max_type_size: 3,
        ..config(ORACLE_PAIRS, Dialect::Cp)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut equal, mut apart) = (0, 0);
    for i in 0..ORACLE_PAIRS {
        let (t, _, _) = gen_cp(&small, i);
        let (o, _, _) = gen_cp(&small, i + ORACLE_PAIRS);
        let u = pair(&mut rng, &t, &o, rewrites_cp);
        let (fast, slow) = (equiv_cp(&t, &u), bfs_equiv_cp(&t, &u, BFS_RADIUS));
        let (h, _, _) = gen_hcp(&small, i);
        let (g, _, _) = gen_hcp(&small, i + ORACLE_PAIRS);
        let k = pair(&mut rng, &h, &g, rewrites_hcp);
        let (hfast, hslow) = (equiv_hcp(&h, &k), bfs_equiv_hcp(&h, &k, BFS_RADIUS));
        if fast != slow {
            return Err(format!("equiv {fast}, BFS {slow} on {t} and {u}"));
        }
        if hfast != hslow {
            return Err(format!("equiv {hfast}, BFS {hslow} on {h} and {k}"));
        }
        for same in [fast, hfast] {
            if same {
                equal += 1;
            } else {
                apart += 1;
            }
        }
    }
    let text = std::fs::read_to_string(fixture_dir().join("tensor_unit.sill"))
        .map_err(|e| e.to_string())?;
    let file = parse_session(&text).map_err(|e| e.to_string())?;
    let Some(DeclBody::Cp(t)) = file.get("Main").map(|d| &d.body) else {
        return Err("tensor_unit.sill has no proc Main".into());
    };
    let g = explore(t, 100);
    if !(g.complete && g.nodes.len() == 4 && g.is_path() && g.terminals().len() == 1) {
        return Err(format!(
            "tensor/unit graph has {} nodes, {} edges",
            g.nodes.len(),
            g.edges.len()
        ));
    }
    Ok(format!(
        "{} pairs agree ({equal} ≡, {apart} apart); tensor/unit graph is a 4-node path",
        2 * ORACLE_PAIRS
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("metatheory suites", metatheory),
        ("termination bound", termination_bound),
        ("translation theorems", translation),
        ("disentanglement", disentanglement),
        ("internalization", internalization),
        ("negative controls", negative_controls),
        ("determinism and round-trip", determinism),
        ("oracle cross-checks", oracles),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {} {name}: FAIL ({detail})", k + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
