//! Random well-typed processes and the property suites that check the
//! metatheory on them.
//!
//! Every sample is drawn from its own ChaCha stream (seed, index), so the
//! suites run samples in parallel and still produce the same report as a
//! sequential run.

mod gen;
mod oracle;
mod shrink;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cp::CpTerm;
use crate::env::Env;
use crate::hcp::HcpTerm;
use crate::reduction::GRAPH_BUDGET;
use crate::surface::Dialect;
use crate::typecheck::{CheckOptions, CpDerivation, HcpDerivation};

pub use oracle::{bfs_equiv_cp, bfs_equiv_hcp, float_mixes, reduction_graph, OracleError};
pub use shrink::{shrink_cp, shrink_hcp};

/// Relative weights of generator choices. A weight of zero disables the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weights {
    /// Decompose a required binding by its type.
    pub focus: u32,
    pub cut: u32,
    /// Close a dual pair with a link.
    pub axiom: u32,
    /// Close the goal with ⊤.
    pub absurd: u32,
    /// Free H-Mix in HCP samples.
    pub mix: u32,
    /// 1 and ⊥, each.
    pub unit_type: u32,
    /// ⊤ and 0, each.
    pub top_type: u32,
    pub compound_type: u32,
}

impl Default for Weights {
    fn default() -> Weights {
        Weights {
            focus: 6,
            cut: 3,
            axiom: 2,
            absurd: 1,
            mix: 2,
            unit_type: 4,
            top_type: 1,
            compound_type: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub seed: u64,
    pub count: usize,
    pub max_type_size: usize,
    pub max_depth: usize,
    /// Calculus of the samples for the suites that run on both.
    pub dialect: Dialect,
    pub weights: Weights,
    /// Typing options for the progress suite's negative controls.
    pub opts: CheckOptions,
    pub graph_budget: usize,
    /// Most `⊤` axioms in an HCP sample. Typing at a hyper-environment is
    /// exponential in the names `⊤` may absorb, so wider samples are redrawn.
    pub max_absorbers: usize,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 42,
            count: 500,
            max_type_size: 4,
            max_depth: 4,
            dialect: Dialect::Cp,
            weights: Weights::default(),
            opts: CheckOptions::default(),
            graph_budget: GRAPH_BUDGET,
            max_absorbers: 2,
        }
    }
}

fn stream(cfg: &GenConfig, index: usize, lane: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(((index as u64) << 2) | lane);
    rng
}

/// The `index`-th CP sample: a term, its environment and its derivation.
pub fn gen_cp(cfg: &GenConfig, index: usize) -> (CpTerm, Env, CpDerivation) {
    let d = gen::Gen::new(cfg, stream(cfg, index, 0)).cp();
    (d.term.clone(), d.env.clone(), d)
}

/// The `index`-th HCP sample, with the flattened environment of its
/// hyper-environment.
pub fn gen_hcp(cfg: &GenConfig, index: usize) -> (HcpTerm, Env, HcpDerivation) {
    let mut g = gen::Gen::new(cfg, stream(cfg, index, 1));
    let mut d = g.hcp(cfg.max_depth);
    for _ in 0..REDRAWS {
        if absorbers(&d.term) <= cfg.max_absorbers {
            break;
        }
        d = g.hcp(cfg.max_depth);
    }
    let env = d.hyper.flatten().expect("generated names are fresh");
    (d.term.clone(), env, d)
}

const REDRAWS: usize = 64;

fn absorbers(t: &HcpTerm) -> usize {
    match t {
        HcpTerm::Absurd(_) => 1,
        HcpTerm::Inert | HcpTerm::Link(..) => 0,
        HcpTerm::Par(p, q) | HcpTerm::Case(_, p, q) => absorbers(p) + absorbers(q),
        HcpTerm::New(_, _, p)
        | HcpTerm::Out(_, _, p)
        | HcpTerm::In(_, _, p)
        | HcpTerm::OutUnit(_, p)
        | HcpTerm::InUnit(_, p)
        | HcpTerm::Inl(_, p)
        | HcpTerm::Inr(_, p) => absorbers(p),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    PreservationCp,
    PreservationHcp,
    Progress,
    Termination,
    EquivPreservation,
    TranslateTyping,
    SimulateForward,
    SimulateBackward,
    Disentangle,
    Internalize,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::PreservationCp,
        Suite::PreservationHcp,
        Suite::Progress,
        Suite::Termination,
        Suite::EquivPreservation,
        Suite::TranslateTyping,
        Suite::SimulateForward,
        Suite::SimulateBackward,
        Suite::Disentangle,
        Suite::Internalize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PreservationCp => "preservation-cp",
            Suite::PreservationHcp => "preservation-hcp",
            Suite::Progress => "progress",
            Suite::Termination => "termination",
            Suite::EquivPreservation => "equiv-preservation",
            Suite::TranslateTyping => "translate-typing",
            Suite::SimulateForward => "simulate-forward",
            Suite::SimulateBackward => "simulate-backward",
            Suite::Disentangle => "disentangle",
            Suite::Internalize => "internalize",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleOutcome {
    pub index: usize,
    pub passed: bool,
    /// Shrunk failing term and its environment.
    pub counterexample: Option<String>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub samples: Vec<SampleOutcome>,
    /// Coverage counts summed over all samples.
    pub counters: BTreeMap<String, usize>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.samples.iter().all(|s| s.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SampleOutcome> {
        self.samples.iter().filter(|s| !s.passed)
    }

    pub fn render_text(&self) -> String {
        let ok = self.samples.iter().filter(|s| s.passed).count();
        let mut out = format!(
            "suite {} seed {}: {}/{} passed\n",
            self.suite,
            self.seed,
            ok,
            self.samples.len()
        );
        for f in self.failures() {
            out.push_str(&format!(
                "FAIL #{}: {}\n",
                f.index,
                f.detail.as_deref().unwrap_or("")
            ));
            if let Some(c) = &f.counterexample {
                out.push_str(&format!("  counterexample: {c}\n"));
            }
        }
        if !self.counters.is_empty() {
            let parts: Vec<String> = self
                .counters
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            out.push_str(&format!("coverage: {}\n", parts.join(" ")));
        }
        out
    }

    /// One JSON object per sample: suite, seed, index, status, counterexample, detail.
    pub fn render_json_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.samples {
            let line = serde_json::json!({
                "suite": self.suite,
                "seed": self.seed,
                "index": s.index,
                "status": if s.passed { "pass" } else { "fail" },
                "counterexample": s.counterexample,
                "detail": s.detail,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

pub(crate) type Counters = BTreeMap<String, usize>;

pub(crate) fn bump(c: &mut Counters, key: impl Into<String>) {
    *c.entry(key.into()).or_default() += 1;
}

/// Runs `cfg.count` samples of one suite.
pub fn run_suite(suite: Suite, cfg: &GenConfig) -> SuiteReport {
    let results: Vec<(SampleOutcome, Counters)> = (0..cfg.count)
        .into_par_iter()
        .map(|i| suites::sample(suite, cfg, i))
        .collect();
    let mut counters = Counters::new();
    let mut samples = Vec::with_capacity(results.len());
    for (s, c) in results {
        for (k, v) in c {
            *counters.entry(k).or_default() += v;
        }
        samples.push(s);
    }
    samples.extend(suites::controls(suite, cfg));
    SuiteReport {
        suite,
        seed: cfg.seed,
        samples,
        counters,
    }
}

/// The self-locking process: it waits on `x` while holding the other end.
pub const SELF_LOCK_FIXTURE: &str = "new x:bot. x().(x[].0 | w[].0)";

/// Two offers, each waiting for the other side's choice, typable only when
/// `&` accepts hyper-environments.
pub const WITH_FIXTURE: &str = "new x:1 & 1. new y:bot + bot. (\
    x?{inl: (y!inl.y().z[].0 | x[].0); inr: (y!inr.y().z[].0 | x[].0)} | \
    y?{inl: (x!inl.x().w[].0 | y[].0); inr: (x!inr.x().w[].0 | y[].0)})";

/// Environments of the two fixtures above.
pub const SELF_LOCK_ENV: &str = "w:1";
pub const WITH_ENV: &str = "z:1, w:1";
