use std::path::Path;

use serde_json::json;
use sill_core::bridge::{self, parr_collapse, tens_internalize, translate_typed};
use sill_core::cp_to_hcp;
use sill_core::harness::{run_suite, GenConfig, Suite};
use sill_core::reduction::{explore, reduce_with_fuel, Process, Status};
use sill_core::surface::{parse_session, Decl, DeclBody, Dialect};
use sill_core::typecheck::{check_cp, check_hcp, CpDerivation, HcpDerivation, Tree, TypeError};

/// Exit code and diagnostic of a failed command.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn rejected(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Source {
    path: String,
    decls: Vec<Decl>,
}

impl Source {
    fn load(path: &Path) -> Result<Source, Failure> {
        let path = path.display().to_string();
        let text =
            std::fs::read_to_string(&path).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
        let file = parse_session(&text).map_err(|e| Failure::usage(format!("{path}:{e}")))?;
        Ok(Source {
            path,
            decls: file.decls,
        })
    }

    fn find(&self, name: &str) -> Result<&Decl, Failure> {
        self.decls
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| Failure::usage(format!("{}: no declaration named `{name}`", self.path)))
    }

    /// The named declaration; without a name, the only one or `Main`.
    fn select(&self, name: Option<&str>) -> Result<&Decl, Failure> {
        match (name, self.decls.as_slice()) {
            (Some(name), _) => self.find(name),
            (None, [only]) => Ok(only),
            (None, _) => self.find("Main").map_err(|_| {
                Failure::usage(format!(
                    "{}: several declarations, choose one with --proc",
                    self.path
                ))
            }),
        }
    }

    fn loc(&self, d: &Decl) -> String {
        format!("{}:{}", self.path, d.body_pos)
    }

    /// Typechecks a declaration, reporting a failure as a diagnostic.
    fn typed(&self, d: &Decl, json: bool) -> Result<Typed, Failure> {
        typecheck(d).map_err(|e| {
            let loc = self.loc(d);
            if json {
                println!("{}", e.to_json(&loc));
                Failure::rejected("")
            } else {
                Failure::rejected(e.render(&loc))
            }
        })
    }
}

enum Typed {
    Cp(CpDerivation),
    Hcp(HcpDerivation),
}

impl Typed {
    fn context(&self) -> String {
        match self {
            Typed::Cp(d) => d.env.to_string(),
            Typed::Hcp(d) => d.hyper.to_string(),
        }
    }

    fn tree(&self, json: bool) -> String {
        match (self, json) {
            (Typed::Cp(d), false) => d.render_tree(),
            (Typed::Cp(d), true) => d.render_json_lines(),
            (Typed::Hcp(d), false) => d.render_tree(),
            (Typed::Hcp(d), true) => d.render_json_lines(),
        }
    }

    /// The HCP derivation, translating a CP one.
    fn into_hcp(self) -> Result<HcpDerivation, Failure> {
        match self {
            Typed::Cp(d) => translate_typed(&d).map_err(|e| Failure::rejected(e.to_string())),
            Typed::Hcp(d) => Ok(d),
        }
    }
}

fn typecheck(d: &Decl) -> Result<Typed, TypeError> {
    match &d.body {
        DeclBody::Cp(t) => check_cp(t, &d.env).map(Typed::Cp),
        DeclBody::Hcp(t) => check_hcp(t, &d.env).map(Typed::Hcp),
    }
}

fn tree_of<T: Tree>(d: &T, json: bool) -> String {
    if json {
        d.render_json_lines()
    } else {
        d.render_tree()
    }
}

pub fn check(path: &Path, proc: Option<&str>, show: bool, json: bool) -> Outcome {
    let src = Source::load(path)?;
    let decls: Vec<&Decl> = match proc {
        Some(name) => vec![src.find(name)?],
        None => src.decls.iter().collect(),
    };
    let mut failed = false;
    for d in decls {
        match typecheck(d) {
            Ok(typed) => {
                let conclusion = format!("⊢ {} : {}", d.name, typed.context());
                if json {
                    println!(
                        "{}",
                        json!({"proc": d.name, "status": "ok", "conclusion": conclusion})
                    );
                } else {
                    println!("{conclusion}");
                }
                if show {
                    print!("{}", typed.tree(json));
                }
            }
            Err(e) => {
                failed = true;
                let loc = src.loc(d);
                if json {
                    let mut record = e.to_json(&loc);
                    record["proc"] = json!(d.name);
                    println!("{record}");
                } else {
                    eprintln!("{}", e.render(&loc));
                }
            }
        }
    }
    if failed {
        Err(Failure::rejected(""))
    } else {
        Ok(())
    }
}

pub fn reduce(
    path: &Path,
    proc: Option<&str>,
    fuel: Option<usize>,
    trace: bool,
    json: bool,
) -> Outcome {
    let src = Source::load(path)?;
    let d = src.select(proc)?;
    src.typed(d, json)?;
    match &d.body {
        DeclBody::Cp(t) => run_reduce(t, fuel, trace, json),
        DeclBody::Hcp(t) => run_reduce(t, fuel, trace, json),
    }
}

fn run_reduce<T: Process>(t: &T, fuel: Option<usize>, trace: bool, json: bool) -> Outcome {
    let tr = reduce_with_fuel(t, fuel.unwrap_or_else(|| t.measure().fuel_bound()));
    let (steps, last) = (tr.steps.len(), tr.last());
    if json {
        print!("{}", tr.render_json_lines());
        println!(
            "{}",
            json!({"status": tr.status.to_string(), "steps": steps, "term": last.to_string()})
        );
    } else {
        if trace {
            print!("{}", tr.render());
        }
        println!("{} after {steps} steps: {last}", tr.status);
    }
    match tr.status {
        Status::Canonical => Ok(()),
        Status::Stuck => Err(Failure::rejected(
            "no redex left, but the term is not canonical",
        )),
        Status::FuelExhausted if fuel.is_none() => Err(Failure::rejected(
            "the measure bound was reached before a canonical form",
        )),
        Status::FuelExhausted => Ok(()),
    }
}

pub fn graph(path: &Path, proc: Option<&str>, dot: bool, budget: usize) -> Outcome {
    let src = Source::load(path)?;
    let d = src.select(proc)?;
    src.typed(d, false)?;
    match &d.body {
        DeclBody::Cp(t) => run_graph(t, dot, budget),
        DeclBody::Hcp(t) => run_graph(t, dot, budget),
    }
}

fn run_graph<T: Process>(t: &T, dot: bool, budget: usize) -> Outcome {
    let g = explore(t, budget);
    if !g.complete {
        return Err(Failure::rejected(format!(
            "more than {budget} congruence classes reachable"
        )));
    }
    if dot {
        print!("{}", g.to_dot());
        return Ok(());
    }
    let terminals: Vec<String> = g.terminals().iter().map(|i| format!("n{i}")).collect();
    println!(
        "{} nodes, {} edges, terminal: {}",
        g.nodes.len(),
        g.edges.len(),
        terminals.join(", ")
    );
    for (i, n) in g.nodes.iter().enumerate() {
        println!("n{i}: {n}");
    }
    for e in &g.edges {
        println!("n{} -> n{}: {} on {}", e.from, e.to, e.rule, e.channel);
    }
    Ok(())
}

pub fn translate(path: &Path, proc: Option<&str>, show: bool, json: bool) -> Outcome {
    let src = Source::load(path)?;
    let d = src.select(proc)?;
    let DeclBody::Cp(t) = &d.body else {
        return Err(Failure::usage(format!(
            "{}: `{}` is already an hproc",
            src.loc(d),
            d.name
        )));
    };
    let h = src.typed(d, json)?.into_hcp()?;
    let image = cp_to_hcp(t);
    if json {
        println!(
            "{}",
            json!({"proc": d.name, "term": image.to_string(), "hyper": h.hyper.to_string()})
        );
    } else {
        println!(
            "{}",
            Decl {
                body: DeclBody::Hcp(image),
                ..d.clone()
            }
        );
    }
    if show {
        print!("{}", tree_of(&h, json));
    }
    Ok(())
}

pub fn disentangle(path: &Path, proc: Option<&str>, show: bool, json: bool) -> Outcome {
    let src = Source::load(path)?;
    let d = src.select(proc)?;
    let h = src.typed(d, json)?.into_hcp()?;
    let result = bridge::disentangle(&h).map_err(|e| Failure::rejected(e.to_string()))?;
    for step in &result.log {
        if json {
            let record = json!({
                "kind": "step",
                "rule": step.rule.symbol(),
                "channel": step.channel.as_str(),
                "moved": step.moved,
            });
            println!("{record}");
        } else {
            println!("{step}");
        }
    }
    for part in &result.derivations {
        if json {
            let record = json!({"kind": "component", "term": part.term.to_string(), "env": part.env.to_string()});
            println!("{record}");
        } else {
            println!("⊢ {} : {}", part.term, part.env);
        }
        if show {
            print!("{}", tree_of(part, json));
        }
    }
    if json {
        println!(
            "{}",
            json!({"kind": "recombined", "term": result.recombined.to_string()})
        );
    } else {
        println!("recombined: {}", result.recombined);
    }
    Ok(())
}

pub fn internalize(path: &Path, proc: Option<&str>, show: bool, json: bool) -> Outcome {
    let src = Source::load(path)?;
    let d = src.select(proc)?;
    let collapsed = match src.typed(d, json)? {
        Typed::Cp(c) => parr_collapse(&c),
        Typed::Hcp(h) => tens_internalize(&h),
    }
    .map_err(|e| Failure::rejected(e.to_string()))?;
    if json {
        println!(
            "{}",
            json!({"proc": d.name, "term": collapsed.term.to_string(), "env": collapsed.env.to_string()})
        );
    } else {
        println!("⊢ {} : {}", collapsed.term, collapsed.env);
    }
    if show {
        print!("{}", tree_of(&collapsed, json));
    }
    Ok(())
}

pub fn fuzz(suite: &str, seed: u64, count: usize, dialect: Dialect, json: bool) -> Outcome {
    let suites = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>().map_err(Failure::usage)?]
    };
    let cfg = GenConfig {
        seed,
        count,
        dialect,
        ..GenConfig::default()
    };
    let mut failed = false;
    for s in suites {
        let report = run_suite(s, &cfg);
        failed |= !report.passed();
        if json {
            print!("{}", report.render_json_lines());
        } else {
            print!("{}", report.render_text());
        }
    }
    if failed {
        Err(Failure::rejected(""))
    } else {
        Ok(())
    }
}
