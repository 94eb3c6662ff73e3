use std::fmt;

use serde::Serialize;

use super::{pick, Measure, Process, Redex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Canonical,
    FuelExhausted,
    /// No redex, but not canonical either; impossible for well-typed terms.
    Stuck,
}

#[derive(Clone, Debug)]
pub struct Step<T> {
    pub redex: Redex,
    pub term: T,
    pub measure: Measure,
}

#[derive(Clone, Debug)]
pub struct Trace<T> {
    pub initial: T,
    pub steps: Vec<Step<T>>,
    pub status: Status,
}

impl<T: Process> Trace<T> {
    pub fn last(&self) -> &T {
        self.steps.last().map(|s| &s.term).unwrap_or(&self.initial)
    }

    /// True when the measure decreases strictly at every step.
    pub fn measure_decreases(&self) -> bool {
        let mut prev = self.initial.measure();
        for s in &self.steps {
            if !super::dm_less(&s.measure, &prev) {
                return false;
            }
            prev = s.measure.clone();
        }
        true
    }

    /// One line per step: `step k: RULE on x ⇒ term [measure: {…}]`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {}: {} ⇒ {} [measure: {}]\n",
                k + 1,
                s.redex,
                s.term,
                s.measure
            ));
        }
        out
    }

    pub fn render_json_lines(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            let line = serde_json::json!({
                "step": k + 1,
                "rule": s.redex.rule.symbol(),
                "channel": s.redex.channel.as_str(),
                "term": s.term.to_string(),
                "measure": s.measure.sizes(),
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Canonical => "canonical",
            Status::FuelExhausted => "fuel exhausted",
            Status::Stuck => "stuck",
        })
    }
}

/// Runs the deterministic strategy with fuel `1 + Σ measure`.
pub fn reduce<T: Process>(t: &T) -> Trace<T> {
    reduce_with_fuel(t, t.measure().fuel_bound())
}

/// Runs the deterministic strategy for at most `fuel` steps.
pub fn reduce_with_fuel<T: Process>(t: &T, fuel: usize) -> Trace<T> {
    let mut steps: Vec<Step<T>> = Vec::new();
    let mut cur = t.clone();
    loop {
        let redexes = cur.find_redexes();
        let Some(r) = pick(&redexes) else {
            let status = if cur.is_canonical() {
                Status::Canonical
            } else {
                Status::Stuck
            };
            return Trace {
                initial: t.clone(),
                steps,
                status,
            };
        };
        if steps.len() >= fuel {
            return Trace {
                initial: t.clone(),
                steps,
                status: Status::FuelExhausted,
            };
        }
        let next = cur.step(r).expect("redex comes from the same term");
        let measure = next.measure();
        steps.push(Step {
            redex: r.clone(),
            term: next.clone(),
            measure,
        });
        cur = next;
    }
}
