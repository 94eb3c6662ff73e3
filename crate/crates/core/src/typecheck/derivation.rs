use std::fmt;

use serde::Serialize;

use crate::cp::CpTerm;
use crate::env::{Env, HyperEnv};
use crate::hcp::HcpTerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    Ax,
    Cut,
    Tensor,
    Par,
    One,
    Bot,
    Plus1,
    Plus2,
    With,
    Top,
    HMix,
    HMix0,
    HCut,
}

impl Rule {
    pub fn symbol(self) -> &'static str {
        match self {
            Rule::Ax => "Ax",
            Rule::Cut => "Cut",
            Rule::Tensor => "⊗",
            Rule::Par => "⅋",
            Rule::One => "1",
            Rule::Bot => "⊥",
            Rule::Plus1 => "⊕₁",
            Rule::Plus2 => "⊕₂",
            Rule::With => "&",
            Rule::Top => "⊤",
            Rule::HMix => "H-Mix",
            Rule::HMix0 => "H-Mix₀",
            Rule::HCut => "H-Cut",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A CP typing derivation concluding `⊢ term : env`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpDerivation {
    pub rule: Rule,
    pub term: CpTerm,
    pub env: Env,
    pub premises: Vec<CpDerivation>,
}

/// An HCP typing derivation concluding `⊢ term : hyper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HcpDerivation {
    pub rule: Rule,
    pub term: HcpTerm,
    pub hyper: HyperEnv,
    pub premises: Vec<HcpDerivation>,
}

/// Flat view shared by both derivation kinds, used for rendering.
pub trait Tree {
    fn rule(&self) -> Rule;
    fn conclusion(&self) -> String;
    fn children(&self) -> Vec<&Self>;

    fn count_nodes(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(|c| c.count_nodes())
            .sum::<usize>()
    }

    /// One node per line, premises indented under their conclusion.
    fn render_tree(&self) -> String {
        let mut out = String::new();
        render(self, 0, &mut out);
        out
    }

    /// One JSON object per node in pre-order.
    fn render_json_lines(&self) -> String {
        let mut out = String::new();
        json_lines(self, 0, &mut out);
        out
    }
}

fn render<T: Tree + ?Sized>(d: &T, depth: usize, out: &mut String) {
    out.push_str(&"  ".repeat(depth));
    out.push_str(&format!("({}) {}\n", d.rule(), d.conclusion()));
    for c in d.children() {
        render(c, depth + 1, out);
    }
}

fn json_lines<T: Tree + ?Sized>(d: &T, depth: usize, out: &mut String) {
    let kids = d.children();
    let line = serde_json::json!({
        "depth": depth,
        "rule": d.rule().symbol(),
        "conclusion": d.conclusion(),
        "premises": kids.len(),
    });
    out.push_str(&line.to_string());
    out.push('\n');
    for c in kids {
        json_lines(c, depth + 1, out);
    }
}

impl Tree for CpDerivation {
    fn rule(&self) -> Rule {
        self.rule
    }

    fn conclusion(&self) -> String {
        format!("⊢ {} : {}", self.term, self.env)
    }

    fn children(&self) -> Vec<&CpDerivation> {
        self.premises.iter().collect()
    }
}

impl Tree for HcpDerivation {
    fn rule(&self) -> Rule {
        self.rule
    }

    fn conclusion(&self) -> String {
        format!("⊢ {} : {}", self.term, self.hyper)
    }

    fn children(&self) -> Vec<&HcpDerivation> {
        self.premises.iter().collect()
    }
}

impl fmt::Display for CpDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_tree())
    }
}

impl fmt::Display for HcpDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_tree())
    }
}
