use std::collections::HashMap;

use rayon::prelude::*;

use super::{Measure, Process, RuleTag};
use crate::name::Name;

/// Default bound on the number of ≡-classes explored.
pub const GRAPH_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub rule: RuleTag,
    pub channel: Name,
}

/// All reducts of a term, one node per ≡-class. Node 0 is the start.
#[derive(Clone, Debug)]
pub struct ReductionGraph<T> {
    pub nodes: Vec<T>,
    pub edges: Vec<GraphEdge>,
    /// False when the budget stopped exploration early.
    pub complete: bool,
}

/// Breadth-first exploration of every redex at every node. Successors of a
/// frontier are computed in parallel and merged in a fixed order, so the
/// result equals that of a sequential run.
pub fn explore<T: Process>(t: &T, budget: usize) -> ReductionGraph<T> {
    let mut nodes = vec![t.clone()];
    let mut buckets: HashMap<Measure, Vec<usize>> = HashMap::new();
    buckets.entry(t.measure()).or_default().push(0);
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut complete = true;
    while !frontier.is_empty() {
        let succs: Vec<Vec<(super::Redex, T)>> = frontier
            .par_iter()
            .map(|&i| {
                let n = &nodes[i];
                n.find_redexes()
                    .into_iter()
                    .map(|r| {
                        let next = n.step(&r).expect("redex comes from the same term");
                        (r, next)
                    })
                    .collect()
            })
            .collect();
        let mut next_frontier = Vec::new();
        for (&from, list) in frontier.iter().zip(succs) {
            for (r, term) in list {
                let m = term.measure();
                let found = buckets
                    .get(&m)
                    .and_then(|ids| ids.iter().copied().find(|&k| nodes[k].equiv(&term)));
                let to = match found {
                    Some(k) => k,
                    None => {
                        if nodes.len() >= budget {
                            complete = false;
                            continue;
                        }
                        nodes.push(term);
                        let k = nodes.len() - 1;
                        buckets.entry(m).or_default().push(k);
                        next_frontier.push(k);
                        k
                    }
                };
                let edge = GraphEdge {
                    from,
                    to,
                    rule: r.rule,
                    channel: r.channel,
                };
                if !edges.contains(&edge) {
                    edges.push(edge);
                }
            }
        }
        frontier = next_frontier;
    }
    ReductionGraph {
        nodes,
        edges,
        complete,
    }
}

impl<T: Process> ReductionGraph<T> {
    pub fn successors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|e| e.from == i)
            .map(|e| e.to)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Nodes without outgoing edges.
    pub fn terminals(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.successors(i).is_empty())
            .collect()
    }

    /// Lengths of all maximal paths from the start, sorted and deduplicated.
    /// The graph is acyclic because every step lowers the measure.
    pub fn path_lengths(&self) -> Vec<usize> {
        let mut memo: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut out = self.lengths_from(0, &mut memo);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn lengths_from(&self, i: usize, memo: &mut HashMap<usize, Vec<usize>>) -> Vec<usize> {
        if let Some(v) = memo.get(&i) {
            return v.clone();
        }
        let succ = self.successors(i);
        let mut out: Vec<usize> = if succ.is_empty() {
            vec![0]
        } else {
            succ.into_iter()
                .flat_map(|j| self.lengths_from(j, memo))
                .map(|l| l + 1)
                .collect()
        };
        out.sort_unstable();
        out.dedup();
        memo.insert(i, out.clone());
        out
    }

    /// True when every node has at most one successor.
    pub fn is_path(&self) -> bool {
        (0..self.nodes.len()).all(|i| self.successors(i).len() <= 1)
    }

    /// Graphviz rendering; terminal nodes are drawn with a double border.
    pub fn to_dot(&self) -> String {
        let esc = |s: String| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut out =
            String::from("digraph reductions {\n  node [shape=box, fontname=\"monospace\"];\n");
        let terminals = self.terminals();
        for (i, n) in self.nodes.iter().enumerate() {
            let extra = if terminals.contains(&i) {
                ", peripheries=2"
            } else {
                ""
            };
            out.push_str(&format!(
                "  n{i} [label=\"{}\"{extra}];\n",
                esc(n.to_string())
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{} {}\"];\n",
                e.from,
                e.to,
                e.rule,
                esc(e.channel.to_string())
            ));
        }
        out.push_str("}\n");
        out
    }
}
