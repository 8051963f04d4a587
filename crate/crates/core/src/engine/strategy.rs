use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::proof::{Annotation, CheckedProof, Rule};
use crate::syntax::{Path, Player};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyNode {
    pub line: usize,
    pub formula: String,
    pub rule: Rule,
}

/// A move from one proof line to a premise. Paths are in the coordinates of
/// the `from` line's formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyEdge {
    pub from: usize,
    pub to: usize,
    pub role: Player,
    pub path: Path,
    pub component: usize,
}

/// The machine's strategy as a graph over the proof lines reachable from the
/// conclusion. Nodes are in descending line order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyGraph {
    pub nodes: Vec<StrategyNode>,
    pub edges: Vec<StrategyEdge>,
}

/// `None` if the proof is not valid.
pub fn export_strategy(proof: &CheckedProof) -> Option<StrategyGraph> {
    if !proof.is_valid() {
        return None;
    }
    let mut reached = BTreeSet::new();
    let mut pending = vec![proof.conclusion()?.number];
    let mut edges = Vec::new();
    while let Some(n) = pending.pop() {
        if !reached.insert(n) {
            continue;
        }
        match proof.annotation(n)? {
            Annotation::Env(table) => {
                for e in &table.entries {
                    edges.push(StrategyEdge {
                        from: n,
                        to: e.premise,
                        role: Player::Environment,
                        path: e.path.clone(),
                        component: e.component,
                    });
                    pending.push(e.premise);
                }
            }
            Annotation::Machine(c) => {
                edges.push(StrategyEdge {
                    from: n,
                    to: c.premise,
                    role: Player::Machine,
                    path: c.path.clone(),
                    component: c.component,
                });
                pending.push(c.premise);
            }
        }
    }
    edges.sort_by(|a, b| (b.from, &a.path, a.component).cmp(&(a.from, &b.path, b.component)));
    let nodes = reached
        .iter()
        .rev()
        .map(|&n| {
            let line = proof.line(n).expect("reached lines exist");
            StrategyNode { line: n, formula: line.formula.to_string(), rule: line.rule }
        })
        .collect();
    Some(StrategyGraph { nodes, edges })
}

impl StrategyGraph {
    /// Graphviz text. Machine moves are solid edges, environment moves dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph strategy {\n  node [shape=box];\n");
        for n in &self.nodes {
            let _ = writeln!(out, "  n{} [label=\"{}. {} (rule {})\"];", n.line, n.line, escape(&n.formula), n.rule);
        }
        for e in &self.edges {
            let mv = if e.path.is_root() { e.component.to_string() } else { format!("{}.{}", e.path, e.component) };
            let style = match e.role {
                Player::Machine => "solid",
                Player::Environment => "dashed",
            };
            let _ = writeln!(out, "  n{} -> n{} [label=\"{mv}\", style={style}];", e.from, e.to);
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
