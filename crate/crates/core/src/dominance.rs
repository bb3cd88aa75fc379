//! Hasse diagram of the dominance order on partitions of `n`, with the map `Q` overlaid.

use std::fmt::Write as _;

use crate::oblak::q_of;
use crate::partition::{Dominance, Partition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseDiagram {
    /// All partitions of `n`, reverse lexicographic (the maximum `(n)` first).
    pub nodes: Vec<Partition>,
    /// `(lower, upper)` node indices of every cover relation.
    pub covers: Vec<(usize, usize)>,
    /// `q_map[k]` is the index of `Q(nodes[k])`.
    pub q_map: Vec<usize>,
}

pub fn hasse(n: usize) -> HasseDiagram {
    let nodes = Partition::all(n);
    let len = nodes.len();
    let mut less = vec![vec![false; len]; len];
    for a in 0..len {
        for b in 0..len {
            less[a][b] = matches!(nodes[a].dominance_cmp(&nodes[b]), Ok(Dominance::Less));
        }
    }
    let mut covers = Vec::new();
    for a in 0..len {
        for b in 0..len {
            if less[a][b] && !(0..len).any(|c| less[a][c] && less[c][b]) {
                covers.push((a, b));
            }
        }
    }
    let q_map = nodes
        .iter()
        .map(|b| {
            let q = q_of(b);
            nodes.iter().position(|x| *x == q).expect("Q(B) is a partition of n")
        })
        .collect();
    HasseDiagram { nodes, covers, q_map }
}

impl HasseDiagram {
    /// Cover relations one per line, then the non-trivial `Q` arrows.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "{} < {}", self.nodes[a].plain(), self.nodes[b].plain());
        }
        for (k, &q) in self.q_map.iter().enumerate() {
            if q != k {
                let _ = writeln!(out, "Q: {} -> {}", self.nodes[k].plain(), self.nodes[q].plain());
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dominance {\n  rankdir=BT;\n");
        for (k, b) in self.nodes.iter().enumerate() {
            let shape = if self.q_map[k] == k { "box" } else { "ellipse" };
            let _ = writeln!(out, "  p{k} [label=\"{}\", shape={shape}];", b.plain());
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "  p{a} -> p{b};");
        }
        for (k, &q) in self.q_map.iter().enumerate() {
            if q != k {
                let _ = writeln!(out, "  p{k} -> p{q} [style=dashed, color=blue, constraint=false];");
            }
        }
        out.push_str("}\n");
        out
    }
}
