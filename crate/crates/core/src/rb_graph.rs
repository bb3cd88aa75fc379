//! The relation `R_B` on `Δ_B` and its longest-path row table.
//!
//! `v' R_B v` holds when the entry in row `v`, column `v'` of the generic
//! nilpotent element is nonzero. Rows are longest-path depths in this DAG.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::centralizer::{delta_basis, sn_nonzero, BasisVector};
use crate::oblak::OblakStep;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RbGraphError {
    #[error("relation graph has a cycle")]
    Cycle,
}

#[derive(Debug, Clone)]
pub struct RbGraph {
    pub partition: Partition,
    /// In `Δ_B` order.
    pub vertices: Vec<BasisVector>,
    /// `(source, target)` vertex indices.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowTable {
    pub row: BTreeMap<BasisVector, usize>,
    pub max_row: usize,
}

pub fn build_graph(b: &Partition) -> RbGraph {
    let vertices = delta_basis(b);
    let mut edges = Vec::new();
    for (s, src) in vertices.iter().enumerate() {
        for (t, dst) in vertices.iter().enumerate() {
            if s != t && sn_nonzero(dst, src) {
                edges.push((s, t));
            }
        }
    }
    RbGraph {
        partition: b.clone(),
        vertices,
        edges,
    }
}

pub fn assign_rows(g: &RbGraph) -> Result<RowTable, RbGraphError> {
    let n = g.vertices.len();
    let mut out_edges = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for &(s, t) in &g.edges {
        out_edges[s].push(t);
        indegree[t] += 1;
    }
    let mut depth = vec![0usize; n];
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for &t in &out_edges[v] {
            depth[t] = depth[t].max(depth[v] + 1);
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(t);
            }
        }
    }
    if seen != n {
        return Err(RbGraphError::Cycle);
    }
    Ok(RowTable {
        row: g.vertices.iter().copied().zip(depth.iter().copied()).collect(),
        max_row: depth.iter().copied().max().unwrap_or(0),
    })
}

/// `Δ°`: the first and last vector of every block in runs `1..=ĩ+ε̃`, plus all of runs `ĩ` and `ĩ+ε̃`.
pub fn delta_circle(b: &Partition, step: &OblakStep) -> BTreeSet<BasisVector> {
    let last = step.i_tilde + step.eps_tilde as usize;
    delta_basis(b)
        .into_iter()
        .filter(|v| v.i <= last && (v.l == 1 || v.l == v.mu || v.i >= step.i_tilde))
        .collect()
}

/// Text grid: one column per distinct part value (ascending), one line per row index.
pub fn render_table(b: &Partition, table: &RowTable, circle: &BTreeSet<BasisVector>) -> String {
    let mut values: Vec<usize> = b.runs().values;
    values.reverse();
    let rows = if b.is_empty() { 0 } else { table.max_row + 1 };
    let mut cells = vec![vec![String::new(); values.len()]; rows];
    for (v, &r) in &table.row {
        let col = values.iter().position(|&x| x == v.mu).expect("value of a run");
        let cell = &mut cells[r][col];
        if !cell.is_empty() {
            cell.push(' ');
        }
        if circle.contains(v) {
            cell.push('∘');
        }
        cell.push_str(&v.label());
    }
    let label_width = rows.saturating_sub(1).to_string().len();
    let widths: Vec<usize> = (0..values.len())
        .map(|c| {
            cells
                .iter()
                .map(|row| row[c].chars().count())
                .chain(std::iter::once(values[c].to_string().len()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let _ = write!(out, "{:label_width$}", "");
    for (c, v) in values.iter().enumerate() {
        let _ = write!(out, "  {:<w$}", v, w = widths[c]);
    }
    out = out.trim_end().to_string();
    out.push('\n');
    for (r, row) in cells.iter().enumerate() {
        let mut line = format!("{r:>label_width$}");
        for (c, cell) in row.iter().enumerate() {
            let pad = widths[c] - cell.chars().count();
            let _ = write!(line, "  {cell}{}", " ".repeat(pad));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn to_dot(g: &RbGraph) -> String {
    let mut out = String::from("digraph rb {\n  rankdir=TB;\n");
    for (k, v) in g.vertices.iter().enumerate() {
        let _ = writeln!(out, "  n{k} [label=\"{}\"];", v.label());
    }
    for (s, t) in &g.edges {
        let _ = writeln!(out, "  n{s} -> n{t};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oblak::{maximizers, omega1, select_step, hat_of, TieBreak};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rows_of(b: &Partition) -> Vec<(String, usize)> {
        let t = assign_rows(&build_graph(b)).unwrap();
        delta_basis(b)
            .iter()
            .map(|v| (format!("{}{}^{}", v.mu, v.j, v.l), t.row[v]))
            .collect()
    }

    fn expect(pairs: &[(&str, usize)]) -> Vec<(String, usize)> {
        pairs.iter().map(|(s, r)| (s.to_string(), *r)).collect()
    }

    #[test]
    fn edges_small() {
        let g = build_graph(&p("2,2,1"));
        let has = |a: &str, b: &str| {
            g.edges.iter().any(|&(s, t)| {
                let f = |v: &BasisVector| format!("{}{}^{}", v.mu, v.j, v.l);
                f(&g.vertices[s]) == a && f(&g.vertices[t]) == b
            })
        };
        assert!(has("22^1", "21^1"));
        assert!(has("21^1", "11^1"));
        assert!(has("11^1", "22^2"));
        assert!(!has("21^1", "22^1"));
        assert!(build_graph(&p("1")).edges.is_empty());
        let chain = build_graph(&p("4"));
        let t = assign_rows(&chain).unwrap();
        assert_eq!(t.max_row, 3);
    }

    #[test]
    fn example_tables() {
        let mut want = Vec::new();
        for l in (1..=7).rev() {
            want.push((format!("71^{l}"), l - 1));
        }
        for l in (1..=5).rev() {
            want.push((format!("51^{l}"), l));
        }
        want.push(("21^2".into(), 3));
        want.push(("21^1".into(), 2));
        assert_eq!(rows_of(&p("7,5,2")), want);

        assert_eq!(
            rows_of(&p("2,2,1")),
            expect(&[("22^2", 3), ("22^1", 0), ("21^2", 4), ("21^1", 1), ("11^1", 2)])
        );
        assert_eq!(
            rows_of(&p("4,2,2,1")),
            expect(&[
                ("41^4", 6),
                ("41^3", 3),
                ("41^2", 1),
                ("41^1", 0),
                ("22^2", 4),
                ("22^1", 1),
                ("21^2", 5),
                ("21^1", 2),
                ("11^1", 3)
            ])
        );
        assert_eq!(rows_of(&p("1")), expect(&[("11^1", 0)]));
    }

    #[test]
    fn circle_examples() {
        let b = p("7,5,2");
        let s = select_step(&b, TieBreak::default()).unwrap();
        let c = delta_circle(&b, &s);
        assert_eq!(c.len(), 7);
        assert!(c.iter().all(|v| v.mu == 7));
        let b = p("4,3,3,2,1");
        let s = select_step(&b, TieBreak::default()).unwrap();
        let c = delta_circle(&b, &s);
        assert_eq!(c.len(), 10);
        assert!(c.iter().all(|v| v.mu == 4 || v.mu == 3));
    }

    #[test]
    fn rows_match_omega1_and_circle_is_a_transversal() {
        for n in 1..=12 {
            for b in Partition::all(n) {
                let t = assign_rows(&build_graph(&b)).unwrap();
                assert_eq!(t.max_row + 1, omega1(&b), "{b}");
                for c in maximizers(&b) {
                    let step = OblakStep {
                        omega1: c.value,
                        i_tilde: c.i,
                        eps_tilde: c.eps,
                        b_hat: hat_of(&b, c.i, c.eps).unwrap(),
                    };
                    let circle = delta_circle(&b, &step);
                    assert_eq!(circle.len(), c.value, "{b}");
                    let rows: BTreeSet<usize> = circle.iter().map(|v| t.row[v]).collect();
                    assert_eq!(rows, (0..c.value).collect(), "{b} with ({}, {})", c.i, c.eps);
                }
            }
        }
    }

    #[test]
    fn row_structure() {
        for n in 1..=10 {
            for b in Partition::all(n) {
                let g = build_graph(&b);
                let t = assign_rows(&g).unwrap();
                for &(s, d) in &g.edges {
                    assert!(t.row[&g.vertices[s]] < t.row[&g.vertices[d]]);
                }
                let runs = b.runs();
                for i in 1..=runs.u() {
                    let mu = runs.value(i);
                    let k = runs.multiplicity(i);
                    let in_run: Vec<&BasisVector> = g.vertices.iter().filter(|v| v.i == i).collect();
                    let first = BasisVector { i, j: k, l: 1, mu };
                    let last = BasisVector { i, j: 1, l: mu, mu };
                    assert!(in_run.iter().all(|v| t.row[v] >= t.row[&first]));
                    assert!(in_run.iter().all(|v| t.row[v] <= t.row[&last]));
                }
                // larger-part v^1 vertices come before smaller-part ones
                for a in &g.vertices {
                    for c in &g.vertices {
                        if a.l == 1 && c.l == 1 && a.mu > c.mu {
                            assert!(t.row[a] < t.row[c], "{b}: {a} {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rendering() {
        let b = p("2,2,1");
        let g = build_graph(&b);
        let t = assign_rows(&g).unwrap();
        let c = delta_circle(&b, &select_step(&b, TieBreak::default()).unwrap());
        let text = render_table(&b, &t, &c);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0].split_whitespace().collect::<Vec<_>>(), ["1", "2"]);
        assert!(lines[1].contains("∘v_{2,2}^1"));
        assert!(lines[3].contains("∘v_{1,1}^1"));
        let one = p("1");
        let t = assign_rows(&build_graph(&one)).unwrap();
        assert_eq!(render_table(&one, &t, &BTreeSet::new()).lines().count(), 2);
        let dot = to_dot(&g);
        assert_eq!(dot.matches("->").count(), g.edges.len());
        assert_eq!(dot.matches("label=").count(), 5);
    }
}
