//! Graphviz output for Hasse diagrams, drawn bottom to top.

use std::fmt::Write;

use crate::poset::Poset;

fn quote(id: &str) -> String {
    let mut out = String::with_capacity(id.len() + 2);
    out.push('"');
    for c in id.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Renders the cover relation as a DOT digraph with one rank per height.
pub fn to_dot(poset: &Poset, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    let heights = poset.heights();
    let levels = heights.iter().copied().max().unwrap_or(0) + 1;
    for level in 0..levels {
        let row: Vec<String> = poset
            .elements()
            .filter(|e| heights[e.index()] == level)
            .map(|e| quote(poset.id(e)))
            .collect();
        writeln!(out, "  {{ rank=same; {}; }}", row.join("; ")).unwrap();
    }
    for &(a, b) in poset.covers() {
        writeln!(out, "  {} -> {};", quote(poset.id(a)), quote(poset.id(b))).unwrap();
    }
    out.push_str("}\n");
    out
}
