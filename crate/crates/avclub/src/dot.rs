//! Graphviz rendering of club dynamics graphs.

use std::fmt::Write as _;
use std::path::Path;

use avclub_core::{ClubGraph, Coalition};

use crate::error::{Error, Result};

/// DOT digraph of `graph`. The root is shaded, leaves get a double border,
/// leaves listed in `se_leaves` are filled green and internally unstable
/// leaves are drawn red. Output order is the graph's canonical order.
pub fn render_dot(graph: &ClubGraph, se_leaves: &[Coalition]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph club_graph {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"Helvetica\"];").unwrap();
    for node in graph.nodes() {
        let c = node.coalition;
        let mut label = c.to_string();
        let mut attrs = Vec::new();
        if c == graph.root() {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=gray85".to_string());
        }
        if graph.is_leaf(c) {
            attrs.push("peripheries=2".to_string());
            if se_leaves.contains(&c) {
                label.push_str("\\nSE");
                attrs.retain(|a| !a.starts_with("style") && !a.starts_with("fillcolor"));
                attrs.push("style=filled".to_string());
                attrs.push("fillcolor=palegreen".to_string());
            }
            if !node.internally_stable {
                label.push_str("\\ninternally unstable");
                attrs.push("color=red".to_string());
            }
        }
        attrs.insert(0, format!("label=\"{label}\""));
        writeln!(out, "  \"{c}\" [{}];", attrs.join(", ")).unwrap();
    }
    for e in graph.edges() {
        writeln!(out, "  \"{}\" -> \"{}\" [label=\"+{}\"];", e.from, e.to, e.joiner).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn export_dot(graph: &ClubGraph, se_leaves: &[Coalition], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_dot(graph, se_leaves)).map_err(|e| Error::io(path, e))
}
