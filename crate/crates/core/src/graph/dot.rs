use std::fmt::Write;

use super::TermGraph;

/// Graphviz rendering. Nodes are listed by increasing id; edges carry the
/// argument position; the root is drawn with a double border.
pub fn to_dot(g: &TermGraph) -> String {
    let mut out = String::from("digraph G {\n  node [shape=circle];\n");
    for id in g.graph.ids() {
        let label = g.graph.label(id).map_or("⊥".to_string(), |s| s.name.to_string());
        let extra = if id == g.root { ", peripheries=2" } else { "" };
        writeln!(out, "  {id} [label=\"{label}\"{extra}];").unwrap();
    }
    for id in g.graph.ids() {
        for (i, c) in g.graph.children(id).iter().enumerate() {
            writeln!(out, "  {id} -> {c} [label=\"{i}\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
