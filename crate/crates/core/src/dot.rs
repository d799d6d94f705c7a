//! Graphviz export.

use std::fmt::Write;

use crate::filter::Filter;

/// Color names Graphviz understands that are passed through unchanged.
const NAMED: &[&str] = &[
    "black", "blue", "brown", "cyan", "gold", "gray", "green", "grey", "lightblue",
    "lightgray", "lightgreen", "magenta", "orange", "pink", "purple", "red", "violet",
    "white", "yellow",
];

/// Fill colors for color names Graphviz would not recognize, picked by the
/// color's position in the filter's color list.
const PALETTE: &[&str] = &[
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69",
    "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
];

fn fill(f: &Filter, c: usize) -> String {
    let name = &f.colors()[c];
    let lower = name.to_ascii_lowercase();
    let is_hex = name.len() == 7
        && name.starts_with('#')
        && name[1..].chars().all(|ch| ch.is_ascii_hexdigit());
    if NAMED.contains(&lower.as_str()) || is_hex {
        name.clone()
    } else {
        PALETTE[c % PALETTE.len()].to_string()
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for `f`. Nodes are filled with their first color and labelled
/// with their id and color names; each initial state gets an arrow from a
/// point node.
pub fn to_dot(f: &Filter) -> String {
    let mut out = String::from("digraph filter {\n  rankdir=LR;\n  node [shape=box, style=filled];\n");
    for (i, &v) in f.initial().iter().enumerate() {
        let _ = writeln!(out, "  __init{i} [shape=point, label=\"\"];");
        let _ = writeln!(out, "  __init{i} -> {};", quote(f.state_name(v)));
    }
    for v in 0..f.num_states() {
        let cs = f.coloring(v);
        let label = format!("{}\n{{{}}}", f.state_name(v), f.color_names(cs).join(","));
        let _ = writeln!(
            out,
            "  {} [label={}, fillcolor={}];",
            quote(f.state_name(v)),
            quote(&label),
            quote(&fill(f, cs[0]))
        );
    }
    for ((v, w), ys) in f.edges() {
        let label: Vec<&str> = ys.iter().map(|&y| f.observations()[y].as_str()).collect();
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(f.state_name(v)),
            quote(f.state_name(w)),
            quote(&label.join(","))
        );
    }
    out.push_str("}\n");
    out
}
