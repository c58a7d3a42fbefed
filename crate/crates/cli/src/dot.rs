//! DOT export for graphs, grammars, decoding systems and rule spans.
//!
//! Node vertices render as filled circles, wire vertices as points,
//! nonterminals as boxed labels; encoding edges are dashed. Grammars render
//! one cluster per production with connection instructions drawn as dotted
//! edges from a label stub outside the cluster.

use std::fmt::Write;

use sgraft_core::alphabet::{Alphabets, Direction, Mode};
use sgraft_core::decode::DecodingSystem;
use sgraft_core::dpo::RuleSpan;
use sgraft_core::graph::{ExtendedGraph, LabeledGraph, VertexLabel};
use sgraft_core::Grammar;

fn edge_op(mode: Mode) -> &'static str {
    match mode {
        Mode::Directed => "->",
        Mode::Undirected => "--",
    }
}

fn graph_kw(mode: Mode) -> &'static str {
    match mode {
        Mode::Directed => "digraph",
        Mode::Undirected => "graph",
    }
}

fn vertex_attrs(label: &VertexLabel, a: &Alphabets) -> String {
    if a.is_wire(label) {
        "shape=point, width=0.08".to_string()
    } else if a.is_node(label) {
        format!("shape=circle, style=filled, fillcolor=lightgray, label=\"{label}\"")
    } else {
        format!("shape=box, label=\"{label}\"")
    }
}

fn write_vertices(
    out: &mut String,
    g: &LabeledGraph,
    a: &Alphabets,
    prefix: &str,
    indent: &str,
) {
    for (v, l) in g.labels() {
        let _ = writeln!(out, "{indent}\"{prefix}{v}\" [{}];", vertex_attrs(l, a));
    }
}

fn write_edges(out: &mut String, g: &LabeledGraph, a: &Alphabets, prefix: &str, indent: &str) {
    let op = edge_op(g.mode());
    for e in g.edges() {
        let style = if a.is_encoding(&e.label) { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "{indent}\"{prefix}{}\" {op} \"{prefix}{}\" [label=\"{}\"{style}];",
            e.source, e.target, e.label
        );
    }
}

/// DOT text for a single (extended) graph. Connection instructions, when
/// present, render as dotted stub edges.
pub fn graph_to_dot(name: &str, g: &ExtendedGraph, a: &Alphabets) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} \"{name}\" {{", graph_kw(g.mode()));
    let _ = writeln!(out, "  rankdir=BT;");
    write_vertices(&mut out, &g.graph, a, "", "  ");
    write_edges(&mut out, &g.graph, a, "", "  ");
    write_connections(&mut out, g, a, "", "  ");
    out.push_str("}\n");
    out
}

fn write_connections(out: &mut String, g: &ExtendedGraph, a: &Alphabets, prefix: &str, indent: &str) {
    let op = edge_op(g.mode());
    for (i, c) in g.connections.iter().enumerate() {
        let stub = format!("{prefix}__conn{i}");
        let _ = writeln!(out, "{indent}\"{stub}\" [shape=plaintext, label=\"{}\"];", c.neighbor_label);
        let style = if a.is_encoding(&c.new_label) { ", style=\"dotted,bold\"" } else { ", style=dotted" };
        let label = format!("{}/{}", c.old_label, c.new_label);
        let (from, to) = match (g.mode(), c.direction) {
            (Mode::Undirected, _) | (_, Direction::In) => {
                (stub.clone(), format!("{prefix}{}", c.target))
            }
            (_, Direction::Out) => (format!("{prefix}{}", c.target), stub.clone()),
        };
        let _ = writeln!(out, "{indent}\"{from}\" {op} \"{to}\" [label=\"{label}\"{style}];");
    }
}

/// DOT text for a grammar: one cluster per production, instructions crossing
/// the cluster border.
pub fn grammar_to_dot(name: &str, g: &Grammar) -> String {
    let a = &g.alphabets;
    let mut out = String::new();
    let _ = writeln!(out, "{} \"{name}\" {{", graph_kw(a.mode));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  compound=true;");
    for p in g.productions() {
        let pfx = format!("{}.", p.name);
        let _ = writeln!(out, "  subgraph \"cluster_{}\" {{", p.name);
        let _ = writeln!(out, "    label=\"{} : {}\";", p.name, p.lhs);
        write_vertices(&mut out, &p.rhs.graph, a, &pfx, "    ");
        write_edges(&mut out, &p.rhs.graph, a, &pfx, "    ");
        out.push_str("  }\n");
        // Instruction stubs live outside the cluster so the dotted edges
        // cross its border.
        write_connections(&mut out, &p.rhs, a, &pfx, "  ");
    }
    out.push_str("}\n");
    out
}

/// DOT text for a decoding system: one cluster per rule.
pub fn decoding_to_dot(name: &str, t: &DecodingSystem, a: &Alphabets) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} \"{name}\" {{", graph_kw(a.mode));
    for (i, rule) in t.rules().enumerate() {
        let pfx = format!("r{i}.");
        let _ = writeln!(out, "  subgraph \"cluster_r{i}\" {{");
        let _ = writeln!(
            out,
            "    label=\"({}, {}, {})\";",
            rule.encoding, rule.source_label, rule.target_label
        );
        write_vertices(&mut out, &rule.rhs, a, &pfx, "    ");
        write_edges(&mut out, &rule.rhs, a, &pfx, "    ");
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// DOT text for a rule span: left, interface and right clusters plus dotted
/// leg edges.
pub fn rule_to_dot(name: &str, span: &RuleSpan, a: &Alphabets) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} \"{name}\" {{", graph_kw(span.interface.mode()));
    let _ = writeln!(out, "  rankdir=BT;");
    for (section, g) in
        [("left", &span.left), ("interface", &span.interface), ("right", &span.right)]
    {
        let pfx = format!("{section}.");
        let _ = writeln!(out, "  subgraph \"cluster_{section}\" {{");
        let _ = writeln!(out, "    label=\"{section}\";");
        write_vertices(&mut out, &g.graph, a, &pfx, "    ");
        write_edges(&mut out, &g.graph, a, &pfx, "    ");
        out.push_str("  }\n");
    }
    let op = match span.interface.mode() {
        Mode::Directed => "->",
        Mode::Undirected => "--",
    };
    let mut leg = |m: &sgraft_core::morphism::Morphism, side: &str| {
        for (from, to) in m.pairs() {
            let _ = writeln!(
                out,
                "  \"interface.{from}\" {op} \"{side}.{to}\" [style=dotted, arrowhead=empty, constraint=false];"
            );
        }
    };
    leg(&span.to_left, "left");
    leg(&span.to_right, "right");
    out.push_str("}\n");
    out
}

/// Counts used by tests: filled circles, points and boxes in a DOT text.
pub fn shape_counts(dot: &str) -> (usize, usize, usize) {
    let circles = dot.matches("shape=circle").count();
    let points = dot.matches("shape=point").count();
    let boxes = dot.matches("shape=box").count();
    (circles, points, boxes)
}
