//! The text formats: graphs (.sg), grammars (.gg), decoding systems (.dec),
//! rule spans (.rr), pattern bundles (.pat), grammar bundles (.besg) and
//! derivation scripts (.script).
//!
//! All formats share one header line (`sgraft-format 1`), `#` comments and
//! whitespace-insensitive, line-oriented bodies. Serialization is canonical:
//! parse then serialize is byte-stable.

pub mod lex;

mod besg;
mod dec;
mod gg;
mod pat;
mod rr;
mod script;
mod sg;

pub use besg::{parse_besg, serialize_besg, BesgFile};
pub use dec::{parse_dec, serialize_dec, DecFile};
pub use gg::{parse_gg, serialize_gg, GrammarFile};
pub use pat::{parse_pat, serialize_pat, PatCorrespondence, PatFile};
pub use rr::{parse_rr, serialize_rr, RuleFile};
pub use script::{parse_script, serialize_script, ScriptFile};
pub use sg::{parse_sg, serialize_sg, GraphFile};

use lex::{err, Cursor, ParseError, Pos, TokenKind};
use sgraft_core::alphabet::{Alphabets, Direction, Mode};
use sgraft_core::graph::{
    ConnectionInstruction, EdgeLabel, ExtendedGraph, VertexId, VertexLabel,
};

fn parse_mode_line(c: &mut Cursor) -> Result<Mode, ParseError> {
    let (m, pos) = c.expect_ident()?;
    let mode = match m.as_str() {
        "directed" => Mode::Directed,
        "undirected" => Mode::Undirected,
        _ => return err(pos, format!("expected `directed` or `undirected`, found `{m}`")),
    };
    c.expect_punct(';')?;
    Ok(mode)
}

/// `labels { node: ...; wire: ...; nonterminal: ...; edge: ...; encoding: ... }`
fn parse_labels_block(c: &mut Cursor, mode: Mode) -> Result<Alphabets, ParseError> {
    c.expect_punct('{')?;
    let mut a = Alphabets::new(mode);
    while !c.eat_punct('}') {
        let (class, pos) = c.expect_ident()?;
        c.expect_punct(':')?;
        let mut items = Vec::new();
        while let Some(t) = c.peek() {
            match &t.kind {
                TokenKind::Ident(s) => {
                    items.push(s.clone());
                    c.next();
                }
                _ => break,
            }
        }
        // The semicolon is optional before the closing brace.
        let _ = c.eat_punct(';');
        match class.as_str() {
            "node" => a.node_labels.extend(items.into_iter().map(VertexLabel::new)),
            "wire" => a.wire_labels.extend(items.into_iter().map(VertexLabel::new)),
            "nonterminal" => {
                a.nonterminal_labels.extend(items.into_iter().map(VertexLabel::new))
            }
            "edge" => a.edge_labels.extend(items.into_iter().map(EdgeLabel::new)),
            "encoding" => {
                for i in items {
                    let l = EdgeLabel::new(i);
                    a.edge_labels.insert(l.clone());
                    a.encoding_labels.insert(l);
                }
            }
            other => return err(pos, format!("unknown label class `{other}`")),
        }
    }
    Ok(a)
}

fn serialize_labels_block(a: &Alphabets, indent: &str, out: &mut String) {
    let join_v = |s: &std::collections::BTreeSet<VertexLabel>| {
        s.iter().map(|l| l.as_str().to_string()).collect::<Vec<_>>().join(" ")
    };
    let join_e = |s: &std::collections::BTreeSet<EdgeLabel>| {
        s.iter().map(|l| l.as_str().to_string()).collect::<Vec<_>>().join(" ")
    };
    let plain_edges: std::collections::BTreeSet<EdgeLabel> =
        a.edge_labels.difference(&a.encoding_labels).cloned().collect();
    out.push_str(&format!(
        "{indent}labels {{ node: {}; wire: {}; nonterminal: {}; edge: {}; encoding: {} }}\n",
        join_v(&a.node_labels),
        join_v(&a.wire_labels),
        join_v(&a.nonterminal_labels),
        join_e(&plain_edges),
        join_e(&a.encoding_labels),
    ));
}

/// One `vertex`/`edge`/`conn` statement of a graph body.
fn parse_body_statement(
    c: &mut Cursor,
    g: &mut ExtendedGraph,
    keyword: &str,
    pos: Pos,
) -> Result<(), ParseError> {
    match keyword {
        "vertex" => {
            let (id, idpos) = c.expect_ident()?;
            c.expect_punct(':')?;
            let (label, _) = c.expect_ident()?;
            c.expect_punct(';')?;
            g.graph
                .add_vertex(VertexId::new(id), VertexLabel::new(label))
                .map_err(|e| ParseError { pos: idpos, message: format!("{e}") })?;
        }
        "edge" => {
            let (s, spos) = c.expect_ident()?;
            let (label, _) = c.expect_arrow()?;
            let (t, _) = c.expect_ident()?;
            c.expect_punct(';')?;
            g.graph
                .add_edge(VertexId::new(s), EdgeLabel::new(label), VertexId::new(t))
                .map_err(|e| ParseError { pos: spos, message: format!("{e}") })?;
        }
        "conn" => {
            c.expect_punct('(')?;
            let (sigma, _) = c.expect_ident()?;
            c.expect_punct(',')?;
            let (beta, _) = c.expect_ident()?;
            c.expect_punct('/')?;
            let (gamma, _) = c.expect_ident()?;
            c.expect_punct(',')?;
            let (target, tpos) = c.expect_ident()?;
            c.expect_punct(',')?;
            let (d, dpos) = c.expect_ident()?;
            let direction = match d.as_str() {
                "in" => Direction::In,
                "out" => Direction::Out,
                _ => return err(dpos, format!("expected `in` or `out`, found `{d}`")),
            };
            c.expect_punct(')')?;
            c.expect_punct(';')?;
            g.add_connection(ConnectionInstruction::new(
                g.graph.mode(),
                VertexLabel::new(sigma),
                EdgeLabel::new(beta),
                EdgeLabel::new(gamma),
                VertexId::new(target),
                direction,
            ))
            .map_err(|e| ParseError { pos: tpos, message: format!("{e}") })?;
        }
        other => return err(pos, format!("unknown statement `{other}`")),
    }
    Ok(())
}

/// Parses a `{ vertex ...; edge ...; conn ...; }` body into an extended graph.
fn parse_graph_body(c: &mut Cursor, mode: Mode) -> Result<ExtendedGraph, ParseError> {
    c.expect_punct('{')?;
    let mut g = ExtendedGraph::new(mode);
    loop {
        if c.eat_punct('}') {
            return Ok(g);
        }
        let (kw, pos) = c.expect_ident()?;
        parse_body_statement(c, &mut g, &kw, pos)?;
    }
}

fn serialize_graph_body(g: &ExtendedGraph, indent: &str, out: &mut String) {
    for (v, l) in g.graph.labels() {
        out.push_str(&format!("{indent}vertex {v} : {l};\n"));
    }
    for e in g.graph.edges() {
        out.push_str(&format!("{indent}edge {} -{}-> {};\n", e.source, e.label, e.target));
    }
    for cn in &g.connections {
        out.push_str(&format!(
            "{indent}conn ({}, {}/{}, {}, {});\n",
            cn.neighbor_label, cn.old_label, cn.new_label, cn.target, cn.direction
        ));
    }
}

/// A label universe attached to a parsed file, when present.
fn validate_against(
    a: &Alphabets,
    g: &ExtendedGraph,
    pos: Pos,
) -> Result<(), ParseError> {
    let report = g.validate(a);
    if let Some(v) = report.first() {
        return err(pos, format!("{v}"));
    }
    Ok(())
}
