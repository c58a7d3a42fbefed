//! Graph files (.sg).

use sgraft_core::alphabet::{Alphabets, Mode};
use sgraft_core::graph::ExtendedGraph;

use super::lex::{check_header, tokenize, Cursor, ParseError, FORMAT_HEADER};
use super::{
    parse_body_statement, parse_labels_block, parse_mode_line, serialize_graph_body,
    serialize_labels_block, validate_against,
};

/// A parsed graph file: the graph, its mode, and the label universe when the
/// file declares one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub name: String,
    pub graph: ExtendedGraph,
    pub alphabets: Option<Alphabets>,
}

pub fn parse_sg(input: &str, default_mode: Mode) -> Result<GraphFile, ParseError> {
    let body = check_header(input)?;
    let mut c = Cursor::new(tokenize(body)?);
    c.expect_keyword("graph")?;
    let (name, _) = c.expect_ident()?;
    c.expect_punct('{')?;
    let mut mode = default_mode;
    let mut alphabets = None;
    let mut g = ExtendedGraph::new(mode);
    loop {
        if c.eat_punct('}') {
            break;
        }
        let (kw, pos) = c.expect_ident()?;
        match kw.as_str() {
            "mode" => {
                mode = parse_mode_line(&mut c)?;
                if g.graph.vertex_count() > 0 {
                    return super::lex::err(pos, "mode must precede the graph body");
                }
                g = ExtendedGraph::new(mode);
            }
            "labels" => alphabets = Some(parse_labels_block(&mut c, mode)?),
            other => parse_body_statement(&mut c, &mut g, other, pos)?,
        }
    }
    if !c.done() {
        return super::lex::err(c.peek().unwrap().pos, "trailing input after graph");
    }
    if let Some(a) = &alphabets {
        validate_against(a, &g, super::lex::Pos { line: 1, col: 1 })?;
    }
    Ok(GraphFile { name, graph: g, alphabets })
}

pub fn serialize_sg(f: &GraphFile) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str(&format!("graph {} {{\n", f.name));
    out.push_str(&format!("  mode {};\n", f.graph.mode()));
    if let Some(a) = &f.alphabets {
        serialize_labels_block(a, "  ", &mut out);
    }
    serialize_graph_body(&f.graph, "  ", &mut out);
    out.push_str("}\n");
    out
}
