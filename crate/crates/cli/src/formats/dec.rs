//! Decoding system files (.dec).

use sgraft_core::alphabet::{Alphabets, Mode};
use sgraft_core::decode::{DecodingRule, DecodingSystem};
use sgraft_core::graph::{EdgeLabel, VertexId, VertexLabel};

use super::lex::{check_header, err, tokenize, Cursor, ParseError, FORMAT_HEADER};
use super::{parse_labels_block, parse_mode_line, serialize_graph_body, serialize_labels_block};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecFile {
    pub name: String,
    pub system: DecodingSystem,
    pub alphabets: Option<Alphabets>,
}

pub fn parse_dec(input: &str, default_mode: Mode) -> Result<DecFile, ParseError> {
    let body = check_header(input)?;
    let mut c = Cursor::new(tokenize(body)?);
    c.expect_keyword("decoding")?;
    let (name, _) = c.expect_ident()?;
    c.expect_punct('{')?;
    let mut mode = default_mode;
    let mut alphabets = None;
    let mut system = DecodingSystem::new();
    loop {
        if c.eat_punct('}') {
            break;
        }
        let (kw, pos) = c.expect_ident()?;
        match kw.as_str() {
            "mode" => mode = parse_mode_line(&mut c)?,
            "labels" => alphabets = Some(parse_labels_block(&mut c, mode)?),
            "rule" => {
                c.expect_punct('(')?;
                let (alpha, _) = c.expect_ident()?;
                c.expect_punct(',')?;
                let (sigma1, _) = c.expect_ident()?;
                c.expect_punct(',')?;
                let (sigma2, _) = c.expect_ident()?;
                c.expect_punct(')')?;
                c.expect_punct('{')?;
                c.expect_keyword("endpoints")?;
                let (e1, _) = c.expect_ident()?;
                let (e2, _) = c.expect_ident()?;
                c.expect_punct(';')?;
                // Reuse the body parser: the remaining statements up to the
                // closing brace form the fragment. Wrap them back in braces.
                let rhs = parse_rule_body(&mut c, mode)?;
                let rule = DecodingRule {
                    encoding: EdgeLabel::new(alpha),
                    source_label: VertexLabel::new(sigma1),
                    target_label: VertexLabel::new(sigma2),
                    rhs,
                    source_endpoint: VertexId::new(e1),
                    target_endpoint: VertexId::new(e2),
                };
                if system.add_rule(rule).is_some() {
                    return err(pos, "duplicate decoding rule for this triple");
                }
            }
            other => return err(pos, format!("unknown statement `{other}`")),
        }
    }
    if !c.done() {
        return err(c.peek().unwrap().pos, "trailing input after decoding system");
    }
    Ok(DecFile { name, system, alphabets })
}

fn parse_rule_body(
    c: &mut Cursor,
    mode: Mode,
) -> Result<sgraft_core::graph::LabeledGraph, ParseError> {
    let mut g = sgraft_core::graph::ExtendedGraph::new(mode);
    loop {
        if c.eat_punct('}') {
            if !g.connections.is_empty() {
                return err(c.eof_pos(), "decoding fragments cannot carry connection instructions");
            }
            return Ok(g.graph);
        }
        let (kw, pos) = c.expect_ident()?;
        super::parse_body_statement(c, &mut g, &kw, pos)?;
    }
}

pub fn serialize_dec(f: &DecFile) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str(&format!("decoding {} {{\n", f.name));
    if let Some(a) = &f.alphabets {
        out.push_str(&format!("  mode {};\n", a.mode));
        serialize_labels_block(a, "  ", &mut out);
    }
    for rule in f.system.rules() {
        out.push_str(&format!(
            "  rule ({}, {}, {}) {{\n",
            rule.encoding, rule.source_label, rule.target_label
        ));
        out.push_str(&format!(
            "    endpoints {} {};\n",
            rule.source_endpoint, rule.target_endpoint
        ));
        serialize_graph_body(
            &sgraft_core::graph::ExtendedGraph::plain(rule.rhs.clone()),
            "    ",
            &mut out,
        );
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
