//! Rule span files (.rr): three graph bodies plus the two leg vertex maps.

use sgraft_core::alphabet::{Alphabets, Mode};
use sgraft_core::dpo::RuleSpan;
use sgraft_core::graph::VertexId;
use sgraft_core::morphism::Morphism;

use super::lex::{check_header, err, tokenize, Cursor, ParseError, FORMAT_HEADER};
use super::{parse_graph_body, parse_labels_block, parse_mode_line, serialize_graph_body, serialize_labels_block};

#[derive(Debug, Clone)]
pub struct RuleFile {
    pub name: String,
    pub span: RuleSpan,
    pub alphabets: Option<Alphabets>,
}

pub fn parse_rr(input: &str, default_mode: Mode) -> Result<RuleFile, ParseError> {
    let body = check_header(input)?;
    let mut c = Cursor::new(tokenize(body)?);
    c.expect_keyword("rule")?;
    let (name, name_pos) = c.expect_ident()?;
    c.expect_punct('{')?;
    let mut mode = default_mode;
    let mut alphabets = None;
    let mut left = None;
    let mut interface = None;
    let mut right = None;
    let mut lmap = Morphism::new();
    let mut rmap = Morphism::new();
    loop {
        if c.eat_punct('}') {
            break;
        }
        let (kw, pos) = c.expect_ident()?;
        match kw.as_str() {
            "mode" => mode = parse_mode_line(&mut c)?,
            "labels" => alphabets = Some(parse_labels_block(&mut c, mode)?),
            "left" => left = Some(parse_graph_body(&mut c, mode)?),
            "interface" => interface = Some(parse_graph_body(&mut c, mode)?),
            "right" => right = Some(parse_graph_body(&mut c, mode)?),
            "lmap" => {
                let (from, _) = c.expect_ident()?;
                let (to, _) = c.expect_ident()?;
                c.expect_punct(';')?;
                lmap.insert(VertexId::new(from), VertexId::new(to));
            }
            "rmap" => {
                let (from, _) = c.expect_ident()?;
                let (to, _) = c.expect_ident()?;
                c.expect_punct(';')?;
                rmap.insert(VertexId::new(from), VertexId::new(to));
            }
            other => return err(pos, format!("unknown statement `{other}`")),
        }
    }
    if !c.done() {
        return err(c.peek().unwrap().pos, "trailing input after rule");
    }
    let (Some(left), Some(interface), Some(right)) = (left, interface, right) else {
        return err(name_pos, "rule must define left, interface and right bodies");
    };
    let span = RuleSpan::new(left, interface, right, lmap, rmap)
        .map_err(|e| ParseError { pos: name_pos, message: format!("{e}") })?;
    Ok(RuleFile { name, span, alphabets })
}

pub fn serialize_rr(f: &RuleFile) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str(&format!("rule {} {{\n", f.name));
    out.push_str(&format!("  mode {};\n", f.span.interface.mode()));
    if let Some(a) = &f.alphabets {
        serialize_labels_block(a, "  ", &mut out);
    }
    for (section, g) in
        [("left", &f.span.left), ("interface", &f.span.interface), ("right", &f.span.right)]
    {
        out.push_str(&format!("  {section} {{\n"));
        serialize_graph_body(g, "    ", &mut out);
        out.push_str("  }\n");
    }
    for (k, v) in f.span.to_left.pairs() {
        out.push_str(&format!("  lmap {k} {v};\n"));
    }
    for (k, v) in f.span.to_right.pairs() {
        out.push_str(&format!("  rmap {k} {v};\n"));
    }
    out.push_str("}\n");
    out
}
