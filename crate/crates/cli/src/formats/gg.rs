//! Grammar files (.gg).

use sgraft_core::alphabet::Mode;
use sgraft_core::grammar::{Grammar, Production, ProductionName};
use sgraft_core::graph::VertexLabel;

use super::lex::{check_header, err, tokenize, Cursor, ParseError, FORMAT_HEADER};
use super::{parse_graph_body, parse_labels_block, parse_mode_line, serialize_graph_body, serialize_labels_block};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarFile {
    pub name: String,
    pub grammar: Grammar,
}

pub fn parse_gg(input: &str, default_mode: Mode) -> Result<GrammarFile, ParseError> {
    let body = check_header(input)?;
    let mut c = Cursor::new(tokenize(body)?);
    c.expect_keyword("grammar")?;
    let (name, _) = c.expect_ident()?;
    c.expect_punct('{')?;
    c.expect_keyword("initial")?;
    let (initial, _) = c.expect_ident()?;
    c.expect_punct(';')?;
    let mut mode = default_mode;
    if c.peek_keyword("mode") {
        c.expect_keyword("mode")?;
        mode = parse_mode_line(&mut c)?;
    }
    c.expect_keyword("labels")?;
    let alphabets = parse_labels_block(&mut c, mode)?;
    let mut grammar = Grammar::new(alphabets, VertexLabel::new(initial));
    loop {
        if c.eat_punct('}') {
            break;
        }
        let pos = c.expect_keyword("production")?;
        let (pname, _) = c.expect_ident()?;
        c.expect_punct(':')?;
        let (lhs, _) = c.expect_ident()?;
        let rhs = parse_graph_body(&mut c, mode)?;
        grammar
            .add_production(Production {
                name: ProductionName::new(pname),
                lhs: VertexLabel::new(lhs),
                rhs,
            })
            .map_err(|e| ParseError { pos, message: format!("{e}") })?;
    }
    if !c.done() {
        return err(c.peek().unwrap().pos, "trailing input after grammar");
    }
    Ok(GrammarFile { name, grammar })
}

pub fn serialize_gg(f: &GrammarFile) -> String {
    let g = &f.grammar;
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str(&format!("grammar {} {{\n", f.name));
    out.push_str(&format!("  initial {};\n", g.initial));
    out.push_str(&format!("  mode {};\n", g.alphabets.mode));
    serialize_labels_block(&g.alphabets, "  ", &mut out);
    for p in g.productions() {
        out.push_str(&format!("  production {} : {} {{\n", p.name, p.lhs));
        serialize_graph_body(&p.rhs, "    ", &mut out);
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
