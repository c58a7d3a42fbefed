//! Grammar bundle files (.besg): a grammar file, a decoding file and a mode.

use sgraft_core::alphabet::Mode;

use super::lex::{check_header, err, tokenize, Cursor, ParseError, FORMAT_HEADER};
use super::parse_mode_line;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BesgFile {
    pub name: String,
    pub grammar_path: String,
    pub decoding_path: String,
    pub mode: Mode,
}

pub fn parse_besg(input: &str, default_mode: Mode) -> Result<BesgFile, ParseError> {
    let body = check_header(input)?;
    let mut c = Cursor::new(tokenize(body)?);
    c.expect_keyword("besg")?;
    let (name, name_pos) = c.expect_ident()?;
    c.expect_punct('{')?;
    let mut grammar_path = None;
    let mut decoding_path = None;
    let mut mode = default_mode;
    loop {
        if c.eat_punct('}') {
            break;
        }
        let (kw, pos) = c.expect_ident()?;
        match kw.as_str() {
            "grammar" => {
                let (p, _) = c.expect_ident()?;
                c.expect_punct(';')?;
                grammar_path = Some(p);
            }
            "decoding" => {
                let (p, _) = c.expect_ident()?;
                c.expect_punct(';')?;
                decoding_path = Some(p);
            }
            "mode" => mode = parse_mode_line(&mut c)?,
            other => return err(pos, format!("unknown statement `{other}`")),
        }
    }
    if !c.done() {
        return err(c.peek().unwrap().pos, "trailing input after bundle");
    }
    let (Some(grammar_path), Some(decoding_path)) = (grammar_path, decoding_path) else {
        return err(name_pos, "bundle must reference a grammar and a decoding file");
    };
    Ok(BesgFile { name, grammar_path, decoding_path, mode })
}

pub fn serialize_besg(f: &BesgFile) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str(&format!("besg {} {{\n", f.name));
    out.push_str(&format!("  grammar {};\n", f.grammar_path));
    out.push_str(&format!("  decoding {};\n", f.decoding_path));
    out.push_str(&format!("  mode {};\n", f.mode));
    out.push_str("}\n");
    out
}
