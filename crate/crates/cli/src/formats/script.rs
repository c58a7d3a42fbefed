//! Derivation script files (.script).

use sgraft_core::grammar::{DerivationScript, ProductionName};
use sgraft_core::graph::VertexId;

use super::lex::{check_header, err, tokenize, Cursor, ParseError, FORMAT_HEADER};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptFile {
    pub name: String,
    pub script: DerivationScript,
}

pub fn parse_script(input: &str) -> Result<ScriptFile, ParseError> {
    let body = check_header(input)?;
    let mut c = Cursor::new(tokenize(body)?);
    c.expect_keyword("script")?;
    let (name, _) = c.expect_ident()?;
    c.expect_punct('{')?;
    let mut script = DerivationScript::new();
    loop {
        if c.eat_punct('}') {
            break;
        }
        let (kw, pos) = c.expect_ident()?;
        if kw != "step" {
            return err(pos, format!("expected `step`, found `{kw}`"));
        }
        let (target, _) = c.expect_ident()?;
        let (production, _) = c.expect_ident()?;
        c.expect_punct(';')?;
        script.push(VertexId::new(target), ProductionName::new(production));
    }
    if !c.done() {
        return err(c.peek().unwrap().pos, "trailing input after script");
    }
    Ok(ScriptFile { name, script })
}

pub fn serialize_script(f: &ScriptFile) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str(&format!("script {} {{\n", f.name));
    for step in &f.script.steps {
        out.push_str(&format!("  step {} {};\n", step.target, step.production));
    }
    out.push_str("}\n");
    out
}
