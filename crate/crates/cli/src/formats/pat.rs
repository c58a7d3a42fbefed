//! Pattern bundle files (.pat): references to three grammar files and a
//! decoding system, plus the production and vertex correspondence tables.

use std::collections::BTreeMap;

use sgraft_core::grammar::ProductionName;
use sgraft_core::graph::VertexId;

use super::lex::{check_header, err, tokenize, Cursor, ParseError, FORMAT_HEADER};

/// One `correspond` block: interface production, its left/right production
/// images, and per-vertex images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatCorrespondence {
    pub interface: ProductionName,
    pub left: ProductionName,
    pub right: ProductionName,
    /// interface vertex -> (left vertex, right vertex)
    pub vertices: BTreeMap<VertexId, (VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatFile {
    pub name: String,
    pub left_path: String,
    pub interface_path: String,
    pub right_path: String,
    pub decoding_path: String,
    pub correspondences: Vec<PatCorrespondence>,
}

pub fn parse_pat(input: &str) -> Result<PatFile, ParseError> {
    let body = check_header(input)?;
    let mut c = Cursor::new(tokenize(body)?);
    c.expect_keyword("pattern")?;
    let (name, name_pos) = c.expect_ident()?;
    c.expect_punct('{')?;
    let mut left_path = None;
    let mut interface_path = None;
    let mut right_path = None;
    let mut decoding_path = None;
    let mut correspondences = Vec::new();
    loop {
        if c.eat_punct('}') {
            break;
        }
        let (kw, pos) = c.expect_ident()?;
        match kw.as_str() {
            "left" | "interface" | "right" | "decoding" => {
                let (path, _) = c.expect_ident()?;
                c.expect_punct(';')?;
                match kw.as_str() {
                    "left" => left_path = Some(path),
                    "interface" => interface_path = Some(path),
                    "right" => right_path = Some(path),
                    _ => decoding_path = Some(path),
                }
            }
            "correspond" => {
                let (iname, _) = c.expect_ident()?;
                c.expect_mapsto()?;
                let (lname, _) = c.expect_ident()?;
                let (rname, _) = c.expect_ident()?;
                c.expect_punct('{')?;
                let mut vertices = BTreeMap::new();
                while !c.eat_punct('}') {
                    c.expect_keyword("vertex")?;
                    let (iv, _) = c.expect_ident()?;
                    c.expect_mapsto()?;
                    let (lv, _) = c.expect_ident()?;
                    let (rv, _) = c.expect_ident()?;
                    c.expect_punct(';')?;
                    vertices
                        .insert(VertexId::new(iv), (VertexId::new(lv), VertexId::new(rv)));
                }
                correspondences.push(PatCorrespondence {
                    interface: ProductionName::new(iname),
                    left: ProductionName::new(lname),
                    right: ProductionName::new(rname),
                    vertices,
                });
            }
            other => return err(pos, format!("unknown statement `{other}`")),
        }
    }
    if !c.done() {
        return err(c.peek().unwrap().pos, "trailing input after pattern");
    }
    let (Some(left_path), Some(interface_path), Some(right_path), Some(decoding_path)) =
        (left_path, interface_path, right_path, decoding_path)
    else {
        return err(name_pos, "pattern must reference left, interface, right and decoding files");
    };
    Ok(PatFile { name, left_path, interface_path, right_path, decoding_path, correspondences })
}

pub fn serialize_pat(f: &PatFile) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str(&format!("pattern {} {{\n", f.name));
    out.push_str(&format!("  left {};\n", f.left_path));
    out.push_str(&format!("  interface {};\n", f.interface_path));
    out.push_str(&format!("  right {};\n", f.right_path));
    out.push_str(&format!("  decoding {};\n", f.decoding_path));
    for corr in &f.correspondences {
        out.push_str(&format!(
            "  correspond {} -> {} {} {{\n",
            corr.interface, corr.left, corr.right
        ));
        for (iv, (lv, rv)) in &corr.vertices {
            out.push_str(&format!("    vertex {iv} -> {lv} {rv};\n"));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
