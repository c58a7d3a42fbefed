//! Loading objects from files, resolving cross-file references.
//!
//! Bundle formats (.besg, .pat) reference other files by path, resolved
//! relative to the referencing file's directory. Every loaded object is
//! checked just enough to be structurally usable; full validation is a
//! separate (`validate`) concern.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use sgraft_core::alphabet::Mode;
use sgraft_core::besg::BesgGrammar;
use sgraft_core::grammar::GrammarHom;
use sgraft_core::morphism::Morphism;
use sgraft_core::schema::{BesgRewriteRule, GrammarPattern};

use crate::error::CliError;
use crate::formats::{
    parse_besg, parse_dec, parse_gg, parse_pat, parse_rr, parse_script, parse_sg, DecFile,
    GrammarFile, GraphFile, PatFile, RuleFile, ScriptFile,
};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn resolve(base: &Path, reference: &str) -> PathBuf {
    let r = Path::new(reference);
    if r.is_absolute() {
        r.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(r)
    }
}

fn syntax<T>(path: &Path, r: Result<T, crate::formats::lex::ParseError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Syntax { path: path.display().to_string(), error: e })
}

pub fn load_graph(path: &Path, mode: Mode) -> Result<GraphFile, CliError> {
    syntax(path, parse_sg(&read(path)?, mode))
}

pub fn load_grammar(path: &Path, mode: Mode) -> Result<GrammarFile, CliError> {
    syntax(path, parse_gg(&read(path)?, mode))
}

pub fn load_decoding(path: &Path, mode: Mode) -> Result<DecFile, CliError> {
    syntax(path, parse_dec(&read(path)?, mode))
}

pub fn load_rule(path: &Path, mode: Mode) -> Result<RuleFile, CliError> {
    syntax(path, parse_rr(&read(path)?, mode))
}

pub fn load_script(path: &Path) -> Result<ScriptFile, CliError> {
    syntax(path, parse_script(&read(path)?))
}

pub struct LoadedBesg {
    pub name: String,
    pub besg: BesgGrammar,
}

pub fn load_besg(path: &Path, mode: Mode) -> Result<LoadedBesg, CliError> {
    let file = syntax(path, parse_besg(&read(path)?, mode))?;
    let grammar = load_grammar(&resolve(path, &file.grammar_path), file.mode)?;
    let decoding = load_decoding(&resolve(path, &file.decoding_path), file.mode)?;
    Ok(LoadedBesg {
        name: file.name,
        besg: BesgGrammar { grammar: grammar.grammar, decoding: decoding.system },
    })
}

pub struct LoadedPattern {
    pub name: String,
    pub rule: BesgRewriteRule,
}

pub fn load_pattern(path: &Path, mode: Mode) -> Result<LoadedPattern, CliError> {
    let file: PatFile = syntax(path, parse_pat(&read(path)?))?;
    let left = load_grammar(&resolve(path, &file.left_path), mode)?;
    let interface = load_grammar(&resolve(path, &file.interface_path), mode)?;
    let right = load_grammar(&resolve(path, &file.right_path), mode)?;
    let decoding = load_decoding(&resolve(path, &file.decoding_path), mode)?;

    let mut to_left =
        GrammarHom { production_map: BTreeMap::new(), components: BTreeMap::new() };
    let mut to_right =
        GrammarHom { production_map: BTreeMap::new(), components: BTreeMap::new() };
    for corr in &file.correspondences {
        let mut lcomp = Morphism::new();
        let mut rcomp = Morphism::new();
        for (iv, (lv, rv)) in &corr.vertices {
            lcomp.insert(iv.clone(), lv.clone());
            rcomp.insert(iv.clone(), rv.clone());
        }
        to_left.production_map.insert(corr.interface.clone(), corr.left.clone());
        to_left.components.insert(corr.interface.clone(), lcomp);
        to_right.production_map.insert(corr.interface.clone(), corr.right.clone());
        to_right.components.insert(corr.interface.clone(), rcomp);
    }
    Ok(LoadedPattern {
        name: file.name,
        rule: BesgRewriteRule {
            pattern: GrammarPattern {
                left: left.grammar,
                interface: interface.grammar,
                right: right.grammar,
                to_left,
                to_right,
            },
            decoding: decoding.system,
        },
    })
}
