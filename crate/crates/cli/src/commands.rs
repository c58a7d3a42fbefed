//! Subcommand implementations. Every command returns its stdout text plus
//! an exit code, so tests can drive them without spawning processes.

use std::fmt::Write as _;
use std::path::Path;

use sgraft_core::alphabet::{Alphabets, Mode};
use sgraft_core::besg::{membership, validate_besg};
use sgraft_core::decode::decode;
use sgraft_core::dpo::{dpo_rewrite, find_matches};
use sgraft_core::grammar::{run_script, validate_grammar};
use sgraft_core::grammar_rewrite::{
    besg_rewrite, check_admissibility, find_grammar_matches, AdmissibilityBounds,
    AdmissibilityVerdict,
};
use sgraft_core::graph::ExtendedGraph;
use sgraft_core::schema::{parallel_instantiate, validate_besg_rule, validate_pattern};
use sgraft_core::stringgraph::classify;

use crate::dot;
use crate::error::{CliError, EXIT_NO};
use crate::formats::{
    serialize_gg, serialize_rr, serialize_script, serialize_sg, GrammarFile, GraphFile, RuleFile,
    ScriptFile,
};
use crate::workspace;

pub struct Outcome {
    pub stdout: String,
    pub exit: i32,
}

fn ok(stdout: String) -> Result<Outcome, CliError> {
    Ok(Outcome { stdout, exit: 0 })
}

fn extension(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

pub const DEFAULT_PROBE_DEPTH: usize = 6;

/// `validate <file>`: structural validation dispatched on the extension.
pub fn validate(path: &Path, mode: Mode, probe_depth: usize) -> Result<Outcome, CliError> {
    let mut out = String::new();
    let _ = writeln!(out, "validate: {}", path.display());
    let mut problems: Vec<String> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    match extension(path) {
        "sg" => {
            let f = workspace::load_graph(path, mode)?;
            match &f.alphabets {
                Some(a) => {
                    problems.extend(f.graph.validate(a).iter().map(|v| v.to_string()));
                    let _ = writeln!(out, "classification: {}", classification_name(&f.graph, a));
                }
                None => warnings.push(
                    "no labels block; only parse-level checks were performed".to_string(),
                ),
            }
        }
        "gg" => {
            let f = workspace::load_grammar(path, mode)?;
            problems.extend(validate_grammar(&f.grammar).iter().map(|v| v.to_string()));
            let _ = writeln!(out, "boundary: {}", f.grammar.is_boundary());
        }
        "dec" => {
            let f = workspace::load_decoding(path, mode)?;
            match &f.alphabets {
                Some(a) => {
                    let (dv, dw) = f.system.validate(a, &Default::default());
                    problems.extend(dv.iter().map(|v| v.to_string()));
                    warnings.extend(dw.iter().map(|w| w.to_string()));
                }
                None => {
                    let empty = Alphabets::new(mode);
                    let _ = empty;
                    warnings.push(
                        "no labels block; fragment shapes were not checked".to_string(),
                    );
                }
            }
        }
        "besg" => {
            let loaded = workspace::load_besg(path, mode)?;
            let report = validate_besg(&loaded.besg, probe_depth);
            let _ = writeln!(out, "probed-steps: {}", report.probed_steps);
            problems.extend(report.violations.iter().map(|v| v.to_string()));
            warnings.extend(report.warnings.iter().map(|w| w.to_string()));
        }
        "pat" => {
            let loaded = workspace::load_pattern(path, mode)?;
            problems
                .extend(validate_pattern(&loaded.rule.pattern).iter().map(|v| v.to_string()));
            if problems.is_empty() {
                problems.extend(
                    validate_besg_rule(&loaded.rule, probe_depth).iter().map(|v| v.to_string()),
                );
            }
        }
        "rr" => {
            // Span well-formedness (monomorphic legs) is enforced by the
            // parser; report label-level checks when alphabets are present.
            let f = workspace::load_rule(path, mode)?;
            if let Some(a) = &f.alphabets {
                for (section, g) in [
                    ("left", &f.span.left),
                    ("interface", &f.span.interface),
                    ("right", &f.span.right),
                ] {
                    for v in g.validate(a) {
                        problems.push(format!("{section}: {v}"));
                    }
                }
            }
        }
        "script" => {
            workspace::load_script(path)?;
        }
        other => {
            return Err(CliError::Usage(format!("cannot validate files of type `.{other}`")))
        }
    }
    for w in &warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    if problems.is_empty() {
        let _ = writeln!(out, "result: accepted");
        ok(out)
    } else {
        for p in &problems {
            let _ = writeln!(out, "violation: {p}");
        }
        let _ = writeln!(out, "result: rejected");
        Ok(Outcome { stdout: out, exit: 2 })
    }
}

fn classification_name(g: &ExtendedGraph, a: &Alphabets) -> String {
    match classify(&g.graph, a) {
        sgraft_core::Classification::StringGraph => "string-graph".to_string(),
        sgraft_core::Classification::EncodedStringGraph => "encoded-string-graph".to_string(),
        sgraft_core::Classification::Neither(issues) => {
            format!("neither ({} issues)", issues.len())
        }
    }
}

/// `derive <grammar.gg> --script <file>`: replay and print the result graph.
pub fn derive(grammar: &Path, script: &Path, mode: Mode) -> Result<Outcome, CliError> {
    let g = workspace::load_grammar(grammar, mode)?;
    let s = workspace::load_script(script)?;
    let form = run_script(&g.grammar, &s.script)
        .map_err(|e| CliError::Undefined(format!("replay failed: {e}")))?;
    let concrete = form.is_concrete(&g.grammar.alphabets);
    let mut out = String::new();
    let _ = writeln!(out, "# concrete: {concrete}");
    out.push_str(&serialize_sg(&GraphFile {
        name: s.name.clone(),
        graph: form.graph,
        alphabets: Some(g.grammar.alphabets.clone()),
    }));
    ok(out)
}

/// `enumerate <besg> --max-vertices N [--max-steps M]`.
///
/// The vertex bound applies to the pre-decoding derivation; the step bound
/// defaults to the vertex bound.
pub fn enumerate(
    besg: &Path,
    max_vertices: usize,
    max_steps: Option<usize>,
    mode: Mode,
) -> Result<Outcome, CliError> {
    let loaded = workspace::load_besg(besg, mode)?;
    let report = validate_besg(&loaded.besg, DEFAULT_PROBE_DEPTH);
    if !report.accepted() {
        return Err(CliError::Validation(format!("{report}")));
    }
    let a = &loaded.besg.grammar.alphabets;
    let steps = max_steps.unwrap_or(max_vertices);
    let forms = sgraft_core::grammar::enumerate_language(
        &loaded.besg.grammar,
        max_vertices,
        Some(steps),
    )
    .map_err(|e| CliError::Validation(format!("{e}")))?;
    let mut seen = sgraft_core::morphism::IsoSet::new();
    let mut language = Vec::new();
    for form in forms {
        let decoded = decode(&form.graph.graph, &loaded.besg.decoding, a)
            .map_err(|e| CliError::Validation(format!("coherence gap: {e}")))?;
        let (_, new) = seen.insert(ExtendedGraph::plain(decoded.clone()));
        if new {
            language.push((decoded, form.script));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "# members: {}", language.len());
    for (i, (graph, script)) in language.iter().enumerate() {
        let _ = writeln!(out, "# member {} via script: {}", i + 1, script);
        out.push_str(&serialize_sg(&GraphFile {
            name: format!("{}_{}", loaded.name, i + 1),
            graph: ExtendedGraph::plain(graph.clone()),
            alphabets: Some(a.clone()),
        }));
    }
    ok(out)
}

/// `member <besg> <graph.sg>`: exit 0 with a witness script, or exit 1.
pub fn member(besg: &Path, graph: &Path, mode: Mode) -> Result<Outcome, CliError> {
    let loaded = workspace::load_besg(besg, mode)?;
    let report = validate_besg(&loaded.besg, DEFAULT_PROBE_DEPTH);
    if !report.accepted() {
        return Err(CliError::Validation(format!("{report}")));
    }
    let g = workspace::load_graph(graph, mode)?;
    match membership(&loaded.besg, &g.graph.graph) {
        Ok(Some(witness)) => {
            let mut out = String::new();
            let _ = writeln!(out, "member: true");
            out.push_str(&serialize_script(&ScriptFile {
                name: format!("{}_witness", g.name),
                script: witness,
            }));
            ok(out)
        }
        Ok(None) => Ok(Outcome { stdout: "member: false\n".to_string(), exit: EXIT_NO }),
        Err(e) => Err(CliError::Validation(format!("{e}"))),
    }
}

/// `decode <graph.sg> <dec>`: expand every encoding edge.
pub fn decode_cmd(graph: &Path, dec: &Path, mode: Mode) -> Result<Outcome, CliError> {
    let g = workspace::load_graph(graph, mode)?;
    let d = workspace::load_decoding(dec, mode)?;
    let alphabets = g
        .alphabets
        .clone()
        .or(d.alphabets.clone())
        .ok_or_else(|| {
            CliError::Usage(
                "decoding needs a labels block in the graph or decoding file".to_string(),
            )
        })?;
    let decoded = decode(&g.graph.graph, &d.system, &alphabets)
        .map_err(|e| CliError::Undefined(format!("{e}")))?;
    let mut out = String::new();
    out.push_str(&serialize_sg(&GraphFile {
        name: format!("{}_decoded", g.name),
        graph: ExtendedGraph::plain(decoded),
        alphabets: Some(alphabets),
    }));
    ok(out)
}

/// `instantiate <pat> --script <file>`: emit the concrete rewrite rule.
pub fn instantiate(pat: &Path, script: &Path, mode: Mode) -> Result<Outcome, CliError> {
    let loaded = workspace::load_pattern(pat, mode)?;
    let s = workspace::load_script(script)?;
    let inst = parallel_instantiate(&loaded.rule, &s.script)
        .map_err(|e| CliError::Undefined(format!("{e}")))?;
    let mut out = String::new();
    out.push_str(&serialize_rr(&RuleFile {
        name: format!("{}_{}", loaded.name, s.name),
        span: inst.span,
        alphabets: Some(loaded.rule.pattern.interface.alphabets.clone()),
    }));
    ok(out)
}

/// `apply <rule.rr> <graph.sg> --match K`: one DPO rewrite step.
pub fn apply(rule: &Path, graph: &Path, match_index: usize, mode: Mode) -> Result<Outcome, CliError> {
    let r = workspace::load_rule(rule, mode)?;
    let g = workspace::load_graph(graph, mode)?;
    let matches = find_matches(&r.span, &g.graph);
    let m = matches.get(match_index).ok_or_else(|| {
        CliError::Undefined(format!(
            "match index {match_index} out of range ({} matches)",
            matches.len()
        ))
    })?;
    if !m.is_applicable() {
        return Err(CliError::Undefined(format!(
            "match {match_index} violates the gluing condition ({} dangling edges, {} dangling instructions)",
            m.dangling_edges.len(),
            m.dangling_instructions.len()
        )));
    }
    let outcome = dpo_rewrite(&g.graph, &r.span, &m.map)
        .map_err(|e| CliError::Undefined(format!("{e}")))?;
    let mut out = String::new();
    let _ = writeln!(out, "# matches: {}", matches.len());
    out.push_str(&serialize_sg(&GraphFile {
        name: format!("{}_rewritten", g.name),
        graph: outcome.result,
        alphabets: g.alphabets.clone(),
    }));
    ok(out)
}

/// `rewrite-grammar <besg> <pat> --match K`: grammar-level DPO step.
pub fn rewrite_grammar(
    besg: &Path,
    pat: &Path,
    match_index: usize,
    mode: Mode,
) -> Result<Outcome, CliError> {
    let host = workspace::load_besg(besg, mode)?;
    let rule = workspace::load_pattern(pat, mode)?;
    let matches = find_grammar_matches(&rule.rule, &host.besg)
        .map_err(|e| CliError::Validation(format!("{e}")))?;
    let m = matches.get(match_index).ok_or_else(|| {
        CliError::Undefined(format!(
            "match index {match_index} out of range ({} matches)",
            matches.len()
        ))
    })?;
    let result = besg_rewrite(&host.besg, &rule.rule, m)
        .map_err(|e| CliError::Undefined(format!("{e}")))?;
    let mut out = String::new();
    let _ = writeln!(out, "# matches: {}", matches.len());
    for (l, h) in &m.production_map {
        let _ = writeln!(out, "# matched: {l} -> {h}");
    }
    out.push_str(&serialize_gg(&GrammarFile {
        name: format!("{}_{}", host.name, rule.name),
        grammar: result.grammar,
    }));
    ok(out)
}

/// `check-admissible <besg> <pat> --match K --script <file>`.
pub fn check_admissible(
    besg: &Path,
    pat: &Path,
    match_index: usize,
    script: &Path,
    mode: Mode,
) -> Result<Outcome, CliError> {
    let host = workspace::load_besg(besg, mode)?;
    let rule = workspace::load_pattern(pat, mode)?;
    let s = workspace::load_script(script)?;
    let matches = find_grammar_matches(&rule.rule, &host.besg)
        .map_err(|e| CliError::Validation(format!("{e}")))?;
    let m = matches.get(match_index).ok_or_else(|| {
        CliError::Undefined(format!(
            "match index {match_index} out of range ({} matches)",
            matches.len()
        ))
    })?;
    let result = besg_rewrite(&host.besg, &rule.rule, m)
        .map_err(|e| CliError::Undefined(format!("{e}")))?;
    let bounds = AdmissibilityBounds::default();
    let verdict = check_admissibility(&host.besg, &result, &rule.rule, &s.script, bounds)
        .map_err(|e| CliError::Undefined(format!("{e}")))?;
    let mut out = String::new();
    let _ = writeln!(out, "host: {}", host.name);
    let _ = writeln!(out, "pattern: {}", rule.name);
    let _ = writeln!(out, "script: {}", s.name);
    let _ = writeln!(out, "max-sequence: {}", bounds.max_sequence);
    let _ = writeln!(out, "extra-script-steps: {}", bounds.extra_script_steps);
    match verdict {
        AdmissibilityVerdict::Admissible { sequence } => {
            let _ = writeln!(out, "admissible: true");
            let _ = writeln!(out, "sequence-length: {}", sequence.len());
            for (i, step) in sequence.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "step-{}: instance [{}] at match {}",
                    i + 1,
                    step.instance_script,
                    step.match_index
                );
            }
            ok(out)
        }
        AdmissibilityVerdict::BoundedFailure { explored, instance_count, max_sequence } => {
            let _ = writeln!(out, "admissible: false");
            let _ = writeln!(out, "explored-states: {explored}");
            let _ = writeln!(out, "instances: {instance_count}");
            let _ = writeln!(out, "sequence-bound: {max_sequence}");
            Ok(Outcome { stdout: out, exit: EXIT_NO })
        }
    }
}

/// `export-dot <object>`: render a file as DOT text.
pub fn export_dot(path: &Path, mode: Mode) -> Result<Outcome, CliError> {
    match extension(path) {
        "sg" => {
            let f = workspace::load_graph(path, mode)?;
            let a = f
                .alphabets
                .clone()
                .unwrap_or_else(|| infer_alphabets(&f.graph, mode));
            ok(dot::graph_to_dot(&f.name, &f.graph, &a))
        }
        "gg" => {
            let f = workspace::load_grammar(path, mode)?;
            ok(dot::grammar_to_dot(&f.name, &f.grammar))
        }
        "besg" => {
            let loaded = workspace::load_besg(path, mode)?;
            ok(dot::grammar_to_dot(&loaded.name, &loaded.besg.grammar))
        }
        "dec" => {
            let f = workspace::load_decoding(path, mode)?;
            let a = f.alphabets.clone().unwrap_or_else(|| Alphabets::new(mode));
            ok(dot::decoding_to_dot(&f.name, &f.system, &a))
        }
        "rr" => {
            let f = workspace::load_rule(path, mode)?;
            let a = f
                .alphabets
                .clone()
                .unwrap_or_else(|| infer_alphabets(&f.span.left, mode));
            ok(dot::rule_to_dot(&f.name, &f.span, &a))
        }
        other => Err(CliError::Usage(format!("cannot export files of type `.{other}`"))),
    }
}

/// Fallback label classes for files without a labels block: every vertex
/// label becomes a node label, so everything renders as a circle.
fn infer_alphabets(g: &ExtendedGraph, mode: Mode) -> Alphabets {
    let mut a = Alphabets::new(mode);
    for l in g.graph.labels().values() {
        a.node_labels.insert(l.clone());
    }
    for e in g.graph.edges() {
        a.edge_labels.insert(e.label.clone());
    }
    a
}
