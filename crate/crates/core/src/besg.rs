//! B-ESG grammars: a boundary grammar paired with a decoding system,
//! generating languages of string graphs.
//!
//! Acceptance combines structural checks on the productions (wire-vertex
//! degree budgets, encoding labels kept away from wire vertices, decoding
//! rules for every realizable triple) with semantic probing: every terminal
//! graph reachable within a probe depth must be an encoded string graph
//! whose decoding is a string graph. The probe bound is part of the report;
//! the structural checks are sufficient conditions, not exact ones.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Direction, Mode};
use crate::decode::{
    decode, encode_preimages, DecodeError, DecodingKey, DecodingSystem, DecodingViolation,
    DecodingWarning,
};
use crate::grammar::{
    enumerate_by_steps, enumerate_language, validate_grammar, DerivationScript, EnumerateError,
    Grammar, GrammarViolation, ProductionName,
};
use crate::graph::{ConnectionInstruction, Edge, LabeledGraph, VertexId};
use crate::morphism::{find_isomorphism, IsoKey};
use crate::stringgraph::{classify, NotAStringGraph, StringGraphView};

/// A boundary grammar together with its decoding system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BesgGrammar {
    pub grammar: Grammar,
    pub decoding: DecodingSystem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BesgViolation {
    Grammar(GrammarViolation),
    Decoding(DecodingViolation),
    /// A wire vertex whose realized edges plus matching instructions exceed
    /// the string-graph degree budget.
    WireDegreeBudget {
        production: ProductionName,
        vertex: VertexId,
        direction: Direction,
        budget: usize,
    },
    /// An encoding edge touching a wire vertex inside a production.
    EncodingEdgeAtWire { production: ProductionName, edge: Edge },
    /// An instruction that would create an encoding edge at a wire vertex or
    /// keyed on a non-node neighbor label.
    EncodingInstructionMisuse { production: ProductionName, instruction: ConnectionInstruction },
    /// A terminal graph reached during probing that is not an encoded string
    /// graph.
    ProbeNotEncoded { script: DerivationScript },
    /// A probed terminal graph whose decoding failed.
    ProbeDecodeFailed { script: DerivationScript, error: DecodeError },
    /// A probed terminal graph whose decoding is not a string graph.
    ProbeDecodeNotString { script: DerivationScript },
    /// The probe itself could not run to the requested depth.
    ProbeAborted(EnumerateError),
}

impl fmt::Display for BesgViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BesgViolation::Grammar(v) => write!(f, "grammar: {v}"),
            BesgViolation::Decoding(v) => write!(f, "decoding: {v}"),
            BesgViolation::WireDegreeBudget { production, vertex, direction, budget } => write!(
                f,
                "production `{production}`: wire vertex `{vertex}` has {direction}-budget {budget} > 1"
            ),
            BesgViolation::EncodingEdgeAtWire { production, edge } => {
                write!(f, "production `{production}`: encoding edge at wire vertex: {edge}")
            }
            BesgViolation::EncodingInstructionMisuse { production, instruction } => {
                write!(f, "production `{production}`: encoding instruction misuse: {instruction}")
            }
            BesgViolation::ProbeNotEncoded { script } => {
                write!(f, "probed terminal graph is not an encoded string graph (script: {script})")
            }
            BesgViolation::ProbeDecodeFailed { script, error } => {
                write!(f, "probed terminal graph failed to decode ({error}; script: {script})")
            }
            BesgViolation::ProbeDecodeNotString { script } => {
                write!(f, "probed decoding is not a string graph (script: {script})")
            }
            BesgViolation::ProbeAborted(e) => write!(f, "probe aborted: {e}"),
        }
    }
}

/// Validation outcome; `accepted()` means no violations (warnings allowed).
#[derive(Debug, Clone)]
pub struct BesgReport {
    pub violations: Vec<BesgViolation>,
    pub warnings: Vec<DecodingWarning>,
    /// Depth (in derivation steps) to which terminal graphs were probed.
    pub probed_steps: usize,
}

impl BesgReport {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for BesgReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.accepted() {
            write!(f, "accepted (probed to depth {})", self.probed_steps)?;
        } else {
            write!(f, "rejected (probed to depth {})", self.probed_steps)?;
            for v in &self.violations {
                write!(f, "\nviolation: {v}")?;
            }
        }
        for w in &self.warnings {
            write!(f, "\nwarning: {w}")?;
        }
        Ok(())
    }
}

pub const DEFAULT_PROBE_DEPTH: usize = 6;

/// Triples `(encoding, node label, node label)` the grammar may realize.
/// Over-approximated: a nonterminal endpoint counts as every node label.
pub fn realizable_triples(g: &Grammar) -> BTreeSet<DecodingKey> {
    let a = &g.alphabets;
    let mut out = BTreeSet::new();
    let node_labels: Vec<_> = a.node_labels.iter().cloned().collect();
    let expand = |l: &crate::graph::VertexLabel| -> Vec<crate::graph::VertexLabel> {
        if a.is_nonterminal(l) {
            node_labels.clone()
        } else {
            alloc::vec![l.clone()]
        }
    };
    for p in g.productions() {
        for e in p.rhs.graph.edges() {
            if !a.is_encoding(&e.label) {
                continue;
            }
            let sl = p.rhs.graph.label(&e.source).unwrap();
            let tl = p.rhs.graph.label(&e.target).unwrap();
            for s in expand(sl) {
                for t in expand(tl) {
                    out.insert((e.label.clone(), s.clone(), t.clone()));
                    if a.mode == Mode::Undirected {
                        out.insert((e.label.clone(), t.clone(), s.clone()));
                    }
                }
            }
        }
        for c in &p.rhs.connections {
            if !a.is_encoding(&c.new_label) {
                continue;
            }
            let target_label = p.rhs.graph.label(&c.target).unwrap();
            for t in expand(target_label) {
                match c.direction {
                    Direction::In => {
                        out.insert((c.new_label.clone(), c.neighbor_label.clone(), t.clone()));
                        if a.mode == Mode::Undirected {
                            out.insert((c.new_label.clone(), t.clone(), c.neighbor_label.clone()));
                        }
                    }
                    Direction::Out => {
                        out.insert((c.new_label.clone(), t.clone(), c.neighbor_label.clone()));
                        if a.mode == Mode::Undirected {
                            out.insert((c.new_label.clone(), c.neighbor_label.clone(), t.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

fn structural_checks(b: &BesgGrammar, out: &mut Vec<BesgViolation>) {
    let a = &b.grammar.alphabets;
    for p in b.grammar.productions() {
        for v in p.rhs.graph.vertices() {
            let l = p.rhs.graph.label(v).unwrap();
            if !a.is_wire(l) {
                continue;
            }
            match a.mode {
                Mode::Directed => {
                    let in_budget = p.rhs.graph.in_degree(v)
                        + p.rhs.connections_at(v, Direction::In).len();
                    let out_budget = p.rhs.graph.out_degree(v)
                        + p.rhs.connections_at(v, Direction::Out).len();
                    if in_budget > 1 {
                        out.push(BesgViolation::WireDegreeBudget {
                            production: p.name.clone(),
                            vertex: v.clone(),
                            direction: Direction::In,
                            budget: in_budget,
                        });
                    }
                    if out_budget > 1 {
                        out.push(BesgViolation::WireDegreeBudget {
                            production: p.name.clone(),
                            vertex: v.clone(),
                            direction: Direction::Out,
                            budget: out_budget,
                        });
                    }
                }
                Mode::Undirected => {
                    let budget = p.rhs.graph.degree(v)
                        + p.rhs.connections.iter().filter(|c| &c.target == v).count();
                    if budget > 2 {
                        out.push(BesgViolation::WireDegreeBudget {
                            production: p.name.clone(),
                            vertex: v.clone(),
                            direction: Direction::In,
                            budget,
                        });
                    }
                }
            }
        }
        for e in p.rhs.graph.edges() {
            if a.is_encoding(&e.label) {
                let sl = p.rhs.graph.label(&e.source).unwrap();
                let tl = p.rhs.graph.label(&e.target).unwrap();
                if a.is_wire(sl) || a.is_wire(tl) {
                    out.push(BesgViolation::EncodingEdgeAtWire {
                        production: p.name.clone(),
                        edge: e.clone(),
                    });
                }
            }
        }
        for c in &p.rhs.connections {
            if a.is_encoding(&c.new_label) {
                let target_label = p.rhs.graph.label(&c.target).unwrap();
                if a.is_wire(target_label) || !a.is_node(&c.neighbor_label) {
                    out.push(BesgViolation::EncodingInstructionMisuse {
                        production: p.name.clone(),
                        instruction: c.clone(),
                    });
                }
            }
        }
    }
}

/// Validates a B-ESG grammar: boundary grammar checks, decoding checks
/// against the realizable triples, structural wire budgets, then semantic
/// probing to `probe_depth` derivation steps.
pub fn validate_besg(b: &BesgGrammar, probe_depth: usize) -> BesgReport {
    let a = &b.grammar.alphabets;
    let mut violations: Vec<BesgViolation> =
        validate_grammar(&b.grammar).into_iter().map(BesgViolation::Grammar).collect();
    let used = realizable_triples(&b.grammar);
    let (dv, warnings) = b.decoding.validate(a, &used);
    violations.extend(dv.into_iter().map(BesgViolation::Decoding));
    structural_checks(b, &mut violations);

    // Semantic probing is only meaningful once the structure is sound.
    if violations.is_empty() {
        match enumerate_by_steps(&b.grammar, probe_depth) {
            Err(e) => violations.push(BesgViolation::ProbeAborted(e)),
            Ok(forms) => {
                for form in forms {
                    let g = &form.graph.graph;
                    if !classify(g, a).is_encoded_string_graph() {
                        violations
                            .push(BesgViolation::ProbeNotEncoded { script: form.script.clone() });
                        continue;
                    }
                    match decode(g, &b.decoding, a) {
                        Err(e) => violations.push(BesgViolation::ProbeDecodeFailed {
                            script: form.script.clone(),
                            error: e,
                        }),
                        Ok(decoded) => {
                            if !classify(&decoded, a).is_string_graph() {
                                violations.push(BesgViolation::ProbeDecodeNotString {
                                    script: form.script.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    BesgReport { violations, warnings, probed_steps: probe_depth }
}

/// A language member: the decoded string graph plus the script that derived
/// its encoded form.
#[derive(Debug, Clone)]
pub struct BesgMember {
    pub view: StringGraphView,
    pub script: DerivationScript,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BesgLanguageError {
    Enumerate(EnumerateError),
    /// A coherence gap: some member failed to decode to a string graph.
    Coherence(DerivationScript),
    Decode(DecodeError),
}

impl fmt::Display for BesgLanguageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BesgLanguageError::Enumerate(e) => write!(f, "{e}"),
            BesgLanguageError::Coherence(s) => {
                write!(f, "language member is not a string graph (script: {s})")
            }
            BesgLanguageError::Decode(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BesgLanguageError {}

/// The language of the grammar up to `max_vertices` pre-decoding vertices:
/// every bounded derivation result, decoded, deduplicated by isomorphism.
pub fn besg_language(
    b: &BesgGrammar,
    max_vertices: usize,
) -> Result<Vec<BesgMember>, BesgLanguageError> {
    let a = &b.grammar.alphabets;
    let forms =
        enumerate_language(&b.grammar, max_vertices, None).map_err(BesgLanguageError::Enumerate)?;
    let mut seen = crate::morphism::IsoSet::new();
    let mut out = Vec::new();
    for form in forms {
        let decoded =
            decode(&form.graph.graph, &b.decoding, a).map_err(BesgLanguageError::Decode)?;
        let view = StringGraphView::new(decoded, a)
            .map_err(|_| BesgLanguageError::Coherence(form.script.clone()))?;
        let (_, new) = seen.insert(crate::graph::ExtendedGraph::plain(view.graph.clone()));
        if new {
            out.push(BesgMember { view, script: form.script });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipError {
    NotAStringGraph(NotAStringGraph),
    Enumerate(EnumerateError),
}

impl fmt::Display for MembershipError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipError::NotAStringGraph(e) => write!(f, "{e}"),
            MembershipError::Enumerate(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MembershipError {}

/// Decides whether `h` belongs to the language of `b`, returning a
/// replayable witness script on success.
///
/// Every contraction preimage of `h` under the decoding system has at most
/// `|V(h)|` vertices, so an exhaustive derivation search bounded by that
/// size (with minimum-yield pruning and isomorphism-deduplicated frontier)
/// is a decision procedure whenever the grammar has no non-growing cycles.
pub fn membership(
    b: &BesgGrammar,
    h: &LabeledGraph,
) -> Result<Option<DerivationScript>, MembershipError> {
    let a = &b.grammar.alphabets;
    let view = StringGraphView::new(h.clone(), a).map_err(MembershipError::NotAStringGraph)?;
    let candidates = encode_preimages(&view.graph, &b.decoding, a, None);
    let bound = candidates.iter().map(|c| c.vertex_count()).max().unwrap_or(0);
    let forms =
        enumerate_language(&b.grammar, bound, None).map_err(MembershipError::Enumerate)?;

    // Bucket candidates by invariant key; candidates are pairwise
    // non-isomorphic already.
    let keyed: Vec<(IsoKey, &LabeledGraph)> =
        candidates.iter().map(|c| (IsoKey::of_graph(c), c)).collect();
    for form in &forms {
        let fk = IsoKey::of(&form.graph);
        for (ck, c) in &keyed {
            if *ck == fk
                && find_isomorphism(&form.graph, &crate::graph::ExtendedGraph::plain((*c).clone()))
                    .is_some()
            {
                return Ok(Some(form.script.clone()));
            }
        }
    }
    Ok(None)
}
