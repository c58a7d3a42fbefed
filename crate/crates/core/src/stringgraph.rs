//! String-graph predicates and input/output computation.
//!
//! A string graph has two kinds of terminal vertices: wire vertices, with
//! in-degree and out-degree at most one (total degree at most two in
//! undirected mode), and node vertices, adjacent only to wire vertices. An
//! encoded string graph additionally allows encoding-labeled edges between
//! node vertices; a decoding system expands those into wire fragments.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Alphabets, Mode};
use crate::graph::{Edge, LabeledGraph, VertexId, VertexLabel};

/// Why a graph fails to be a (possibly encoded) string graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyIssue {
    NonterminalVertex(VertexId),
    UnknownLabel(VertexId, VertexLabel),
    WireInDegree { vertex: VertexId, degree: usize },
    WireOutDegree { vertex: VertexId, degree: usize },
    WireTotalDegree { vertex: VertexId, degree: usize },
    NodeAdjacentToNode(Edge),
    EncodingAtWire(Edge),
}

impl fmt::Display for ClassifyIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyIssue::NonterminalVertex(v) => write!(f, "vertex `{v}` is nonterminal"),
            ClassifyIssue::UnknownLabel(v, l) => write!(f, "vertex `{v}` has unknown label `{l}`"),
            ClassifyIssue::WireInDegree { vertex, degree } => {
                write!(f, "wire vertex `{vertex}` has in-degree {degree}")
            }
            ClassifyIssue::WireOutDegree { vertex, degree } => {
                write!(f, "wire vertex `{vertex}` has out-degree {degree}")
            }
            ClassifyIssue::WireTotalDegree { vertex, degree } => {
                write!(f, "wire vertex `{vertex}` has degree {degree}")
            }
            ClassifyIssue::NodeAdjacentToNode(e) => {
                write!(f, "node vertices adjacent via non-encoding edge: {e}")
            }
            ClassifyIssue::EncodingAtWire(e) => {
                write!(f, "encoding edge incident to a wire vertex: {e}")
            }
        }
    }
}

/// Outcome of [`classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// All invariants hold and no encoding edges occur.
    StringGraph,
    /// All invariants hold; at least one encoding edge between node vertices.
    EncodedStringGraph,
    Neither(Vec<ClassifyIssue>),
}

impl Classification {
    pub fn is_string_graph(&self) -> bool {
        matches!(self, Classification::StringGraph)
    }

    /// String graphs are encoded string graphs with zero encoding edges.
    pub fn is_encoded_string_graph(&self) -> bool {
        matches!(self, Classification::StringGraph | Classification::EncodedStringGraph)
    }
}

/// Classifies a graph as a string graph, an encoded string graph, or neither
/// (with the offending vertices and edges listed).
pub fn classify(g: &LabeledGraph, a: &Alphabets) -> Classification {
    let mut issues = Vec::new();
    let mut encoded = false;
    for (v, l) in g.labels() {
        if a.is_nonterminal(l) {
            issues.push(ClassifyIssue::NonterminalVertex(v.clone()));
        } else if !a.is_terminal(l) {
            issues.push(ClassifyIssue::UnknownLabel(v.clone(), l.clone()));
        } else if a.is_wire(l) {
            match g.mode() {
                Mode::Directed => {
                    let din = g.in_degree(v);
                    let dout = g.out_degree(v);
                    if din > 1 {
                        issues.push(ClassifyIssue::WireInDegree { vertex: v.clone(), degree: din });
                    }
                    if dout > 1 {
                        issues
                            .push(ClassifyIssue::WireOutDegree { vertex: v.clone(), degree: dout });
                    }
                }
                Mode::Undirected => {
                    let d = g.degree(v);
                    if d > 2 {
                        issues.push(ClassifyIssue::WireTotalDegree { vertex: v.clone(), degree: d });
                    }
                }
            }
        }
    }
    for e in g.edges() {
        let sl = g.label(&e.source);
        let tl = g.label(&e.target);
        let (sl, tl) = match (sl, tl) {
            (Some(s), Some(t)) => (s, t),
            _ => continue,
        };
        let enc = a.is_encoding(&e.label);
        if enc && (a.is_wire(sl) || a.is_wire(tl)) {
            issues.push(ClassifyIssue::EncodingAtWire(e.clone()));
        } else if enc && a.is_node(sl) && a.is_node(tl) {
            encoded = true;
        } else if a.is_node(sl) && a.is_node(tl) {
            issues.push(ClassifyIssue::NodeAdjacentToNode(e.clone()));
        }
    }
    if !issues.is_empty() {
        Classification::Neither(issues)
    } else if encoded {
        Classification::EncodedStringGraph
    } else {
        Classification::StringGraph
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotAStringGraph(pub Vec<ClassifyIssue>);

impl fmt::Display for NotAStringGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a string graph")?;
        for issue in &self.0 {
            write!(f, "; {issue}")?;
        }
        Ok(())
    }
}

impl core::error::Error for NotAStringGraph {}

/// A string graph together with its open wire ends.
///
/// In directed mode inputs are the wire vertices of in-degree zero and
/// outputs those of out-degree zero; an isolated wire vertex is both. In
/// undirected mode the open ends (degree at most one) are simultaneously
/// inputs and outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringGraphView {
    pub graph: LabeledGraph,
    pub inputs: BTreeSet<VertexId>,
    pub outputs: BTreeSet<VertexId>,
}

impl StringGraphView {
    pub fn new(graph: LabeledGraph, a: &Alphabets) -> Result<Self, NotAStringGraph> {
        match classify(&graph, a) {
            Classification::StringGraph => {}
            Classification::EncodedStringGraph => {
                return Err(NotAStringGraph(alloc::vec![]));
            }
            Classification::Neither(issues) => return Err(NotAStringGraph(issues)),
        }
        let (inputs, outputs) = io_sets(&graph, a);
        Ok(StringGraphView { graph, inputs, outputs })
    }

    pub fn io(&self) -> (&BTreeSet<VertexId>, &BTreeSet<VertexId>) {
        (&self.inputs, &self.outputs)
    }
}

/// Input and output wire vertices of a graph (which should classify as a
/// string graph for the result to be meaningful).
pub fn io_sets(g: &LabeledGraph, a: &Alphabets) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    let mut inputs = BTreeSet::new();
    let mut outputs = BTreeSet::new();
    for (v, l) in g.labels() {
        if !a.is_wire(l) {
            continue;
        }
        match g.mode() {
            Mode::Directed => {
                if g.in_degree(v) == 0 {
                    inputs.insert(v.clone());
                }
                if g.out_degree(v) == 0 {
                    outputs.insert(v.clone());
                }
            }
            Mode::Undirected => {
                if g.degree(v) <= 1 {
                    inputs.insert(v.clone());
                    outputs.insert(v.clone());
                }
            }
        }
    }
    (inputs, outputs)
}
