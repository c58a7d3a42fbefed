//! Label alphabets shared by graphs, grammars and decoding systems.
//!
//! Vertex labels are partitioned into node labels, wire labels (together the
//! terminal labels) and nonterminal labels. Edge labels contain a
//! distinguished subset of encoding labels, which stand for wire fragments
//! that a decoding system expands later.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{EdgeLabel, VertexLabel};

/// Whether edges are directed. In undirected mode every edge is stored in a
/// single canonical orientation and connection instructions ignore direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Directed,
    Undirected,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Directed => write!(f, "directed"),
            Mode::Undirected => write!(f, "undirected"),
        }
    }
}

/// Direction field of a connection instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::In => Direction::Out,
            Direction::Out => Direction::In,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::In => write!(f, "in"),
            Direction::Out => write!(f, "out"),
        }
    }
}

/// The label universe: a partition of vertex labels into node, wire and
/// nonterminal labels, plus edge labels with a distinguished encoding subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabets {
    pub mode: Mode,
    pub node_labels: BTreeSet<VertexLabel>,
    pub wire_labels: BTreeSet<VertexLabel>,
    pub nonterminal_labels: BTreeSet<VertexLabel>,
    pub edge_labels: BTreeSet<EdgeLabel>,
    pub encoding_labels: BTreeSet<EdgeLabel>,
}

/// A violated alphabet invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphabetViolation {
    /// A label occurs in more than one vertex-label class.
    OverlappingVertexClasses(VertexLabel),
    /// An encoding label is not declared as an edge label.
    EncodingNotEdgeLabel(EdgeLabel),
}

impl fmt::Display for AlphabetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphabetViolation::OverlappingVertexClasses(l) => {
                write!(f, "vertex label `{l}` belongs to more than one class")
            }
            AlphabetViolation::EncodingNotEdgeLabel(l) => {
                write!(f, "encoding label `{l}` is not a declared edge label")
            }
        }
    }
}

impl Alphabets {
    pub fn new(mode: Mode) -> Self {
        Alphabets {
            mode,
            node_labels: BTreeSet::new(),
            wire_labels: BTreeSet::new(),
            nonterminal_labels: BTreeSet::new(),
            edge_labels: BTreeSet::new(),
            encoding_labels: BTreeSet::new(),
        }
    }

    pub fn is_node(&self, l: &VertexLabel) -> bool {
        self.node_labels.contains(l)
    }

    pub fn is_wire(&self, l: &VertexLabel) -> bool {
        self.wire_labels.contains(l)
    }

    /// Terminal labels: node labels together with wire labels.
    pub fn is_terminal(&self, l: &VertexLabel) -> bool {
        self.is_node(l) || self.is_wire(l)
    }

    pub fn is_nonterminal(&self, l: &VertexLabel) -> bool {
        self.nonterminal_labels.contains(l)
    }

    pub fn is_vertex_label(&self, l: &VertexLabel) -> bool {
        self.is_terminal(l) || self.is_nonterminal(l)
    }

    pub fn is_edge_label(&self, l: &EdgeLabel) -> bool {
        self.edge_labels.contains(l)
    }

    pub fn is_encoding(&self, l: &EdgeLabel) -> bool {
        self.encoding_labels.contains(l)
    }

    /// Checks that the three vertex classes are pairwise disjoint and the
    /// encoding labels are edge labels.
    pub fn validate(&self) -> Vec<AlphabetViolation> {
        let mut out = Vec::new();
        for l in &self.node_labels {
            if self.wire_labels.contains(l) || self.nonterminal_labels.contains(l) {
                out.push(AlphabetViolation::OverlappingVertexClasses(l.clone()));
            }
        }
        for l in &self.wire_labels {
            if self.nonterminal_labels.contains(l) {
                out.push(AlphabetViolation::OverlappingVertexClasses(l.clone()));
            }
        }
        for l in &self.encoding_labels {
            if !self.edge_labels.contains(l) {
                out.push(AlphabetViolation::EncodingNotEdgeLabel(l.clone()));
            }
        }
        out
    }
}

/// Builder-style convenience used by tests and the file formats.
pub struct AlphabetsBuilder {
    inner: Alphabets,
}

impl AlphabetsBuilder {
    pub fn new(mode: Mode) -> Self {
        AlphabetsBuilder { inner: Alphabets::new(mode) }
    }

    pub fn nodes<I: IntoIterator<Item = S>, S: Into<String>>(mut self, it: I) -> Self {
        self.inner.node_labels.extend(it.into_iter().map(|s| VertexLabel::new(s)));
        self
    }

    pub fn wires<I: IntoIterator<Item = S>, S: Into<String>>(mut self, it: I) -> Self {
        self.inner.wire_labels.extend(it.into_iter().map(|s| VertexLabel::new(s)));
        self
    }

    pub fn nonterminals<I: IntoIterator<Item = S>, S: Into<String>>(mut self, it: I) -> Self {
        self.inner
            .nonterminal_labels
            .extend(it.into_iter().map(|s| VertexLabel::new(s)));
        self
    }

    pub fn edges<I: IntoIterator<Item = S>, S: Into<String>>(mut self, it: I) -> Self {
        self.inner.edge_labels.extend(it.into_iter().map(|s| EdgeLabel::new(s)));
        self
    }

    pub fn encodings<I: IntoIterator<Item = S>, S: Into<String>>(mut self, it: I) -> Self {
        for s in it {
            let l = EdgeLabel::new(s);
            self.inner.edge_labels.insert(l.clone());
            self.inner.encoding_labels.insert(l);
        }
        self
    }

    pub fn build(self) -> Alphabets {
        self.inner
    }
}
