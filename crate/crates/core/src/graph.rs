//! Labeled graphs and extended graphs (graphs with a connection relation).
//!
//! A graph is a finite set of labeled vertices and a set of labeled edge
//! triples. Self-loops are forbidden and parallel edges must carry distinct
//! labels; both follow from the set-of-triples representation plus an
//! insertion-time check. An extended graph additionally carries connection
//! instructions, which direct how the graph reconnects to the neighborhood of
//! a nonterminal vertex it replaces.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Alphabets, Direction, Mode};

/// Opaque vertex identifier. Equality of identifiers is meaningful only
/// within one graph; graph-level equality is always up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new<S: Into<String>>(s: S) -> Self {
        VertexId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Deterministic derived identifier, used when substitution must refresh
    /// a daughter copy (`name.3`) or avoid a collision (`name~2`).
    pub fn suffixed(&self, sep: char, n: usize) -> VertexId {
        VertexId(alloc::format!("{}{}{}", self.0, sep, n))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! label_newtype {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new<S: Into<String>>(s: S) -> Self {
                $name(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

label_newtype!(
    /// Vertex label drawn from the alphabet's node, wire or nonterminal class.
    VertexLabel
);
label_newtype!(
    /// Edge label; encoding labels are a distinguished subset.
    EdgeLabel
);

/// A labeled edge triple. In undirected mode the endpoints are kept in
/// canonical (sorted) order, so the triple is orientation-free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: VertexId,
    pub label: EdgeLabel,
    pub target: VertexId,
}

impl Edge {
    pub fn canonical(mode: Mode, source: VertexId, label: EdgeLabel, target: VertexId) -> Edge {
        match mode {
            Mode::Directed => Edge { source, label, target },
            Mode::Undirected => {
                if source <= target {
                    Edge { source, label, target }
                } else {
                    Edge { source: target, label, target: source }
                }
            }
        }
    }

    pub fn touches(&self, v: &VertexId) -> bool {
        &self.source == v || &self.target == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.source, self.label, self.target)
    }
}

/// Connection instruction `(sigma, beta/gamma, x, d)`: when the graph
/// replaces a nonterminal vertex `v`, every `sigma`-labeled neighbor reached
/// from `v` by a `beta`-labeled edge in direction `d` gains a `gamma`-labeled
/// edge to the target vertex `x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConnectionInstruction {
    pub neighbor_label: VertexLabel,
    pub old_label: EdgeLabel,
    pub new_label: EdgeLabel,
    pub target: VertexId,
    pub direction: Direction,
}

impl ConnectionInstruction {
    pub fn new(
        mode: Mode,
        neighbor_label: VertexLabel,
        old_label: EdgeLabel,
        new_label: EdgeLabel,
        target: VertexId,
        direction: Direction,
    ) -> Self {
        // Undirected mode collapses the direction field.
        let direction = match mode {
            Mode::Directed => direction,
            Mode::Undirected => Direction::In,
        };
        ConnectionInstruction { neighbor_label, old_label, new_label, target, direction }
    }

    pub fn with_target(&self, target: VertexId) -> Self {
        ConnectionInstruction { target, ..self.clone() }
    }
}

impl fmt::Display for ConnectionInstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}/{}, {}, {})",
            self.neighbor_label, self.old_label, self.new_label, self.target, self.direction
        )
    }
}

/// Errors raised by graph construction and lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    UnknownVertex(VertexId),
    DuplicateVertex(VertexId),
    SelfLoop(VertexId, EdgeLabel),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::UnknownVertex(v) => write!(f, "unknown vertex `{v}`"),
            GraphError::DuplicateVertex(v) => write!(f, "duplicate vertex `{v}`"),
            GraphError::SelfLoop(v, l) => write!(f, "self-loop `{v} -{l}-> {v}`"),
        }
    }
}

impl core::error::Error for GraphError {}

/// A finite vertex- and edge-labeled graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    mode: Mode,
    labels: BTreeMap<VertexId, VertexLabel>,
    edges: BTreeSet<Edge>,
}

impl LabeledGraph {
    pub fn new(mode: Mode) -> Self {
        LabeledGraph { mode, labels: BTreeMap::new(), edges: BTreeSet::new() }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn add_vertex(&mut self, id: VertexId, label: VertexLabel) -> Result<(), GraphError> {
        if self.labels.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.labels.insert(id, label);
        Ok(())
    }

    /// Inserts an edge triple, canonicalizing the orientation in undirected
    /// mode. Duplicate triples collapse silently (set semantics).
    pub fn add_edge(
        &mut self,
        source: VertexId,
        label: EdgeLabel,
        target: VertexId,
    ) -> Result<(), GraphError> {
        if source == target {
            return Err(GraphError::SelfLoop(source, label));
        }
        if !self.labels.contains_key(&source) {
            return Err(GraphError::UnknownVertex(source));
        }
        if !self.labels.contains_key(&target) {
            return Err(GraphError::UnknownVertex(target));
        }
        self.edges.insert(Edge::canonical(self.mode, source, label, target));
        Ok(())
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.labels.contains_key(v)
    }

    pub fn label(&self, v: &VertexId) -> Option<&VertexLabel> {
        self.labels.get(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.labels.keys()
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, VertexLabel> {
        &self.labels
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, source: &VertexId, label: &EdgeLabel, target: &VertexId) -> bool {
        self.edges.contains(&Edge::canonical(
            self.mode,
            source.clone(),
            label.clone(),
            target.clone(),
        ))
    }

    /// Removes a vertex together with every incident edge.
    pub fn remove_vertex(&mut self, v: &VertexId) {
        self.labels.remove(v);
        self.edges.retain(|e| !e.touches(v));
    }

    pub fn remove_edge(&mut self, e: &Edge) {
        self.edges.remove(e);
    }

    /// In-degree in directed mode; total degree in undirected mode.
    pub fn in_degree(&self, v: &VertexId) -> usize {
        match self.mode {
            Mode::Directed => self.edges.iter().filter(|e| &e.target == v).count(),
            Mode::Undirected => self.degree(v),
        }
    }

    /// Out-degree in directed mode; total degree in undirected mode.
    pub fn out_degree(&self, v: &VertexId) -> usize {
        match self.mode {
            Mode::Directed => self.edges.iter().filter(|e| &e.source == v).count(),
            Mode::Undirected => self.degree(v),
        }
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Edges incident on `v` whose orientation at `v` matches `d`.
    /// In undirected mode all incident edges match either direction.
    pub fn incident(&self, v: &VertexId, d: Direction) -> Vec<&Edge> {
        self.edges
            .iter()
            .filter(|e| match (self.mode, d) {
                (Mode::Directed, Direction::In) => &e.target == v,
                (Mode::Directed, Direction::Out) => &e.source == v,
                (Mode::Undirected, _) => e.touches(v),
            })
            .collect()
    }

    /// The endpoint of `e` other than `v`.
    pub fn other_endpoint<'a>(&self, e: &'a Edge, v: &VertexId) -> &'a VertexId {
        if &e.source == v {
            &e.target
        } else {
            &e.source
        }
    }

    /// Sorted multiset of vertex labels, a cheap isomorphism invariant.
    pub fn label_multiset(&self) -> Vec<VertexLabel> {
        let mut ls: Vec<VertexLabel> = self.labels.values().cloned().collect();
        ls.sort();
        ls
    }
}

/// A violated graph invariant, reported by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphViolation {
    SelfLoop(Edge),
    UnknownVertexLabel(VertexId, VertexLabel),
    UnknownEdgeLabel(Edge),
    DanglingEdge(Edge),
    ModeMismatch { graph: Mode, alphabets: Mode },
    InstructionTargetMissing(ConnectionInstruction),
    InstructionUnknownLabel(ConnectionInstruction),
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::SelfLoop(e) => write!(f, "self-loop {e}"),
            GraphViolation::UnknownVertexLabel(v, l) => {
                write!(f, "vertex `{v}` has undeclared label `{l}`")
            }
            GraphViolation::UnknownEdgeLabel(e) => write!(f, "edge {e} has an undeclared label"),
            GraphViolation::DanglingEdge(e) => write!(f, "edge {e} references a missing vertex"),
            GraphViolation::ModeMismatch { graph, alphabets } => {
                write!(f, "graph is {graph} but the alphabets are {alphabets}")
            }
            GraphViolation::InstructionTargetMissing(c) => {
                write!(f, "connection instruction {c} targets a missing vertex")
            }
            GraphViolation::InstructionUnknownLabel(c) => {
                write!(f, "connection instruction {c} uses an undeclared label")
            }
        }
    }
}

/// Checks a graph against the declared alphabets. Total: violations are
/// reported, never raised.
pub fn validate_graph(g: &LabeledGraph, a: &Alphabets) -> Vec<GraphViolation> {
    let mut out = Vec::new();
    if g.mode != a.mode {
        out.push(GraphViolation::ModeMismatch { graph: g.mode, alphabets: a.mode });
    }
    for (v, l) in &g.labels {
        if !a.is_vertex_label(l) {
            out.push(GraphViolation::UnknownVertexLabel(v.clone(), l.clone()));
        }
    }
    for e in &g.edges {
        if e.source == e.target {
            out.push(GraphViolation::SelfLoop(e.clone()));
        }
        if !g.labels.contains_key(&e.source) || !g.labels.contains_key(&e.target) {
            out.push(GraphViolation::DanglingEdge(e.clone()));
        }
        if !a.is_edge_label(&e.label) {
            out.push(GraphViolation::UnknownEdgeLabel(e.clone()));
        }
    }
    out
}

/// An extended graph: a labeled graph plus its connection relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedGraph {
    pub graph: LabeledGraph,
    pub connections: BTreeSet<ConnectionInstruction>,
}

impl ExtendedGraph {
    pub fn new(mode: Mode) -> Self {
        ExtendedGraph { graph: LabeledGraph::new(mode), connections: BTreeSet::new() }
    }

    /// Wraps a plain graph with an empty connection relation.
    pub fn plain(graph: LabeledGraph) -> Self {
        ExtendedGraph { graph, connections: BTreeSet::new() }
    }

    pub fn mode(&self) -> Mode {
        self.graph.mode()
    }

    pub fn add_connection(&mut self, c: ConnectionInstruction) -> Result<(), GraphError> {
        if !self.graph.contains_vertex(&c.target) {
            return Err(GraphError::UnknownVertex(c.target));
        }
        let c = ConnectionInstruction::new(
            self.graph.mode(),
            c.neighbor_label,
            c.old_label,
            c.new_label,
            c.target,
            c.direction,
        );
        self.connections.insert(c);
        Ok(())
    }

    /// Instructions targeting `v` with the given direction field.
    pub fn connections_at(&self, v: &VertexId, d: Direction) -> Vec<&ConnectionInstruction> {
        self.connections
            .iter()
            .filter(|c| &c.target == v && (self.mode() == Mode::Undirected || c.direction == d))
            .collect()
    }

    /// Validates the underlying graph plus the connection relation.
    pub fn validate(&self, a: &Alphabets) -> Vec<GraphViolation> {
        let mut out = validate_graph(&self.graph, a);
        for c in &self.connections {
            if !self.graph.contains_vertex(&c.target) {
                out.push(GraphViolation::InstructionTargetMissing(c.clone()));
            }
            if !a.is_vertex_label(&c.neighbor_label)
                || !a.is_edge_label(&c.old_label)
                || !a.is_edge_label(&c.new_label)
            {
                out.push(GraphViolation::InstructionUnknownLabel(c.clone()));
            }
        }
        out
    }
}
