//! The node-replacement substitution operator.
//!
//! `substitute(host, v, daughter)` removes the vertex `v` and splices the
//! daughter graph in its place. The daughter's connection instructions are
//! consumed against the realized edges at `v`: an instruction
//! `(sigma, beta/gamma, x, in)` establishes a `gamma`-labeled edge from every
//! `sigma`-labeled host vertex with a `beta`-labeled edge into `v` to the
//! daughter vertex `x` (symmetrically for `out`). Host instructions that
//! target `v` compose through the daughter's instructions, so nested
//! substitution is associative; all other host edges and instructions are
//! retained.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Direction, Mode};
use crate::graph::{ConnectionInstruction, Edge, ExtendedGraph, LabeledGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstituteError {
    UnknownVertex(VertexId),
}

impl fmt::Display for SubstituteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstituteError::UnknownVertex(v) => {
                write!(f, "substitution target `{v}` is not a vertex of the host")
            }
        }
    }
}

impl core::error::Error for SubstituteError {}

/// Result of a substitution: the new graph plus the renaming applied to the
/// daughter's vertices (host vertices keep their identifiers).
#[derive(Debug, Clone)]
pub struct Substituted {
    pub result: ExtendedGraph,
    pub daughter_ids: BTreeMap<VertexId, VertexId>,
}

/// Renames daughter vertices that collide with surviving host vertices,
/// using the smallest `~k` suffix that is globally fresh.
fn disambiguate(
    host: &ExtendedGraph,
    v: &VertexId,
    daughter: &ExtendedGraph,
) -> BTreeMap<VertexId, VertexId> {
    let mut taken: BTreeSet<VertexId> =
        host.graph.vertices().filter(|u| *u != v).cloned().collect();
    let mut renaming = BTreeMap::new();
    for d in daughter.graph.vertices() {
        let fresh = if taken.contains(d) {
            let mut k = 1usize;
            loop {
                let candidate = d.suffixed('~', k);
                if !taken.contains(&candidate) && !daughter.graph.contains_vertex(&candidate) {
                    break candidate;
                }
                k += 1;
            }
        } else {
            d.clone()
        };
        taken.insert(fresh.clone());
        renaming.insert(d.clone(), fresh);
    }
    renaming
}

/// Substitutes `daughter` for the vertex `v` of `host`.
///
/// Daughter identifiers colliding with surviving host identifiers are
/// refreshed deterministically; the applied renaming is returned so callers
/// can track induced maps.
pub fn substitute(
    host: &ExtendedGraph,
    v: &VertexId,
    daughter: &ExtendedGraph,
) -> Result<Substituted, SubstituteError> {
    if !host.graph.contains_vertex(v) {
        return Err(SubstituteError::UnknownVertex(v.clone()));
    }
    let mode = host.mode();
    let renaming = disambiguate(host, v, daughter);
    let rename = |d: &VertexId| renaming.get(d).expect("daughter vertex").clone();

    let mut result = LabeledGraph::new(mode);
    for u in host.graph.vertices() {
        if u != v {
            result
                .add_vertex(u.clone(), host.graph.label(u).expect("host vertex").clone())
                .expect("host ids are unique");
        }
    }
    for d in daughter.graph.vertices() {
        result
            .add_vertex(rename(d), daughter.graph.label(d).expect("daughter vertex").clone())
            .expect("renaming keeps ids disjoint");
    }
    for e in host.graph.edges() {
        if !e.touches(v) {
            result.add_edge(e.source.clone(), e.label.clone(), e.target.clone()).expect("kept");
        }
    }
    for e in daughter.graph.edges() {
        result
            .add_edge(rename(&e.source), e.label.clone(), rename(&e.target))
            .expect("daughter edges stay valid");
    }

    // Embedding: realize the daughter's instructions against the edges at v.
    for c in &daughter.connections {
        for e in host.graph.incident(v, c.direction) {
            let w = host.graph.other_endpoint(e, v);
            if w == v {
                continue;
            }
            if host.graph.label(w) != Some(&c.neighbor_label) || e.label != c.old_label {
                continue;
            }
            let x = rename(&c.target);
            let (s, t) = match (mode, c.direction) {
                (_, Direction::In) => (w.clone(), x),
                (_, Direction::Out) => (x, w.clone()),
            };
            // Duplicate triples collapse under set semantics.
            result.add_edge(s, c.new_label.clone(), t).expect("endpoints exist");
        }
    }

    let mut connections: BTreeSet<ConnectionInstruction> = BTreeSet::new();
    for c in &host.connections {
        if &c.target != v {
            connections.insert(c.clone());
        } else {
            // Bridge: (sigma, beta/gamma, v, d) composes with daughter
            // instructions (sigma, gamma/delta, x, d) to (sigma, beta/delta, x, d).
            for d in &daughter.connections {
                if d.neighbor_label == c.neighbor_label
                    && d.old_label == c.new_label
                    && (mode == Mode::Undirected || d.direction == c.direction)
                {
                    connections.insert(ConnectionInstruction::new(
                        mode,
                        c.neighbor_label.clone(),
                        c.old_label.clone(),
                        d.new_label.clone(),
                        rename(&d.target),
                        c.direction,
                    ));
                }
            }
        }
    }

    Ok(Substituted { result: ExtendedGraph { graph: result, connections }, daughter_ids: renaming })
}

/// Edges the substitution at `v` would create, without performing it.
/// Used by validators to reason about wire-vertex degree budgets.
pub fn embedding_edges(host: &ExtendedGraph, v: &VertexId, daughter: &ExtendedGraph) -> Vec<Edge> {
    let mode = host.mode();
    let mut out = Vec::new();
    for c in &daughter.connections {
        for e in host.graph.incident(v, c.direction) {
            let w = host.graph.other_endpoint(e, v);
            if w == v || host.graph.label(w) != Some(&c.neighbor_label) || e.label != c.old_label {
                continue;
            }
            let (s, t) = match c.direction {
                Direction::In => (w.clone(), c.target.clone()),
                Direction::Out => (c.target.clone(), w.clone()),
            };
            out.push(Edge::canonical(mode, s, c.new_label.clone(), t));
        }
    }
    out
}
