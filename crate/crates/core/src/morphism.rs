//! Homomorphisms, monomorphism search and isomorphism checking.
//!
//! A morphism between extended graphs is a vertex map that preserves labels,
//! edges and connection instructions. Monomorphisms are injective morphisms;
//! isomorphisms are bijective morphisms whose inverse is also a morphism.
//! Search is plain backtracking with label/degree pruning, which is entirely
//! adequate at the sizes this crate targets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Mode;
use crate::graph::{ExtendedGraph, LabeledGraph, VertexId};

/// A vertex map between two graphs. The graphs themselves are passed to the
/// checking functions, so a morphism value is just the map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Morphism {
    map: BTreeMap<VertexId, VertexId>,
}

impl Morphism {
    pub fn new() -> Self {
        Morphism { map: BTreeMap::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (VertexId, VertexId)>>(pairs: I) -> Self {
        Morphism { map: pairs.into_iter().collect() }
    }

    pub fn identity(g: &LabeledGraph) -> Self {
        Morphism { map: g.vertices().map(|v| (v.clone(), v.clone())).collect() }
    }

    pub fn insert(&mut self, from: VertexId, to: VertexId) {
        self.map.insert(from, to);
    }

    pub fn apply(&self, v: &VertexId) -> Option<&VertexId> {
        self.map.get(v)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_injective(&self) -> bool {
        let images: BTreeSet<&VertexId> = self.map.values().collect();
        images.len() == self.map.len()
    }

    /// Set of image vertices.
    pub fn image(&self) -> BTreeSet<VertexId> {
        self.map.values().cloned().collect()
    }

    /// Inverse of an injective map.
    pub fn inverted(&self) -> Option<Morphism> {
        if !self.is_injective() {
            return None;
        }
        Some(Morphism { map: self.map.iter().map(|(k, v)| (v.clone(), k.clone())).collect() })
    }

    /// `other` after `self` (this map first).
    pub fn then(&self, other: &Morphism) -> Option<Morphism> {
        let mut map = BTreeMap::new();
        for (k, v) in &self.map {
            map.insert(k.clone(), other.apply(v)?.clone());
        }
        Some(Morphism { map })
    }
}

impl Default for Morphism {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "{{")?;
        for (k, v) in &self.map {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{k} -> {v}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismError {
    /// The map mentions a vertex missing from source or target.
    UnknownVertex(VertexId),
    /// The map does not cover every source vertex.
    MissingVertex(VertexId),
}

impl fmt::Display for MorphismError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismError::UnknownVertex(v) => write!(f, "morphism references unknown vertex `{v}`"),
            MorphismError::MissingVertex(v) => write!(f, "morphism does not map vertex `{v}`"),
        }
    }
}

impl core::error::Error for MorphismError {}

/// True iff `m` is a label-, edge- and instruction-preserving map from
/// `source` to `target`. Errs when the map is malformed (wrong domain or
/// unknown vertices).
pub fn is_homomorphism(
    source: &ExtendedGraph,
    target: &ExtendedGraph,
    m: &Morphism,
) -> Result<bool, MorphismError> {
    for (from, to) in m.pairs() {
        if !source.graph.contains_vertex(from) {
            return Err(MorphismError::UnknownVertex(from.clone()));
        }
        if !target.graph.contains_vertex(to) {
            return Err(MorphismError::UnknownVertex(to.clone()));
        }
    }
    for v in source.graph.vertices() {
        if m.apply(v).is_none() {
            return Err(MorphismError::MissingVertex(v.clone()));
        }
    }
    for v in source.graph.vertices() {
        let image = m.apply(v).expect("checked above");
        if source.graph.label(v) != target.graph.label(image) {
            return Ok(false);
        }
    }
    for e in source.graph.edges() {
        let s = m.apply(&e.source).expect("checked above");
        let t = m.apply(&e.target).expect("checked above");
        if !target.graph.has_edge(s, &e.label, t) {
            return Ok(false);
        }
    }
    for c in &source.connections {
        let x = m.apply(&c.target).expect("checked above");
        if !target.connections.contains(&c.with_target(x.clone())) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Homomorphism check for plain graphs (empty connection relations).
pub fn is_graph_homomorphism(
    source: &LabeledGraph,
    target: &LabeledGraph,
    m: &Morphism,
) -> Result<bool, MorphismError> {
    is_homomorphism(
        &ExtendedGraph::plain(source.clone()),
        &ExtendedGraph::plain(target.clone()),
        m,
    )
}

/// True iff `m` is an injective homomorphism.
pub fn is_monomorphism(
    source: &ExtendedGraph,
    target: &ExtendedGraph,
    m: &Morphism,
) -> Result<bool, MorphismError> {
    Ok(m.is_injective() && is_homomorphism(source, target, m)?)
}

struct MonoSearch<'a> {
    pattern: &'a ExtendedGraph,
    host: &'a ExtendedGraph,
    order: Vec<&'a VertexId>,
    results: Vec<Morphism>,
}

impl<'a> MonoSearch<'a> {
    fn run(pattern: &'a ExtendedGraph, host: &'a ExtendedGraph) -> Vec<Morphism> {
        // Anchor vertices with many edges first; the final sort makes the
        // output order independent of this heuristic.
        let mut order: Vec<&VertexId> = pattern.graph.vertices().collect();
        order.sort_by_key(|v| (usize::MAX - pattern.graph.degree(v), (*v).clone()));
        let mut search = MonoSearch { pattern, host, order, results: Vec::new() };
        let mut assignment = BTreeMap::new();
        let mut used = BTreeSet::new();
        search.extend(0, &mut assignment, &mut used);
        search.results.sort_by_key(|m| {
            m.pairs().map(|(k, v)| (k.clone(), v.clone())).collect::<Vec<_>>()
        });
        search.results
    }

    fn extend(
        &mut self,
        depth: usize,
        assignment: &mut BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
    ) {
        if depth == self.order.len() {
            let m = Morphism { map: assignment.clone() };
            // The incremental checks cover edges between assigned vertices;
            // instructions are cheapest verified once at the end.
            if self.instructions_preserved(&m) {
                self.results.push(m);
            }
            return;
        }
        let pv = self.order[depth];
        let plabel = self.pattern.graph.label(pv).expect("pattern vertex");
        let host_vertices: Vec<VertexId> = self.host.graph.vertices().cloned().collect();
        for hv in host_vertices {
            if used.contains(&hv) {
                continue;
            }
            if self.host.graph.label(&hv) != Some(plabel) {
                continue;
            }
            if self.host.graph.in_degree(&hv) < self.pattern.graph.in_degree(pv)
                || self.host.graph.out_degree(&hv) < self.pattern.graph.out_degree(pv)
            {
                continue;
            }
            if !self.edges_consistent(pv, &hv, assignment) {
                continue;
            }
            assignment.insert(pv.clone(), hv.clone());
            used.insert(hv.clone());
            self.extend(depth + 1, assignment, used);
            assignment.remove(pv);
            used.remove(&hv);
        }
    }

    /// Every pattern edge between `pv` and an already-assigned vertex must
    /// have its image present in the host.
    fn edges_consistent(
        &self,
        pv: &VertexId,
        hv: &VertexId,
        assignment: &BTreeMap<VertexId, VertexId>,
    ) -> bool {
        for e in self.pattern.graph.edges() {
            let (a, b) = (&e.source, &e.target);
            let (ia, ib) = if a == pv {
                match assignment.get(b) {
                    Some(ib) => (hv.clone(), ib.clone()),
                    None => continue,
                }
            } else if b == pv {
                match assignment.get(a) {
                    Some(ia) => (ia.clone(), hv.clone()),
                    None => continue,
                }
            } else {
                continue;
            };
            if !self.host.graph.has_edge(&ia, &e.label, &ib) {
                return false;
            }
        }
        true
    }

    fn instructions_preserved(&self, m: &Morphism) -> bool {
        self.pattern.connections.iter().all(|c| {
            let x = m.apply(&c.target).expect("total assignment");
            self.host.connections.contains(&c.with_target(x.clone()))
        })
    }
}

/// All monomorphisms from `pattern` into `host`, in a deterministic order
/// (sorted by the vertex map viewed as a sequence of pairs).
pub fn find_monomorphisms(pattern: &ExtendedGraph, host: &ExtendedGraph) -> Vec<Morphism> {
    if pattern.graph.vertex_count() > host.graph.vertex_count() {
        return Vec::new();
    }
    MonoSearch::run(pattern, host)
}

/// Monomorphism search on plain graphs.
pub fn find_graph_monomorphisms(pattern: &LabeledGraph, host: &LabeledGraph) -> Vec<Morphism> {
    find_monomorphisms(&ExtendedGraph::plain(pattern.clone()), &ExtendedGraph::plain(host.clone()))
}

fn degree_signature(g: &LabeledGraph) -> Vec<(usize, usize)> {
    let mut sig: Vec<(usize, usize)> =
        g.vertices().map(|v| (g.in_degree(v), g.out_degree(v))).collect();
    sig.sort();
    sig
}

fn invariants_match(g: &ExtendedGraph, h: &ExtendedGraph) -> bool {
    g.mode() == h.mode()
        && g.graph.vertex_count() == h.graph.vertex_count()
        && g.graph.edge_count() == h.graph.edge_count()
        && g.connections.len() == h.connections.len()
        && g.graph.label_multiset() == h.graph.label_multiset()
        && degree_signature(&g.graph) == degree_signature(&h.graph)
}

/// Isomorphism witness search for extended graphs. Returns the witness map
/// when the graphs are isomorphic.
///
/// An injective total map with preserved edges/instructions and equal edge
/// and instruction counts is automatically surjective on edges and
/// instructions, so the backtracking only needs the monomorphism conditions
/// plus exact degree pruning.
pub fn find_isomorphism(g: &ExtendedGraph, h: &ExtendedGraph) -> Option<Morphism> {
    if !invariants_match(g, h) {
        return None;
    }
    let mut order: Vec<&VertexId> = g.graph.vertices().collect();
    order.sort_by_key(|v| (usize::MAX - g.graph.degree(v), (*v).clone()));
    let mut assignment = BTreeMap::new();
    let mut used = BTreeSet::new();
    iso_extend(g, h, &order, 0, &mut assignment, &mut used)
}

fn iso_extend(
    g: &ExtendedGraph,
    h: &ExtendedGraph,
    order: &[&VertexId],
    depth: usize,
    assignment: &mut BTreeMap<VertexId, VertexId>,
    used: &mut BTreeSet<VertexId>,
) -> Option<Morphism> {
    if depth == order.len() {
        let m = Morphism { map: assignment.clone() };
        let ok = g.connections.iter().all(|c| {
            let x = m.apply(&c.target).expect("total");
            h.connections.contains(&c.with_target(x.clone()))
        });
        return if ok { Some(m) } else { None };
    }
    let gv = order[depth];
    let glabel = g.graph.label(gv).expect("vertex");
    let host_vertices: Vec<VertexId> = h.graph.vertices().cloned().collect();
    for hv in host_vertices {
        if used.contains(&hv) {
            continue;
        }
        if h.graph.label(&hv) != Some(glabel) {
            continue;
        }
        if h.graph.in_degree(&hv) != g.graph.in_degree(gv)
            || h.graph.out_degree(&hv) != g.graph.out_degree(gv)
        {
            continue;
        }
        let consistent = g.graph.edges().all(|e| {
            let (a, b) = (&e.source, &e.target);
            let (ia, ib) = if a == gv {
                match assignment.get(b) {
                    Some(ib) => (hv.clone(), ib.clone()),
                    None => return true,
                }
            } else if b == gv {
                match assignment.get(a) {
                    Some(ia) => (ia.clone(), hv.clone()),
                    None => return true,
                }
            } else {
                return true;
            };
            h.graph.has_edge(&ia, &e.label, &ib)
        });
        if !consistent {
            continue;
        }
        assignment.insert(gv.clone(), hv.clone());
        used.insert(hv.clone());
        if let Some(m) = iso_extend(g, h, order, depth + 1, assignment, used) {
            return Some(m);
        }
        assignment.remove(gv);
        used.remove(&hv);
    }
    None
}

/// Isomorphism of plain labeled graphs, with witness.
pub fn are_isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> Option<Morphism> {
    find_isomorphism(&ExtendedGraph::plain(g.clone()), &ExtendedGraph::plain(h.clone()))
}

/// Cheap invariant key used to bucket graphs before full isomorphism checks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IsoKey {
    mode: Mode,
    vertices: usize,
    edges: usize,
    connections: usize,
    labels: Vec<(alloc::string::String, usize, usize)>,
    edge_labels: Vec<alloc::string::String>,
}

impl IsoKey {
    pub fn of(g: &ExtendedGraph) -> IsoKey {
        let mut labels: Vec<(alloc::string::String, usize, usize)> = g
            .graph
            .vertices()
            .map(|v| {
                (
                    alloc::string::String::from(g.graph.label(v).expect("vertex").as_str()),
                    g.graph.in_degree(v),
                    g.graph.out_degree(v),
                )
            })
            .collect();
        labels.sort();
        let mut edge_labels: Vec<alloc::string::String> =
            g.graph.edges().map(|e| alloc::string::String::from(e.label.as_str())).collect();
        edge_labels.sort();
        IsoKey {
            mode: g.mode(),
            vertices: g.graph.vertex_count(),
            edges: g.graph.edge_count(),
            connections: g.connections.len(),
            labels,
            edge_labels,
        }
    }

    pub fn of_graph(g: &LabeledGraph) -> IsoKey {
        IsoKey::of(&ExtendedGraph::plain(g.clone()))
    }
}

/// Deduplicates extended graphs up to isomorphism, keeping first occurrences
/// and preserving insertion order of the survivors.
pub struct IsoSet {
    buckets: BTreeMap<IsoKey, Vec<usize>>,
    items: Vec<ExtendedGraph>,
}

impl IsoSet {
    pub fn new() -> Self {
        IsoSet { buckets: BTreeMap::new(), items: Vec::new() }
    }

    /// Returns the index of the iso class; `true` when `g` was new.
    pub fn insert(&mut self, g: ExtendedGraph) -> (usize, bool) {
        let key = IsoKey::of(&g);
        if let Some(indices) = self.buckets.get(&key) {
            for &i in indices {
                if find_isomorphism(&self.items[i], &g).is_some() {
                    return (i, false);
                }
            }
        }
        let idx = self.items.len();
        self.items.push(g);
        self.buckets.entry(key).or_default().push(idx);
        (idx, true)
    }

    pub fn contains(&self, g: &ExtendedGraph) -> bool {
        let key = IsoKey::of(g);
        self.buckets
            .get(&key)
            .map(|ix| ix.iter().any(|&i| find_isomorphism(&self.items[i], g).is_some()))
            .unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExtendedGraph> {
        self.items.iter()
    }

    pub fn into_items(self) -> Vec<ExtendedGraph> {
        self.items
    }
}

impl Default for IsoSet {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Direction;
    use crate::graph::{EdgeLabel, VertexLabel};

    fn v(s: &str) -> VertexId {
        VertexId::new(s)
    }

    fn path2() -> ExtendedGraph {
        let mut g = LabeledGraph::new(Mode::Directed);
        g.add_vertex(v("a"), VertexLabel::new("n")).unwrap();
        g.add_vertex(v("b"), VertexLabel::new("w")).unwrap();
        g.add_edge(v("a"), EdgeLabel::new("e"), v("b")).unwrap();
        ExtendedGraph::plain(g)
    }

    #[test]
    fn identity_is_homomorphism() {
        let g = path2();
        let id = Morphism::identity(&g.graph);
        assert!(is_homomorphism(&g, &g, &id).unwrap());
    }

    #[test]
    fn label_mismatch_is_not_homomorphism() {
        let g = path2();
        let m = Morphism::from_pairs([(v("a"), v("b")), (v("b"), v("a"))]);
        assert!(!is_homomorphism(&g, &g, &m).unwrap());
    }

    #[test]
    fn collapsing_map_is_homomorphism_but_not_mono() {
        // Two isolated same-labeled vertices collapse onto one.
        let mut g = LabeledGraph::new(Mode::Directed);
        g.add_vertex(v("a"), VertexLabel::new("n")).unwrap();
        g.add_vertex(v("b"), VertexLabel::new("n")).unwrap();
        let mut h = LabeledGraph::new(Mode::Directed);
        h.add_vertex(v("c"), VertexLabel::new("n")).unwrap();
        let g = ExtendedGraph::plain(g);
        let h = ExtendedGraph::plain(h);
        let m = Morphism::from_pairs([(v("a"), v("c")), (v("b"), v("c"))]);
        assert!(is_homomorphism(&g, &h, &m).unwrap());
        assert!(!is_monomorphism(&g, &h, &m).unwrap());
    }

    #[test]
    fn malformed_morphism_errors() {
        let g = path2();
        let m = Morphism::from_pairs([(v("a"), v("zz")), (v("b"), v("b"))]);
        assert!(is_homomorphism(&g, &g, &m).is_err());
    }

    #[test]
    fn pattern_larger_than_host_has_no_monos() {
        let g = path2();
        let mut h = LabeledGraph::new(Mode::Directed);
        h.add_vertex(v("x"), VertexLabel::new("n")).unwrap();
        assert!(find_monomorphisms(&g, &ExtendedGraph::plain(h)).is_empty());
    }

    #[test]
    fn rigid_pattern_matches_are_automorphisms() {
        let g = path2();
        let monos = find_monomorphisms(&g, &g);
        assert_eq!(monos.len(), 1);
        assert_eq!(monos[0], Morphism::identity(&g.graph));
    }

    #[test]
    fn instruction_preservation_required() {
        let mut g = path2();
        g.add_connection(ConnectionInstructionFixture::conn("b")).unwrap();
        let h = path2();
        assert!(find_monomorphisms(&g, &h).is_empty());
        assert_eq!(find_monomorphisms(&h, &g).len(), 1);
    }

    struct ConnectionInstructionFixture;
    impl ConnectionInstructionFixture {
        fn conn(target: &str) -> crate::graph::ConnectionInstruction {
            crate::graph::ConnectionInstruction::new(
                Mode::Directed,
                VertexLabel::new("n"),
                EdgeLabel::new("e"),
                EdgeLabel::new("e"),
                v(target),
                Direction::In,
            )
        }
    }

    #[test]
    fn isomorphism_reflexive_and_renaming() {
        let g = path2();
        assert!(find_isomorphism(&g, &g).is_some());
        let mut h = LabeledGraph::new(Mode::Directed);
        h.add_vertex(v("x1"), VertexLabel::new("n")).unwrap();
        h.add_vertex(v("x2"), VertexLabel::new("w")).unwrap();
        h.add_edge(v("x1"), EdgeLabel::new("e"), v("x2")).unwrap();
        let w = are_isomorphic(&g.graph, &h).expect("isomorphic");
        assert_eq!(w.apply(&v("a")), Some(&v("x1")));
    }
}
