//! Decoding systems: expanding encoding edges into wire fragments, and the
//! inverse contraction used by the membership decision procedure.
//!
//! A decoding system holds one replacement fragment per
//! (encoding label, node label, node label) triple. Decoding replaces every
//! encoding edge by a fresh copy of the matching fragment glued at its two
//! endpoint node vertices. Because fragments contain no encoding labels the
//! rewrite system is terminating, and since redexes never overlap it is
//! confluent; decoding is therefore performed as one simultaneous pass.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Alphabets;
use crate::graph::{Edge, EdgeLabel, LabeledGraph, VertexId, VertexLabel};
use crate::morphism::{find_graph_monomorphisms, IsoSet, Morphism};
use crate::stringgraph::{classify, io_sets, Classification};

/// Lookup key of a decoding rule.
pub type DecodingKey = (EdgeLabel, VertexLabel, VertexLabel);

/// One decoding rule: the fragment replacing an encoding edge between a
/// `source_label`-node and a `target_label`-node, with the two designated
/// endpoint vertices of the fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodingRule {
    pub encoding: EdgeLabel,
    pub source_label: VertexLabel,
    pub target_label: VertexLabel,
    pub rhs: LabeledGraph,
    pub source_endpoint: VertexId,
    pub target_endpoint: VertexId,
}

impl DecodingRule {
    pub fn key(&self) -> DecodingKey {
        (self.encoding.clone(), self.source_label.clone(), self.target_label.clone())
    }

    pub fn interior(&self) -> Vec<VertexId> {
        self.rhs
            .vertices()
            .filter(|v| **v != self.source_endpoint && **v != self.target_endpoint)
            .cloned()
            .collect()
    }

    /// Checks the fragment shape: endpoints present with the right node
    /// labels, at least one additional vertex, no inputs or outputs, no
    /// encoding labels, and the string-graph invariants.
    pub fn validate(&self, a: &Alphabets) -> Vec<DecodingViolation> {
        let mut out = Vec::new();
        let key = self.key();
        for (ep, label) in
            [(&self.source_endpoint, &self.source_label), (&self.target_endpoint, &self.target_label)]
        {
            match self.rhs.label(ep) {
                None => out.push(DecodingViolation::MissingEndpoint {
                    rule: key.clone(),
                    endpoint: ep.clone(),
                }),
                Some(l) if l != label => out.push(DecodingViolation::EndpointLabelMismatch {
                    rule: key.clone(),
                    endpoint: ep.clone(),
                }),
                _ => {}
            }
        }
        if !a.is_node(&self.source_label) || !a.is_node(&self.target_label) {
            out.push(DecodingViolation::EndpointNotNodeLabel(key.clone()));
        }
        if !a.is_encoding(&self.encoding) {
            out.push(DecodingViolation::KeyNotEncodingLabel(key.clone()));
        }
        if self.interior().is_empty() {
            out.push(DecodingViolation::NoAdditionalVertex(key.clone()));
        }
        for e in self.rhs.edges() {
            if a.is_encoding(&e.label) {
                out.push(DecodingViolation::EncodingInFragment { rule: key.clone(), edge: e.clone() });
            }
        }
        match classify(&self.rhs, a) {
            Classification::StringGraph => {
                let (inputs, outputs) = io_sets(&self.rhs, a);
                if !inputs.is_empty() || !outputs.is_empty() {
                    out.push(DecodingViolation::FragmentHasOpenWires(key));
                }
            }
            Classification::EncodedStringGraph => {
                // Encoding edges already reported above.
            }
            Classification::Neither(_) => out.push(DecodingViolation::FragmentNotStringGraph(key)),
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodingViolation {
    MissingEndpoint { rule: DecodingKey, endpoint: VertexId },
    EndpointLabelMismatch { rule: DecodingKey, endpoint: VertexId },
    EndpointNotNodeLabel(DecodingKey),
    KeyNotEncodingLabel(DecodingKey),
    NoAdditionalVertex(DecodingKey),
    EncodingInFragment { rule: DecodingKey, edge: Edge },
    FragmentHasOpenWires(DecodingKey),
    FragmentNotStringGraph(DecodingKey),
    /// A triple the grammar can realize has no rule.
    MissingUsedTriple(DecodingKey),
}

fn key_display(k: &DecodingKey) -> alloc::string::String {
    alloc::format!("({}, {}, {})", k.0, k.1, k.2)
}

impl fmt::Display for DecodingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodingViolation::MissingEndpoint { rule, endpoint } => {
                write!(f, "rule {}: endpoint `{endpoint}` missing", key_display(rule))
            }
            DecodingViolation::EndpointLabelMismatch { rule, endpoint } => {
                write!(f, "rule {}: endpoint `{endpoint}` label mismatch", key_display(rule))
            }
            DecodingViolation::EndpointNotNodeLabel(k) => {
                write!(f, "rule {}: endpoint labels must be node labels", key_display(k))
            }
            DecodingViolation::KeyNotEncodingLabel(k) => {
                write!(f, "rule {}: key label is not an encoding label", key_display(k))
            }
            DecodingViolation::NoAdditionalVertex(k) => {
                write!(f, "rule {}: fragment has no additional vertex", key_display(k))
            }
            DecodingViolation::EncodingInFragment { rule, edge } => {
                write!(f, "rule {}: fragment contains encoding edge {edge}", key_display(rule))
            }
            DecodingViolation::FragmentHasOpenWires(k) => {
                write!(f, "rule {}: fragment has inputs or outputs", key_display(k))
            }
            DecodingViolation::FragmentNotStringGraph(k) => {
                write!(f, "rule {}: fragment is not a string graph", key_display(k))
            }
            DecodingViolation::MissingUsedTriple(k) => {
                write!(f, "no rule for realizable triple {}", key_display(k))
            }
        }
    }
}

/// Warnings do not block acceptance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodingWarning {
    /// A triple of the full alphabet product with no rule; harmless unless
    /// the grammar can realize it.
    MissingUnusedTriple(DecodingKey),
}

impl fmt::Display for DecodingWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodingWarning::MissingUnusedTriple(k) => {
                write!(f, "no rule for unused triple {}", key_display(k))
            }
        }
    }
}

/// A finite map from decoding keys to fragments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecodingSystem {
    rules: BTreeMap<DecodingKey, DecodingRule>,
}

impl DecodingSystem {
    pub fn new() -> Self {
        DecodingSystem { rules: BTreeMap::new() }
    }

    pub fn add_rule(&mut self, rule: DecodingRule) -> Option<DecodingRule> {
        self.rules.insert(rule.key(), rule)
    }

    pub fn rule(&self, key: &DecodingKey) -> Option<&DecodingRule> {
        self.rules.get(key)
    }

    pub fn rules(&self) -> impl Iterator<Item = &DecodingRule> {
        self.rules.values()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Validates every rule; triples absent from the map are reported as
    /// violations when listed in `used`, as warnings otherwise.
    pub fn validate(
        &self,
        a: &Alphabets,
        used: &BTreeSet<DecodingKey>,
    ) -> (Vec<DecodingViolation>, Vec<DecodingWarning>) {
        let mut violations = Vec::new();
        let mut warnings = Vec::new();
        for rule in self.rules.values() {
            violations.extend(rule.validate(a));
        }
        for alpha in &a.encoding_labels {
            for s in &a.node_labels {
                for t in &a.node_labels {
                    let key = (alpha.clone(), s.clone(), t.clone());
                    if !self.rules.contains_key(&key) {
                        if used.contains(&key) {
                            violations.push(DecodingViolation::MissingUsedTriple(key));
                        } else {
                            warnings.push(DecodingWarning::MissingUnusedTriple(key));
                        }
                    }
                }
            }
        }
        (violations, warnings)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    /// An encoding edge whose endpoint labels key no rule.
    IncompleteSystem { edge: Edge },
    /// An encoding edge incident to a non-node vertex.
    MalformedInput { edge: Edge },
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::IncompleteSystem { edge } => {
                write!(f, "no decoding rule for encoding edge {edge}")
            }
            DecodeError::MalformedInput { edge } => {
                write!(f, "encoding edge {edge} is incident to a non-node vertex")
            }
        }
    }
}

impl core::error::Error for DecodeError {}

/// Replaces every encoding edge by a fresh fragment copy in one pass.
///
/// The result is the rewrite system's normal form, unique up to isomorphism.
pub fn decode(g: &LabeledGraph, t: &DecodingSystem, a: &Alphabets) -> Result<LabeledGraph, DecodeError> {
    let redexes: Vec<Edge> =
        g.edges().filter(|e| a.is_encoding(&e.label)).cloned().collect();
    let mut result = g.clone();
    let mut taken: BTreeSet<VertexId> = g.vertices().cloned().collect();
    for (k, edge) in redexes.iter().enumerate() {
        let sl = g.label(&edge.source).expect("edge endpoint").clone();
        let tl = g.label(&edge.target).expect("edge endpoint").clone();
        if !a.is_node(&sl) || !a.is_node(&tl) {
            return Err(DecodeError::MalformedInput { edge: edge.clone() });
        }
        // In undirected mode the stored orientation is canonical, so the
        // swapped key is equally valid.
        let (rule, flipped) = match t.rule(&(edge.label.clone(), sl.clone(), tl.clone())) {
            Some(r) => (r, false),
            None => match g.mode() {
                crate::alphabet::Mode::Undirected => {
                    match t.rule(&(edge.label.clone(), tl, sl)) {
                        Some(r) => (r, true),
                        None => return Err(DecodeError::IncompleteSystem { edge: edge.clone() }),
                    }
                }
                crate::alphabet::Mode::Directed => {
                    return Err(DecodeError::IncompleteSystem { edge: edge.clone() })
                }
            },
        };
        result.remove_edge(edge);
        let (src_img, tgt_img) = if flipped {
            (edge.target.clone(), edge.source.clone())
        } else {
            (edge.source.clone(), edge.target.clone())
        };
        let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        map.insert(rule.source_endpoint.clone(), src_img);
        map.insert(rule.target_endpoint.clone(), tgt_img);
        for x in rule.interior() {
            let mut fresh = x.suffixed('@', k + 1);
            let mut bump = 1usize;
            while taken.contains(&fresh) {
                fresh = x.suffixed('@', k + 1).suffixed('~', bump);
                bump += 1;
            }
            taken.insert(fresh.clone());
            result
                .add_vertex(fresh.clone(), rule.rhs.label(&x).expect("interior vertex").clone())
                .expect("fresh id");
            map.insert(x, fresh);
        }
        for e in rule.rhs.edges() {
            result
                .add_edge(map[&e.source].clone(), e.label.clone(), map[&e.target].clone())
                .expect("fragment edges glue onto existing endpoints");
        }
    }
    Ok(result)
}

/// One place a fragment occurs in a host graph, eligible for contraction.
#[derive(Debug, Clone)]
struct Occurrence {
    key: DecodingKey,
    image: BTreeSet<VertexId>,
    interior: BTreeSet<VertexId>,
    removed_edges: BTreeSet<Edge>,
    created: Edge,
}

fn occurrences_of(rule: &DecodingRule, h: &LabeledGraph, a: &Alphabets) -> Vec<Occurrence> {
    if !rule.validate(a).is_empty() {
        // Invalid fragments (for instance ones with open wires) never arise
        // from decoding, so they are not contracted either.
        return Vec::new();
    }
    let interior = rule.interior();
    let mut out = Vec::new();
    for m in find_graph_monomorphisms(&rule.rhs, h) {
        if !interior_closed(&interior, rule, h, &m) {
            continue;
        }
        let src = m.apply(&rule.source_endpoint).expect("endpoint image").clone();
        let tgt = m.apply(&rule.target_endpoint).expect("endpoint image").clone();
        let created = Edge::canonical(h.mode(), src, rule.encoding.clone(), tgt);
        let removed_edges = rule
            .rhs
            .edges()
            .map(|e| {
                Edge::canonical(
                    h.mode(),
                    m.apply(&e.source).unwrap().clone(),
                    e.label.clone(),
                    m.apply(&e.target).unwrap().clone(),
                )
            })
            .collect();
        out.push(Occurrence {
            key: rule.key(),
            image: m.image(),
            interior: interior.iter().map(|x| m.apply(x).unwrap().clone()).collect(),
            removed_edges,
            created,
        });
    }
    out
}

/// Interior vertices must have no edges leaving the fragment image.
fn interior_closed(
    interior: &[VertexId],
    rule: &DecodingRule,
    h: &LabeledGraph,
    m: &Morphism,
) -> bool {
    interior.iter().all(|x| {
        let hx = m.apply(x).expect("interior image");
        h.degree(hx) == rule.rhs.degree(x)
    })
}

fn compatible(a: &Occurrence, b: &Occurrence) -> bool {
    a.interior.is_disjoint(&b.image)
        && b.interior.is_disjoint(&a.image)
        && a.created != b.created
        && a.removed_edges.is_disjoint(&b.removed_edges)
}

/// All graphs obtainable from `h` by contracting pairwise-compatible
/// fragment occurrences back into encoding edges, up to isomorphism,
/// including `h` itself. Sorted by descending contraction count.
pub fn encode_preimages(
    h: &LabeledGraph,
    t: &DecodingSystem,
    a: &Alphabets,
    max_contractions: Option<usize>,
) -> Vec<LabeledGraph> {
    let mut occurrences: Vec<Occurrence> = Vec::new();
    for rule in t.rules() {
        occurrences.extend(occurrences_of(rule, h, a));
    }
    let cap = max_contractions.unwrap_or(occurrences.len());

    // Depth-first enumeration of compatible subsets in index order.
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    enumerate_subsets(&occurrences, 0, cap, &mut stack, &mut subsets);

    let mut tagged: Vec<(usize, LabeledGraph)> = subsets
        .into_iter()
        .map(|subset| {
            let mut g = h.clone();
            for &i in &subset {
                let occ = &occurrences[i];
                for e in &occ.removed_edges {
                    g.remove_edge(e);
                }
                for x in &occ.interior {
                    g.remove_vertex(x);
                }
            }
            for &i in &subset {
                let occ = &occurrences[i];
                g.add_edge(
                    occ.created.source.clone(),
                    occ.created.label.clone(),
                    occ.created.target.clone(),
                )
                .expect("endpoints survive contraction");
                debug_assert!(t.rule(&occ.key).is_some());
            }
            (subset.len(), g)
        })
        .collect();
    tagged.sort_by(|(a, _), (b, _)| b.cmp(a));

    let mut seen = IsoSet::new();
    let mut out = Vec::new();
    for (_, g) in tagged {
        let (_, new) = seen.insert(crate::graph::ExtendedGraph::plain(g.clone()));
        if new {
            out.push(g);
        }
    }
    out
}

fn enumerate_subsets(
    occurrences: &[Occurrence],
    from: usize,
    cap: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(stack.clone());
    if stack.len() == cap {
        return;
    }
    for i in from..occurrences.len() {
        if stack.iter().all(|&j| compatible(&occurrences[j], &occurrences[i])) {
            stack.push(i);
            enumerate_subsets(occurrences, i + 1, cap, stack, out);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{AlphabetsBuilder, Mode};
    use crate::families;

    fn abc() -> Alphabets {
        families::corpus_alphabets(Mode::Directed)
    }

    #[test]
    fn decode_without_redexes_is_identity() {
        let a = abc();
        let t = families::wire_decoding(&a);
        let g = families::star(3, Mode::Directed);
        let d = decode(&g, &t, &a).unwrap();
        assert!(crate::morphism::are_isomorphic(&g, &d).is_some());
    }

    #[test]
    fn decode_expands_encoded_complete_graph() {
        let a = abc();
        let t = families::wire_decoding(&a);
        let g = families::complete_encoded(4, Mode::Directed);
        let d = decode(&g, &t, &a).unwrap();
        assert_eq!(d.vertex_count(), 14);
        assert_eq!(d.edge_count(), 16);
        assert!(crate::morphism::are_isomorphic(&d, &families::complete(4, Mode::Directed)).is_some());
    }

    #[test]
    fn missing_rule_is_reported() {
        let a = abc();
        let t = DecodingSystem::new();
        let g = families::complete_encoded(2, Mode::Directed);
        assert!(matches!(decode(&g, &t, &a), Err(DecodeError::IncompleteSystem { .. })));
    }

    #[test]
    fn preimages_of_complete_graph() {
        let a = abc();
        let t = families::wire_decoding(&a);
        let h = families::complete(3, Mode::Directed);
        let pre = encode_preimages(&h, &t, &a, None);
        // 3 internal wires, each independently contractible; 2^3 subsets
        // before isomorphism dedup.
        assert!(pre.iter().any(|g| crate::morphism::are_isomorphic(g, &h).is_some()));
        assert!(pre
            .iter()
            .any(|g| crate::morphism::are_isomorphic(g, &families::complete_encoded(3, Mode::Directed))
                .is_some()));
        for g in &pre {
            let back = decode(g, &t, &a).unwrap();
            assert!(crate::morphism::are_isomorphic(&back, &h).is_some());
        }
    }

    #[test]
    fn no_occurrence_means_identity_preimage() {
        let a = abc();
        let t = families::wire_decoding(&a);
        let mut g = LabeledGraph::new(Mode::Directed);
        g.add_vertex(VertexId::new("w0"), crate::graph::VertexLabel::new("w")).unwrap();
        let pre = encode_preimages(&g, &t, &a, None);
        assert_eq!(pre.len(), 1);
    }
}
