//! Double-pushout rewriting of extended graphs.
//!
//! A rewrite rule is a span of monomorphisms `L <- I -> R`. Applying it at a
//! monomorphic match `m : L -> H` removes `m(L - l(I))`, keeps the interface
//! image, and glues in a fresh copy of `R - r(I)`. The rewrite is defined
//! only under the gluing condition: no edge or connection instruction of the
//! host may reference a deleted vertex unless it is itself matched. The
//! same machinery provides substituted monomorphisms and rewrite-rule
//! substitution, which let rules be composed along nonterminal vertices.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{ConnectionInstruction, Edge, ExtendedGraph, LabeledGraph, VertexId};
use crate::morphism::{
    find_isomorphism, find_monomorphisms, is_monomorphism, Morphism, MorphismError,
};
use crate::substitute::{substitute, SubstituteError};

/// A rewrite rule: a span of monomorphisms between extended graphs.
#[derive(Debug, Clone)]
pub struct RuleSpan {
    pub left: ExtendedGraph,
    pub interface: ExtendedGraph,
    pub right: ExtendedGraph,
    pub to_left: Morphism,
    pub to_right: Morphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanError {
    LeftLegNotMono,
    RightLegNotMono,
    Morphism(MorphismError),
}

impl fmt::Display for SpanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanError::LeftLegNotMono => write!(f, "interface-to-left leg is not a monomorphism"),
            SpanError::RightLegNotMono => write!(f, "interface-to-right leg is not a monomorphism"),
            SpanError::Morphism(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SpanError {}

impl RuleSpan {
    /// Builds and checks a span; both legs must be monomorphisms.
    pub fn new(
        left: ExtendedGraph,
        interface: ExtendedGraph,
        right: ExtendedGraph,
        to_left: Morphism,
        to_right: Morphism,
    ) -> Result<Self, SpanError> {
        if !is_monomorphism(&interface, &left, &to_left).map_err(SpanError::Morphism)? {
            return Err(SpanError::LeftLegNotMono);
        }
        if !is_monomorphism(&interface, &right, &to_right).map_err(SpanError::Morphism)? {
            return Err(SpanError::RightLegNotMono);
        }
        Ok(RuleSpan { left, interface, right, to_left, to_right })
    }

    /// The identity rule on a graph: all three components equal, legs
    /// identities.
    pub fn identity(g: ExtendedGraph) -> Self {
        let id = Morphism::identity(&g.graph);
        RuleSpan {
            left: g.clone(),
            interface: g.clone(),
            right: g,
            to_left: id.clone(),
            to_right: id,
        }
    }

    /// Vertices of the left graph deleted by the rule.
    pub fn deleted_vertices(&self) -> BTreeSet<VertexId> {
        let preserved = self.to_left.image();
        self.left.graph.vertices().filter(|v| !preserved.contains(v)).cloned().collect()
    }

    /// Reverses the span, swapping left and right.
    pub fn reversed(&self) -> RuleSpan {
        RuleSpan {
            left: self.right.clone(),
            interface: self.interface.clone(),
            right: self.left.clone(),
            to_left: self.to_right.clone(),
            to_right: self.to_left.clone(),
        }
    }
}

/// A candidate match with its gluing status.
#[derive(Debug, Clone)]
pub struct Matching {
    pub map: Morphism,
    pub dangling_edges: Vec<Edge>,
    pub dangling_instructions: Vec<ConnectionInstruction>,
}

impl Matching {
    pub fn is_applicable(&self) -> bool {
        self.dangling_edges.is_empty() && self.dangling_instructions.is_empty()
    }
}

/// All monomorphisms of the rule's left side into the host, each annotated
/// with its gluing report, in deterministic order.
pub fn find_matches(rule: &RuleSpan, host: &ExtendedGraph) -> Vec<Matching> {
    find_monomorphisms(&rule.left, host)
        .into_iter()
        .map(|map| annotate_gluing(rule, host, map))
        .collect()
}

fn annotate_gluing(rule: &RuleSpan, host: &ExtendedGraph, map: Morphism) -> Matching {
    let deleted: BTreeSet<VertexId> =
        rule.deleted_vertices().iter().map(|v| map.apply(v).expect("match is total").clone()).collect();
    let matched_edges: BTreeSet<Edge> = rule
        .left
        .graph
        .edges()
        .map(|e| {
            Edge::canonical(
                host.mode(),
                map.apply(&e.source).unwrap().clone(),
                e.label.clone(),
                map.apply(&e.target).unwrap().clone(),
            )
        })
        .collect();
    let matched_instructions: BTreeSet<ConnectionInstruction> = rule
        .left
        .connections
        .iter()
        .map(|c| c.with_target(map.apply(&c.target).unwrap().clone()))
        .collect();
    let dangling_edges = host
        .graph
        .edges()
        .filter(|e| {
            (deleted.contains(&e.source) || deleted.contains(&e.target))
                && !matched_edges.contains(*e)
        })
        .cloned()
        .collect();
    let dangling_instructions = host
        .connections
        .iter()
        .filter(|c| deleted.contains(&c.target) && !matched_instructions.contains(*c))
        .cloned()
        .collect();
    Matching { map, dangling_edges, dangling_instructions }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpoError {
    NotMono,
    Morphism(MorphismError),
    /// Gluing condition failed on the named edges/instructions.
    Gluing { edges: Vec<Edge>, instructions: Vec<ConnectionInstruction> },
    NotNonterminal(VertexId),
    /// A substituted monomorphism came out malformed.
    MalformedSubstitution,
    Substitute(SubstituteError),
}

impl fmt::Display for DpoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DpoError::NotMono => write!(f, "matching is not a monomorphism"),
            DpoError::Morphism(e) => write!(f, "{e}"),
            DpoError::Gluing { edges, instructions } => {
                write!(f, "gluing violation:")?;
                for e in edges {
                    write!(f, " dangling edge {e};")?;
                }
                for c in instructions {
                    write!(f, " dangling instruction {c};")?;
                }
                Ok(())
            }
            DpoError::NotNonterminal(v) => write!(f, "vertex `{v}` is not nonterminal"),
            DpoError::MalformedSubstitution => {
                write!(f, "substituted monomorphism is not a monomorphism")
            }
            DpoError::Substitute(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DpoError {}

/// Result of a DPO rewrite: the rewritten graph and the comatch embedding
/// the rule's right side into it.
#[derive(Debug, Clone)]
pub struct RewriteOutcome {
    pub result: ExtendedGraph,
    pub comatch: Morphism,
}

/// Applies `rule` to `host` at the match `m`.
///
/// The pushout complement keeps everything outside `m(L - l(I))`; the result
/// glues a fresh copy of `R - r(I)` onto the interface image. Unique up to
/// isomorphism.
pub fn dpo_rewrite(
    host: &ExtendedGraph,
    rule: &RuleSpan,
    m: &Morphism,
) -> Result<RewriteOutcome, DpoError> {
    if !is_monomorphism(&rule.left, host, m).map_err(DpoError::Morphism)? {
        return Err(DpoError::NotMono);
    }
    let matching = annotate_gluing(rule, host, m.clone());
    if !matching.is_applicable() {
        return Err(DpoError::Gluing {
            edges: matching.dangling_edges,
            instructions: matching.dangling_instructions,
        });
    }
    let mode = host.mode();
    let deleted: BTreeSet<VertexId> =
        rule.deleted_vertices().iter().map(|v| m.apply(v).unwrap().clone()).collect();

    // Interface vertices keep their host image: rho(r(x)) = m(l(x)).
    let mut comatch = Morphism::new();
    for x in rule.interface.graph.vertices() {
        let in_left = rule.to_left.apply(x).expect("leg is total");
        let in_right = rule.to_right.apply(x).expect("leg is total");
        comatch.insert(in_right.clone(), m.apply(in_left).unwrap().clone());
    }

    let mut result = LabeledGraph::new(mode);
    for v in host.graph.vertices() {
        if !deleted.contains(v) {
            result.add_vertex(v.clone(), host.graph.label(v).unwrap().clone()).unwrap();
        }
    }

    // Fresh copies of the right side's non-interface vertices.
    let mut taken: BTreeSet<VertexId> = result.vertices().cloned().collect();
    for v in rule.right.graph.vertices() {
        if comatch.apply(v).is_some() {
            continue;
        }
        let mut fresh = v.clone();
        let mut k = 1usize;
        while taken.contains(&fresh) {
            fresh = v.suffixed('~', k);
            k += 1;
        }
        taken.insert(fresh.clone());
        result.add_vertex(fresh.clone(), rule.right.graph.label(v).unwrap().clone()).unwrap();
        comatch.insert(v.clone(), fresh);
    }

    let matched_edges: BTreeSet<Edge> = rule
        .left
        .graph
        .edges()
        .map(|e| {
            Edge::canonical(
                mode,
                m.apply(&e.source).unwrap().clone(),
                e.label.clone(),
                m.apply(&e.target).unwrap().clone(),
            )
        })
        .collect();
    for e in host.graph.edges() {
        if matched_edges.contains(e) {
            continue;
        }
        // Gluing guarantees the endpoints survived.
        result.add_edge(e.source.clone(), e.label.clone(), e.target.clone()).unwrap();
    }
    for e in rule.right.graph.edges() {
        result
            .add_edge(
                comatch.apply(&e.source).unwrap().clone(),
                e.label.clone(),
                comatch.apply(&e.target).unwrap().clone(),
            )
            .unwrap();
    }

    let matched_instructions: BTreeSet<ConnectionInstruction> = rule
        .left
        .connections
        .iter()
        .map(|c| c.with_target(m.apply(&c.target).unwrap().clone()))
        .collect();
    let mut connections: BTreeSet<ConnectionInstruction> = host
        .connections
        .iter()
        .filter(|c| !matched_instructions.contains(*c))
        .cloned()
        .collect();
    for c in &rule.right.connections {
        connections.insert(c.with_target(comatch.apply(&c.target).unwrap().clone()));
    }

    Ok(RewriteOutcome { result: ExtendedGraph { graph: result, connections }, comatch })
}

/// A substituted monomorphism: given `m1 : G -> G'`, `m2 : D -> D'` and a
/// nonterminal `x` of `G`, the union map `G[x/D] -> G'[m1(x)/D']`.
#[derive(Debug, Clone)]
pub struct SubstitutedMono {
    pub source: ExtendedGraph,
    pub target: ExtendedGraph,
    pub map: Morphism,
}

/// Computes both substitutions and the induced map, verifying that the
/// result is a monomorphism.
pub fn substituted_mono(
    g: &ExtendedGraph,
    g_image: &ExtendedGraph,
    m1: &Morphism,
    d: &ExtendedGraph,
    d_image: &ExtendedGraph,
    m2: &Morphism,
    x: &VertexId,
) -> Result<SubstitutedMono, DpoError> {
    if !is_monomorphism(g, g_image, m1).map_err(DpoError::Morphism)? {
        return Err(DpoError::NotMono);
    }
    if !is_monomorphism(d, d_image, m2).map_err(DpoError::Morphism)? {
        return Err(DpoError::NotMono);
    }
    let x_image = m1.apply(x).ok_or_else(|| DpoError::Morphism(MorphismError::MissingVertex(x.clone())))?.clone();
    let source_sub = substitute(g, x, d).map_err(DpoError::Substitute)?;
    let target_sub = substitute(g_image, &x_image, d_image).map_err(DpoError::Substitute)?;

    let mut map = Morphism::new();
    for v in g.graph.vertices() {
        if v != x {
            map.insert(v.clone(), m1.apply(v).unwrap().clone());
        }
    }
    for v in d.graph.vertices() {
        let in_source = source_sub.daughter_ids[v].clone();
        let in_target = target_sub.daughter_ids[m2.apply(v).unwrap()].clone();
        map.insert(in_source, in_target);
    }
    let ok = is_monomorphism(&source_sub.result, &target_sub.result, &map)
        .map_err(DpoError::Morphism)?;
    if !ok {
        return Err(DpoError::MalformedSubstitution);
    }
    Ok(SubstitutedMono { source: source_sub.result, target: target_sub.result, map })
}

/// Substitutes rule `inner` for the nonterminal `v` of `outer`'s interface:
/// all three components are substituted and the legs are the induced
/// substituted monomorphisms.
pub fn rule_substitute(
    outer: &RuleSpan,
    v: &VertexId,
    inner: &RuleSpan,
) -> Result<RuleSpan, DpoError> {
    let left_leg = substituted_mono(
        &outer.interface,
        &outer.left,
        &outer.to_left,
        &inner.interface,
        &inner.left,
        &inner.to_left,
        v,
    )?;
    let right_leg = substituted_mono(
        &outer.interface,
        &outer.right,
        &outer.to_right,
        &inner.interface,
        &inner.right,
        &inner.to_right,
        v,
    )?;
    RuleSpan::new(
        left_leg.target,
        left_leg.source,
        right_leg.target,
        left_leg.map,
        right_leg.map,
    )
    .map_err(|_| DpoError::MalformedSubstitution)
}

/// Why a commutation check could not even be attempted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideCondition {
    HostNotBoundary,
    DaughterNotBoundary,
    VertexNotInInterface(VertexId),
    VertexNotNonterminal(VertexId),
    /// An edge at the replaced host vertex that the rule's left side does
    /// not cover.
    UncoveredNeighborEdge(Edge),
    /// An instruction at the replaced host vertex not covered by the match.
    UncoveredNeighborInstruction(ConnectionInstruction),
    /// A daughter instruction outside the image of the inner match.
    UncoveredDaughterInstruction(ConnectionInstruction),
    RewriteUndefined(alloc::string::String),
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::HostNotBoundary => write!(f, "host graph is not boundary"),
            SideCondition::DaughterNotBoundary => write!(f, "daughter graph is not boundary"),
            SideCondition::VertexNotInInterface(v) => {
                write!(f, "vertex `{v}` is not in the outer interface")
            }
            SideCondition::VertexNotNonterminal(v) => write!(f, "vertex `{v}` is not nonterminal"),
            SideCondition::UncoveredNeighborEdge(e) => {
                write!(f, "edge {e} at the substituted vertex is outside the match image")
            }
            SideCondition::UncoveredNeighborInstruction(c) => {
                write!(f, "instruction {c} at the substituted vertex is outside the match image")
            }
            SideCondition::UncoveredDaughterInstruction(c) => {
                write!(f, "daughter instruction {c} is outside the inner match image")
            }
            SideCondition::RewriteUndefined(s) => write!(f, "rewrite undefined: {s}"),
        }
    }
}

/// Verdict of [`check_commutation`].
#[derive(Debug, Clone)]
pub enum CommutationVerdict {
    /// Substituting then rewriting agrees (up to isomorphism) with rewriting
    /// then substituting.
    Commutes,
    /// The two routes disagree; both results are returned for inspection.
    Counterexample { substituted_then_rewritten: ExtendedGraph, rewritten_then_substituted: ExtendedGraph },
    /// Side conditions failed; nothing was checked.
    Preconditions(Vec<SideCondition>),
}

impl CommutationVerdict {
    pub fn commutes(&self) -> bool {
        matches!(self, CommutationVerdict::Commutes)
    }
}

fn is_boundary_graph(g: &ExtendedGraph, a: &crate::alphabet::Alphabets) -> bool {
    let nn = |v: &VertexId| a.is_nonterminal(g.graph.label(v).unwrap());
    g.graph.edges().all(|e| !(nn(&e.source) && nn(&e.target)))
        && g.connections.iter().all(|c| !a.is_nonterminal(&c.neighbor_label))
}

/// Checks the substitution/rewrite commutation square on one instance.
///
/// Both routes are computed explicitly: substitute the daughter `d` at the
/// interface vertex `v`'s image in the host and rewrite with the substituted
/// rule, versus rewrite host and daughter separately and substitute the
/// results. The side conditions (monomorphic matches, match covering the
/// full neighborhood of the substituted vertex, daughter instructions all
/// matched) are checked first and reported when violated.
#[allow(clippy::too_many_arguments)]
pub fn check_commutation(
    a: &crate::alphabet::Alphabets,
    host: &ExtendedGraph,
    daughter: &ExtendedGraph,
    outer: &RuleSpan,
    inner: &RuleSpan,
    m1: &Morphism,
    m2: &Morphism,
    v: &VertexId,
) -> Result<CommutationVerdict, DpoError> {
    let mut failed = Vec::new();
    if !is_boundary_graph(host, a) {
        failed.push(SideCondition::HostNotBoundary);
    }
    if !is_boundary_graph(daughter, a) {
        failed.push(SideCondition::DaughterNotBoundary);
    }
    if !outer.interface.graph.contains_vertex(v) {
        failed.push(SideCondition::VertexNotInInterface(v.clone()));
        return Ok(CommutationVerdict::Preconditions(failed));
    }
    if !a.is_nonterminal(outer.interface.graph.label(v).unwrap()) {
        failed.push(SideCondition::VertexNotNonterminal(v.clone()));
    }
    let v_left = outer.to_left.apply(v).expect("interface leg total");
    let v_host = m1
        .apply(v_left)
        .ok_or_else(|| DpoError::Morphism(MorphismError::MissingVertex(v_left.clone())))?
        .clone();

    // The match must cover the whole neighborhood of the substituted vertex.
    let covered_edges: BTreeSet<Edge> = outer
        .left
        .graph
        .edges()
        .map(|e| {
            Edge::canonical(
                host.mode(),
                m1.apply(&e.source).unwrap().clone(),
                e.label.clone(),
                m1.apply(&e.target).unwrap().clone(),
            )
        })
        .collect();
    for e in host.graph.edges() {
        if e.touches(&v_host) && !covered_edges.contains(e) {
            failed.push(SideCondition::UncoveredNeighborEdge(e.clone()));
        }
    }
    let covered_instructions: BTreeSet<ConnectionInstruction> = outer
        .left
        .connections
        .iter()
        .map(|c| c.with_target(m1.apply(&c.target).unwrap().clone()))
        .collect();
    for c in &host.connections {
        if c.target == v_host && !covered_instructions.contains(c) {
            failed.push(SideCondition::UncoveredNeighborInstruction(c.clone()));
        }
    }
    // Daughter instructions must all be images of inner-left instructions.
    let inner_instruction_images: BTreeSet<ConnectionInstruction> = inner
        .left
        .connections
        .iter()
        .map(|c| c.with_target(m2.apply(&c.target).expect("inner match total").clone()))
        .collect();
    for c in &daughter.connections {
        if !inner_instruction_images.contains(c) {
            failed.push(SideCondition::UncoveredDaughterInstruction(c.clone()));
        }
    }
    if !failed.is_empty() {
        return Ok(CommutationVerdict::Preconditions(failed));
    }

    // Route one: rewrite both, then substitute the rewritten daughter at the
    // comatch image of v.
    let host_rewritten = match dpo_rewrite(host, outer, m1) {
        Ok(o) => o,
        Err(e) => {
            return Ok(CommutationVerdict::Preconditions(alloc::vec![
                SideCondition::RewriteUndefined(alloc::format!("host: {e}"))
            ]))
        }
    };
    let daughter_rewritten = match dpo_rewrite(daughter, inner, m2) {
        Ok(o) => o,
        Err(e) => {
            return Ok(CommutationVerdict::Preconditions(alloc::vec![
                SideCondition::RewriteUndefined(alloc::format!("daughter: {e}"))
            ]))
        }
    };
    let v_right = outer.to_right.apply(v).expect("interface leg total");
    let v_in_result = host_rewritten.comatch.apply(v_right).expect("comatch total").clone();
    let route_two = substitute(&host_rewritten.result, &v_in_result, &daughter_rewritten.result)
        .map_err(DpoError::Substitute)?
        .result;

    // Route two: substitute first, then rewrite with the substituted rule at
    // the substituted match.
    let combined = substitute(host, &v_host, daughter).map_err(DpoError::Substitute)?;
    let rule3 = rule_substitute(outer, v, inner)?;
    // Match map: outer-left vertices via m1, inner-left vertices through the
    // substitution renamings on both sides.
    let left_sub = substitute(&outer.left, v_left, &inner.left).map_err(DpoError::Substitute)?;
    let mut m3 = Morphism::new();
    for u in outer.left.graph.vertices() {
        if u != v_left {
            m3.insert(u.clone(), m1.apply(u).unwrap().clone());
        }
    }
    for u in inner.left.graph.vertices() {
        let in_l3 = left_sub.daughter_ids[u].clone();
        let in_host = combined.daughter_ids[m2.apply(u).unwrap()].clone();
        m3.insert(in_l3, in_host);
    }
    // rule3.left was built by the same substitution, but through
    // substituted_mono; align identifiers via isomorphism-free renaming:
    // both come from substitute(outer.left, v_left, inner.left), which is
    // deterministic, so the vertex sets agree.
    let route_one = match dpo_rewrite(&combined.result, &rule3, &m3) {
        Ok(o) => o.result,
        Err(e) => {
            return Ok(CommutationVerdict::Preconditions(alloc::vec![
                SideCondition::RewriteUndefined(alloc::format!("combined: {e}"))
            ]))
        }
    };

    if find_isomorphism(&route_one, &route_two).is_some() {
        Ok(CommutationVerdict::Commutes)
    } else {
        Ok(CommutationVerdict::Counterexample {
            substituted_then_rewritten: route_one,
            rewritten_then_substituted: route_two,
        })
    }
}
