//! Grammar-level rewrite rules: spans of grammars whose parallel derivations
//! produce concrete string-graph rewrite rules.
//!
//! A pattern is a span of boundary grammars with production bijections and
//! label-preserving nonterminal bijections between corresponding
//! productions. A B-ESG rewrite rule further requires the interface
//! productions to consist of nonterminals and isolated wire vertices only,
//! with the interface wires covering the production inputs and outputs on
//! both sides. Instantiation runs the three derivations in lockstep --
//! corresponding productions at corresponding nonterminals -- then decodes,
//! yielding a span of string graphs with monomorphic legs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::{Alphabets, Direction, Mode};
use crate::besg::{validate_besg, BesgGrammar};
use crate::decode::{decode, DecodeError, DecodingSystem};
use crate::dpo::{RuleSpan, SpanError};
use crate::grammar::{
    derive_step, grammar_homomorphism_check, initial_form, DerivationScript,
    DeriveError, EnumerateError, Grammar, GrammarHom, Production, ProductionName, SententialForm,
};
use crate::graph::{ExtendedGraph, VertexId, VertexLabel};
use crate::morphism::{is_monomorphism, Morphism};
use crate::stringgraph::{classify, Classification};

/// Production input/output classification: a wire vertex is a production
/// input (output) when its in-degree (out-degree) is zero and no incoming
/// (outgoing) connection instruction targets it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductionIoClassification {
    pub inputs: BTreeSet<VertexId>,
    pub outputs: BTreeSet<VertexId>,
    pub isolated: BTreeSet<VertexId>,
}

pub fn classify_production_io(p: &Production, a: &Alphabets) -> ProductionIoClassification {
    let mut inputs = BTreeSet::new();
    let mut outputs = BTreeSet::new();
    let mut isolated = BTreeSet::new();
    for v in p.rhs.graph.vertices() {
        if !a.is_wire(p.rhs.graph.label(v).unwrap()) {
            continue;
        }
        let (is_input, is_output) = match a.mode {
            Mode::Directed => (
                p.rhs.graph.in_degree(v) == 0
                    && p.rhs.connections_at(v, Direction::In).is_empty(),
                p.rhs.graph.out_degree(v) == 0
                    && p.rhs.connections_at(v, Direction::Out).is_empty(),
            ),
            Mode::Undirected => {
                let open = p.rhs.graph.degree(v) == 0
                    && p.rhs.connections.iter().all(|c| &c.target != v);
                (open, open)
            }
        };
        if is_input {
            inputs.insert(v.clone());
        }
        if is_output {
            outputs.insert(v.clone());
        }
        if is_input && is_output {
            isolated.insert(v.clone());
        }
    }
    ProductionIoClassification { inputs, outputs, isolated }
}

/// A span of grammars with production bijections.
#[derive(Debug, Clone)]
pub struct GrammarPattern {
    pub left: Grammar,
    pub interface: Grammar,
    pub right: Grammar,
    pub to_left: GrammarHom,
    pub to_right: GrammarHom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternViolation {
    NotAHomomorphism { side: Side, detail: alloc::string::String },
    ProductionMapNotBijective { side: Side },
    ComponentNotInjective { side: Side, production: ProductionName },
    NonterminalsNotBijective { side: Side, production: ProductionName },
    InitialMismatch,
    GrammarNotBoundary { side: Side },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Interface,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Interface => write!(f, "interface"),
            Side::Right => write!(f, "right"),
        }
    }
}

impl fmt::Display for PatternViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternViolation::NotAHomomorphism { side, detail } => {
                write!(f, "{side} leg is not a grammar homomorphism: {detail}")
            }
            PatternViolation::ProductionMapNotBijective { side } => {
                write!(f, "{side} production map is not a bijection")
            }
            PatternViolation::ComponentNotInjective { side, production } => {
                write!(f, "{side} component at `{production}` is not injective")
            }
            PatternViolation::NonterminalsNotBijective { side, production } => {
                write!(f, "{side} component at `{production}` is not a nonterminal bijection")
            }
            PatternViolation::InitialMismatch => write!(f, "initial labels differ"),
            PatternViolation::GrammarNotBoundary { side } => {
                write!(f, "{side} grammar is not boundary")
            }
        }
    }
}

fn check_leg(
    side: Side,
    hom: &GrammarHom,
    interface: &Grammar,
    target: &Grammar,
    out: &mut Vec<PatternViolation>,
) {
    match grammar_homomorphism_check(hom, interface, target) {
        Err(e) => out.push(PatternViolation::NotAHomomorphism {
            side,
            detail: alloc::format!("{e}"),
        }),
        Ok(false) => out.push(PatternViolation::NotAHomomorphism {
            side,
            detail: alloc::string::String::from("label or structure mismatch"),
        }),
        Ok(true) => {}
    }
    let images: BTreeSet<&ProductionName> = hom.production_map.values().collect();
    if hom.production_map.len() != interface.production_count()
        || images.len() != hom.production_map.len()
        || images.len() != target.production_count()
    {
        out.push(PatternViolation::ProductionMapNotBijective { side });
    }
    let a = &interface.alphabets;
    for p in interface.productions() {
        let Some(component) = hom.components.get(&p.name) else { continue };
        if !component.is_injective() {
            out.push(PatternViolation::ComponentNotInjective {
                side,
                production: p.name.clone(),
            });
        }
        let Some(image_name) = hom.production_map.get(&p.name) else { continue };
        let Some(image) = target.production(image_name) else { continue };
        // Label preservation is part of the homomorphism check; bijectivity
        // on nonterminals needs counts plus coverage.
        let src_nts: Vec<&VertexId> = p.nonterminal_vertices(a).collect();
        let dst_nts: BTreeSet<&VertexId> = image.nonterminal_vertices(a).collect();
        let mapped: BTreeSet<&VertexId> =
            src_nts.iter().filter_map(|v| component.apply(v)).collect();
        if src_nts.len() != dst_nts.len() || !mapped.iter().all(|v| dst_nts.contains(*v)) || mapped.len() != dst_nts.len()
        {
            out.push(PatternViolation::NonterminalsNotBijective {
                side,
                production: p.name.clone(),
            });
        }
    }
}

/// Checks the pattern conditions: production bijections on both legs,
/// per-production nonterminal bijections, one shared initial label.
pub fn validate_pattern(gp: &GrammarPattern) -> Vec<PatternViolation> {
    let mut out = Vec::new();
    check_leg(Side::Left, &gp.to_left, &gp.interface, &gp.left, &mut out);
    check_leg(Side::Right, &gp.to_right, &gp.interface, &gp.right, &mut out);
    if gp.left.initial != gp.interface.initial || gp.right.initial != gp.interface.initial {
        out.push(PatternViolation::InitialMismatch);
    }
    for (side, g) in [(Side::Left, &gp.left), (Side::Interface, &gp.interface), (Side::Right, &gp.right)] {
        if !g.is_boundary() {
            out.push(PatternViolation::GrammarNotBoundary { side });
        }
    }
    out
}

/// A grammar pattern together with the shared decoding system.
#[derive(Debug, Clone)]
pub struct BesgRewriteRule {
    pub pattern: GrammarPattern,
    pub decoding: DecodingSystem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleViolation {
    Pattern(PatternViolation),
    /// Interface production containing an edge, instruction, node vertex or
    /// non-isolated wire vertex.
    InterfaceNotBoundary { production: ProductionName },
    /// Production inputs (outputs) of a side not covered by interface wires.
    IoNotCovered { side: Side, production: ProductionName, vertex: VertexId },
    /// An interface wire vertex whose images are not consistently inputs or
    /// consistently outputs.
    IoInconsistent { production: ProductionName, vertex: VertexId },
    /// Left or right component rejected as a B-ESG grammar.
    SideRejected { side: Side, detail: alloc::string::String },
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleViolation::Pattern(v) => write!(f, "{v}"),
            RuleViolation::InterfaceNotBoundary { production } => {
                write!(f, "interface production `{production}` is not nonterminals plus isolated wires")
            }
            RuleViolation::IoNotCovered { side, production, vertex } => {
                write!(f, "{side} production `{production}`: io vertex `{vertex}` not covered by interface")
            }
            RuleViolation::IoInconsistent { production, vertex } => {
                write!(f, "interface production `{production}`: wire `{vertex}` maps inconsistently")
            }
            RuleViolation::SideRejected { side, detail } => {
                write!(f, "{side} grammar rejected: {detail}")
            }
        }
    }
}

/// Checks the boundary/io conditions of a rule, then validates the left and
/// right grammars as B-ESG grammars with the shared decoding system.
pub fn validate_besg_rule(rule: &BesgRewriteRule, probe_depth: usize) -> Vec<RuleViolation> {
    let gp = &rule.pattern;
    let mut out: Vec<RuleViolation> =
        validate_pattern(gp).into_iter().map(RuleViolation::Pattern).collect();
    let a = &gp.interface.alphabets;
    for p in gp.interface.productions() {
        let io = classify_production_io(p, a);
        let boundary_ok = p.rhs.graph.edge_count() == 0
            && p.rhs.connections.is_empty()
            && p.rhs.graph.vertices().all(|v| {
                let l = p.rhs.graph.label(v).unwrap();
                a.is_nonterminal(l) || (a.is_wire(l) && io.isolated.contains(v))
            });
        if !boundary_ok {
            out.push(RuleViolation::InterfaceNotBoundary { production: p.name.clone() });
        }
        for (side, hom, target) in [
            (Side::Left, &gp.to_left, &gp.left),
            (Side::Right, &gp.to_right, &gp.right),
        ] {
            let (Some(image_name), Some(component)) =
                (hom.production_map.get(&p.name), hom.components.get(&p.name))
            else {
                continue;
            };
            let Some(image) = target.production(image_name) else { continue };
            let image_io = classify_production_io(image, a);
            // IO1: interface wires surject onto the production inputs and
            // outputs of the image.
            let wire_images: BTreeSet<&VertexId> = p
                .rhs
                .graph
                .vertices()
                .filter(|v| a.is_wire(p.rhs.graph.label(v).unwrap()))
                .filter_map(|v| component.apply(v))
                .collect();
            for missing in image_io.inputs.union(&image_io.outputs) {
                if !wire_images.contains(missing) {
                    out.push(RuleViolation::IoNotCovered {
                        side,
                        production: image.name.clone(),
                        vertex: missing.clone(),
                    });
                }
            }
        }
        // IO2: each interface wire is an input on both sides or an output on
        // both sides.
        for v in p.rhs.graph.vertices() {
            if !a.is_wire(p.rhs.graph.label(v).unwrap()) {
                continue;
            }
            let status = |hom: &GrammarHom, target: &Grammar| -> Option<(bool, bool)> {
                let image_name = hom.production_map.get(&p.name)?;
                let image = target.production(image_name)?;
                let iv = hom.components.get(&p.name)?.apply(v)?;
                let io = classify_production_io(image, a);
                Some((io.inputs.contains(iv), io.outputs.contains(iv)))
            };
            if let (Some((lin, lout)), Some((rin, rout))) =
                (status(&gp.to_left, &gp.left), status(&gp.to_right, &gp.right))
            {
                if !((lin && rin) || (lout && rout)) {
                    out.push(RuleViolation::IoInconsistent {
                        production: p.name.clone(),
                        vertex: v.clone(),
                    });
                }
            }
        }
    }
    for (side, g) in [(Side::Left, &gp.left), (Side::Right, &gp.right)] {
        let b = BesgGrammar { grammar: g.clone(), decoding: rule.decoding.clone() };
        let report = validate_besg(&b, probe_depth);
        if !report.accepted() {
            for v in &report.violations {
                out.push(RuleViolation::SideRejected { side, detail: alloc::format!("{v}") });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    NotABijection,
    LhsMismatch { left: ProductionName, right: ProductionName },
    NonterminalMismatch { left: ProductionName, right: ProductionName },
    IoMismatch { left: ProductionName, right: ProductionName },
    InitialMismatch,
}

impl fmt::Display for SynthesisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthesisError::NotABijection => write!(f, "correspondence is not a production bijection"),
            SynthesisError::LhsMismatch { left, right } => {
                write!(f, "productions `{left}` and `{right}` have different left-hand sides")
            }
            SynthesisError::NonterminalMismatch { left, right } => {
                write!(f, "productions `{left}` and `{right}` have mismatched nonterminals")
            }
            SynthesisError::IoMismatch { left, right } => {
                write!(f, "productions `{left}` and `{right}` have mismatched inputs/outputs")
            }
            SynthesisError::InitialMismatch => write!(f, "grammars have different initial labels"),
        }
    }
}

impl core::error::Error for SynthesisError {}

/// Pairs vertices of two productions class by class (sorted by label then
/// identifier); fails when any per-label count differs.
fn pair_sorted(
    left: Vec<(VertexLabel, VertexId)>,
    right: Vec<(VertexLabel, VertexId)>,
) -> Option<Vec<(VertexId, VertexId)>> {
    if left.len() != right.len() {
        return None;
    }
    let mut l = left;
    let mut r = right;
    l.sort();
    r.sort();
    let mut out = Vec::new();
    for ((ll, lv), (rl, rv)) in l.into_iter().zip(r) {
        if ll != rl {
            return None;
        }
        out.push((lv, rv));
    }
    Some(out)
}

/// Constructs the unique interface of a left/right grammar pair: per
/// production, the nonterminal vertices plus the production inputs/outputs
/// as isolated wire vertices, with the evident embeddings.
///
/// The interface reuses the left production's vertex identifiers, so the
/// left leg is an identity embedding; the right leg pairs nonterminals and
/// io wires class by class in sorted order.
pub fn synthesize_interface(
    left: &BesgGrammar,
    right: &BesgGrammar,
    correspondence: &BTreeMap<ProductionName, ProductionName>,
) -> Result<BesgRewriteRule, SynthesisError> {
    let gl = &left.grammar;
    let gr = &right.grammar;
    if gl.initial != gr.initial {
        return Err(SynthesisError::InitialMismatch);
    }
    let images: BTreeSet<&ProductionName> = correspondence.values().collect();
    if correspondence.len() != gl.production_count()
        || images.len() != correspondence.len()
        || images.len() != gr.production_count()
        || correspondence.keys().any(|p| gl.production(p).is_none())
        || correspondence.values().any(|p| gr.production(p).is_none())
    {
        return Err(SynthesisError::NotABijection);
    }
    let a = &gl.alphabets;
    let mut interface = Grammar::new(a.clone(), gl.initial.clone());
    let mut to_left = GrammarHom { production_map: BTreeMap::new(), components: BTreeMap::new() };
    let mut to_right = GrammarHom { production_map: BTreeMap::new(), components: BTreeMap::new() };

    for (lname, rname) in correspondence {
        let pl = gl.production(lname).expect("checked");
        let pr = gr.production(rname).expect("checked");
        if pl.lhs != pr.lhs {
            return Err(SynthesisError::LhsMismatch { left: lname.clone(), right: rname.clone() });
        }
        let nt_pairs = pair_sorted(
            pl.nonterminal_vertices(a)
                .map(|v| (pl.rhs.graph.label(v).unwrap().clone(), v.clone()))
                .collect(),
            pr.nonterminal_vertices(a)
                .map(|v| (pr.rhs.graph.label(v).unwrap().clone(), v.clone()))
                .collect(),
        )
        .ok_or_else(|| SynthesisError::NonterminalMismatch {
            left: lname.clone(),
            right: rname.clone(),
        })?;

        let io_l = classify_production_io(pl, a);
        let io_r = classify_production_io(pr, a);
        // Pure inputs, pure outputs and isolated wires pair within their
        // class so the rule's io conditions hold by construction.
        let classes = |io: &ProductionIoClassification, p: &Production| {
            let lab = |v: &VertexId| (p.rhs.graph.label(v).unwrap().clone(), v.clone());
            let pure_in: Vec<(VertexLabel, VertexId)> =
                io.inputs.difference(&io.isolated).map(&lab).collect();
            let pure_out: Vec<(VertexLabel, VertexId)> =
                io.outputs.difference(&io.isolated).map(&lab).collect();
            let isolated: Vec<(VertexLabel, VertexId)> = io.isolated.iter().map(&lab).collect();
            (pure_in, pure_out, isolated)
        };
        let (lin, lout, liso) = classes(&io_l, pl);
        let (rin, rout, riso) = classes(&io_r, pr);
        let mut wire_pairs = Vec::new();
        for (l, r) in [(lin, rin), (lout, rout), (liso, riso)] {
            wire_pairs.extend(pair_sorted(l, r).ok_or_else(|| SynthesisError::IoMismatch {
                left: lname.clone(),
                right: rname.clone(),
            })?);
        }

        let mut rhs = ExtendedGraph::new(a.mode);
        let mut cl = Morphism::new();
        let mut cr = Morphism::new();
        for (lv, rv) in nt_pairs.iter().chain(wire_pairs.iter()) {
            rhs.graph
                .add_vertex(lv.clone(), pl.rhs.graph.label(lv).unwrap().clone())
                .expect("left ids are unique");
            cl.insert(lv.clone(), lv.clone());
            cr.insert(lv.clone(), rv.clone());
        }
        interface
            .add_production(Production { name: lname.clone(), lhs: pl.lhs.clone(), rhs })
            .expect("names are unique");
        to_left.production_map.insert(lname.clone(), lname.clone());
        to_left.components.insert(lname.clone(), cl);
        to_right.production_map.insert(lname.clone(), rname.clone());
        to_right.components.insert(lname.clone(), cr);
    }

    Ok(BesgRewriteRule {
        pattern: GrammarPattern {
            left: gl.clone(),
            interface,
            right: gr.clone(),
            to_left,
            to_right,
        },
        decoding: left.decoding.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstantiateError {
    Component { side: Side, step: usize, cause: DeriveError },
    NotConcrete { side: Side },
    MissingCorrespondence(ProductionName),
    LegBroken { side: Side, step: usize },
    Decode { side: Side, error: DecodeError },
    Span(SpanError),
}

impl fmt::Display for InstantiateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstantiateError::Component { side, step, cause } => {
                write!(f, "{side} derivation, step {step}: {cause}")
            }
            InstantiateError::NotConcrete { side } => {
                write!(f, "{side} derivation did not reach a terminal graph")
            }
            InstantiateError::MissingCorrespondence(p) => {
                write!(f, "production `{p}` has no correspondence")
            }
            InstantiateError::LegBroken { side, step } => {
                write!(f, "{side} leg stopped being a monomorphism at step {step}")
            }
            InstantiateError::Decode { side, error } => write!(f, "{side} decoding: {error}"),
            InstantiateError::Span(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for InstantiateError {}

/// A concrete string-graph rewrite rule produced by parallel instantiation,
/// along with the scripts that produced each component.
#[derive(Debug, Clone)]
pub struct InstantiatedRule {
    pub span: RuleSpan,
    pub interface_script: DerivationScript,
    pub left_script: DerivationScript,
    pub right_script: DerivationScript,
}

struct CoupledState {
    interface: SententialForm,
    left: SententialForm,
    right: SententialForm,
    to_left: Morphism,
    to_right: Morphism,
}

/// Runs the three coupled derivations for `script` (addressed at the
/// interface grammar), decodes the results, and returns the induced span.
pub fn parallel_instantiate(
    rule: &BesgRewriteRule,
    script: &DerivationScript,
) -> Result<InstantiatedRule, InstantiateError> {
    let gp = &rule.pattern;
    let a = &gp.interface.alphabets;
    let root = Morphism::from_pairs([(
        VertexId::new(crate::grammar::INITIAL_VERTEX),
        VertexId::new(crate::grammar::INITIAL_VERTEX),
    )]);
    let mut state = CoupledState {
        interface: initial_form(&gp.interface),
        left: initial_form(&gp.left),
        right: initial_form(&gp.right),
        to_left: root.clone(),
        to_right: root,
    };

    for (i, step) in script.steps.iter().enumerate() {
        let step_no = i + 1;
        let p = gp
            .interface
            .production(&step.production)
            .ok_or_else(|| InstantiateError::Component {
                side: Side::Interface,
                step: step_no,
                cause: DeriveError::UnknownProduction(step.production.clone()),
            })?;
        let left_name = gp
            .to_left
            .production_map
            .get(&p.name)
            .ok_or_else(|| InstantiateError::MissingCorrespondence(p.name.clone()))?;
        let right_name = gp
            .to_right
            .production_map
            .get(&p.name)
            .ok_or_else(|| InstantiateError::MissingCorrespondence(p.name.clone()))?;
        let cl = gp
            .to_left
            .components
            .get(&p.name)
            .ok_or_else(|| InstantiateError::MissingCorrespondence(p.name.clone()))?;
        let cr = gp
            .to_right
            .components
            .get(&p.name)
            .ok_or_else(|| InstantiateError::MissingCorrespondence(p.name.clone()))?;

        let target_left = state
            .to_left
            .apply(&step.target)
            .ok_or_else(|| InstantiateError::Component {
                side: Side::Left,
                step: step_no,
                cause: DeriveError::UnknownVertex(step.target.clone()),
            })?
            .clone();
        let target_right = state
            .to_right
            .apply(&step.target)
            .ok_or_else(|| InstantiateError::Component {
                side: Side::Right,
                step: step_no,
                cause: DeriveError::UnknownVertex(step.target.clone()),
            })?
            .clone();

        let next_interface = derive_step(&gp.interface, &state.interface, &step.target, &p.name)
            .map_err(|cause| InstantiateError::Component { side: Side::Interface, step: step_no, cause })?;
        let next_left = derive_step(&gp.left, &state.left, &target_left, left_name)
            .map_err(|cause| InstantiateError::Component { side: Side::Left, step: step_no, cause })?;
        let next_right = derive_step(&gp.right, &state.right, &target_right, right_name)
            .map_err(|cause| InstantiateError::Component { side: Side::Right, step: step_no, cause })?;

        // Both copies were freshened with the same step index, so the
        // component maps transport directly.
        let update = |leg: &Morphism, component: &Morphism, replaced: &VertexId| {
            let mut next = Morphism::new();
            for (k, v) in leg.pairs() {
                if k != &step.target {
                    next.insert(k.clone(), v.clone());
                }
            }
            let _ = replaced;
            for (k, v) in component.pairs() {
                next.insert(k.suffixed('.', step_no), v.suffixed('.', step_no));
            }
            next
        };
        state.to_left = update(&state.to_left, cl, &target_left);
        state.to_right = update(&state.to_right, cr, &target_right);
        state.interface = next_interface;
        state.left = next_left;
        state.right = next_right;

        let left_ok =
            is_monomorphism(&state.interface.graph, &state.left.graph, &state.to_left)
                .map_err(|_| InstantiateError::LegBroken { side: Side::Left, step: step_no })?;
        if !left_ok {
            return Err(InstantiateError::LegBroken { side: Side::Left, step: step_no });
        }
        let right_ok =
            is_monomorphism(&state.interface.graph, &state.right.graph, &state.to_right)
                .map_err(|_| InstantiateError::LegBroken { side: Side::Right, step: step_no })?;
        if !right_ok {
            return Err(InstantiateError::LegBroken { side: Side::Right, step: step_no });
        }
    }

    for (side, form) in [
        (Side::Interface, &state.interface),
        (Side::Left, &state.left),
        (Side::Right, &state.right),
    ] {
        if !form.is_concrete(a) {
            return Err(InstantiateError::NotConcrete { side });
        }
    }

    let decode_side = |side: Side, g: &ExtendedGraph| {
        decode(&g.graph, &rule.decoding, a)
            .map(ExtendedGraph::plain)
            .map_err(|error| InstantiateError::Decode { side, error })
    };
    let interface_decoded = decode_side(Side::Interface, &state.interface.graph)?;
    let left_decoded = decode_side(Side::Left, &state.left.graph)?;
    let right_decoded = decode_side(Side::Right, &state.right.graph)?;

    // Decoding keeps every pre-existing vertex, so the legs carry over.
    let span = RuleSpan::new(
        left_decoded,
        interface_decoded,
        right_decoded,
        state.to_left,
        state.to_right,
    )
    .map_err(InstantiateError::Span)?;
    Ok(InstantiatedRule {
        span,
        interface_script: script.clone(),
        left_script: state.left.script,
        right_script: state.right.script,
    })
}

/// All concrete scripts with at most `max_steps` steps, enumerated without
/// isomorphism deduplication: forms may coincide as graphs (interface
/// grammars often erase the distinction between counters) while their
/// scripts drive genuinely different parallel instantiations. Boundary
/// grammars expand only the first nonterminal, so the enumeration covers
/// one derivation order per production choice sequence.
pub fn concrete_scripts(
    g: &Grammar,
    max_steps: usize,
) -> Result<Vec<DerivationScript>, EnumerateError> {
    let a = &g.alphabets;
    let boundary = g.is_boundary();
    let mut out = Vec::new();
    let mut stack = alloc::vec![initial_form(g)];
    let mut explored = 0usize;
    while let Some(form) = stack.pop() {
        explored += 1;
        if explored > crate::grammar::SEARCH_BUDGET {
            return Err(EnumerateError::BudgetExceeded { explored });
        }
        let nts = form.nonterminal_vertices(a);
        if nts.is_empty() {
            out.push(form.script);
            continue;
        }
        if form.script.len() >= max_steps {
            continue;
        }
        let targets: Vec<VertexId> = if boundary { alloc::vec![nts[0].clone()] } else { nts };
        for target in targets {
            let label = form.graph.graph.label(&target).unwrap().clone();
            for p in g.productions_for(&label) {
                stack.push(derive_step(g, &form, &target, &p.name).expect("applicable"));
            }
        }
    }
    out.sort_by_key(|s| (s.len(), alloc::format!("{s}")));
    Ok(out)
}

/// Checks Thm-style instantiation soundness for one instantiated rule: all
/// three components are string graphs, the legs are monomorphisms (already
/// enforced by construction), and interface wires land on inputs/outputs
/// consistently while covering them.
pub fn instantiation_is_string_graph_rule(rule: &InstantiatedRule, a: &Alphabets) -> bool {
    let span = &rule.span;
    for g in [&span.left, &span.interface, &span.right] {
        if !matches!(classify(&g.graph, a), Classification::StringGraph) {
            return false;
        }
    }
    let (li, lo) = crate::stringgraph::io_sets(&span.left.graph, a);
    let (ri, ro) = crate::stringgraph::io_sets(&span.right.graph, a);
    // Coverage: every input/output of the sides is an image of an interface
    // vertex; consistency: each interface vertex is input both sides or
    // output both sides.
    let left_images: BTreeSet<VertexId> = span.to_left.image();
    let right_images: BTreeSet<VertexId> = span.to_right.image();
    if !li.union(&lo).all(|v| left_images.contains(v)) {
        return false;
    }
    if !ri.union(&ro).all(|v| right_images.contains(v)) {
        return false;
    }
    span.interface.graph.vertices().all(|v| {
        let lv = span.to_left.apply(v).expect("leg total");
        let rv = span.to_right.apply(v).expect("leg total");
        (li.contains(lv) && ri.contains(rv)) || (lo.contains(lv) && ro.contains(rv))
    })
}
