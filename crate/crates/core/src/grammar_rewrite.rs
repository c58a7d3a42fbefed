//! DPO rewriting of B-ESG grammars by B-ESG rewrite rules, and instance
//! checking of admissibility.
//!
//! A grammar match embeds the rule's left grammar into the host grammar:
//! an injective lhs-preserving production map with one monomorphism per
//! production. The rewrite is computed production-wise: each matched host
//! production is rewritten by the corresponding extended-graph span, and
//! unmatched productions carry over. Admissibility checking replays a
//! script on the host and the rewritten grammar in parallel (the rewrite
//! preserves production names and nonterminal identifiers, so one script
//! drives both), then searches for a short sequence of instantiated rules
//! transforming one decoded instance into the other.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::besg::BesgGrammar;
use crate::decode::{decode, DecodeError};
use crate::dpo::{dpo_rewrite, find_matches, DpoError, RuleSpan};
use crate::grammar::{run_script, DerivationScript, DeriveError, Grammar, ProductionName};
use crate::graph::{ExtendedGraph, LabeledGraph, VertexId};
use crate::morphism::{find_isomorphism, find_monomorphisms, IsoSet, Morphism};
use crate::schema::{
    classify_production_io, concrete_scripts, parallel_instantiate, BesgRewriteRule,
    InstantiateError, Side,
};

/// An embedding of a rule's left grammar into a host grammar.
#[derive(Debug, Clone)]
pub struct GrammarMatching {
    /// Left-grammar production -> host production.
    pub production_map: BTreeMap<ProductionName, ProductionName>,
    /// Per left-production component monomorphisms into the host production.
    pub components: BTreeMap<ProductionName, Morphism>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarRewriteError {
    /// Host and rule must share one decoding system.
    DecodingMismatch,
    /// The supplied matching references unknown productions.
    MalformedMatching(ProductionName),
    /// Gluing failed while rewriting the named production.
    RewriteUndefined { production: ProductionName, detail: alloc::string::String },
    Dpo(DpoError),
}

impl fmt::Display for GrammarRewriteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarRewriteError::DecodingMismatch => {
                write!(f, "host and rule use different decoding systems")
            }
            GrammarRewriteError::MalformedMatching(p) => {
                write!(f, "matching references unknown production `{p}`")
            }
            GrammarRewriteError::RewriteUndefined { production, detail } => {
                write!(f, "rewrite undefined at production `{production}`: {detail}")
            }
            GrammarRewriteError::Dpo(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GrammarRewriteError {}

/// The extended-graph span of one production triple of a rule.
fn production_span(rule: &BesgRewriteRule, interface_name: &ProductionName) -> Option<RuleSpan> {
    let gp = &rule.pattern;
    let pi = gp.interface.production(interface_name)?;
    let pl = gp.left.production(gp.to_left.production_map.get(interface_name)?)?;
    let pr = gp.right.production(gp.to_right.production_map.get(interface_name)?)?;
    RuleSpan::new(
        pl.rhs.clone(),
        pi.rhs.clone(),
        pr.rhs.clone(),
        gp.to_left.components.get(interface_name)?.clone(),
        gp.to_right.components.get(interface_name)?.clone(),
    )
    .ok()
}

/// The conservative per-production match conditions: gluing must hold,
/// encoding edges inside the match footprint must be matched, and left
/// production inputs/outputs must land on host inputs/outputs unless they
/// are interface-preserved.
fn component_admissible(
    rule: &BesgRewriteRule,
    interface_name: &ProductionName,
    host_production: &crate::grammar::Production,
    component: &Morphism,
) -> bool {
    let gp = &rule.pattern;
    let a = &gp.left.alphabets;
    let Some(span) = production_span(rule, interface_name) else { return false };
    let left_name = &gp.to_left.production_map[interface_name];
    let pl = gp.left.production(left_name).expect("pattern bijection");

    let matches = find_matches(&span, &host_production.rhs);
    let this = matches.iter().find(|m| &m.map == component);
    match this {
        Some(m) if m.is_applicable() => {}
        _ => return false,
    }

    // Encoding edges of the host production lying inside the match image
    // must themselves be matched.
    let image = component.image();
    let matched_edges: BTreeSet<crate::graph::Edge> = pl
        .rhs
        .graph
        .edges()
        .map(|e| {
            crate::graph::Edge::canonical(
                host_production.rhs.mode(),
                component.apply(&e.source).unwrap().clone(),
                e.label.clone(),
                component.apply(&e.target).unwrap().clone(),
            )
        })
        .collect();
    for e in host_production.rhs.graph.edges() {
        if a.is_encoding(&e.label)
            && image.contains(&e.source)
            && image.contains(&e.target)
            && !matched_edges.contains(e)
        {
            return false;
        }
    }

    // Production io of the left side: image stays io, or the vertex is
    // interface-preserved.
    let io_left = classify_production_io(pl, a);
    let io_host = classify_production_io(host_production, a);
    let interface_image: BTreeSet<VertexId> =
        gp.to_left.components[interface_name].image();
    for v in io_left.inputs.union(&io_left.outputs) {
        if interface_image.contains(v) {
            continue;
        }
        let hv = component.apply(v).expect("component total");
        let io_ok = (io_left.inputs.contains(v) && io_host.inputs.contains(hv))
            || (io_left.outputs.contains(v) && io_host.outputs.contains(hv));
        if !io_ok {
            return false;
        }
    }
    true
}

/// All grammar matchings of `rule`'s left grammar into `host`, production
/// maps and components both enumerated in deterministic order. Every
/// returned matching satisfies the gluing and conservative conditions.
pub fn find_grammar_matches(
    rule: &BesgRewriteRule,
    host: &BesgGrammar,
) -> Result<Vec<GrammarMatching>, GrammarRewriteError> {
    if rule.decoding != host.decoding {
        return Err(GrammarRewriteError::DecodingMismatch);
    }
    let gp = &rule.pattern;
    // Interface production names index the triples; the left production is
    // the one matched into the host.
    let interface_names: Vec<ProductionName> =
        gp.interface.production_names().cloned().collect();
    let mut out = Vec::new();
    let mut production_map: BTreeMap<ProductionName, ProductionName> = BTreeMap::new();
    let mut components: BTreeMap<ProductionName, Morphism> = BTreeMap::new();
    assign(
        rule,
        host,
        &interface_names,
        0,
        &mut production_map,
        &mut components,
        &mut out,
    );
    Ok(out)
}

fn assign(
    rule: &BesgRewriteRule,
    host: &BesgGrammar,
    names: &[ProductionName],
    depth: usize,
    production_map: &mut BTreeMap<ProductionName, ProductionName>,
    components: &mut BTreeMap<ProductionName, Morphism>,
    out: &mut Vec<GrammarMatching>,
) {
    if depth == names.len() {
        // Re-key by left production names for the public matching.
        let gp = &rule.pattern;
        let mut pm = BTreeMap::new();
        let mut cm = BTreeMap::new();
        for iname in names {
            let lname = gp.to_left.production_map[iname].clone();
            pm.insert(lname.clone(), production_map[iname].clone());
            cm.insert(lname, components[iname].clone());
        }
        out.push(GrammarMatching { production_map: pm, components: cm });
        return;
    }
    let gp = &rule.pattern;
    let iname = &names[depth];
    let lname = &gp.to_left.production_map[iname];
    let pl = gp.left.production(lname).expect("pattern bijection");
    let used: BTreeSet<ProductionName> = production_map.values().cloned().collect();
    let host_names: Vec<ProductionName> = host.grammar.production_names().cloned().collect();
    for hname in host_names {
        if used.contains(&hname) {
            continue;
        }
        let ph = host.grammar.production(&hname).expect("listed");
        if ph.lhs != pl.lhs {
            continue;
        }
        for m in find_monomorphisms(&pl.rhs, &ph.rhs) {
            if !component_admissible(rule, iname, ph, &m) {
                continue;
            }
            production_map.insert(iname.clone(), hname.clone());
            components.insert(iname.clone(), m);
            assign(rule, host, names, depth + 1, production_map, components, out);
            production_map.remove(iname);
            components.remove(iname);
        }
    }
}

/// Rewrites the host grammar production-wise at the given matching. The
/// result shares the host's production names, initial label and decoding
/// system; unmatched productions carry over unchanged.
pub fn besg_rewrite(
    host: &BesgGrammar,
    rule: &BesgRewriteRule,
    matching: &GrammarMatching,
) -> Result<BesgGrammar, GrammarRewriteError> {
    if rule.decoding != host.decoding {
        return Err(GrammarRewriteError::DecodingMismatch);
    }
    let gp = &rule.pattern;
    // Invert the production map: host production -> interface triple name.
    let mut rewritten: BTreeMap<ProductionName, ExtendedGraph> = BTreeMap::new();
    for (iname_interface, lname) in
        gp.to_left.production_map.iter().map(|(i, l)| (i.clone(), l.clone()))
    {
        let hname = matching
            .production_map
            .get(&lname)
            .ok_or_else(|| GrammarRewriteError::MalformedMatching(lname.clone()))?;
        let ph = host
            .grammar
            .production(hname)
            .ok_or_else(|| GrammarRewriteError::MalformedMatching(hname.clone()))?;
        let component = matching
            .components
            .get(&lname)
            .ok_or_else(|| GrammarRewriteError::MalformedMatching(lname.clone()))?;
        let span = production_span(rule, &iname_interface)
            .ok_or_else(|| GrammarRewriteError::MalformedMatching(iname_interface.clone()))?;
        let outcome = dpo_rewrite(&ph.rhs, &span, component).map_err(|e| match e {
            DpoError::Gluing { .. } => GrammarRewriteError::RewriteUndefined {
                production: hname.clone(),
                detail: alloc::format!("{e}"),
            },
            other => GrammarRewriteError::Dpo(other),
        })?;
        rewritten.insert(hname.clone(), outcome.result);
    }
    let mut grammar = Grammar::new(host.grammar.alphabets.clone(), host.grammar.initial.clone());
    for p in host.grammar.productions() {
        let rhs = rewritten.remove(&p.name).unwrap_or_else(|| p.rhs.clone());
        grammar
            .add_production(crate::grammar::Production {
                name: p.name.clone(),
                lhs: p.lhs.clone(),
                rhs,
            })
            .expect("names preserved");
    }
    Ok(BesgGrammar { grammar, decoding: host.decoding.clone() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityError {
    HostReplay(DeriveError),
    ResultReplay(DeriveError),
    Decode(Side, DecodeError),
    Instantiate(InstantiateError),
    ScriptEnumeration(crate::grammar::EnumerateError),
}

impl fmt::Display for AdmissibilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibilityError::HostReplay(e) => write!(f, "host replay: {e}"),
            AdmissibilityError::ResultReplay(e) => write!(f, "result replay: {e}"),
            AdmissibilityError::Decode(side, e) => write!(f, "{side} decode: {e}"),
            AdmissibilityError::Instantiate(e) => write!(f, "rule instantiation: {e}"),
            AdmissibilityError::ScriptEnumeration(e) => write!(f, "script enumeration: {e}"),
        }
    }
}

impl core::error::Error for AdmissibilityError {}

/// One applied concrete rewrite in an admissibility witness sequence.
#[derive(Debug, Clone)]
pub struct SequenceStep {
    /// Interface script of the rule instance applied.
    pub instance_script: DerivationScript,
    /// Index of the match used (into the instance's deterministic match list).
    pub match_index: usize,
}

/// Outcome of [`check_admissibility`].
#[derive(Debug, Clone)]
pub enum AdmissibilityVerdict {
    /// A sequence of rule instances rewrites the host instance into the
    /// result instance.
    Admissible { sequence: Vec<SequenceStep> },
    /// No sequence found within the explored bounds.
    BoundedFailure { explored: usize, instance_count: usize, max_sequence: usize },
}

impl AdmissibilityVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, AdmissibilityVerdict::Admissible { .. })
    }

    pub fn sequence_length(&self) -> Option<usize> {
        match self {
            AdmissibilityVerdict::Admissible { sequence } => Some(sequence.len()),
            AdmissibilityVerdict::BoundedFailure { .. } => None,
        }
    }
}

/// Search bounds for admissibility checking.
#[derive(Debug, Clone, Copy)]
pub struct AdmissibilityBounds {
    /// Rule instantiation scripts up to the host script's length plus this.
    pub extra_script_steps: usize,
    /// Maximum rewrite sequence length.
    pub max_sequence: usize,
}

impl Default for AdmissibilityBounds {
    fn default() -> Self {
        AdmissibilityBounds { extra_script_steps: 2, max_sequence: 3 }
    }
}

/// Checks that the grammar rewrite `host -> result` is witnessed on the
/// instantiation given by `script`: the decoded host instance rewrites into
/// the decoded result instance by a (shortest-first) sequence of concrete
/// rules drawn from the rule's instantiation language.
///
/// The rewrite preserves production names and nonterminal identifiers, so
/// the same script replays on both grammars; that is the parallel
/// instantiation induced by the rewrite.
pub fn check_admissibility(
    host: &BesgGrammar,
    result: &BesgGrammar,
    rule: &BesgRewriteRule,
    script: &DerivationScript,
    bounds: AdmissibilityBounds,
) -> Result<AdmissibilityVerdict, AdmissibilityError> {
    let a = &host.grammar.alphabets;
    let host_form = run_script(&host.grammar, script).map_err(AdmissibilityError::HostReplay)?;
    let result_form =
        run_script(&result.grammar, script).map_err(AdmissibilityError::ResultReplay)?;
    let start = decode(&host_form.graph.graph, &host.decoding, a)
        .map_err(|e| AdmissibilityError::Decode(Side::Left, e))?;
    let goal = decode(&result_form.graph.graph, &result.decoding, a)
        .map_err(|e| AdmissibilityError::Decode(Side::Right, e))?;

    // Instantiate the rule over all concrete interface scripts within the
    // length bound.
    let max_len = script.len() + bounds.extra_script_steps;
    let scripts = concrete_scripts(&rule.pattern.interface, max_len)
        .map_err(AdmissibilityError::ScriptEnumeration)?;
    let mut instances = Vec::new();
    for s in scripts {
        let inst =
            parallel_instantiate(rule, &s).map_err(AdmissibilityError::Instantiate)?;
        instances.push(inst);
    }

    // Breadth-first search over isomorphism classes of rewritten graphs.
    let goal_ext = ExtendedGraph::plain(goal);
    let mut visited = IsoSet::new();
    let mut frontier: Vec<(LabeledGraph, Vec<SequenceStep>)> =
        alloc::vec![(start.clone(), Vec::new())];
    visited.insert(ExtendedGraph::plain(start));
    let mut explored = 0usize;
    for _depth in 0..=bounds.max_sequence {
        let mut next = Vec::new();
        for (g, seq) in &frontier {
            explored += 1;
            if find_isomorphism(&ExtendedGraph::plain(g.clone()), &goal_ext).is_some() {
                return Ok(AdmissibilityVerdict::Admissible { sequence: seq.clone() });
            }
            if seq.len() == bounds.max_sequence {
                continue;
            }
            let host_ext = ExtendedGraph::plain(g.clone());
            for inst in &instances {
                let matches = find_matches(&inst.span, &host_ext);
                for (k, m) in matches.iter().enumerate() {
                    if !m.is_applicable() {
                        continue;
                    }
                    let outcome = dpo_rewrite(&host_ext, &inst.span, &m.map)
                        .expect("applicable match");
                    let (_, new) = visited.insert(outcome.result.clone());
                    if new {
                        let mut seq2 = seq.clone();
                        seq2.push(SequenceStep {
                            instance_script: inst.interface_script.clone(),
                            match_index: k,
                        });
                        next.push((outcome.result.graph, seq2));
                    }
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(AdmissibilityVerdict::BoundedFailure {
        explored,
        instance_count: instances.len(),
        max_sequence: bounds.max_sequence,
    })
}
