//! edNCE grammars, derivations and bounded language enumeration.
//!
//! A grammar is a finite set of productions `X -> (D, C)` over shared
//! alphabets plus an initial nonterminal label. Derivations start from the
//! single-vertex handle and replace nonterminal vertices by fresh production
//! copies; scripts record `(vertex, production)` pairs and are replayable
//! because copies are freshened deterministically (`id.step`).
//!
//! Boundary grammars (no edges between nonterminals, no instructions keyed on
//! nonterminal labels) have confluent derivations, which the enumerator
//! exploits by always expanding the first nonterminal vertex.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alphabet::Alphabets;
use crate::graph::{
    ConnectionInstruction, Edge, ExtendedGraph, GraphViolation, LabeledGraph, VertexId, VertexLabel,
};
use crate::morphism::{is_homomorphism, IsoSet, Morphism, MorphismError};
use crate::substitute::{substitute, SubstituteError};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductionName(String);

impl ProductionName {
    pub fn new<S: Into<String>>(s: S) -> Self {
        ProductionName(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ProductionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A production `lhs -> rhs` where the right-hand side is an extended graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub name: ProductionName,
    pub lhs: VertexLabel,
    pub rhs: ExtendedGraph,
}

impl Production {
    /// Number of terminal vertices the right-hand side contributes.
    pub fn terminal_yield(&self, a: &Alphabets) -> usize {
        self.rhs.graph.vertices().filter(|v| a.is_terminal(self.rhs.graph.label(v).unwrap())).count()
    }

    /// Labels of the nonterminal vertices in the right-hand side.
    pub fn nonterminal_labels(&self, a: &Alphabets) -> Vec<VertexLabel> {
        self.rhs
            .graph
            .vertices()
            .filter_map(|v| {
                let l = self.rhs.graph.label(v).unwrap();
                a.is_nonterminal(l).then(|| l.clone())
            })
            .collect()
    }

    pub fn nonterminal_vertices<'a>(&'a self, a: &'a Alphabets) -> impl Iterator<Item = &'a VertexId> {
        self.rhs
            .graph
            .vertices()
            .filter(move |v| a.is_nonterminal(self.rhs.graph.label(v).unwrap()))
    }
}

/// An edNCE grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub alphabets: Alphabets,
    pub initial: VertexLabel,
    productions: BTreeMap<ProductionName, Production>,
}

impl Grammar {
    pub fn new(alphabets: Alphabets, initial: VertexLabel) -> Self {
        Grammar { alphabets, initial, productions: BTreeMap::new() }
    }

    pub fn add_production(&mut self, p: Production) -> Result<(), GrammarError> {
        if self.productions.contains_key(&p.name) {
            return Err(GrammarError::DuplicateProduction(p.name));
        }
        self.productions.insert(p.name.clone(), p);
        Ok(())
    }

    pub fn production(&self, name: &ProductionName) -> Option<&Production> {
        self.productions.get(name)
    }

    pub fn productions(&self) -> impl Iterator<Item = &Production> {
        self.productions.values()
    }

    pub fn production_names(&self) -> impl Iterator<Item = &ProductionName> {
        self.productions.keys()
    }

    pub fn production_count(&self) -> usize {
        self.productions.len()
    }

    pub fn productions_for(&self, lhs: &VertexLabel) -> Vec<&Production> {
        self.productions.values().filter(|p| &p.lhs == lhs).collect()
    }

    /// Boundary check: no edges between nonterminal vertices, no connection
    /// instruction keyed on a nonterminal label.
    pub fn is_boundary(&self) -> bool {
        self.boundary_violations().is_empty()
    }

    fn boundary_violations(&self) -> Vec<GrammarViolation> {
        let a = &self.alphabets;
        let mut out = Vec::new();
        for p in self.productions.values() {
            for e in p.rhs.graph.edges() {
                let sl = p.rhs.graph.label(&e.source);
                let tl = p.rhs.graph.label(&e.target);
                if let (Some(sl), Some(tl)) = (sl, tl) {
                    if a.is_nonterminal(sl) && a.is_nonterminal(tl) {
                        out.push(GrammarViolation::EdgeBetweenNonterminals {
                            production: p.name.clone(),
                            edge: e.clone(),
                        });
                    }
                }
            }
            for c in &p.rhs.connections {
                if a.is_nonterminal(&c.neighbor_label) {
                    out.push(GrammarViolation::InstructionOnNonterminalLabel {
                        production: p.name.clone(),
                        instruction: c.clone(),
                    });
                }
            }
        }
        out
    }

    /// Minimum number of terminal vertices a nonterminal label can derive;
    /// `None` marks unproductive labels. Fixed-point computation.
    pub fn min_terminal_yield(&self) -> BTreeMap<VertexLabel, Option<usize>> {
        let a = &self.alphabets;
        let mut best: BTreeMap<VertexLabel, Option<usize>> =
            self.alphabets.nonterminal_labels.iter().map(|l| (l.clone(), None)).collect();
        for p in self.productions.values() {
            best.entry(p.lhs.clone()).or_insert(None);
        }
        loop {
            let mut changed = false;
            for p in self.productions.values() {
                let mut total = p.terminal_yield(a);
                let mut defined = true;
                for l in p.nonterminal_labels(a) {
                    match best.get(&l).copied().flatten() {
                        Some(y) => total += y,
                        None => {
                            defined = false;
                            break;
                        }
                    }
                }
                if defined {
                    let slot = best.entry(p.lhs.clone()).or_insert(None);
                    if slot.map_or(true, |cur| total < cur) {
                        *slot = Some(total);
                        changed = true;
                    }
                }
            }
            if !changed {
                return best;
            }
        }
    }

    /// A cycle among nonterminal labels along productions that create no
    /// terminal vertices, if one exists. Such cycles defeat size-bounded
    /// search, so enumeration and membership refuse grammars that have them.
    pub fn non_growing_cycle(&self) -> Option<Vec<VertexLabel>> {
        let a = &self.alphabets;
        let mut succ: BTreeMap<VertexLabel, BTreeSet<VertexLabel>> = BTreeMap::new();
        for p in self.productions.values() {
            if p.terminal_yield(a) == 0 {
                let entry = succ.entry(p.lhs.clone()).or_default();
                for l in p.nonterminal_labels(a) {
                    entry.insert(l);
                }
            }
        }
        // Iterative DFS with a path stack to recover the cycle.
        let mut done: BTreeSet<VertexLabel> = BTreeSet::new();
        for start in succ.keys().cloned().collect::<Vec<_>>() {
            if done.contains(&start) {
                continue;
            }
            let mut path: Vec<VertexLabel> = Vec::new();
            if let Some(cycle) = self.cycle_dfs(&succ, &start, &mut path, &mut done) {
                return Some(cycle);
            }
        }
        None
    }

    fn cycle_dfs(
        &self,
        succ: &BTreeMap<VertexLabel, BTreeSet<VertexLabel>>,
        at: &VertexLabel,
        path: &mut Vec<VertexLabel>,
        done: &mut BTreeSet<VertexLabel>,
    ) -> Option<Vec<VertexLabel>> {
        if let Some(pos) = path.iter().position(|l| l == at) {
            return Some(path[pos..].to_vec());
        }
        if done.contains(at) {
            return None;
        }
        path.push(at.clone());
        if let Some(next) = succ.get(at) {
            for n in next {
                if let Some(c) = self.cycle_dfs(succ, n, path, done) {
                    return Some(c);
                }
            }
        }
        path.pop();
        done.insert(at.clone());
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarError {
    DuplicateProduction(ProductionName),
}

impl fmt::Display for GrammarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarError::DuplicateProduction(p) => write!(f, "duplicate production `{p}`"),
        }
    }
}

impl core::error::Error for GrammarError {}

/// A violated grammar invariant, reported by [`validate_grammar`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarViolation {
    Alphabet(crate::alphabet::AlphabetViolation),
    InitialNotNonterminal(VertexLabel),
    LhsNotNonterminal { production: ProductionName, lhs: VertexLabel },
    Rhs { production: ProductionName, violation: GraphViolation },
    EdgeBetweenNonterminals { production: ProductionName, edge: Edge },
    InstructionOnNonterminalLabel { production: ProductionName, instruction: ConnectionInstruction },
    Unproductive(VertexLabel),
    Unreachable(VertexLabel),
    NonGrowingCycle(Vec<VertexLabel>),
}

impl fmt::Display for GrammarViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarViolation::Alphabet(v) => write!(f, "alphabet: {v}"),
            GrammarViolation::InitialNotNonterminal(l) => {
                write!(f, "initial label `{l}` is not a nonterminal")
            }
            GrammarViolation::LhsNotNonterminal { production, lhs } => {
                write!(f, "production `{production}` has non-nonterminal lhs `{lhs}`")
            }
            GrammarViolation::Rhs { production, violation } => {
                write!(f, "production `{production}`: {violation}")
            }
            GrammarViolation::EdgeBetweenNonterminals { production, edge } => {
                write!(f, "production `{production}` has an edge between nonterminals: {edge}")
            }
            GrammarViolation::InstructionOnNonterminalLabel { production, instruction } => write!(
                f,
                "production `{production}` has an instruction keyed on a nonterminal: {instruction}"
            ),
            GrammarViolation::Unproductive(l) => {
                write!(f, "nonterminal `{l}` cannot derive a terminal graph")
            }
            GrammarViolation::Unreachable(l) => {
                write!(f, "nonterminal `{l}` is unreachable from the initial label")
            }
            GrammarViolation::NonGrowingCycle(ls) => {
                write!(f, "non-growing derivation cycle through labels: ")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, " -> ")?;
                    }
                    write!(f, "{l}")?;
                }
                Ok(())
            }
        }
    }
}

/// Full structural validation of a grammar.
pub fn validate_grammar(g: &Grammar) -> Vec<GrammarViolation> {
    let a = &g.alphabets;
    let mut out: Vec<GrammarViolation> =
        a.validate().into_iter().map(GrammarViolation::Alphabet).collect();
    if !a.is_nonterminal(&g.initial) {
        out.push(GrammarViolation::InitialNotNonterminal(g.initial.clone()));
    }
    for p in g.productions.values() {
        if !a.is_nonterminal(&p.lhs) {
            out.push(GrammarViolation::LhsNotNonterminal {
                production: p.name.clone(),
                lhs: p.lhs.clone(),
            });
        }
        for v in p.rhs.validate(a) {
            out.push(GrammarViolation::Rhs { production: p.name.clone(), violation: v });
        }
    }
    out.extend(g.boundary_violations());

    let yields = g.min_terminal_yield();
    let mut used: BTreeSet<VertexLabel> = BTreeSet::new();
    used.insert(g.initial.clone());
    for p in g.productions.values() {
        used.insert(p.lhs.clone());
        used.extend(p.nonterminal_labels(a));
    }
    for l in &used {
        if yields.get(l).copied().flatten().is_none() {
            out.push(GrammarViolation::Unproductive(l.clone()));
        }
    }

    // Reachability over nonterminal labels, starting from the initial label.
    let mut reachable: BTreeSet<VertexLabel> = BTreeSet::new();
    let mut frontier = alloc::vec![g.initial.clone()];
    while let Some(l) = frontier.pop() {
        if !reachable.insert(l.clone()) {
            continue;
        }
        for p in g.productions_for(&l) {
            for n in p.nonterminal_labels(a) {
                if !reachable.contains(&n) {
                    frontier.push(n);
                }
            }
        }
    }
    for p in g.productions.values() {
        if !reachable.contains(&p.lhs) {
            out.push(GrammarViolation::Unreachable(p.lhs.clone()));
        }
    }

    if let Some(cycle) = g.non_growing_cycle() {
        out.push(GrammarViolation::NonGrowingCycle(cycle));
    }
    out
}

/// One derivation step: which vertex was replaced by which production.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DerivationStep {
    pub target: VertexId,
    pub production: ProductionName,
}

/// A replayable sequence of derivation steps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DerivationScript {
    pub steps: Vec<DerivationStep>,
}

impl DerivationScript {
    pub fn new() -> Self {
        DerivationScript { steps: Vec::new() }
    }

    pub fn push(&mut self, target: VertexId, production: ProductionName) {
        self.steps.push(DerivationStep { target, production });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for DerivationScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} @ {}", s.production, s.target)?;
        }
        Ok(())
    }
}

/// A sentential form: the current graph plus the script that produced it.
#[derive(Debug, Clone)]
pub struct SententialForm {
    pub graph: ExtendedGraph,
    pub script: DerivationScript,
}

impl SententialForm {
    /// Vertices still carrying a nonterminal label, in identifier order.
    pub fn nonterminal_vertices(&self, a: &Alphabets) -> Vec<VertexId> {
        self.graph
            .graph
            .vertices()
            .filter(|v| a.is_nonterminal(self.graph.graph.label(v).unwrap()))
            .cloned()
            .collect()
    }

    pub fn is_concrete(&self, a: &Alphabets) -> bool {
        self.nonterminal_vertices(a).is_empty()
    }
}

pub const INITIAL_VERTEX: &str = "root";

/// The initial sentential form `sn(S, root)`.
pub fn initial_form(g: &Grammar) -> SententialForm {
    let mut graph = LabeledGraph::new(g.alphabets.mode);
    graph
        .add_vertex(VertexId::new(INITIAL_VERTEX), g.initial.clone())
        .expect("fresh graph");
    SententialForm { graph: ExtendedGraph::plain(graph), script: DerivationScript::new() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeriveError {
    UnknownProduction(ProductionName),
    UnknownVertex(VertexId),
    NotNonterminal(VertexId, VertexLabel),
    WrongProduction { vertex: VertexId, label: VertexLabel, production: ProductionName, lhs: VertexLabel },
    Substitute(SubstituteError),
    /// Replay failure at a given 1-based step.
    Replay { step: usize, cause: alloc::boxed::Box<DeriveError> },
}

impl fmt::Display for DeriveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeriveError::UnknownProduction(p) => write!(f, "unknown production `{p}`"),
            DeriveError::UnknownVertex(v) => write!(f, "unknown vertex `{v}`"),
            DeriveError::NotNonterminal(v, l) => {
                write!(f, "vertex `{v}` has terminal label `{l}`")
            }
            DeriveError::WrongProduction { vertex, label, production, lhs } => write!(
                f,
                "vertex `{vertex}` is labeled `{label}` but production `{production}` rewrites `{lhs}`"
            ),
            DeriveError::Substitute(e) => write!(f, "{e}"),
            DeriveError::Replay { step, cause } => write!(f, "step {step}: {cause}"),
        }
    }
}

impl core::error::Error for DeriveError {}

/// Fresh copy of a production right-hand side for a given step index:
/// every vertex id `x` becomes `x.step`.
pub fn fresh_rhs(p: &Production, step: usize) -> (ExtendedGraph, BTreeMap<VertexId, VertexId>) {
    let mut renaming = BTreeMap::new();
    let mut graph = LabeledGraph::new(p.rhs.mode());
    for v in p.rhs.graph.vertices() {
        let fresh = v.suffixed('.', step);
        renaming.insert(v.clone(), fresh.clone());
        graph.add_vertex(fresh, p.rhs.graph.label(v).unwrap().clone()).expect("fresh ids");
    }
    for e in p.rhs.graph.edges() {
        graph
            .add_edge(renaming[&e.source].clone(), e.label.clone(), renaming[&e.target].clone())
            .expect("copied edges");
    }
    let connections = p
        .rhs
        .connections
        .iter()
        .map(|c| c.with_target(renaming[&c.target].clone()))
        .collect();
    (ExtendedGraph { graph, connections }, renaming)
}

/// Applies `production` at `target`, freshening the production copy with the
/// next step index.
pub fn derive_step(
    g: &Grammar,
    form: &SententialForm,
    target: &VertexId,
    production: &ProductionName,
) -> Result<SententialForm, DeriveError> {
    let p = g
        .production(production)
        .ok_or_else(|| DeriveError::UnknownProduction(production.clone()))?;
    let label = form
        .graph
        .graph
        .label(target)
        .ok_or_else(|| DeriveError::UnknownVertex(target.clone()))?
        .clone();
    if g.alphabets.is_terminal(&label) {
        return Err(DeriveError::NotNonterminal(target.clone(), label));
    }
    if label != p.lhs {
        return Err(DeriveError::WrongProduction {
            vertex: target.clone(),
            label,
            production: production.clone(),
            lhs: p.lhs.clone(),
        });
    }
    let step = form.script.len() + 1;
    let (daughter, _) = fresh_rhs(p, step);
    let sub = substitute(&form.graph, target, &daughter).map_err(DeriveError::Substitute)?;
    let mut script = form.script.clone();
    script.push(target.clone(), production.clone());
    Ok(SententialForm { graph: sub.result, script })
}

/// Replays a script from the initial form. Fails with the offending step
/// index on any replay error.
pub fn run_script(g: &Grammar, script: &DerivationScript) -> Result<SententialForm, DeriveError> {
    let mut form = initial_form(g);
    for (i, step) in script.steps.iter().enumerate() {
        form = derive_step(g, &form, &step.target, &step.production)
            .map_err(|e| DeriveError::Replay { step: i + 1, cause: alloc::boxed::Box::new(e) })?;
    }
    Ok(form)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    NonGrowingCycles(Vec<VertexLabel>),
    /// Safety valve for runaway searches.
    BudgetExceeded { explored: usize },
}

impl fmt::Display for EnumerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumerateError::NonGrowingCycles(ls) => {
                write!(f, "grammar has a non-growing derivation cycle (")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, " -> ")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, "); bounded search would not be exhaustive")
            }
            EnumerateError::BudgetExceeded { explored } => {
                write!(f, "enumeration budget exceeded after {explored} sentential forms")
            }
        }
    }
}

impl core::error::Error for EnumerateError {}

/// Maximum number of sentential forms any bounded search will visit.
pub(crate) const SEARCH_BUDGET: usize = 1_000_000;

/// Exhaustive bounded exploration of sentential forms.
///
/// Returns the terminal forms with at most `max_vertices` vertices, one
/// representative per isomorphism class, in discovery (BFS) order. For
/// boundary grammars only the first nonterminal vertex of each form is
/// expanded; derivation confluence makes this complete.
///
/// With `max_steps: None` the search has no step cap; it still terminates
/// because the frontier is deduplicated by isomorphism and pruned by the
/// minimum terminal yield, which the non-growing-cycle precondition keeps
/// strictly informative.
pub fn enumerate_language(
    g: &Grammar,
    max_vertices: usize,
    max_steps: Option<usize>,
) -> Result<Vec<SententialForm>, EnumerateError> {
    if let Some(cycle) = g.non_growing_cycle() {
        return Err(EnumerateError::NonGrowingCycles(cycle));
    }
    let max_steps = max_steps.unwrap_or(usize::MAX);
    let a = &g.alphabets;
    let boundary = g.is_boundary();
    let yields = g.min_terminal_yield();

    let min_final = |form: &SententialForm| -> Option<usize> {
        let mut total = 0usize;
        for v in form.graph.graph.vertices() {
            let l = form.graph.graph.label(v).unwrap();
            if a.is_terminal(l) {
                total += 1;
            } else {
                total += yields.get(l).copied().flatten()?;
            }
        }
        Some(total)
    };

    let mut visited = IsoSet::new();
    let mut results: Vec<SententialForm> = Vec::new();
    let mut result_set = IsoSet::new();
    let mut queue: alloc::collections::VecDeque<SententialForm> =
        alloc::collections::VecDeque::new();

    let start = initial_form(g);
    visited.insert(start.graph.clone());
    queue.push_back(start);
    let mut explored = 0usize;

    while let Some(form) = queue.pop_front() {
        explored += 1;
        if explored > SEARCH_BUDGET {
            return Err(EnumerateError::BudgetExceeded { explored });
        }
        let nts = form.nonterminal_vertices(a);
        if nts.is_empty() {
            if form.graph.graph.vertex_count() <= max_vertices {
                let (_, new) = result_set.insert(form.graph.clone());
                if new {
                    results.push(form);
                }
            }
            continue;
        }
        if form.script.len() >= max_steps {
            continue;
        }
        let targets: Vec<VertexId> =
            if boundary { alloc::vec![nts[0].clone()] } else { nts };
        for target in targets {
            let label = form.graph.graph.label(&target).unwrap().clone();
            for p in g.productions_for(&label) {
                let next = derive_step(g, &form, &target, &p.name).expect("applicable production");
                match min_final(&next) {
                    Some(m) if m <= max_vertices => {
                        let (_, new) = visited.insert(next.graph.clone());
                        if new {
                            queue.push_back(next);
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(results)
}

/// All concrete (terminal) forms reachable within `max_steps` derivation
/// steps, one per isomorphism class. Used by semantic grammar probing.
pub fn enumerate_by_steps(
    g: &Grammar,
    max_steps: usize,
) -> Result<Vec<SententialForm>, EnumerateError> {
    let a = &g.alphabets;
    let boundary = g.is_boundary();
    let mut visited = IsoSet::new();
    let mut result_set = IsoSet::new();
    let mut results = Vec::new();
    let mut queue = alloc::collections::VecDeque::new();
    let start = initial_form(g);
    visited.insert(start.graph.clone());
    queue.push_back(start);
    let mut explored = 0usize;
    while let Some(form) = queue.pop_front() {
        explored += 1;
        if explored > SEARCH_BUDGET {
            return Err(EnumerateError::BudgetExceeded { explored });
        }
        let nts = form.nonterminal_vertices(a);
        if nts.is_empty() {
            let (_, new) = result_set.insert(form.graph.clone());
            if new {
                results.push(form);
            }
            continue;
        }
        if form.script.len() >= max_steps {
            continue;
        }
        let targets: Vec<VertexId> = if boundary { alloc::vec![nts[0].clone()] } else { nts };
        for target in targets {
            let label = form.graph.graph.label(&target).unwrap().clone();
            for p in g.productions_for(&label) {
                let next = derive_step(g, &form, &target, &p.name).expect("applicable production");
                let (_, new) = visited.insert(next.graph.clone());
                if new {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(results)
}

/// A grammar homomorphism: a production map plus one extended-graph morphism
/// per production.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarHom {
    pub production_map: BTreeMap<ProductionName, ProductionName>,
    pub components: BTreeMap<ProductionName, Morphism>,
}

impl GrammarHom {
    pub fn identity(g: &Grammar) -> Self {
        GrammarHom {
            production_map: g.production_names().map(|p| (p.clone(), p.clone())).collect(),
            components: g
                .productions()
                .map(|p| (p.name.clone(), Morphism::identity(&p.rhs.graph)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarHomError {
    UnknownProduction(ProductionName),
    MissingProductionMapping(ProductionName),
    MissingComponent(ProductionName),
    Component(ProductionName, MorphismError),
}

impl fmt::Display for GrammarHomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarHomError::UnknownProduction(p) => write!(f, "unknown production `{p}`"),
            GrammarHomError::MissingProductionMapping(p) => {
                write!(f, "production `{p}` has no image")
            }
            GrammarHomError::MissingComponent(p) => {
                write!(f, "production `{p}` has no component morphism")
            }
            GrammarHomError::Component(p, e) => write!(f, "component at `{p}`: {e}"),
        }
    }
}

impl core::error::Error for GrammarHomError {}

/// True iff `h` is a grammar homomorphism from `g1` to `g2`: the production
/// map preserves left-hand sides and every component is an extended-graph
/// homomorphism between the corresponding right-hand sides.
pub fn grammar_homomorphism_check(
    h: &GrammarHom,
    g1: &Grammar,
    g2: &Grammar,
) -> Result<bool, GrammarHomError> {
    for p in g1.productions() {
        let image_name = h
            .production_map
            .get(&p.name)
            .ok_or_else(|| GrammarHomError::MissingProductionMapping(p.name.clone()))?;
        let image = g2
            .production(image_name)
            .ok_or_else(|| GrammarHomError::UnknownProduction(image_name.clone()))?;
        if p.lhs != image.lhs {
            return Ok(false);
        }
        let component = h
            .components
            .get(&p.name)
            .ok_or_else(|| GrammarHomError::MissingComponent(p.name.clone()))?;
        let ok = is_homomorphism(&p.rhs, &image.rhs, component)
            .map_err(|e| GrammarHomError::Component(p.name.clone(), e))?;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff `h` is additionally injective on productions with injective
/// components (a grammar monomorphism).
pub fn grammar_monomorphism_check(
    h: &GrammarHom,
    g1: &Grammar,
    g2: &Grammar,
) -> Result<bool, GrammarHomError> {
    if !grammar_homomorphism_check(h, g1, g2)? {
        return Ok(false);
    }
    let images: BTreeSet<&ProductionName> = h.production_map.values().collect();
    if images.len() != h.production_map.len() {
        return Ok(false);
    }
    Ok(h.components.values().all(|m| m.is_injective()))
}
