//! Canonical string-graph families and the grammars that generate them.
//!
//! The families are built directly, vertex by vertex, so tests can use them
//! as oracles independent of the grammar and decoding machinery:
//!
//! * `star(n)`: a hub node with `n - 1` leaf nodes, each connected to the hub
//!   through a single wire vertex; every node has one open output wire.
//! * `complete(n)`: `n` nodes, every pair joined through a single wire
//!   vertex; one open output wire per node. `complete_encoded(n)` is the
//!   variant with one encoding edge per pair instead of the wire.
//! * `complete_bipartite(m, n)`: `m` green nodes each joined to all `n` red
//!   nodes through single-wire connections; greens carry one open input wire,
//!   reds one open output wire.
//! * `bialgebra_normal(m, n)`: the bialgebra normal form with `m` inputs
//!   into one red node, an internal wire to one green node, and `n` outputs.
//!
//! Edge orientation follows one convention throughout: internal wires point
//! source node -> wire -> target node, open input wires point into their
//! node, open output wires point out of it.

use alloc::format;
use alloc::vec::Vec;

use crate::alphabet::{Alphabets, AlphabetsBuilder, Direction, Mode};
use crate::decode::{DecodingRule, DecodingSystem};
use crate::grammar::{Grammar, Production, ProductionName};
use crate::graph::{
    ConnectionInstruction, EdgeLabel, ExtendedGraph, LabeledGraph, VertexId, VertexLabel,
};

pub const NODE: &str = "n";
pub const GREEN: &str = "g";
pub const RED: &str = "r";
pub const WIRE: &str = "w";
pub const EDGE: &str = "e";
pub const ENCODING: &str = "a";

/// The label universe shared by the whole example corpus.
pub fn corpus_alphabets(mode: Mode) -> Alphabets {
    AlphabetsBuilder::new(mode)
        .nodes([NODE, GREEN, RED])
        .wires([WIRE])
        .nonterminals(["S", "X", "Y"])
        .edges([EDGE])
        .encodings([ENCODING])
        .build()
}

fn vid(s: &str) -> VertexId {
    VertexId::new(s)
}

fn vl(s: &str) -> VertexLabel {
    VertexLabel::new(s)
}

fn el(s: &str) -> EdgeLabel {
    EdgeLabel::new(s)
}

struct Builder {
    g: LabeledGraph,
}

impl Builder {
    fn new(mode: Mode) -> Self {
        Builder { g: LabeledGraph::new(mode) }
    }

    fn vertex(&mut self, id: &str, label: &str) -> &mut Self {
        self.g.add_vertex(vid(id), vl(label)).expect("fresh vertex");
        self
    }

    fn edge(&mut self, s: &str, l: &str, t: &str) -> &mut Self {
        self.g.add_edge(vid(s), el(l), vid(t)).expect("valid edge");
        self
    }
}

/// The star string graph `sS_n` (hub plus `n - 1` leaves), `n >= 1`.
pub fn star(n: usize, mode: Mode) -> LabeledGraph {
    assert!(n >= 1);
    let mut b = Builder::new(mode);
    b.vertex("h", NODE).vertex("ow0", WIRE).edge("h", EDGE, "ow0");
    for i in 1..n {
        b.vertex(&format!("l{i}"), NODE)
            .vertex(&format!("iw{i}"), WIRE)
            .vertex(&format!("ow{i}"), WIRE)
            .edge("h", EDGE, &format!("iw{i}"))
            .edge(&format!("iw{i}"), EDGE, &format!("l{i}"))
            .edge(&format!("l{i}"), EDGE, &format!("ow{i}"));
    }
    b.g
}

/// The complete string graph `sK_n`: every pair of nodes joined through one
/// wire vertex, one open output wire per node.
pub fn complete(n: usize, mode: Mode) -> LabeledGraph {
    assert!(n >= 1);
    let mut b = Builder::new(mode);
    for i in 1..=n {
        b.vertex(&format!("v{i}"), NODE)
            .vertex(&format!("ow{i}"), WIRE)
            .edge(&format!("v{i}"), EDGE, &format!("ow{i}"));
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            b.vertex(&format!("w{i}_{j}"), WIRE)
                .edge(&format!("v{i}"), EDGE, &format!("w{i}_{j}"))
                .edge(&format!("w{i}_{j}"), EDGE, &format!("v{j}"));
        }
    }
    b.g
}

/// The encoded complete graph: one encoding edge per node pair.
pub fn complete_encoded(n: usize, mode: Mode) -> LabeledGraph {
    assert!(n >= 1);
    let mut b = Builder::new(mode);
    for i in 1..=n {
        b.vertex(&format!("v{i}"), NODE)
            .vertex(&format!("ow{i}"), WIRE)
            .edge(&format!("v{i}"), EDGE, &format!("ow{i}"));
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            b.edge(&format!("v{i}"), ENCODING, &format!("v{j}"));
        }
    }
    b.g
}

/// The complete bipartite string graph `sK_{m,n}`: `m` greens (one open
/// input wire each) joined to `n` reds (one open output wire each).
pub fn complete_bipartite(m: usize, n: usize, mode: Mode) -> LabeledGraph {
    assert!(m >= 1 && n >= 1);
    let mut b = Builder::new(mode);
    for i in 1..=m {
        b.vertex(&format!("g{i}"), GREEN)
            .vertex(&format!("iw{i}"), WIRE)
            .edge(&format!("iw{i}"), EDGE, &format!("g{i}"));
    }
    for j in 1..=n {
        b.vertex(&format!("r{j}"), RED)
            .vertex(&format!("ow{j}"), WIRE)
            .edge(&format!("r{j}"), EDGE, &format!("ow{j}"));
    }
    for i in 1..=m {
        for j in 1..=n {
            b.vertex(&format!("w{i}_{j}"), WIRE)
                .edge(&format!("g{i}"), EDGE, &format!("w{i}_{j}"))
                .edge(&format!("w{i}_{j}"), EDGE, &format!("r{j}"));
        }
    }
    b.g
}

/// Encoded variant of `sK_{m,n}`: one green-to-red encoding edge per pair.
pub fn complete_bipartite_encoded(m: usize, n: usize, mode: Mode) -> LabeledGraph {
    assert!(m >= 1 && n >= 1);
    let mut b = Builder::new(mode);
    for i in 1..=m {
        b.vertex(&format!("g{i}"), GREEN)
            .vertex(&format!("iw{i}"), WIRE)
            .edge(&format!("iw{i}"), EDGE, &format!("g{i}"));
    }
    for j in 1..=n {
        b.vertex(&format!("r{j}"), RED)
            .vertex(&format!("ow{j}"), WIRE)
            .edge(&format!("r{j}"), EDGE, &format!("ow{j}"));
    }
    for i in 1..=m {
        for j in 1..=n {
            b.edge(&format!("g{i}"), ENCODING, &format!("r{j}"));
        }
    }
    b.g
}

/// The bialgebra normal form `sS_{m,n}`: `m` inputs into a red node, an
/// internal wire to a green node, `n` outputs out of it.
pub fn bialgebra_normal(m: usize, n: usize, mode: Mode) -> LabeledGraph {
    assert!(m >= 1 && n >= 1);
    let mut b = Builder::new(mode);
    b.vertex("R", RED).vertex("G", GREEN).vertex("mw", WIRE);
    b.edge("R", EDGE, "mw").edge("mw", EDGE, "G");
    for i in 1..=m {
        b.vertex(&format!("iw{i}"), WIRE).edge(&format!("iw{i}"), EDGE, "R");
    }
    for j in 1..=n {
        b.vertex(&format!("ow{j}"), WIRE).edge("G", EDGE, &format!("ow{j}"));
    }
    b.g
}

/// The wire decoding system: every (encoding, node, node) triple expands to
/// an endpoint-wire-endpoint fragment. Total over the corpus alphabets.
pub fn wire_decoding(a: &Alphabets) -> DecodingSystem {
    let mut t = DecodingSystem::new();
    for alpha in &a.encoding_labels {
        for s in &a.node_labels {
            for tl in &a.node_labels {
                let mut rhs = LabeledGraph::new(a.mode);
                rhs.add_vertex(vid("p"), s.clone()).unwrap();
                rhs.add_vertex(vid("q"), tl.clone()).unwrap();
                rhs.add_vertex(vid("mw"), vl(WIRE)).unwrap();
                rhs.add_edge(vid("p"), el(EDGE), vid("mw")).unwrap();
                rhs.add_edge(vid("mw"), el(EDGE), vid("q")).unwrap();
                t.add_rule(DecodingRule {
                    encoding: alpha.clone(),
                    source_label: s.clone(),
                    target_label: tl.clone(),
                    rhs,
                    source_endpoint: vid("p"),
                    target_endpoint: vid("q"),
                });
            }
        }
    }
    t
}

struct ProductionBuilder {
    rhs: ExtendedGraph,
    mode: Mode,
}

impl ProductionBuilder {
    fn new(mode: Mode) -> Self {
        ProductionBuilder { rhs: ExtendedGraph::new(mode), mode }
    }

    fn vertex(mut self, id: &str, label: &str) -> Self {
        self.rhs.graph.add_vertex(vid(id), vl(label)).expect("fresh vertex");
        self
    }

    fn edge(mut self, s: &str, l: &str, t: &str) -> Self {
        self.rhs.graph.add_edge(vid(s), el(l), vid(t)).expect("valid edge");
        self
    }

    fn conn(mut self, sigma: &str, beta: &str, gamma: &str, target: &str, d: Direction) -> Self {
        self.rhs
            .add_connection(ConnectionInstruction::new(
                self.mode,
                vl(sigma),
                el(beta),
                el(gamma),
                vid(target),
                d,
            ))
            .expect("target exists");
        self
    }

    fn build(self, name: &str, lhs: &str) -> Production {
        Production { name: ProductionName::new(name), lhs: vl(lhs), rhs: self.rhs }
    }
}

/// The star grammar: `init` emits the hub and a generator nonterminal kept
/// adjacent to the hub; `grow` adds one leaf wired to the hub; `stop` erases
/// the generator. Language: `{ sS_n | n >= 1 }`.
pub fn star_grammar(mode: Mode) -> Grammar {
    let a = corpus_alphabets(mode);
    let mut g = Grammar::new(a, vl("S"));
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("h", NODE)
            .vertex("ow0", WIRE)
            .vertex("t", "X")
            .edge("h", EDGE, "ow0")
            .edge("h", EDGE, "t")
            .build("init", "S"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("iw", WIRE)
            .vertex("l", NODE)
            .vertex("ow", WIRE)
            .vertex("t", "X")
            .edge("iw", EDGE, "l")
            .edge("l", EDGE, "ow")
            .conn(NODE, EDGE, EDGE, "iw", Direction::In)
            .conn(NODE, EDGE, EDGE, "t", Direction::In)
            .build("grow", "X"),
    )
    .unwrap();
    g.add_production(ProductionBuilder::new(mode).build("stop", "X")).unwrap();
    g
}

/// The complete grammar: each `grow` step adds one node that receives an
/// encoding edge from every existing node. Language: encoded `K_n` graphs,
/// which decode to `{ sK_n | n >= 1 }`.
pub fn complete_grammar(mode: Mode) -> Grammar {
    let a = corpus_alphabets(mode);
    let mut g = Grammar::new(a, vl("S"));
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("v", NODE)
            .vertex("ow", WIRE)
            .vertex("t", "X")
            .edge("v", EDGE, "ow")
            .edge("v", EDGE, "t")
            .build("init", "S"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("v", NODE)
            .vertex("ow", WIRE)
            .vertex("t", "X")
            .edge("v", EDGE, "ow")
            .edge("v", EDGE, "t")
            .conn(NODE, EDGE, ENCODING, "v", Direction::In)
            .conn(NODE, EDGE, EDGE, "t", Direction::In)
            .build("grow", "X"),
    )
    .unwrap();
    g.add_production(ProductionBuilder::new(mode).build("stop", "X")).unwrap();
    g
}

/// Interface grammar of the complete-to-star schema: per production, the
/// generator nonterminal plus one isolated wire vertex for the output wire.
pub fn local_complement_interface_grammar(mode: Mode) -> Grammar {
    let a = corpus_alphabets(mode);
    let mut g = Grammar::new(a, vl("S"));
    g.add_production(
        ProductionBuilder::new(mode).vertex("t", "X").vertex("wo", WIRE).build("init", "S"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode).vertex("t", "X").vertex("wo", WIRE).build("grow", "X"),
    )
    .unwrap();
    g.add_production(ProductionBuilder::new(mode).build("stop", "X")).unwrap();
    g
}

/// Left grammar of the bialgebra schema: greens first (each with an open
/// input wire), then reds (each with an open output wire and encoding edges
/// from every green). Language decodes to `{ sK_{m,n} | m, n >= 1 }`.
pub fn bialgebra_left_grammar(mode: Mode) -> Grammar {
    let a = corpus_alphabets(mode);
    let mut g = Grammar::new(a, vl("S"));
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("gv", GREEN)
            .vertex("iw", WIRE)
            .vertex("t", "X")
            .edge("iw", EDGE, "gv")
            .edge("gv", EDGE, "t")
            .build("init", "S"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("gv", GREEN)
            .vertex("iw", WIRE)
            .vertex("t", "X")
            .edge("iw", EDGE, "gv")
            .edge("gv", EDGE, "t")
            .conn(GREEN, EDGE, EDGE, "t", Direction::In)
            .build("grow", "X"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("t2", "Y")
            .conn(GREEN, EDGE, EDGE, "t2", Direction::In)
            .build("switch", "X"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("rv", RED)
            .vertex("ow", WIRE)
            .vertex("t2", "Y")
            .edge("rv", EDGE, "ow")
            .conn(GREEN, EDGE, ENCODING, "rv", Direction::In)
            .conn(GREEN, EDGE, EDGE, "t2", Direction::In)
            .build("emit", "Y"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("rv", RED)
            .vertex("ow", WIRE)
            .edge("rv", EDGE, "ow")
            .conn(GREEN, EDGE, ENCODING, "rv", Direction::In)
            .build("last", "Y"),
    )
    .unwrap();
    g
}

/// Right grammar of the bialgebra schema: the red/green pair is emitted up
/// front; `grow` adds input wires into the red node, `emit`/`last` add
/// output wires out of the green node. Language: `{ sS_{m,n} | m, n >= 1 }`.
pub fn bialgebra_right_grammar(mode: Mode) -> Grammar {
    let a = corpus_alphabets(mode);
    let mut g = Grammar::new(a, vl("S"));
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("rn", RED)
            .vertex("gn", GREEN)
            .vertex("mw", WIRE)
            .vertex("iw", WIRE)
            .vertex("t", "X")
            .edge("iw", EDGE, "rn")
            .edge("rn", EDGE, "mw")
            .edge("mw", EDGE, "gn")
            .edge("t", EDGE, "rn")
            .edge("gn", EDGE, "t")
            .build("init", "S"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("iw", WIRE)
            .vertex("t", "X")
            .conn(RED, EDGE, EDGE, "iw", Direction::Out)
            .conn(RED, EDGE, EDGE, "t", Direction::Out)
            .conn(GREEN, EDGE, EDGE, "t", Direction::In)
            .build("grow", "X"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("t2", "Y")
            .conn(GREEN, EDGE, EDGE, "t2", Direction::In)
            .build("switch", "X"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("ow", WIRE)
            .vertex("t2", "Y")
            .conn(GREEN, EDGE, EDGE, "ow", Direction::In)
            .conn(GREEN, EDGE, EDGE, "t2", Direction::In)
            .build("emit", "Y"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("ow", WIRE)
            .conn(GREEN, EDGE, EDGE, "ow", Direction::In)
            .build("last", "Y"),
    )
    .unwrap();
    g
}

/// Interface grammar of the bialgebra schema.
pub fn bialgebra_interface_grammar(mode: Mode) -> Grammar {
    let a = corpus_alphabets(mode);
    let mut g = Grammar::new(a, vl("S"));
    g.add_production(
        ProductionBuilder::new(mode).vertex("t", "X").vertex("wi", WIRE).build("init", "S"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode).vertex("t", "X").vertex("wi", WIRE).build("grow", "X"),
    )
    .unwrap();
    g.add_production(ProductionBuilder::new(mode).vertex("t2", "Y").build("switch", "X")).unwrap();
    g.add_production(
        ProductionBuilder::new(mode).vertex("t2", "Y").vertex("wo", WIRE).build("emit", "Y"),
    )
    .unwrap();
    g.add_production(ProductionBuilder::new(mode).vertex("wo", WIRE).build("last", "Y")).unwrap();
    g
}

/// The host grammar for grammar-level rewriting: each generation step grows
/// both an encoded complete graph over plain nodes and the green part of an
/// encoded bipartite graph, sharing one counter. The language decodes to
/// `{ sK_m + sK_{m,n} }` (disjoint components). Both the complete-to-star
/// and the bialgebra rewrite rules match into it.
pub fn big_host_grammar(mode: Mode) -> Grammar {
    let a = corpus_alphabets(mode);
    let mut g = Grammar::new(a, vl("S"));
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("v", NODE)
            .vertex("vw", WIRE)
            .vertex("gv", GREEN)
            .vertex("iw", WIRE)
            .vertex("t", "X")
            .edge("v", EDGE, "vw")
            .edge("v", EDGE, "t")
            .edge("iw", EDGE, "gv")
            .edge("gv", EDGE, "t")
            .build("init", "S"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("v", NODE)
            .vertex("vw", WIRE)
            .vertex("gv", GREEN)
            .vertex("iw", WIRE)
            .vertex("t", "X")
            .edge("v", EDGE, "vw")
            .edge("v", EDGE, "t")
            .edge("iw", EDGE, "gv")
            .edge("gv", EDGE, "t")
            .conn(NODE, EDGE, ENCODING, "v", Direction::In)
            .conn(NODE, EDGE, EDGE, "t", Direction::In)
            .conn(GREEN, EDGE, EDGE, "t", Direction::In)
            .build("grow", "X"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("t2", "Y")
            .conn(GREEN, EDGE, EDGE, "t2", Direction::In)
            .build("switch", "X"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("rv", RED)
            .vertex("ow", WIRE)
            .vertex("t2", "Y")
            .edge("rv", EDGE, "ow")
            .conn(GREEN, EDGE, ENCODING, "rv", Direction::In)
            .conn(GREEN, EDGE, EDGE, "t2", Direction::In)
            .build("emit", "Y"),
    )
    .unwrap();
    g.add_production(
        ProductionBuilder::new(mode)
            .vertex("rv", RED)
            .vertex("ow", WIRE)
            .edge("rv", EDGE, "ow")
            .conn(GREEN, EDGE, ENCODING, "rv", Direction::In)
            .build("last", "Y"),
    )
    .unwrap();
    g
}

/// Disjoint union with suffixed identifiers from the right graph on clashes.
pub fn disjoint_union(left: &LabeledGraph, right: &LabeledGraph) -> LabeledGraph {
    assert_eq!(left.mode(), right.mode());
    let mut out = left.clone();
    let mut renaming: alloc::collections::BTreeMap<VertexId, VertexId> =
        alloc::collections::BTreeMap::new();
    for v in right.vertices() {
        let mut fresh = v.clone();
        let mut k = 1usize;
        while out.contains_vertex(&fresh) {
            fresh = v.suffixed('+', k);
            k += 1;
        }
        out.add_vertex(fresh.clone(), right.label(v).unwrap().clone()).unwrap();
        renaming.insert(v.clone(), fresh);
    }
    for e in right.edges() {
        out.add_edge(renaming[&e.source].clone(), e.label.clone(), renaming[&e.target].clone())
            .unwrap();
    }
    out
}

/// Vertex/edge counts of the families, handy for quick sanity checks.
pub fn expected_counts() -> Vec<(&'static str, usize, usize)> {
    alloc::vec![
        ("sS_4", 11, 10),
        ("sK_4", 14, 16),
        ("sK_{3,2}", 16, 17),
        ("sS_{3,2}", 8, 7),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stringgraph::{classify, io_sets, Classification};

    #[test]
    fn family_counts() {
        let s4 = star(4, Mode::Directed);
        assert_eq!((s4.vertex_count(), s4.edge_count()), (11, 10));
        let k4 = complete(4, Mode::Directed);
        assert_eq!((k4.vertex_count(), k4.edge_count()), (14, 16));
        let k32 = complete_bipartite(3, 2, Mode::Directed);
        assert_eq!((k32.vertex_count(), k32.edge_count()), (16, 17));
        let s32 = bialgebra_normal(3, 2, Mode::Directed);
        assert_eq!((s32.vertex_count(), s32.edge_count()), (8, 7));
    }

    #[test]
    fn families_are_string_graphs() {
        let a = corpus_alphabets(Mode::Directed);
        for g in [
            star(1, Mode::Directed),
            star(4, Mode::Directed),
            complete(4, Mode::Directed),
            complete_bipartite(3, 2, Mode::Directed),
            bialgebra_normal(3, 2, Mode::Directed),
        ] {
            assert_eq!(classify(&g, &a), Classification::StringGraph);
        }
        assert_eq!(
            classify(&complete_encoded(3, Mode::Directed), &a),
            Classification::EncodedStringGraph
        );
    }

    #[test]
    fn bipartite_io_convention() {
        let a = corpus_alphabets(Mode::Directed);
        let g = complete_bipartite(3, 2, Mode::Directed);
        let (inputs, outputs) = io_sets(&g, &a);
        assert_eq!(inputs.len(), 3);
        assert_eq!(outputs.len(), 2);
        let s = bialgebra_normal(3, 2, Mode::Directed);
        let (inputs, outputs) = io_sets(&s, &a);
        assert_eq!(inputs.len(), 3);
        assert_eq!(outputs.len(), 2);
    }

    #[test]
    fn complete_vs_star_not_isomorphic() {
        // Degree sequences differ already at n = 3.
        let k3 = complete(3, Mode::Directed);
        let s3 = star(3, Mode::Directed);
        assert!(crate::morphism::are_isomorphic(&k3, &s3).is_none());
    }

    #[test]
    fn corpus_grammars_validate() {
        for g in [
            star_grammar(Mode::Directed),
            complete_grammar(Mode::Directed),
            bialgebra_left_grammar(Mode::Directed),
            bialgebra_right_grammar(Mode::Directed),
            bialgebra_interface_grammar(Mode::Directed),
            local_complement_interface_grammar(Mode::Directed),
            big_host_grammar(Mode::Directed),
        ] {
            let report = crate::grammar::validate_grammar(&g);
            assert!(report.is_empty(), "unexpected violations: {report:?}");
            assert!(g.is_boundary());
        }
    }
}
