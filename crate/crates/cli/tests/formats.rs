//! Round-trips and syntax diagnostics for the text formats.

use std::path::Path;

use proptest::prelude::*;
use sgraft_cli::formats::{
    parse_dec, parse_gg, parse_rr, parse_script, parse_sg, serialize_dec, serialize_gg,
    serialize_rr, serialize_script, serialize_sg, GraphFile,
};
use sgraft_cli::workspace;
use sgraft_core::alphabet::{Direction, Mode};
use sgraft_core::families;
use sgraft_core::graph::{
    ConnectionInstruction, EdgeLabel, ExtendedGraph, LabeledGraph, VertexId, VertexLabel,
};

fn corpus(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

#[test]
fn corpus_graph_files_round_trip() {
    for name in ["sk3.sg", "sk4.sg", "sk6.sg", "ek4.sg", "sk32.sg", "ss4.sg"] {
        let text = std::fs::read_to_string(corpus(name)).unwrap();
        let parsed = parse_sg(&text, Mode::Directed).unwrap_or_else(|e| panic!("{name}: {e}"));
        let reparsed = parse_sg(&serialize_sg(&parsed), Mode::Directed).unwrap();
        assert_eq!(parsed, reparsed, "{name} does not round-trip");
    }
}

#[test]
fn corpus_grammar_files_round_trip_and_match_the_library() {
    let expectations = [
        ("star.gg", families::star_grammar(Mode::Directed)),
        ("complete.gg", families::complete_grammar(Mode::Directed)),
        ("bialg_left.gg", families::bialgebra_left_grammar(Mode::Directed)),
        ("bialg_right.gg", families::bialgebra_right_grammar(Mode::Directed)),
        ("big_host.gg", families::big_host_grammar(Mode::Directed)),
    ];
    for (name, expected) in expectations {
        let text = std::fs::read_to_string(corpus(name)).unwrap();
        let parsed = parse_gg(&text, Mode::Directed).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parsed.grammar, expected, "{name} drifted from the library constructor");
        let reparsed = parse_gg(&serialize_gg(&parsed), Mode::Directed).unwrap();
        assert_eq!(parsed, reparsed);
    }
}

#[test]
fn corpus_decoding_round_trips_and_matches_the_library() {
    let a = families::corpus_alphabets(Mode::Directed);
    let text = std::fs::read_to_string(corpus("wire.dec")).unwrap();
    let parsed = parse_dec(&text, Mode::Directed).unwrap();
    assert_eq!(parsed.system, families::wire_decoding(&a));
    let reparsed = parse_dec(&serialize_dec(&parsed), Mode::Directed).unwrap();
    assert_eq!(parsed, reparsed);
}

#[test]
fn corpus_scripts_and_rules_round_trip() {
    for name in ["lc_n1.script", "lc_n4.script", "mn32.script"] {
        let text = std::fs::read_to_string(corpus(name)).unwrap();
        let parsed = parse_script(&text).unwrap();
        assert_eq!(parsed, parse_script(&serialize_script(&parsed)).unwrap());
    }
    for name in ["sk4_rule.rr", "sk32_rule.rr"] {
        let text = std::fs::read_to_string(corpus(name)).unwrap();
        let parsed = parse_rr(&text, Mode::Directed).unwrap();
        let reparsed = parse_rr(&serialize_rr(&parsed), Mode::Directed).unwrap();
        assert_eq!(parsed.span.left, reparsed.span.left);
        assert_eq!(parsed.span.interface, reparsed.span.interface);
        assert_eq!(parsed.span.right, reparsed.span.right);
        assert_eq!(parsed.span.to_left, reparsed.span.to_left);
        assert_eq!(parsed.span.to_right, reparsed.span.to_right);
    }
}

#[test]
fn pattern_bundles_load_and_validate() {
    for name in ["localcomp.pat", "bialg.pat"] {
        let loaded = workspace::load_pattern(&corpus(name), Mode::Directed).unwrap();
        let report = sgraft_core::schema::validate_besg_rule(&loaded.rule, 4);
        assert!(report.is_empty(), "{name}: {report:?}");
    }
}

#[test]
fn besg_bundles_load_and_validate() {
    for name in ["star.besg", "complete.besg", "big_host.besg"] {
        let loaded = workspace::load_besg(&corpus(name), Mode::Directed).unwrap();
        let report = sgraft_core::besg::validate_besg(&loaded.besg, 5);
        assert!(report.accepted(), "{name}: {report}");
    }
}

#[test]
fn syntax_errors_carry_positions() {
    let bad = "sgraft-format 1\ngraph g {\n  vertex v : n;\n  edge v -e-> missing;\n}\n";
    let err = parse_sg(bad, Mode::Directed).unwrap_err();
    assert_eq!(err.pos.line, 4, "error should point at the edge line: {err}");

    let undeclared = "sgraft-format 1\ngraph g {\n  labels { node: n; wire: w; nonterminal: S; edge: e; encoding: a }\n  vertex v : bogus;\n}\n";
    let err = parse_sg(undeclared, Mode::Directed).unwrap_err();
    assert!(format!("{err}").contains("bogus"), "{err}");

    let noheader = "graph g { }\n";
    assert!(parse_sg(noheader, Mode::Directed).is_err());

    let dup = "sgraft-format 1\ngraph g {\n  vertex v : n;\n  vertex v : n;\n}\n";
    let err = parse_sg(dup, Mode::Directed).unwrap_err();
    assert_eq!(err.pos.line, 4);
}

fn arbitrary_graph_file() -> impl Strategy<Value = GraphFile> {
    let labels = ["n", "g", "r", "w", "S", "X"];
    let edge_labels = ["e", "a"];
    (1..=6usize, proptest::collection::vec((0..6usize, 0..6usize, 0..2usize), 0..10), any::<bool>())
        .prop_map(move |(n, edges, directed)| {
            let mode = if directed { Mode::Directed } else { Mode::Undirected };
            let mut g = LabeledGraph::new(mode);
            for i in 0..n {
                g.add_vertex(VertexId::new(format!("v{i}")), VertexLabel::new(labels[i % labels.len()]))
                    .unwrap();
            }
            let mut eg = ExtendedGraph::plain(g);
            for (s, t, l) in edges {
                if s != t && s < n && t < n {
                    let _ = eg.graph.add_edge(
                        VertexId::new(format!("v{s}")),
                        EdgeLabel::new(edge_labels[l]),
                        VertexId::new(format!("v{t}")),
                    );
                }
            }
            let _ = eg.add_connection(ConnectionInstruction::new(
                mode,
                VertexLabel::new("n"),
                EdgeLabel::new("e"),
                EdgeLabel::new("a"),
                VertexId::new("v0"),
                Direction::Out,
            ));
            GraphFile { name: "arb".to_string(), graph: eg, alphabets: None }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn graph_serialization_round_trips(f in arbitrary_graph_file()) {
        let text = serialize_sg(&f);
        let parsed = parse_sg(&text, f.graph.mode()).unwrap();
        prop_assert_eq!(&parsed, &f);
        // Serialization is canonical: a second round is byte-identical.
        prop_assert_eq!(serialize_sg(&parsed), text);
    }
}
