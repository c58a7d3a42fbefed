//! Decoding normal forms, the encoded/decoded biconditional, and the
//! contraction inverse, on both the corpus families and a seeded random
//! corpus of encoded string graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgraft_core::decode::{decode, encode_preimages, DecodingRule, DecodingSystem};
use sgraft_core::families;
use sgraft_core::graph::{EdgeLabel, LabeledGraph, VertexId, VertexLabel};
use sgraft_core::morphism::are_isomorphic;
use sgraft_core::stringgraph::{classify, io_sets, Classification};
use sgraft_core::{Alphabets, Mode};

fn abc() -> Alphabets {
    families::corpus_alphabets(Mode::Directed)
}

fn vid(s: &str) -> VertexId {
    VertexId::new(s)
}

/// Single-redex decode used as the independent order-sensitivity oracle:
/// expands exactly one encoding edge.
fn decode_one(g: &LabeledGraph, t: &DecodingSystem, a: &Alphabets, which: usize) -> LabeledGraph {
    let redexes: Vec<_> = g.edges().filter(|e| a.is_encoding(&e.label)).cloned().collect();
    let edge = &redexes[which];
    let mut only = g.clone();
    for e in &redexes {
        if e != edge {
            only.remove_edge(e);
        }
    }
    let mut expanded = decode(&only, t, a).unwrap();
    for e in &redexes {
        if e != edge {
            expanded.add_edge(e.source.clone(), e.label.clone(), e.target.clone()).unwrap();
        }
    }
    expanded
}

/// Iterated single-redex decoding with a caller-chosen order.
fn decode_in_order(
    g: &LabeledGraph,
    t: &DecodingSystem,
    a: &Alphabets,
    rng: &mut ChaCha8Rng,
) -> LabeledGraph {
    let mut cur = g.clone();
    loop {
        let n = cur.edges().filter(|e| a.is_encoding(&e.label)).count();
        if n == 0 {
            return cur;
        }
        let pick = rng.gen_range(0..n);
        cur = decode_one(&cur, t, a, pick);
    }
}

/// Random encoded string graph: a few nodes with open wires, wire chains
/// between some pairs, plus encoding edges between node pairs.
fn random_encoded(rng: &mut ChaCha8Rng, max_vertices: usize) -> LabeledGraph {
    let node_labels = [families::NODE, families::GREEN, families::RED];
    let mut g = LabeledGraph::new(Mode::Directed);
    let nodes = rng.gen_range(2..=4usize);
    for i in 0..nodes {
        let label = node_labels[rng.gen_range(0..node_labels.len())];
        g.add_vertex(vid(&format!("v{i}")), VertexLabel::new(label)).unwrap();
    }
    let mut next_wire = 0usize;
    while g.vertex_count() < max_vertices {
        let choice = rng.gen_range(0..3u8);
        match choice {
            // Open wire on a random node.
            0 => {
                let n = rng.gen_range(0..nodes);
                let w = format!("w{next_wire}");
                next_wire += 1;
                g.add_vertex(vid(&w), VertexLabel::new(families::WIRE)).unwrap();
                if rng.gen_bool(0.5) {
                    g.add_edge(vid(&format!("v{n}")), EdgeLabel::new(families::EDGE), vid(&w))
                        .unwrap();
                } else {
                    g.add_edge(vid(&w), EdgeLabel::new(families::EDGE), vid(&format!("v{n}")))
                        .unwrap();
                }
            }
            // Internal wire between two distinct nodes.
            1 => {
                let s = rng.gen_range(0..nodes);
                let t = rng.gen_range(0..nodes);
                if s == t {
                    continue;
                }
                let w = format!("w{next_wire}");
                next_wire += 1;
                g.add_vertex(vid(&w), VertexLabel::new(families::WIRE)).unwrap();
                g.add_edge(vid(&format!("v{s}")), EdgeLabel::new(families::EDGE), vid(&w)).unwrap();
                g.add_edge(vid(&w), EdgeLabel::new(families::EDGE), vid(&format!("v{t}"))).unwrap();
            }
            // Encoding edge between two distinct nodes.
            _ => {
                let s = rng.gen_range(0..nodes);
                let t = rng.gen_range(0..nodes);
                if s == t {
                    continue;
                }
                let _ = g.add_edge(
                    vid(&format!("v{s}")),
                    EdgeLabel::new(families::ENCODING),
                    vid(&format!("v{t}")),
                );
            }
        }
    }
    g
}

#[test]
fn random_corpus_decoding_terminates_and_is_order_independent() {
    let a = abc();
    let t = families::wire_decoding(&a);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5647_0001);
    let mut checked = 0;
    while checked < 200 {
        let size = rng.gen_range(4..=10usize);
        let g = random_encoded(&mut rng, size);
        if !classify(&g, &a).is_encoded_string_graph() {
            continue;
        }
        checked += 1;
        let simultaneous = decode(&g, &t, &a).unwrap();
        assert!(!simultaneous.edges().any(|e| a.is_encoding(&e.label)), "decode must terminate");
        for _ in 0..3 {
            let ordered = decode_in_order(&g, &t, &a, &mut rng);
            assert!(
                are_isomorphic(&simultaneous, &ordered).is_some(),
                "redex orders disagree on iteration {checked}"
            );
        }
    }
}

#[test]
fn encoded_iff_decoded_is_string_graph() {
    // Both directions of the biconditional, on valid and broken graphs.
    let a = abc();
    let t = families::wire_decoding(&a);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5647_0002);
    let mut seen_bad = 0usize;
    for i in 0..200 {
        let size = rng.gen_range(4..=10usize);
        let mut g = random_encoded(&mut rng, size);
        // Mutate some instances into invalid territory: an extra edge into
        // an already-busy wire vertex.
        if i % 3 == 0 {
            let wire = g
                .labels()
                .iter()
                .find(|(_, l)| l.as_str() == families::WIRE)
                .map(|(v, _)| v.clone());
            let node = g
                .labels()
                .iter()
                .find(|(v, l)| l.as_str() != families::WIRE && g.in_degree(v) == 0 || l.as_str() == families::NODE)
                .map(|(v, _)| v.clone());
            if let (Some(w), Some(n)) = (wire, node) {
                if g.in_degree(&w) >= 1 && !g.has_edge(&n, &EdgeLabel::new(families::EDGE), &w) {
                    let _ = g.add_edge(n, EdgeLabel::new(families::EDGE), w);
                }
            }
        }
        if g.edges().any(|e| {
            a.is_encoding(&e.label)
                && (!a.is_node(g.label(&e.source).unwrap()) || !a.is_node(g.label(&e.target).unwrap()))
        }) {
            continue; // decode not defined
        }
        let decoded = decode(&g, &t, &a).unwrap();
        let lhs = classify(&g, &a).is_encoded_string_graph();
        let rhs = classify(&decoded, &a).is_string_graph();
        assert_eq!(lhs, rhs, "biconditional failed on instance {i}");
        if !lhs {
            seen_bad += 1;
        }
    }
    assert!(seen_bad > 10, "mutation should produce some invalid instances, saw {seen_bad}");
}

#[test]
fn preimage_contraction_inverts_decoding() {
    let a = abc();
    let t = families::wire_decoding(&a);
    for h in [
        families::complete(3, Mode::Directed),
        families::star(3, Mode::Directed),
        families::complete_bipartite(2, 2, Mode::Directed),
        families::bialgebra_normal(2, 2, Mode::Directed),
    ] {
        for h0 in encode_preimages(&h, &t, &a, None) {
            let back = decode(&h0, &t, &a).unwrap();
            assert!(are_isomorphic(&back, &h).is_some(), "preimage fails the round trip");
        }
    }
}

#[test]
fn preimages_before_dedup_count_for_sk3() {
    // sK_3 has three internal wires; every subset of them contracts, giving
    // 2^3 candidates. The directed orientation convention breaks the
    // triangle symmetry, so all eight classes survive deduplication.
    let a = abc();
    let t = families::wire_decoding(&a);
    let h = families::complete(3, Mode::Directed);
    let pre = encode_preimages(&h, &t, &a, None);
    assert_eq!(pre.len(), 8);
    let counts: Vec<usize> =
        pre.iter().map(|g| g.edges().filter(|e| a.is_encoding(&e.label)).count()).collect();
    assert_eq!(counts, vec![3, 2, 2, 2, 1, 1, 1, 0]);

    // The undirected reading keeps the symmetry: one class per count.
    let au = families::corpus_alphabets(Mode::Undirected);
    let tu = families::wire_decoding(&au);
    let hu = families::complete(3, Mode::Undirected);
    let pre_u = encode_preimages(&hu, &tu, &au, None);
    assert_eq!(pre_u.len(), 4);
}

#[test]
fn fragments_with_open_wires_are_never_contracted() {
    // A bogus rule whose fragment carries the open wires of sS_2: rejected
    // by validation, hence ignored by the contraction search.
    let a = abc();
    let mut rhs = LabeledGraph::new(Mode::Directed);
    rhs.add_vertex(vid("p"), VertexLabel::new(families::NODE)).unwrap();
    rhs.add_vertex(vid("q"), VertexLabel::new(families::NODE)).unwrap();
    rhs.add_vertex(vid("mw"), VertexLabel::new(families::WIRE)).unwrap();
    rhs.add_vertex(vid("ow0"), VertexLabel::new(families::WIRE)).unwrap();
    rhs.add_vertex(vid("ow1"), VertexLabel::new(families::WIRE)).unwrap();
    rhs.add_edge(vid("p"), EdgeLabel::new(families::EDGE), vid("mw")).unwrap();
    rhs.add_edge(vid("mw"), EdgeLabel::new(families::EDGE), vid("q")).unwrap();
    rhs.add_edge(vid("p"), EdgeLabel::new(families::EDGE), vid("ow0")).unwrap();
    rhs.add_edge(vid("q"), EdgeLabel::new(families::EDGE), vid("ow1")).unwrap();
    let rule = DecodingRule {
        encoding: EdgeLabel::new(families::ENCODING),
        source_label: VertexLabel::new(families::NODE),
        target_label: VertexLabel::new(families::NODE),
        rhs,
        source_endpoint: vid("p"),
        target_endpoint: vid("q"),
    };
    assert!(!rule.validate(&a).is_empty());
    let mut t = DecodingSystem::new();
    t.add_rule(rule);
    let h = families::star(2, Mode::Directed);
    let pre = encode_preimages(&h, &t, &a, None);
    assert_eq!(pre.len(), 1, "only the identity preimage is allowed");
    assert!(are_isomorphic(&pre[0], &h).is_some());
}

#[test]
fn decoding_system_validation_flags_bad_fragments() {
    let a = abc();
    // Endpoints only, no additional vertex.
    let mut rhs = LabeledGraph::new(Mode::Directed);
    rhs.add_vertex(vid("p"), VertexLabel::new(families::NODE)).unwrap();
    rhs.add_vertex(vid("q"), VertexLabel::new(families::NODE)).unwrap();
    let rule = DecodingRule {
        encoding: EdgeLabel::new(families::ENCODING),
        source_label: VertexLabel::new(families::NODE),
        target_label: VertexLabel::new(families::NODE),
        rhs: rhs.clone(),
        source_endpoint: vid("p"),
        target_endpoint: vid("q"),
    };
    let report = rule.validate(&a);
    assert!(!report.is_empty());

    // Fragment containing an encoding edge.
    let mut rhs2 = rhs;
    rhs2.add_vertex(vid("x"), VertexLabel::new(families::NODE)).unwrap();
    rhs2.add_edge(vid("p"), EdgeLabel::new(families::ENCODING), vid("x")).unwrap();
    let rule2 = DecodingRule {
        encoding: EdgeLabel::new(families::ENCODING),
        source_label: VertexLabel::new(families::NODE),
        target_label: VertexLabel::new(families::NODE),
        rhs: rhs2,
        source_endpoint: vid("p"),
        target_endpoint: vid("q"),
    };
    assert!(rule2
        .validate(&a)
        .iter()
        .any(|v| matches!(v, sgraft_core::decode::DecodingViolation::EncodingInFragment { .. })));
}

#[test]
fn wire_decoding_is_total_and_valid() {
    let a = abc();
    let t = families::wire_decoding(&a);
    let (violations, warnings) = t.validate(&a, &Default::default());
    assert!(violations.is_empty(), "{violations:?}");
    assert!(warnings.is_empty());
    assert_eq!(t.len(), 9); // one encoding label, three node labels
}

#[test]
fn undirected_decoding_of_complete_graph() {
    let a = families::corpus_alphabets(Mode::Undirected);
    let t = families::wire_decoding(&a);
    let g = families::complete_encoded(4, Mode::Undirected);
    let d = decode(&g, &t, &a).unwrap();
    assert_eq!((d.vertex_count(), d.edge_count()), (14, 16));
    assert_eq!(classify(&d, &a), Classification::StringGraph);
    let (inputs, outputs) = io_sets(&d, &a);
    // Undirected open ends count as both.
    assert_eq!(inputs.len(), 4);
    assert_eq!(inputs, outputs);
}
