//! Property tests: search exhaustiveness against brute force, isomorphism
//! as an equivalence, and confluence of independent substitutions.

use proptest::prelude::*;
use std::collections::BTreeMap;

use sgraft_core::alphabet::Direction;
use sgraft_core::families;
use sgraft_core::graph::{
    ConnectionInstruction, EdgeLabel, ExtendedGraph, LabeledGraph, VertexId, VertexLabel,
};
use sgraft_core::morphism::{
    are_isomorphic, find_monomorphisms, is_homomorphism, is_monomorphism, Morphism,
};
use sgraft_core::substitute::substitute;
use sgraft_core::Mode;

const TERMINALS: &[&str] = &["n", "g", "w"];
const EDGE_LABELS: &[&str] = &["e", "a"];

#[derive(Debug, Clone)]
struct RawGraph {
    labels: Vec<usize>,
    edges: Vec<(usize, usize, usize)>,
}

fn raw_graph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = RawGraph> {
    (1..=max_vertices).prop_flat_map(move |n| {
        let labels = proptest::collection::vec(0..TERMINALS.len(), n);
        let edges = proptest::collection::vec(
            (0..n, 0..n, 0..EDGE_LABELS.len()),
            0..=max_edges,
        );
        (labels, edges).prop_map(|(labels, edges)| RawGraph { labels, edges })
    })
}

fn realize(raw: &RawGraph, prefix: &str) -> LabeledGraph {
    let mut g = LabeledGraph::new(Mode::Directed);
    for (i, l) in raw.labels.iter().enumerate() {
        g.add_vertex(VertexId::new(format!("{prefix}{i}")), VertexLabel::new(TERMINALS[*l]))
            .unwrap();
    }
    for (s, t, l) in &raw.edges {
        if s != t {
            let _ = g.add_edge(
                VertexId::new(format!("{prefix}{s}")),
                EdgeLabel::new(EDGE_LABELS[*l]),
                VertexId::new(format!("{prefix}{t}")),
            );
        }
    }
    g
}

/// Brute-force enumeration of injective label/edge-preserving maps, the
/// oracle for the backtracking search.
fn brute_force_monos(pattern: &LabeledGraph, host: &LabeledGraph) -> Vec<Morphism> {
    let pvs: Vec<VertexId> = pattern.vertices().cloned().collect();
    let hvs: Vec<VertexId> = host.vertices().cloned().collect();
    let mut out = Vec::new();
    let mut assignment: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    fn rec(
        pvs: &[VertexId],
        hvs: &[VertexId],
        i: usize,
        pattern: &LabeledGraph,
        host: &LabeledGraph,
        assignment: &mut BTreeMap<VertexId, VertexId>,
        out: &mut Vec<Morphism>,
    ) {
        if i == pvs.len() {
            let m = Morphism::from_pairs(assignment.clone());
            let pe = ExtendedGraph::plain(pattern.clone());
            let he = ExtendedGraph::plain(host.clone());
            if is_monomorphism(&pe, &he, &m).unwrap() {
                out.push(m);
            }
            return;
        }
        for hv in hvs {
            if assignment.values().any(|v| v == hv) {
                continue;
            }
            assignment.insert(pvs[i].clone(), hv.clone());
            rec(pvs, hvs, i + 1, pattern, host, assignment, out);
            assignment.remove(&pvs[i]);
        }
    }
    rec(&pvs, &hvs, 0, pattern, host, &mut assignment, &mut out);
    out.sort_by_key(|m| m.pairs().map(|(k, v)| (k.clone(), v.clone())).collect::<Vec<_>>());
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mono_search_is_exhaustive(p in raw_graph(4, 5), h in raw_graph(8, 12)) {
        let pattern = realize(&p, "p");
        let host = realize(&h, "h");
        let found = find_monomorphisms(
            &ExtendedGraph::plain(pattern.clone()),
            &ExtendedGraph::plain(host.clone()),
        );
        let oracle = brute_force_monos(&pattern, &host);
        prop_assert_eq!(found, oracle);
    }

    #[test]
    fn isomorphism_is_reflexive_and_respects_renaming(g in raw_graph(6, 10)) {
        let a = realize(&g, "a");
        prop_assert!(are_isomorphic(&a, &a).is_some());
        let b = realize(&g, "b");
        let w = are_isomorphic(&a, &b);
        prop_assert!(w.is_some());
        // The witness really is a homomorphism with homomorphic inverse.
        let w = w.unwrap();
        let ae = ExtendedGraph::plain(a);
        let be = ExtendedGraph::plain(b);
        prop_assert!(is_homomorphism(&ae, &be, &w).unwrap());
        prop_assert!(is_homomorphism(&be, &ae, &w.inverted().unwrap()).unwrap());
    }

    #[test]
    fn isomorphism_is_symmetric_and_transitive(g in raw_graph(5, 8), h in raw_graph(5, 8)) {
        let a = realize(&g, "a");
        let b = realize(&h, "b");
        let ab = are_isomorphic(&a, &b).is_some();
        let ba = are_isomorphic(&b, &a).is_some();
        prop_assert_eq!(ab, ba);
        // Transitivity through a renamed copy of `a`.
        let c = realize(&g, "c");
        if ab {
            prop_assert!(are_isomorphic(&c, &b).is_some());
        }
    }

    #[test]
    fn substitution_is_label_stable(h in raw_graph(5, 6), d in raw_graph(3, 3)) {
        // Attach a nonterminal to the host, then substitute.
        let mut host = ExtendedGraph::plain(realize(&h, "h"));
        host.graph.add_vertex(VertexId::new("nt"), VertexLabel::new("X")).unwrap();
        host.graph
            .add_edge(VertexId::new("h0"), EdgeLabel::new("e"), VertexId::new("nt"))
            .unwrap();
        let daughter = ExtendedGraph::plain(realize(&d, "d"));
        let before: BTreeMap<_, _> = host.graph.labels().clone();
        let out = substitute(&host, &VertexId::new("nt"), &daughter).unwrap();
        for (v, l) in out.result.graph.labels() {
            if let Some(old) = before.get(v) {
                prop_assert_eq!(old, l);
            }
        }
        for (dv, rv) in &out.daughter_ids {
            prop_assert_eq!(daughter.graph.label(dv), out.result.graph.label(rv));
        }
    }

    #[test]
    fn independent_substitutions_commute(
        h in raw_graph(4, 4),
        d1 in raw_graph(3, 2),
        d2 in raw_graph(3, 2),
        c1 in proptest::collection::vec((0..TERMINALS.len(), 0..EDGE_LABELS.len(), 0..3usize, prop::bool::ANY), 0..3),
        c2 in proptest::collection::vec((0..TERMINALS.len(), 0..EDGE_LABELS.len(), 0..3usize, prop::bool::ANY), 0..3),
    ) {
        // Boundary host: two nonterminals adjacent to terminals only.
        let mut host = ExtendedGraph::plain(realize(&h, "h"));
        host.graph.add_vertex(VertexId::new("u"), VertexLabel::new("X")).unwrap();
        host.graph.add_vertex(VertexId::new("v"), VertexLabel::new("Y")).unwrap();
        host.graph.add_edge(VertexId::new("h0"), EdgeLabel::new("e"), VertexId::new("u")).unwrap();
        host.graph.add_edge(VertexId::new("h0"), EdgeLabel::new("e"), VertexId::new("v")).unwrap();

        let attach = |raw: &RawGraph, prefix: &str, conns: &[(usize, usize, usize, bool)]| {
            let mut g = ExtendedGraph::plain(realize(raw, prefix));
            let vs: Vec<VertexId> = g.graph.vertices().cloned().collect();
            for (sigma, gamma, target, dir) in conns {
                let t = &vs[target % vs.len()];
                let _ = g.add_connection(ConnectionInstruction::new(
                    Mode::Directed,
                    VertexLabel::new(TERMINALS[*sigma]),
                    EdgeLabel::new("e"),
                    EdgeLabel::new(EDGE_LABELS[*gamma]),
                    t.clone(),
                    if *dir { Direction::In } else { Direction::Out },
                ));
            }
            g
        };
        let d1 = attach(&d1, "x", &c1);
        let d2 = attach(&d2, "y", &c2);

        let uv = {
            let s1 = substitute(&host, &VertexId::new("u"), &d1).unwrap();
            substitute(&s1.result, &VertexId::new("v"), &d2).unwrap().result
        };
        let vu = {
            let s1 = substitute(&host, &VertexId::new("v"), &d2).unwrap();
            substitute(&s1.result, &VertexId::new("u"), &d1).unwrap().result
        };
        prop_assert!(
            sgraft_core::morphism::find_isomorphism(&uv, &vu).is_some(),
            "substitution order changed the result"
        );
    }

    #[test]
    fn language_members_validate(mv in 2..=9usize) {
        let g = families::complete_grammar(Mode::Directed);
        for m in sgraft_core::grammar::enumerate_language(&g, mv, None).unwrap() {
            prop_assert!(m.is_concrete(&g.alphabets));
            prop_assert!(m.graph.validate(&g.alphabets).is_empty());
            prop_assert!(m.graph.graph.vertex_count() <= mv);
        }
    }
}
