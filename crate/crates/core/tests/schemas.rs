//! Grammar patterns, interface synthesis, parallel instantiation soundness,
//! grammar-level rewriting and admissibility.

use std::collections::BTreeMap;

use sgraft_core::besg::{validate_besg, BesgGrammar};
use sgraft_core::families;
use sgraft_core::grammar::{DerivationScript, ProductionName};
use sgraft_core::graph::{ExtendedGraph, VertexId};
use sgraft_core::grammar_rewrite::{
    besg_rewrite, check_admissibility, find_grammar_matches, AdmissibilityBounds,
};
use sgraft_core::morphism::find_isomorphism;
use sgraft_core::schema::{
    classify_production_io, concrete_scripts, instantiation_is_string_graph_rule,
    parallel_instantiate, synthesize_interface, validate_besg_rule, validate_pattern,
    BesgRewriteRule,
};
use sgraft_core::Mode;

fn pn(s: &str) -> ProductionName {
    ProductionName::new(s)
}

fn vid(s: &str) -> VertexId {
    VertexId::new(s)
}

fn corr(names: &[&str]) -> BTreeMap<ProductionName, ProductionName> {
    names.iter().map(|n| (pn(n), pn(n))).collect()
}

fn local_complement_rule() -> BesgRewriteRule {
    let a = families::corpus_alphabets(Mode::Directed);
    let t = families::wire_decoding(&a);
    synthesize_interface(
        &BesgGrammar { grammar: families::complete_grammar(Mode::Directed), decoding: t.clone() },
        &BesgGrammar { grammar: families::star_grammar(Mode::Directed), decoding: t },
        &corr(&["init", "grow", "stop"]),
    )
    .expect("synthesizable")
}

fn bialgebra_rule() -> BesgRewriteRule {
    let a = families::corpus_alphabets(Mode::Directed);
    let t = families::wire_decoding(&a);
    synthesize_interface(
        &BesgGrammar {
            grammar: families::bialgebra_left_grammar(Mode::Directed),
            decoding: t.clone(),
        },
        &BesgGrammar { grammar: families::bialgebra_right_grammar(Mode::Directed), decoding: t },
        &corr(&["init", "grow", "switch", "emit", "last"]),
    )
    .expect("synthesizable")
}

fn big_host() -> BesgGrammar {
    let a = families::corpus_alphabets(Mode::Directed);
    BesgGrammar {
        grammar: families::big_host_grammar(Mode::Directed),
        decoding: families::wire_decoding(&a),
    }
}

fn host_script(m: usize, n: usize) -> DerivationScript {
    assert!(m >= 1 && n >= 1);
    let mut s = DerivationScript::new();
    let mut k = 0usize;
    s.push(vid("root"), pn("init"));
    k += 1;
    for _ in 1..m {
        s.push(vid(&format!("t.{k}")), pn("grow"));
        k += 1;
    }
    s.push(vid(&format!("t.{k}")), pn("switch"));
    k += 1;
    for _ in 1..n {
        s.push(vid(&format!("t2.{k}")), pn("emit"));
        k += 1;
    }
    s.push(vid(&format!("t2.{k}")), pn("last"));
    s
}

#[test]
fn production_io_classification_cases() {
    let a = families::corpus_alphabets(Mode::Directed);
    // Isolated wire vertex: no edges, no instructions.
    let iface = families::bialgebra_interface_grammar(Mode::Directed);
    let p = iface.production(&pn("init")).unwrap();
    let io = classify_production_io(p, &a);
    assert!(io.isolated.contains(&vid("wi")));
    assert!(io.inputs.contains(&vid("wi")) && io.outputs.contains(&vid("wi")));

    // The bialgebra right grammar's `emit` wire has an incoming instruction
    // only: an output but not an input.
    let right = families::bialgebra_right_grammar(Mode::Directed);
    let io = classify_production_io(right.production(&pn("emit")).unwrap(), &a);
    assert!(!io.inputs.contains(&vid("ow")));
    assert!(io.outputs.contains(&vid("ow")));
    assert!(io.isolated.is_empty());

    // Synthesized interface productions carry only isolated wires.
    let rule = bialgebra_rule();
    for p in rule.pattern.interface.productions() {
        let io = classify_production_io(p, &a);
        for v in p.rhs.graph.vertices() {
            if a.is_wire(p.rhs.graph.label(v).unwrap()) {
                assert!(io.isolated.contains(v));
            }
        }
    }
}

#[test]
fn synthesized_patterns_validate() {
    for rule in [local_complement_rule(), bialgebra_rule()] {
        let pv = validate_pattern(&rule.pattern);
        assert!(pv.is_empty(), "{pv:?}");
        let rv = validate_besg_rule(&rule, 5);
        assert!(rv.is_empty(), "{rv:?}");
    }
}

#[test]
fn synthesized_interfaces_match_the_built_in_grammars() {
    let lc = local_complement_rule();
    let expected = families::local_complement_interface_grammar(Mode::Directed);
    for p in expected.productions() {
        let got = lc.pattern.interface.production(&p.name).expect("same production names");
        assert_eq!(got.lhs, p.lhs);
        assert!(find_isomorphism(&got.rhs, &p.rhs).is_some(), "interface mismatch at {}", p.name);
    }
    let bl = bialgebra_rule();
    let expected = families::bialgebra_interface_grammar(Mode::Directed);
    for p in expected.productions() {
        let got = bl.pattern.interface.production(&p.name).expect("same production names");
        assert!(find_isomorphism(&got.rhs, &p.rhs).is_some(), "interface mismatch at {}", p.name);
    }
}

#[test]
fn interface_resynthesis_is_idempotent() {
    let rule = bialgebra_rule();
    let a = families::corpus_alphabets(Mode::Directed);
    let again = synthesize_interface(
        &BesgGrammar { grammar: rule.pattern.left.clone(), decoding: rule.decoding.clone() },
        &BesgGrammar { grammar: rule.pattern.right.clone(), decoding: rule.decoding.clone() },
        &rule
            .pattern
            .to_right
            .production_map
            .clone(),
    )
    .unwrap();
    let _ = a;
    for p in rule.pattern.interface.productions() {
        let got = again.pattern.interface.production(&p.name).unwrap();
        assert!(find_isomorphism(&got.rhs, &p.rhs).is_some());
    }
}

#[test]
fn mismatched_production_counts_fail_synthesis() {
    let a = families::corpus_alphabets(Mode::Directed);
    let t = families::wire_decoding(&a);
    let out = synthesize_interface(
        &BesgGrammar { grammar: families::complete_grammar(Mode::Directed), decoding: t.clone() },
        &BesgGrammar {
            grammar: families::bialgebra_right_grammar(Mode::Directed),
            decoding: t,
        },
        &corr(&["init", "grow", "stop"]),
    );
    assert!(out.is_err());
}

#[test]
fn pattern_with_broken_bijection_is_rejected() {
    let mut rule = local_complement_rule();
    rule.pattern.to_right.production_map.insert(pn("stop"), pn("grow"));
    assert!(!validate_pattern(&rule.pattern).is_empty());
}

#[test]
fn instantiations_up_to_five_steps_are_string_graph_rules() {
    let a = families::corpus_alphabets(Mode::Directed);
    for rule in [local_complement_rule(), bialgebra_rule()] {
        let scripts = concrete_scripts(&rule.pattern.interface, 5).unwrap();
        assert!(!scripts.is_empty());
        for script in scripts {
            let inst = parallel_instantiate(&rule, &script).expect("instantiates");
            assert!(
                instantiation_is_string_graph_rule(&inst, &a),
                "script {script} produced a bad span"
            );
        }
    }
}

#[test]
fn shortest_scripts_give_the_base_cases() {
    let rule = local_complement_rule();
    let scripts = concrete_scripts(&rule.pattern.interface, 2).unwrap();
    assert_eq!(scripts.len(), 1);
    let inst = parallel_instantiate(&rule, &scripts[0]).unwrap();
    assert!(find_isomorphism(
        &inst.span.left,
        &ExtendedGraph::plain(families::complete(1, Mode::Directed))
    )
    .is_some());
}

#[test]
fn bialgebra_32_instantiation_counts() {
    let a = families::corpus_alphabets(Mode::Directed);
    let rule = bialgebra_rule();
    let inst = parallel_instantiate(&rule, &host_script(3, 2)).unwrap();
    let left = &inst.span.left.graph;
    assert_eq!(left.vertex_count(), 16);
    let nodes = left.vertices().filter(|v| a.is_node(left.label(v).unwrap())).count();
    let wires = left.vertices().filter(|v| a.is_wire(left.label(v).unwrap())).count();
    assert_eq!((nodes, wires), (5, 11));
    let (inputs, outputs) = sgraft_core::stringgraph::io_sets(left, &a);
    assert_eq!((inputs.len(), outputs.len()), (3, 2));
    assert!(find_isomorphism(
        &inst.span.left,
        &ExtendedGraph::plain(families::complete_bipartite(3, 2, Mode::Directed))
    )
    .is_some());
    assert!(find_isomorphism(
        &inst.span.right,
        &ExtendedGraph::plain(families::bialgebra_normal(3, 2, Mode::Directed))
    )
    .is_some());
    // (3, 2): six encoding-free internal wires, five open wires.
    let internal = left
        .vertices()
        .filter(|v| {
            a.is_wire(left.label(v).unwrap())
                && left.in_degree(v) == 1
                && left.out_degree(v) == 1
        })
        .count();
    assert_eq!(internal, 6);
    assert_eq!(inputs.len() + outputs.len(), 5);
}

#[test]
fn grammar_matches_into_the_big_host() {
    let host = big_host();
    let lc = local_complement_rule();
    let matches = find_grammar_matches(&lc, &host).unwrap();
    assert_eq!(matches.len(), 1, "expected the single intended matching");
    let m = &matches[0];
    assert_eq!(m.production_map[&pn("init")], pn("init"));
    assert_eq!(m.production_map[&pn("grow")], pn("grow"));
    assert_eq!(m.production_map[&pn("stop")], pn("switch"));

    let bl = bialgebra_rule();
    let matches = find_grammar_matches(&bl, &host).unwrap();
    assert_eq!(matches.len(), 1);
    for name in ["init", "grow", "switch", "emit", "last"] {
        assert_eq!(matches[0].production_map[&pn(name)], pn(name));
    }
}

#[test]
fn rule_with_more_productions_than_host_has_no_match() {
    let a = families::corpus_alphabets(Mode::Directed);
    let t = families::wire_decoding(&a);
    let small_host = BesgGrammar { grammar: families::star_grammar(Mode::Directed), decoding: t };
    let bl = bialgebra_rule();
    assert!(find_grammar_matches(&bl, &small_host).unwrap().is_empty());
}

#[test]
fn decoding_mismatch_is_rejected() {
    let mut host = big_host();
    host.decoding = sgraft_core::decode::DecodingSystem::new();
    let lc = local_complement_rule();
    assert!(find_grammar_matches(&lc, &host).is_err());
}

#[test]
fn rewriting_the_host_by_both_rules() {
    let host = big_host();
    for rule in [local_complement_rule(), bialgebra_rule()] {
        let matches = find_grammar_matches(&rule, &host).unwrap();
        let result = besg_rewrite(&host, &rule, &matches[0]).unwrap();
        assert_eq!(result.grammar.production_count(), host.grammar.production_count());
        let report = validate_besg(&result, 6);
        assert!(report.accepted(), "rewritten grammar rejected: {report}");
    }
}

#[test]
fn rewritten_host_generates_the_expected_instances() {
    let host = big_host();
    let a = &host.grammar.alphabets;

    // Complete-to-star: the node component becomes a star.
    let lc = local_complement_rule();
    let result =
        besg_rewrite(&host, &lc, &find_grammar_matches(&lc, &host).unwrap()[0]).unwrap();
    for (m, n) in [(1, 1), (2, 1), (3, 2)] {
        let form = sgraft_core::grammar::run_script(&result.grammar, &host_script(m, n)).unwrap();
        let decoded = sgraft_core::decode::decode(&form.graph.graph, &result.decoding, a).unwrap();
        let oracle = families::disjoint_union(
            &families::star(m, Mode::Directed),
            &families::complete_bipartite(m, n, Mode::Directed),
        );
        assert!(
            sgraft_core::morphism::are_isomorphic(&decoded, &oracle).is_some(),
            "local complement rewrite instance ({m},{n}) mismatch"
        );
    }

    // Bialgebra: the bipartite component becomes the normal form.
    let bl = bialgebra_rule();
    let result =
        besg_rewrite(&host, &bl, &find_grammar_matches(&bl, &host).unwrap()[0]).unwrap();
    for (m, n) in [(1, 1), (2, 2), (3, 2)] {
        let form = sgraft_core::grammar::run_script(&result.grammar, &host_script(m, n)).unwrap();
        let decoded = sgraft_core::decode::decode(&form.graph.graph, &result.decoding, a).unwrap();
        let oracle = families::disjoint_union(
            &families::complete(m, Mode::Directed),
            &families::bialgebra_normal(m, n, Mode::Directed),
        );
        assert!(
            sgraft_core::morphism::are_isomorphic(&decoded, &oracle).is_some(),
            "bialgebra rewrite instance ({m},{n}) mismatch"
        );
    }
}

#[test]
fn identity_rule_leaves_the_host_unchanged() {
    let host = big_host();
    let idrule = synthesize_interface(
        &host,
        &host,
        &corr(&["init", "grow", "switch", "emit", "last"]),
    )
    .unwrap();
    let matches = find_grammar_matches(&idrule, &host).unwrap();
    // The identity matching maps every production to itself.
    let id = matches
        .iter()
        .find(|m| m.production_map.iter().all(|(k, v)| k == v))
        .expect("identity matching");
    let result = besg_rewrite(&host, &idrule, id).unwrap();
    for p in host.grammar.productions() {
        let q = result.grammar.production(&p.name).unwrap();
        assert!(find_isomorphism(&p.rhs, &q.rhs).is_some());
    }
}

#[test]
fn admissibility_of_both_rewrites() {
    let host = big_host();
    for rule in [local_complement_rule(), bialgebra_rule()] {
        let matches = find_grammar_matches(&rule, &host).unwrap();
        let result = besg_rewrite(&host, &rule, &matches[0]).unwrap();
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            let verdict = check_admissibility(
                &host,
                &result,
                &rule,
                &host_script(m, n),
                AdmissibilityBounds::default(),
            )
            .unwrap();
            assert!(verdict.is_admissible(), "({m},{n}) not admissible: {verdict:?}");
            assert!(
                verdict.sequence_length().unwrap() <= 1,
                "({m},{n}) needed more than one step"
            );
        }
    }
}

#[test]
fn admissibility_of_the_three_two_case_uses_one_rule() {
    let host = big_host();
    let bl = bialgebra_rule();
    let matches = find_grammar_matches(&bl, &host).unwrap();
    let result = besg_rewrite(&host, &bl, &matches[0]).unwrap();
    let verdict = check_admissibility(
        &host,
        &result,
        &bl,
        &host_script(3, 2),
        AdmissibilityBounds::default(),
    )
    .unwrap();
    assert_eq!(verdict.sequence_length(), Some(1));
}
