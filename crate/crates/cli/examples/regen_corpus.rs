//! Regenerates the example corpus and its golden outputs.
//!
//! Usage: `cargo run -p sgraft-cli --example regen_corpus [corpus-dir]`
//!
//! The corpus files are committed; this tool exists so they stay in lock
//! step with the built-in family constructors when those change.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use sgraft_cli::commands;
use sgraft_cli::formats::{
    serialize_besg, serialize_dec, serialize_gg, serialize_pat, serialize_script, serialize_sg,
    BesgFile, DecFile, GrammarFile, GraphFile, PatCorrespondence, PatFile, ScriptFile,
};
use sgraft_core::alphabet::Mode;
use sgraft_core::besg::BesgGrammar;
use sgraft_core::families;
use sgraft_core::grammar::{DerivationScript, ProductionName};
use sgraft_core::graph::{ExtendedGraph, VertexId};
use sgraft_core::schema::{synthesize_interface, BesgRewriteRule};

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("crates/cli/corpus"));
    fs::create_dir_all(dir.join("golden")).expect("create corpus directories");
    let mode = Mode::Directed;
    let a = families::corpus_alphabets(mode);
    let t = families::wire_decoding(&a);
    let write = |name: &str, text: String| {
        fs::write(dir.join(name), text).unwrap_or_else(|e| panic!("write {name}: {e}"));
        println!("wrote {name}");
    };

    // Grammars.
    let grammars = [
        ("star", families::star_grammar(mode)),
        ("complete", families::complete_grammar(mode)),
        ("bialg_left", families::bialgebra_left_grammar(mode)),
        ("bialg_right", families::bialgebra_right_grammar(mode)),
        ("big_host", families::big_host_grammar(mode)),
    ];
    for (name, grammar) in &grammars {
        write(
            &format!("{name}.gg"),
            serialize_gg(&GrammarFile { name: name.to_string(), grammar: grammar.clone() }),
        );
    }

    // Decoding system, shared by the entire corpus.
    write(
        "wire.dec",
        serialize_dec(&DecFile {
            name: "wire".to_string(),
            system: t.clone(),
            alphabets: Some(a.clone()),
        }),
    );

    // Bundles.
    for (name, grammar_path) in
        [("star", "star.gg"), ("complete", "complete.gg"), ("big_host", "big_host.gg")]
    {
        write(
            &format!("{name}.besg"),
            serialize_besg(&BesgFile {
                name: name.to_string(),
                grammar_path: grammar_path.to_string(),
                decoding_path: "wire.dec".to_string(),
                mode,
            }),
        );
    }

    // Patterns with synthesized interfaces.
    let corr = |names: &[&str]| -> BTreeMap<ProductionName, ProductionName> {
        names.iter().map(|n| (ProductionName::new(*n), ProductionName::new(*n))).collect()
    };
    let localcomp = synthesize_interface(
        &BesgGrammar { grammar: families::complete_grammar(mode), decoding: t.clone() },
        &BesgGrammar { grammar: families::star_grammar(mode), decoding: t.clone() },
        &corr(&["init", "grow", "stop"]),
    )
    .expect("local complement rule synthesizes");
    let bialg = synthesize_interface(
        &BesgGrammar { grammar: families::bialgebra_left_grammar(mode), decoding: t.clone() },
        &BesgGrammar { grammar: families::bialgebra_right_grammar(mode), decoding: t.clone() },
        &corr(&["init", "grow", "switch", "emit", "last"]),
    )
    .expect("bialgebra rule synthesizes");
    write(
        "localcomp_iface.gg",
        serialize_gg(&GrammarFile {
            name: "localcomp_iface".to_string(),
            grammar: localcomp.pattern.interface.clone(),
        }),
    );
    write(
        "bialg_iface.gg",
        serialize_gg(&GrammarFile {
            name: "bialg_iface".to_string(),
            grammar: bialg.pattern.interface.clone(),
        }),
    );
    write("localcomp.pat", serialize_pat(&pattern_file(
        "localcomp",
        &localcomp,
        "complete.gg",
        "localcomp_iface.gg",
        "star.gg",
    )));
    write("bialg.pat", serialize_pat(&pattern_file(
        "bialg",
        &bialg,
        "bialg_left.gg",
        "bialg_iface.gg",
        "bialg_right.gg",
    )));

    // Scripts: the linear family scripts and the two-counter host scripts.
    for n in 1..=4usize {
        let mut script = DerivationScript::new();
        script.push(VertexId::new("root"), ProductionName::new("init"));
        for k in 1..n {
            script.push(VertexId::new(format!("t.{k}")), ProductionName::new("grow"));
        }
        script.push(VertexId::new(format!("t.{n}")), ProductionName::new("stop"));
        write(
            &format!("lc_n{n}.script"),
            serialize_script(&ScriptFile { name: format!("lc_n{n}"), script }),
        );
    }
    for (m, n) in [(1usize, 1usize), (2, 2), (3, 2)] {
        write(
            &format!("mn{m}{n}.script"),
            serialize_script(&ScriptFile { name: format!("mn{m}{n}"), script: host_script(m, n) }),
        );
    }

    // Standalone graphs.
    let graphs = [
        ("sk3", families::complete(3, mode)),
        ("sk4", families::complete(4, mode)),
        ("sk6", families::complete(6, mode)),
        ("ek4", families::complete_encoded(4, mode)),
        ("sk32", families::complete_bipartite(3, 2, mode)),
        ("ss4", families::star(4, mode)),
    ];
    for (name, graph) in graphs {
        write(
            &format!("{name}.sg"),
            serialize_sg(&GraphFile {
                name: name.to_string(),
                graph: ExtendedGraph::plain(graph),
                alphabets: Some(a.clone()),
            }),
        );
    }

    // Golden command outputs.
    let run = |outcome: Result<commands::Outcome, sgraft_cli::error::CliError>| -> String {
        let outcome = outcome.expect("golden command must succeed");
        assert_eq!(outcome.exit, 0, "golden command must exit 0");
        outcome.stdout
    };
    let p = |name: &str| dir.join(name);
    let golden = |name: &str, text: String| {
        fs::write(dir.join("golden").join(name), text)
            .unwrap_or_else(|e| panic!("write golden {name}: {e}"));
        println!("wrote golden/{name}");
    };
    golden("sk3.dot", run(commands::export_dot(&p("sk3.sg"), mode)));
    golden("star.dot", run(commands::export_dot(&p("star.gg"), mode)));
    golden("sk4_rule.rr", run(commands::instantiate(&p("localcomp.pat"), &p("lc_n4.script"), mode)));
    golden("sk32_rule.rr", run(commands::instantiate(&p("bialg.pat"), &p("mn32.script"), mode)));
    // The instantiated rules double as corpus inputs for `apply`.
    fs::copy(dir.join("golden/sk4_rule.rr"), dir.join("sk4_rule.rr")).unwrap();
    fs::copy(dir.join("golden/sk32_rule.rr"), dir.join("sk32_rule.rr")).unwrap();
    golden("ss4_from_apply.sg", run(commands::apply(&p("sk4_rule.rr"), &p("sk4.sg"), 0, mode)));
    golden(
        "ss32_from_apply.sg",
        run(commands::apply(&p("sk32_rule.rr"), &p("sk32.sg"), 0, mode)),
    );
    golden(
        "bp_localcomp.gg",
        run(commands::rewrite_grammar(&p("big_host.besg"), &p("localcomp.pat"), 0, mode)),
    );
    golden(
        "bp_bialg.gg",
        run(commands::rewrite_grammar(&p("big_host.besg"), &p("bialg.pat"), 0, mode)),
    );
    golden(
        "admissible_32.txt",
        run(commands::check_admissible(
            &p("big_host.besg"),
            &p("bialg.pat"),
            0,
            &p("mn32.script"),
            mode,
        )),
    );
    golden("member_sk4.txt", run(commands::member(&p("complete.besg"), &p("sk4.sg"), mode)));
    golden("enumerate_star.txt", run(commands::enumerate(&p("star.besg"), 11, None, mode)));
    golden("derive_lc_n3.txt", run(commands::derive(&p("star.gg"), &p("lc_n3.script"), mode)));
    golden("decode_ek4.txt", run(commands::decode_cmd(&p("ek4.sg"), &p("wire.dec"), mode)));
}

fn pattern_file(
    name: &str,
    rule: &BesgRewriteRule,
    left: &str,
    interface: &str,
    right: &str,
) -> PatFile {
    let gp = &rule.pattern;
    let correspondences = gp
        .interface
        .productions()
        .map(|pi| {
            let lname = gp.to_left.production_map[&pi.name].clone();
            let rname = gp.to_right.production_map[&pi.name].clone();
            let lcomp = &gp.to_left.components[&pi.name];
            let rcomp = &gp.to_right.components[&pi.name];
            let vertices = pi
                .rhs
                .graph
                .vertices()
                .map(|v| {
                    (
                        v.clone(),
                        (lcomp.apply(v).unwrap().clone(), rcomp.apply(v).unwrap().clone()),
                    )
                })
                .collect();
            PatCorrespondence { interface: pi.name.clone(), left: lname, right: rname, vertices }
        })
        .collect();
    PatFile {
        name: name.to_string(),
        left_path: left.to_string(),
        interface_path: interface.to_string(),
        right_path: right.to_string(),
        decoding_path: "wire.dec".to_string(),
        correspondences,
    }
}

fn host_script(m: usize, n: usize) -> DerivationScript {
    let mut s = DerivationScript::new();
    let mut k = 0usize;
    s.push(VertexId::new("root"), ProductionName::new("init"));
    k += 1;
    for _ in 1..m {
        s.push(VertexId::new(format!("t.{k}")), ProductionName::new("grow"));
        k += 1;
    }
    s.push(VertexId::new(format!("t.{k}")), ProductionName::new("switch"));
    k += 1;
    for _ in 1..n {
        s.push(VertexId::new(format!("t2.{k}")), ProductionName::new("emit"));
        k += 1;
    }
    s.push(VertexId::new(format!("t2.{k}")), ProductionName::new("last"));
    s
}
