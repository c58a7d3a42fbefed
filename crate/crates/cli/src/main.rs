use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sgraft_cli::commands::{self, Outcome, DEFAULT_PROBE_DEPTH};
use sgraft_cli::error::CliError;
use sgraft_core::alphabet::Mode;

/// Context-free families of string diagrams as boundary graph grammars:
/// derivation, decoding, membership and double-pushout rewriting of both
/// string graphs and the grammars themselves.
#[derive(Parser)]
#[command(name = "sgraft", version, about)]
struct Cli {
    /// Default edge mode for files without a `mode` line.
    #[arg(long, global = true, default_value = "directed", value_parser = parse_mode)]
    mode: Mode,
    /// Seed recorded for reproducibility; every search is deterministic, so
    /// the seed does not affect results.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "directed" => Ok(Mode::Directed),
        "undirected" => Ok(Mode::Undirected),
        _ => Err("expected `directed` or `undirected`".to_string()),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a file (.sg, .gg, .dec, .besg, .pat, .rr, .script).
    Validate {
        file: PathBuf,
        /// Derivation steps to probe during B-ESG semantic validation.
        #[arg(long, default_value_t = DEFAULT_PROBE_DEPTH)]
        probe_depth: usize,
    },
    /// Replay a derivation script against a grammar and print the graph.
    Derive {
        grammar: PathBuf,
        #[arg(long)]
        script: PathBuf,
    },
    /// Enumerate the language of a grammar bundle up to a vertex bound
    /// (applied before decoding).
    Enumerate {
        besg: PathBuf,
        #[arg(long)]
        max_vertices: usize,
        /// Defaults to the vertex bound.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Decide membership of a string graph; exit 0 = yes (witness printed),
    /// exit 1 = no.
    Member { besg: PathBuf, graph: PathBuf },
    /// Expand every encoding edge of a graph.
    Decode { graph: PathBuf, dec: PathBuf },
    /// Instantiate a pattern along an interface script into a concrete
    /// rewrite rule.
    Instantiate {
        pat: PathBuf,
        #[arg(long)]
        script: PathBuf,
    },
    /// Apply a rewrite rule to a graph at the K-th match.
    Apply {
        rule: PathBuf,
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        r#match: usize,
    },
    /// Rewrite a grammar bundle with a pattern at the K-th grammar match.
    RewriteGrammar {
        besg: PathBuf,
        pat: PathBuf,
        #[arg(long, default_value_t = 0)]
        r#match: usize,
    },
    /// Check that a grammar rewrite is witnessed on one instantiation by a
    /// short sequence of concrete rule instances.
    CheckAdmissible {
        besg: PathBuf,
        pat: PathBuf,
        #[arg(long, default_value_t = 0)]
        r#match: usize,
        #[arg(long)]
        script: PathBuf,
    },
    /// Render a file as GraphViz DOT text.
    ExportDot { file: PathBuf },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mode = cli.mode;
    match &cli.command {
        Command::Validate { file, probe_depth } => commands::validate(file, mode, *probe_depth),
        Command::Derive { grammar, script } => commands::derive(grammar, script, mode),
        Command::Enumerate { besg, max_vertices, max_steps } => {
            commands::enumerate(besg, *max_vertices, *max_steps, mode)
        }
        Command::Member { besg, graph } => commands::member(besg, graph, mode),
        Command::Decode { graph, dec } => commands::decode_cmd(graph, dec, mode),
        Command::Instantiate { pat, script } => commands::instantiate(pat, script, mode),
        Command::Apply { rule, graph, r#match } => commands::apply(rule, graph, *r#match, mode),
        Command::RewriteGrammar { besg, pat, r#match } => {
            commands::rewrite_grammar(besg, pat, *r#match, mode)
        }
        Command::CheckAdmissible { besg, pat, r#match, script } => {
            commands::check_admissible(besg, pat, *r#match, script, mode)
        }
        Command::ExportDot { file } => commands::export_dot(file, mode),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
