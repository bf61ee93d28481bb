//! `hpdl`: decides satisfiability of an HPDL ABox file.
//!
//! The first stdout line is `SAT` or `UNSAT`. Exit codes: 0 SAT, 1 UNSAT,
//! 2 usage or parse error, 3 node budget exhausted, 4 witness failed its
//! re-check.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hpdl_core::{abox_to_nnf, check_abox, decide, parse_abox, witness, Config, EngineError, Verdict};

#[derive(Parser, Debug)]
#[command(name = "hpdl", version, about = "Satisfiability of HPDL ABoxes via a tableau with global caching")]
struct Cli {
    /// ABox file: assertions separated by `;`, `#` starts a comment.
    input: PathBuf,
    /// On SAT, write a verified witness model as JSON.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    /// Write the final tableau in Graphviz format.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Print every rule application and status change to stderr.
    #[arg(long)]
    trace: bool,
    /// Print run statistics as JSON to stderr.
    #[arg(long)]
    stats: bool,
    /// Node budget; exceeding it exits with code 3.
    #[arg(long, value_name = "N", default_value_t = Config::default().max_nodes, value_parser = positive)]
    max_nodes: usize,
    /// Tie-breaking permutation; 0 is the canonical order.
    #[arg(long, value_name = "K", default_value_t = 0)]
    seed: u64,
    /// Only expand nodes reachable from the root without crossing Unsat.
    #[arg(long)]
    reachability_pruning: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_WITNESS: u8 = 4;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    run(&cli)
}

fn run(cli: &Cli) -> ExitCode {
    let text = match fs::read_to_string(&cli.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("hpdl: cannot read {}: {e}", cli.input.display());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let input = match parse_abox(&text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("hpdl: {}: {e}", cli.input.display());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let gamma = abox_to_nnf(&input);
    let cfg = Config {
        max_nodes: cli.max_nodes,
        seed: cli.seed,
        trace: cli.trace,
        reachability_pruning: cli.reachability_pruning,
    };
    let out = match decide(&gamma, &cfg) {
        Ok(o) => o,
        Err(e @ EngineError::NodeBudget(_)) => {
            eprintln!("hpdl: {e}");
            return ExitCode::from(EXIT_RESOURCE);
        }
        Err(e) => {
            eprintln!("hpdl: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    println!("{}", out.verdict);
    println!("nodes: {}", out.tableau.len());

    if cli.trace {
        for ev in &out.trace {
            eprintln!("{ev}");
        }
    }
    if cli.stats {
        eprintln!("{}", out.stats.to_json());
    }
    if let Some(path) = &cli.dot {
        if let Err(e) = fs::write(path, out.tableau.to_dot()) {
            eprintln!("hpdl: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if let (Some(path), Verdict::Sat) = (&cli.model, out.verdict) {
        let w = match witness(&out) {
            Ok(w) => w,
            Err(e) => {
                eprintln!("hpdl: witness extraction failed: {e}");
                return ExitCode::from(EXIT_WITNESS);
            }
        };
        // the extractor checks against the NNF; check the input as written too
        match check_abox(&w.model, &input) {
            Ok(r) if r.holds() => {}
            Ok(r) => {
                eprintln!("hpdl: witness fails {} input assertions", r.failing.len());
                return ExitCode::from(EXIT_WITNESS);
            }
            Err(e) => {
                eprintln!("hpdl: witness check failed: {e}");
                return ExitCode::from(EXIT_WITNESS);
            }
        }
        println!("witness: {} worlds", w.model.world_count());
        if let Err(e) = fs::write(path, w.model.to_json()) {
            eprintln!("hpdl: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    ExitCode::from(match out.verdict {
        Verdict::Sat => 0,
        Verdict::Unsat => 1,
    })
}
