//! `gsing` command-line front end.
//!
//! Exit codes: 0 nonsingular, 1 singular, 2 invalid input.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use gsing::bench::{bench_family, BenchFamily, BenchRow};
use gsing::blocks::{biconnected_components, validate_block_graph, BlockCutStructure};
use gsing::gen::{generate, GenSpec};
use gsing::graph::{adjacency_matrix, parse_graph, serialize_graph, Graph, LoopWeights};
use gsing::oracle::exact_rank_nullity;
use gsing::{is_singular_with, CaseTag, Error, Outcome, PendantOrder, TraceStep, Vertex};
use rayon::prelude::*;
use serde::Serialize;

#[global_allocator]
static ALLOC: mimalloc::MiMalloc = mimalloc::MiMalloc;

const SEED_VAR: &str = "GSING_SEED";

#[derive(Parser)]
#[command(name = "gsing", version, about = "Singularity test for block graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide singularity; FILE may be a directory of graph files.
    Check {
        #[arg(long)]
        trace: bool,
        path: PathBuf,
    },
    /// Print the elimination trace, one JSON object per line.
    Trace { path: PathBuf },
    /// Exact determinant, rank and nullity by fraction-free elimination.
    Oracle { path: PathBuf },
    /// Write a generated graph to stdout.
    ///
    /// Families: fig1, fig2, fig3, complete K, path N, star N, star-k3 N,
    /// random-tree N SEED, random-block BLOCKS MIN MAX SEED.
    Gen {
        family: String,
        args: Vec<String>,
    },
    /// Print blocks, per-block cut vertices and cut-vertex multiplicities.
    Decompose { path: PathBuf },
    /// Median timings as CSV.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        /// Also time the exact determinant for sizes up to 200.
        #[arg(long)]
        oracle: bool,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

#[derive(Serialize)]
struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<CaseTag>,
    n: usize,
    m: usize,
    num_blocks: usize,
    elapsed_ns: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceStep>>,
}

#[derive(Serialize)]
struct OracleReport {
    det: String,
    rank: usize,
    nullity: usize,
}

#[derive(Serialize)]
struct Decomposition {
    block_graph: bool,
    bv: Vec<Vec<Vertex>>,
    cv: Vec<Vec<Vertex>>,
    f: BTreeMap<Vertex, usize>,
}

fn pendant_order() -> Result<PendantOrder, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map(PendantOrder::Seeded)
            .map_err(|_| invalid(format!("{SEED_VAR} must be an unsigned 64-bit integer, got {s:?}"))),
        Err(_) => Ok(PendantOrder::LowestIndex),
    }
}

fn read_graph(path: &Path) -> Result<(Graph, LoopWeights), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn check_graph(graph: &Graph, weights: &LoopWeights, order: PendantOrder, trace: bool) -> Result<CheckReport, Error> {
    let start = Instant::now();
    let verdict = is_singular_with(graph, weights, order)?;
    let elapsed_ns = start.elapsed().as_nanos().max(1);
    let num_blocks = biconnected_components(graph).len();
    let reason = match verdict.outcome {
        Outcome::Singular { reason, .. } => Some(reason),
        Outcome::Nonsingular => None,
    };
    Ok(CheckReport {
        file: None,
        verdict: if reason.is_some() { "singular" } else { "nonsingular" },
        reason,
        n: graph.vertex_count(),
        m: graph.edge_count(),
        num_blocks,
        elapsed_ns,
        trace: trace.then_some(verdict.trace),
    })
}

fn verdict_code(report: &CheckReport) -> u8 {
    u8::from(report.reason.is_some())
}

fn check_file(path: &Path, order: PendantOrder, trace: bool) -> Result<CheckReport, Failure> {
    let (graph, weights) = read_graph(path)?;
    check_graph(&graph, &weights, order, trace).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn cmd_check(path: &Path, trace: bool) -> Result<u8, Failure> {
    let order = pendant_order()?;
    if !path.is_dir() {
        let report = check_file(path, order, trace)?;
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
        return Ok(verdict_code(&report));
    }

    let mut files: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let results: Vec<_> = files.par_iter().map(|f| check_file(f, order, trace)).collect();

    let mut code = 0;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (file, result) in files.iter().zip(results) {
        match result {
            Ok(mut report) => {
                code = code.max(verdict_code(&report));
                report.file = Some(file.display().to_string());
                writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes")).ok();
            }
            Err(f) => {
                code = 2;
                eprintln!("error: {}", f.message);
            }
        }
    }
    Ok(code)
}

fn cmd_trace(path: &Path) -> Result<u8, Failure> {
    let order = pendant_order()?;
    let (graph, weights) = read_graph(path)?;
    let verdict = is_singular_with(&graph, &weights, order)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for step in &verdict.trace {
        writeln!(out, "{}", step.to_json_line()).ok();
    }
    Ok(u8::from(verdict.is_singular()))
}

fn cmd_oracle(path: &Path) -> Result<u8, Failure> {
    let (graph, weights) = read_graph(path)?;
    let report = exact_rank_nullity(&adjacency_matrix(&graph, &weights));
    let out = OracleReport { det: report.det.to_string(), rank: report.rank, nullity: report.nullity };
    println!("{}", serde_json::to_string(&out).expect("report serializes"));
    Ok(0)
}

fn gen_spec(family: &str, args: &[String]) -> Result<GenSpec, Failure> {
    let nums = args
        .iter()
        .map(|a| a.parse::<u64>().map_err(|_| invalid(format!("expected a non-negative integer, got {a:?}"))))
        .collect::<Result<Vec<u64>, Failure>>()?;
    let arity = |k: usize| {
        if nums.len() == k {
            Ok(())
        } else {
            Err(invalid(format!("family {family} takes {k} argument(s), got {}", nums.len())))
        }
    };
    let size = |i: usize| nums[i] as usize;
    Ok(match family {
        "fig1" => arity(0).map(|_| GenSpec::Fig1)?,
        "fig2" => arity(0).map(|_| GenSpec::Fig2)?,
        "fig3" => arity(0).map(|_| GenSpec::Fig3)?,
        "complete" => arity(1).map(|_| GenSpec::Complete(size(0)))?,
        "path" => arity(1).map(|_| GenSpec::Path(size(0)))?,
        "star" => arity(1).map(|_| GenSpec::Star(size(0)))?,
        "star-k3" => arity(1).map(|_| GenSpec::StarOfTriangles(size(0)))?,
        "random-tree" => arity(2).map(|_| GenSpec::RandomTree { n: size(0), seed: nums[1] })?,
        "random-block" => arity(4).map(|_| GenSpec::RandomBlock {
            num_blocks: size(0),
            min_block: size(1),
            max_block: size(2),
            seed: nums[3],
        })?,
        _ => return Err(invalid(format!("unknown family {family:?}"))),
    })
}

fn cmd_gen(family: &str, args: &[String]) -> Result<u8, Failure> {
    let graph = generate(&gen_spec(family, args)?)?;
    print!("{}", serialize_graph(&graph, &LoopWeights::new()));
    Ok(0)
}

fn cmd_decompose(path: &Path) -> Result<u8, Failure> {
    let (graph, _) = read_graph(path)?;
    let blocks = biconnected_components(&graph);
    let block_graph = validate_block_graph(&blocks).is_ok();
    let s = BlockCutStructure::from_blocks(&blocks);
    let out = Decomposition { block_graph, bv: s.bv, cv: s.cv, f: s.f };
    println!("{}", serde_json::to_string(&out).expect("decomposition serializes"));
    Ok(0)
}

fn cmd_bench(family: &str, sizes: &[usize], repeats: usize, oracle: bool) -> Result<u8, Failure> {
    let family: BenchFamily = family.parse()?;
    let rows = bench_family(family, sizes, repeats, oracle)?;
    println!("{}", BenchRow::CSV_HEADER);
    for row in rows {
        println!("{}", row.to_csv());
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { trace, path } => cmd_check(path, *trace),
        Command::Trace { path } => cmd_trace(path),
        Command::Oracle { path } => cmd_oracle(path),
        Command::Gen { family, args } => cmd_gen(family, args),
        Command::Decompose { path } => cmd_decompose(path),
        Command::Bench { family, sizes, repeats, oracle } => cmd_bench(family, sizes, *repeats, *oracle),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
