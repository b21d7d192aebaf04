//! Command line front end for the nearforest solvers.
//!
//! Exit codes: 0 completed (answer in the JSON on stdout), 2 usage error,
//! 3 graph parse error, 4 internal invariant violation. Diagnostics go to
//! stderr; stdout carries exactly one JSON object (or JSON lines for
//! `bench`).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nearforest::dqf::{solve_dqf, DqfInstance, DqfStats, SolveMode};
use nearforest::kernel::{certify_bounds, reduce_to_min_degree3};
use nearforest::metrics::{is_d_quasi_forest, is_r_pseudoforest};
use nearforest::oracle::{oracle_min_dqf, oracle_min_rpf};
use nearforest::rpf::{solve, RpfInstance, RpfStats};
use nearforest::{EngineError, MultiGraph};

use nearforest_cli::bench::{parse_grid, run_sweep};
use nearforest_cli::gen::{
    gen_dup_tree_dqf, gen_planted_rpf, random_multigraph, RNG_ALGORITHM,
};
use nearforest_cli::io::{parse_graph, serialize_graph};
use nearforest_cli::record::{status_str, witness_external, witness_internal};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "nearforest",
    version,
    about = "Exact solvers for r-pseudoforest and d-quasi-forest deletion"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    Rpf,
    Dqf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance exactly and print a JSON verdict
    Solve {
        problem: ProblemArg,
        #[arg(short, long)]
        input: PathBuf,
        /// Deletion budget
        #[arg(short)]
        k: i64,
        /// Per-component excess bound (rpf)
        #[arg(short)]
        r: Option<usize>,
        /// Per-component feedback vertex bound (dqf)
        #[arg(short)]
        d: Option<usize>,
        /// Use the exhaustive fallback search instead of the staged
        /// pipeline (dqf only)
        #[arg(long)]
        fallback: bool,
        /// Print branching decisions to stderr
        #[arg(long)]
        trace: bool,
    },
    /// Check a claimed witness against the recognizer
    Verify {
        problem: ProblemArg,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short)]
        r: Option<usize>,
        #[arg(short)]
        d: Option<usize>,
        /// Comma-separated 1-indexed vertex ids
        #[arg(long, value_delimiter = ',')]
        witness: Vec<u32>,
    },
    /// Brute-force ground truth for small instances
    Oracle {
        problem: ProblemArg,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short)]
        r: Option<usize>,
        #[arg(short)]
        d: Option<usize>,
    },
    /// Generate an instance file (families: random, planted-rpf, dup-tree)
    Gen {
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Reduce to minimum degree 3 and evaluate the kernel bounds
    Kernelize {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        r: usize,
        #[arg(long)]
        degree_cap: usize,
    },
    /// Run a generated sweep and write JSON-lines run records
    Bench {
        #[arg(long)]
        grid: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}

fn usage(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn load_graph(path: &PathBuf) -> Result<MultiGraph, u8> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(EXIT_PARSE);
        }
    };
    parse_graph(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn require_param(
    problem: ProblemArg,
    r: Option<usize>,
    d: Option<usize>,
) -> Result<usize, u8> {
    match problem {
        ProblemArg::Rpf => {
            if d.is_some() {
                return Err(usage("-d does not apply to rpf; use -r"));
            }
            r.ok_or_else(|| usage("rpf needs -r"))
        }
        ProblemArg::Dqf => {
            if r.is_some() {
                return Err(usage("-r does not apply to dqf; use -d"));
            }
            d.ok_or_else(|| usage("dqf needs -d"))
        }
    }
}

fn engine_exit(e: &EngineError) -> u8 {
    match e {
        EngineError::InvalidArguments(msg) => usage(msg),
        EngineError::InternalInvariant(msg) => {
            eprintln!("internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn run(cli: Cli) -> u8 {
    match cli.cmd {
        Cmd::Solve {
            problem,
            input,
            k,
            r,
            d,
            fallback,
            trace,
        } => cmd_solve(problem, &input, k, r, d, fallback, trace),
        Cmd::Verify {
            problem,
            input,
            r,
            d,
            witness,
        } => cmd_verify(problem, &input, r, d, &witness),
        Cmd::Oracle {
            problem,
            input,
            r,
            d,
        } => cmd_oracle(problem, &input, r, d),
        Cmd::Gen {
            family,
            n,
            edges,
            k,
            r,
            d,
            copies,
            max_degree,
            seed,
            output,
        } => cmd_gen(&family, n, edges, k, r, d, copies, max_degree, seed, &output),
        Cmd::Kernelize {
            input,
            k,
            r,
            degree_cap,
        } => cmd_kernelize(&input, k, r, degree_cap),
        Cmd::Bench { grid, output } => cmd_bench(&grid, &output),
    }
}

fn cmd_solve(
    problem: ProblemArg,
    input: &PathBuf,
    k: i64,
    r: Option<usize>,
    d: Option<usize>,
    fallback: bool,
    trace: bool,
) -> u8 {
    let param = match require_param(problem, r, d) {
        Ok(p) => p,
        Err(code) => return code,
    };
    if k < 0 {
        return usage("budget k must be non-negative");
    }
    let g = match load_graph(input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let start = Instant::now();
    let (sol, nodes, param_key) = match problem {
        ProblemArg::Rpf => {
            if fallback {
                eprintln!("note: --fallback has no effect on rpf");
            }
            let mut stats = RpfStats {
                trace,
                ..RpfStats::default()
            };
            let sol = solve(&RpfInstance { g, k, r: param }, &mut stats);
            (sol, stats.nodes_expanded, "r")
        }
        ProblemArg::Dqf => {
            let mut stats = DqfStats {
                trace,
                ..DqfStats::default()
            };
            let mode = if fallback {
                SolveMode::Fallback
            } else {
                SolveMode::Pipeline
            };
            let sol = solve_dqf(&DqfInstance { g, k, d: param }, mode, &mut stats);
            (
                sol,
                stats.nodes_expanded + stats.fallback_nodes,
                "d",
            )
        }
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match sol {
        Ok(sol) => {
            let out = json!({
                "status": status_str(&sol),
                "witness": witness_external(&sol),
                "k": k,
                param_key: param,
                "nodes_expanded": nodes,
                "elapsed_ms": elapsed_ms,
            });
            println!("{out}");
            EXIT_OK
        }
        Err(e) => engine_exit(&e),
    }
}

fn cmd_verify(
    problem: ProblemArg,
    input: &PathBuf,
    r: Option<usize>,
    d: Option<usize>,
    witness: &[u32],
) -> u8 {
    let param = match require_param(problem, r, d) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let g = match load_graph(input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let n = g.vertex_count() as u32;
    if witness.iter().any(|&x| x < 1 || x > n) {
        return usage("witness ids must be within 1..=n");
    }
    let drop = witness_internal(witness).into_iter().collect();
    let rest = g.without(&drop);
    let (valid, key) = match problem {
        ProblemArg::Rpf => (is_r_pseudoforest(&rest, param), "r"),
        ProblemArg::Dqf => (is_d_quasi_forest(&rest, param), "d"),
    };
    let mut sorted = witness.to_vec();
    sorted.sort_unstable();
    let out = json!({
        "valid": valid,
        key: param,
        "witness": sorted,
    });
    println!("{out}");
    EXIT_OK
}

fn cmd_oracle(problem: ProblemArg, input: &PathBuf, r: Option<usize>, d: Option<usize>) -> u8 {
    let param = match require_param(problem, r, d) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let g = match load_graph(input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let res = match problem {
        ProblemArg::Rpf => oracle_min_rpf(&g, param),
        ProblemArg::Dqf => oracle_min_dqf(&g, param),
    };
    let key = if problem == ProblemArg::Rpf { "r" } else { "d" };
    let witness: Vec<u32> = res.one_witness.iter().map(|v| v.0 + 1).collect();
    let out = json!({
        "opt_size": if res.node_budget_hit { serde_json::Value::Null } else { json!(res.opt_size) },
        "witness": witness,
        key: param,
        "refused": res.node_budget_hit,
    });
    println!("{out}");
    EXIT_OK
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: &str,
    n: Option<usize>,
    edges: Option<usize>,
    k: Option<i64>,
    r: Option<usize>,
    d: Option<usize>,
    copies: Option<usize>,
    max_degree: Option<usize>,
    seed: u64,
    output: &PathBuf,
) -> u8 {
    let write_out = |text: &str| -> Result<(), u8> {
        fs::write(output, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", output.display());
            EXIT_PARSE
        })
    };
    let summary = match family {
        "random" => {
            let (Some(n), Some(m)) = (n, edges) else {
                return usage("family random needs --n and --edges");
            };
            let g = random_multigraph(n, m, seed);
            if let Err(code) = write_out(&serialize_graph(&g)) {
                return code;
            }
            json!({"family": "random", "n": n, "edges": m, "seed": seed,
                   "rng": RNG_ALGORITHM, "output": output.display().to_string()})
        }
        "planted-rpf" => {
            let (Some(n), Some(k), Some(r)) = (n, k, r) else {
                return usage("family planted-rpf needs --n, --k and --r");
            };
            if k < 0 {
                return usage("--k must be non-negative");
            }
            let max_degree = max_degree.unwrap_or(8);
            let (g, planted) = match gen_planted_rpf(n, k as usize, r, max_degree, seed) {
                Ok(x) => x,
                Err(e) => return usage(&e.to_string()),
            };
            if let Err(code) = write_out(&serialize_graph(&g)) {
                return code;
            }
            let planted: Vec<u32> = planted.iter().map(|v| v.0 + 1).collect();
            json!({"family": "planted-rpf", "n": n, "k": k, "r": r,
                   "max_degree": max_degree, "seed": seed, "rng": RNG_ALGORITHM,
                   "planted": planted, "output": output.display().to_string()})
        }
        "dup-tree" => {
            let (Some(k), Some(d), Some(copies)) = (k, d, copies) else {
                return usage("family dup-tree needs --k, --d and --copies");
            };
            let inst = gen_dup_tree_dqf(k, d, copies, seed);
            let z: Vec<u32> = inst.z.iter().map(|v| v.0 + 1).collect();
            let mut text = String::new();
            text.push_str(&format!(
                "c modulator {}\n",
                z.iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            text.push_str(&serialize_graph(&inst.g));
            if let Err(code) = write_out(&text) {
                return code;
            }
            json!({"family": "dup-tree", "k": k, "d": d, "copies": copies,
                   "seed": seed, "rng": RNG_ALGORITHM, "modulator": z,
                   "output": output.display().to_string()})
        }
        other => return usage(&format!("unknown family {other:?}")),
    };
    println!("{summary}");
    EXIT_OK
}

fn cmd_kernelize(input: &PathBuf, k: usize, r: usize, degree_cap: usize) -> u8 {
    let g = match load_graph(input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let reduced = reduce_to_min_degree3(&g);
    match certify_bounds(&reduced, k, r, degree_cap) {
        Ok(rep) => {
            let out = json!({
                "n": rep.n,
                "m": rep.m,
                "k": rep.k,
                "r": rep.r,
                "degree_cap": rep.degree_cap,
                "vertex_bound": rep.vertex_bound,
                "edge_bound": rep.edge_bound,
                "within_bounds": rep.within_bounds,
                "min_degree3": rep.min_degree3,
                "certifies_no_instance": rep.certifies_no_instance(),
            });
            println!("{out}");
            EXIT_OK
        }
        Err(e) => engine_exit(&e),
    }
}

fn cmd_bench(grid: &str, output: &PathBuf) -> u8 {
    let grid = match parse_grid(grid) {
        Ok(g) => g,
        Err(e) => return usage(&e.to_string()),
    };
    let records = run_sweep(&grid);
    let mut text = String::new();
    for rec in &records {
        text.push_str(&serde_json::to_string(rec).expect("records serialize"));
        text.push('\n');
    }
    if let Err(e) = fs::write(output, text) {
        eprintln!("error: cannot write {}: {e}", output.display());
        return EXIT_PARSE;
    }
    eprintln!("wrote {} records to {}", records.len(), output.display());
    EXIT_OK
}
