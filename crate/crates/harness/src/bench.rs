//! Benchmark sweeps over generated instance families.
//!
//! A grid is a comma-separated list of `key=value` or `key=lo..hi`
//! (inclusive) assignments, for example:
//!
//! ```text
//! problem=rpf,family=planted,n=8..10,k=1..3,r=1,max_degree=8,seed=0..9
//! problem=dqf,family=random,n=7,m=9,k=1..2,d=1,seed=0..19
//! ```
//!
//! Every grid point generates one instance, solves it, and yields one
//! [`RunRecord`]. Points run in parallel; the output order is the grid
//! order, so sweeps are reproducible line for line.

use std::time::Instant;

use nearforest::dqf::{solve_dqf, DqfInstance, DqfStats, SolveMode};
use nearforest::oracle::{oracle_min_dqf, oracle_min_rpf, DEFAULT_VERTEX_CAP};
use nearforest::rpf::{solve, RpfInstance, RpfStats};
use nearforest::{MultiGraph, Solution};
use rayon::prelude::*;
use thiserror::Error;

use crate::gen::{gen_planted_rpf, random_multigraph, RNG_ALGORITHM};
use crate::record::{status_str, witness_external, RunRecord};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("bad grid entry {0:?}, expected key=value or key=lo..hi")]
    BadEntry(String),
    #[error("unknown grid key {0:?}")]
    UnknownKey(String),
    #[error("grid is missing required key {0:?}")]
    MissingKey(&'static str),
    #[error("bad value for {key}: {value:?}")]
    BadValue { key: String, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Rpf,
    Dqf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Planted,
    Random,
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub problem: Problem,
    pub family: Family,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub k: Vec<i64>,
    pub r: Vec<usize>,
    pub d: Vec<usize>,
    pub max_degree: Vec<usize>,
    pub seeds: Vec<u64>,
}

fn parse_range(key: &str, value: &str) -> Result<Vec<u64>, GridError> {
    let bad = || GridError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    };
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: u64 = lo.parse().map_err(|_| bad())?;
        let hi: u64 = hi.parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        Ok(vec![value.parse().map_err(|_| bad())?])
    }
}

pub fn parse_grid(text: &str) -> Result<Grid, GridError> {
    let mut problem = None;
    let mut family = Family::Random;
    let mut n = vec![8usize];
    let mut m = vec![10usize];
    let mut k = None;
    let mut r = vec![1usize];
    let mut d = vec![1usize];
    let mut max_degree = vec![8usize];
    let mut seeds = vec![0u64];
    for entry in text.split(',') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| GridError::BadEntry(entry.to_string()))?;
        let as_usize = |v: &str| -> Result<Vec<usize>, GridError> {
            Ok(parse_range(key, v)?.into_iter().map(|x| x as usize).collect())
        };
        match key {
            "problem" => {
                problem = Some(match value {
                    "rpf" => Problem::Rpf,
                    "dqf" => Problem::Dqf,
                    _ => {
                        return Err(GridError::BadValue {
                            key: key.into(),
                            value: value.into(),
                        })
                    }
                })
            }
            "family" => {
                family = match value {
                    "planted" => Family::Planted,
                    "random" => Family::Random,
                    _ => {
                        return Err(GridError::BadValue {
                            key: key.into(),
                            value: value.into(),
                        })
                    }
                }
            }
            "n" => n = as_usize(value)?,
            "m" => m = as_usize(value)?,
            "k" => k = Some(parse_range(key, value)?.into_iter().map(|x| x as i64).collect()),
            "r" => r = as_usize(value)?,
            "d" => d = as_usize(value)?,
            "max_degree" => max_degree = as_usize(value)?,
            "seed" => seeds = parse_range(key, value)?,
            other => return Err(GridError::UnknownKey(other.to_string())),
        }
    }
    Ok(Grid {
        problem: problem.ok_or(GridError::MissingKey("problem"))?,
        family,
        n,
        m,
        k: k.ok_or(GridError::MissingKey("k"))?,
        r,
        d,
        max_degree,
        seeds,
    })
}

#[derive(Debug, Clone)]
struct Point {
    n: usize,
    m: usize,
    k: i64,
    rd: usize,
    max_degree: usize,
    seed: u64,
}

fn points(grid: &Grid) -> Vec<Point> {
    let rd_values = match grid.problem {
        Problem::Rpf => &grid.r,
        Problem::Dqf => &grid.d,
    };
    let mut out = Vec::new();
    for &n in &grid.n {
        for &m in &grid.m {
            for &k in &grid.k {
                for &rd in rd_values {
                    for &max_degree in &grid.max_degree {
                        for &seed in &grid.seeds {
                            out.push(Point {
                                n,
                                m,
                                k,
                                rd,
                                max_degree,
                                seed,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn build_instance(grid: &Grid, p: &Point) -> Result<(MultiGraph, String), String> {
    match grid.family {
        Family::Random => {
            let g = random_multigraph(p.n, p.m, p.seed);
            Ok((g, format!("random(n={},m={})#{}", p.n, p.m, p.seed)))
        }
        Family::Planted => {
            let (g, _) = gen_planted_rpf(p.n, p.k.max(0) as usize, p.rd, p.max_degree, p.seed)
                .map_err(|e| e.to_string())?;
            Ok((
                g,
                format!(
                    "planted(n={},k={},r={},max_degree={})#{}",
                    p.n, p.k, p.rd, p.max_degree, p.seed
                ),
            ))
        }
    }
}

/// Runs the whole grid. Failures to generate an instance produce a record
/// with status "error" and the sweep continues.
pub fn run_sweep(grid: &Grid) -> Vec<RunRecord> {
    let pts = points(grid);
    pts.par_iter()
        .map(|p| run_point(grid, p))
        .collect::<Vec<_>>()
}

fn run_point(grid: &Grid, p: &Point) -> RunRecord {
    let (problem, r, d) = match grid.problem {
        Problem::Rpf => ("rpf", Some(p.rd), None),
        Problem::Dqf => ("dqf", None, Some(p.rd)),
    };
    let mut record = RunRecord {
        instance: String::new(),
        problem: problem.into(),
        k: p.k,
        r,
        d,
        status: "error".into(),
        witness: None,
        nodes_expanded: 0,
        elapsed_ms: 0,
        measure_root: None,
        rng: RNG_ALGORITHM.into(),
        oracle_agrees: None,
    };
    let (g, name) = match build_instance(grid, p) {
        Ok(x) => x,
        Err(e) => {
            record.instance = format!("generation failed: {e}");
            return record;
        }
    };
    record.instance = name;
    let start = Instant::now();
    let sol = match grid.problem {
        Problem::Rpf => {
            let mut stats = RpfStats::default();
            let sol = solve(
                &RpfInstance {
                    g: g.clone(),
                    k: p.k,
                    r: p.rd,
                },
                &mut stats,
            );
            record.nodes_expanded = stats.nodes_expanded;
            record.measure_root = Some(stats.root_measure_max);
            sol
        }
        Problem::Dqf => {
            let mut stats = DqfStats::default();
            let sol = solve_dqf(
                &DqfInstance {
                    g: g.clone(),
                    k: p.k,
                    d: p.rd,
                },
                SolveMode::Pipeline,
                &mut stats,
            );
            record.nodes_expanded = stats.nodes_expanded;
            sol
        }
    };
    record.elapsed_ms = start.elapsed().as_millis() as u64;
    let sol = match sol {
        Ok(s) => s,
        Err(e) => {
            record.status = format!("error: {e}");
            return record;
        }
    };
    record.status = status_str(&sol).into();
    record.witness = witness_external(&sol);
    if g.vertex_count() <= DEFAULT_VERTEX_CAP {
        let opt = match grid.problem {
            Problem::Rpf => oracle_min_rpf(&g, p.rd),
            Problem::Dqf => oracle_min_dqf(&g, p.rd),
        };
        if !opt.node_budget_hit {
            record.oracle_agrees = Some((opt.opt_size as i64 <= p.k) == matches!(sol, Solution::Yes(_)));
        }
    }
    record
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing_expands_ranges() {
        let g = parse_grid("problem=rpf,family=planted,n=8,k=1..3,r=1..2,seed=0..4").unwrap();
        assert_eq!(g.k, vec![1, 2, 3]);
        assert_eq!(g.r, vec![1, 2]);
        assert_eq!(g.seeds.len(), 5);
        assert_eq!(points(&g).len(), 3 * 2 * 5);
    }

    #[test]
    fn grid_rejects_junk() {
        assert!(matches!(parse_grid("problem=rpf"), Err(GridError::MissingKey("k"))));
        assert!(matches!(
            parse_grid("problem=rpf,k=1,zap=2"),
            Err(GridError::UnknownKey(_))
        ));
        assert!(matches!(
            parse_grid("problem=nope,k=1"),
            Err(GridError::BadValue { .. })
        ));
        assert!(matches!(
            parse_grid("problem=rpf,k=3..1"),
            Err(GridError::BadValue { .. })
        ));
    }

    #[test]
    fn empty_grid_is_an_empty_sweep() {
        let mut g = parse_grid("problem=rpf,k=1").unwrap();
        g.seeds.clear();
        assert!(run_sweep(&g).is_empty());
    }

    #[test]
    fn sweep_records_agree_with_the_oracle() {
        let g = parse_grid("problem=rpf,family=random,n=6,m=8,k=0..2,r=0..1,seed=0..3").unwrap();
        let records = run_sweep(&g);
        assert_eq!(records.len(), 3 * 2 * 4);
        for rec in &records {
            assert!(rec.status == "yes" || rec.status == "no", "{}", rec.status);
            assert_eq!(rec.oracle_agrees, Some(true));
            assert_eq!(rec.rng, "chacha8");
        }
        let g = parse_grid("problem=dqf,family=random,n=6,m=8,k=0..1,d=0..1,seed=0..2").unwrap();
        for rec in run_sweep(&g) {
            assert_eq!(rec.oracle_agrees, Some(true));
            assert!(rec.measure_root.is_none());
        }
    }

    #[test]
    fn node_growth_over_k_is_reported() {
        // Search effort as the budget grows on one planted family; a
        // statistical expectation, printed for inspection rather than
        // asserted.
        let g =
            parse_grid("problem=rpf,family=planted,n=9,k=1..4,r=1,max_degree=14,seed=0..9")
                .unwrap();
        let records = run_sweep(&g);
        for k in 1..=4i64 {
            let nodes: Vec<u64> = records
                .iter()
                .filter(|rec| rec.k == k)
                .map(|rec| rec.nodes_expanded)
                .collect();
            let mean = nodes.iter().sum::<u64>() as f64 / nodes.len() as f64;
            println!("k={k}: mean nodes expanded {mean:.1}");
        }
        assert!(records.iter().all(|rec| rec.oracle_agrees != Some(false)));
    }

    #[test]
    fn planted_sweep_is_always_yes_at_the_planted_budget() {
        let g = parse_grid("problem=rpf,family=planted,n=9,k=1,r=1,max_degree=14,seed=0..7").unwrap();
        for rec in run_sweep(&g) {
            assert_eq!(rec.status, "yes", "instance {}", rec.instance);
            assert_eq!(rec.oracle_agrees, Some(true));
            assert!(rec.measure_root.is_some());
        }
    }
}
