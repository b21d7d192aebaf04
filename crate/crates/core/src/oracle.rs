//! Independent brute-force ground truth.
//!
//! Everything here enumerates plainly: vertex subsets in ascending size (and
//! lexicographic order within a size), simple paths by DFS, path packings by
//! include/exclude search. No reductions, no branching tricks. This module is
//! the yardstick the solvers are measured against, so it must stay boring.

use std::collections::BTreeSet;

use crate::graph::{MultiGraph, VertexId};
use crate::metrics::{is_d_quasi_forest, is_r_pseudoforest};

/// Refusal threshold: sweeps of 2^14 subsets stay comfortably interactive.
pub const DEFAULT_VERTEX_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Exact optimum when `node_budget_hit` is false.
    pub opt_size: usize,
    pub one_witness: BTreeSet<VertexId>,
    /// True when the instance exceeded the vertex cap and was refused.
    pub node_budget_hit: bool,
}

impl OracleResult {
    fn refused() -> Self {
        OracleResult {
            opt_size: 0,
            one_witness: BTreeSet::new(),
            node_budget_hit: true,
        }
    }
}

/// Minimum r-pseudoforest deletion set size by subset enumeration.
pub fn oracle_min_rpf(g: &MultiGraph, r: usize) -> OracleResult {
    oracle_min_rpf_avoiding(g, &BTreeSet::new(), r)
}

/// Disjoint variant: the deletion set must avoid `forbidden`.
pub fn oracle_min_rpf_avoiding(
    g: &MultiGraph,
    forbidden: &BTreeSet<VertexId>,
    r: usize,
) -> OracleResult {
    minimize(g, forbidden, &mut |h| is_r_pseudoforest(h, r))
}

/// Minimum d-quasi-forest deletion set size by subset enumeration.
pub fn oracle_min_dqf(g: &MultiGraph, d: usize) -> OracleResult {
    oracle_min_dqf_avoiding(g, &BTreeSet::new(), d)
}

/// Disjoint variant: the deletion set must avoid `forbidden`.
pub fn oracle_min_dqf_avoiding(
    g: &MultiGraph,
    forbidden: &BTreeSet<VertexId>,
    d: usize,
) -> OracleResult {
    minimize(g, forbidden, &mut |h| is_d_quasi_forest(h, d))
}

fn minimize(
    g: &MultiGraph,
    forbidden: &BTreeSet<VertexId>,
    good: &mut dyn FnMut(&MultiGraph) -> bool,
) -> OracleResult {
    if g.vertex_count() > DEFAULT_VERTEX_CAP {
        return OracleResult::refused();
    }
    let candidates: Vec<VertexId> = g.vertices().filter(|v| !forbidden.contains(v)).collect();
    for size in 0..=candidates.len() {
        let mut witness: Option<BTreeSet<VertexId>> = None;
        for_each_subset(&candidates, size, &mut |subset| {
            if witness.is_none() {
                let h = g.without(subset);
                if good(&h) {
                    witness = Some(subset.clone());
                }
            }
        });
        if let Some(w) = witness {
            return OracleResult {
                opt_size: size,
                one_witness: w,
                node_budget_hit: false,
            };
        }
    }
    // Even deleting every allowed vertex fails (the forbidden rest is bad).
    OracleResult {
        opt_size: candidates.len() + 1,
        one_witness: BTreeSet::new(),
        node_budget_hit: false,
    }
}

fn for_each_subset(vs: &[VertexId], size: usize, f: &mut impl FnMut(&BTreeSet<VertexId>)) {
    fn rec(
        vs: &[VertexId],
        size: usize,
        start: usize,
        cur: &mut BTreeSet<VertexId>,
        f: &mut impl FnMut(&BTreeSet<VertexId>),
    ) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let missing = size - cur.len();
        for i in start..=vs.len().saturating_sub(missing) {
            cur.insert(vs[i]);
            rec(vs, size, i + 1, cur, f);
            cur.remove(&vs[i]);
        }
    }
    rec(vs, size, 0, &mut BTreeSet::new(), f);
}

/// Outcome of the path-packing dichotomy: either s+1 pairwise vertex-disjoint
/// paths whose endpoints realize two distinct edge attachments to the
/// terminal set, or a separator after whose removal no component holds two
/// terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackingOutcome {
    Packing(Vec<Vec<VertexId>>),
    Separator(BTreeSet<VertexId>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("instance exceeds the oracle vertex cap")]
pub struct CapExceeded;

/// Exhaustive realization of the packing-versus-separator alternative for
/// paths with both endpoints in `r_set` (distinct endpoints; a path may pass
/// through further terminals). Returns a packing of s+1 disjoint paths when
/// one exists; otherwise a minimum separator, which the alternative bounds
/// by 2s vertices.
pub fn oracle_path_packing(
    g: &MultiGraph,
    r_set: &BTreeSet<VertexId>,
    s: usize,
) -> Result<PackingOutcome, CapExceeded> {
    if g.vertex_count() > DEFAULT_VERTEX_CAP {
        return Err(CapExceeded);
    }
    let paths = all_terminal_paths(g, r_set);
    if let Some(packing) = find_disjoint_packing(&paths, s + 1) {
        return Ok(PackingOutcome::Packing(packing));
    }
    // Smallest vertex set whose removal leaves no component with two
    // terminals; ascending size, lexicographic within a size.
    let vs: Vec<VertexId> = g.vertices().collect();
    for size in 0..=vs.len() {
        let mut found: Option<BTreeSet<VertexId>> = None;
        for_each_subset(&vs, size, &mut |subset| {
            if found.is_none() && separates_terminals(g, r_set, subset) {
                found = Some(subset.clone());
            }
        });
        if let Some(b) = found {
            return Ok(PackingOutcome::Separator(b));
        }
    }
    unreachable!("deleting every vertex separates all terminals");
}

fn separates_terminals(g: &MultiGraph, r_set: &BTreeSet<VertexId>, b: &BTreeSet<VertexId>) -> bool {
    let h = g.without(b);
    h.components()
        .iter()
        .all(|c| c.vertices.intersection(r_set).count() <= 1)
}

/// All simple paths with two distinct endpoints in the terminal set.
fn all_terminal_paths(g: &MultiGraph, r_set: &BTreeSet<VertexId>) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    // Length-1 "paths": a terminal's doubled edge or loop realizes a cycle
    // attachment on its own only via parallel edges to another vertex; for
    // packing purposes only genuine two-endpoint paths are enumerated here.
    for &start in r_set {
        if !g.contains(start) {
            continue;
        }
        let mut path = vec![start];
        let mut on_path = BTreeSet::from([start]);
        extend_paths(g, r_set, start, &mut path, &mut on_path, &mut out);
    }
    out
}

fn extend_paths(
    g: &MultiGraph,
    r_set: &BTreeSet<VertexId>,
    start: VertexId,
    path: &mut Vec<VertexId>,
    on_path: &mut BTreeSet<VertexId>,
    out: &mut Vec<Vec<VertexId>>,
) {
    let last = *path.last().unwrap();
    for (n, _) in g.neighbors(last) {
        if on_path.contains(&n) {
            continue;
        }
        path.push(n);
        on_path.insert(n);
        // Record with the smaller endpoint first to halve duplicates.
        if r_set.contains(&n) && n > start {
            out.push(path.clone());
        }
        extend_paths(g, r_set, start, path, on_path, out);
        on_path.remove(&n);
        path.pop();
    }
}

fn find_disjoint_packing(paths: &[Vec<VertexId>], want: usize) -> Option<Vec<Vec<VertexId>>> {
    fn rec(
        paths: &[Vec<VertexId>],
        want: usize,
        idx: usize,
        used: &mut BTreeSet<VertexId>,
        chosen: &mut Vec<Vec<VertexId>>,
    ) -> bool {
        if chosen.len() == want {
            return true;
        }
        if idx >= paths.len() || paths.len() - idx < want - chosen.len() {
            return false;
        }
        let p = &paths[idx];
        if p.iter().all(|v| !used.contains(v)) {
            for v in p {
                used.insert(*v);
            }
            chosen.push(p.clone());
            if rec(paths, want, idx + 1, used, chosen) {
                return true;
            }
            chosen.pop();
            for v in p {
                used.remove(v);
            }
        }
        rec(paths, want, idx + 1, used, chosen)
    }
    let mut chosen = Vec::new();
    if rec(paths, want, 0, &mut BTreeSet::new(), &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}
