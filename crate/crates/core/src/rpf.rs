//! The r-pseudoforest deletion solver.
//!
//! `solve` runs iterative compression over ascending vertex ids: it keeps an
//! r-pseudoforest deletion set of size at most k for the processed prefix and,
//! whenever the set would grow to k+1, guesses the part of it the new
//! solution may reuse and hands the rest to `solve_disjoint`.
//!
//! `solve_disjoint` answers the disjoint-modulator question with a bounded
//! search tree: four reduction rules run to fixpoint, then one of two
//! branching rules fires. Progress is tracked by the measure
//! phi = k + cc(S) + sum over components C of G[S] of (r - ex(C)),
//! which starts below (k+1)(r+2) and drops by at least one along every
//! branch edge; both facts are monitored at runtime through [`RpfStats`].

use std::collections::BTreeSet;

use crate::error::EngineError;
use crate::graph::{MultiGraph, VertexId};
use crate::metrics::{excess, is_r_pseudoforest};
use crate::solution::Solution;

/// The plain problem: delete at most k vertices from g so every component
/// of the rest has excess at most r.
#[derive(Debug, Clone)]
pub struct RpfInstance {
    pub g: MultiGraph,
    pub k: i64,
    pub r: usize,
}

/// The disjoint version: the deletion set must avoid the modulator s.
/// `deleted` accumulates forced and branched deletions for the witness.
#[derive(Debug, Clone)]
pub struct RpfDisjointInstance {
    pub g: MultiGraph,
    pub s: BTreeSet<VertexId>,
    pub k: i64,
    pub r: usize,
    pub deleted: BTreeSet<VertexId>,
}

impl RpfDisjointInstance {
    pub fn new(g: MultiGraph, s: BTreeSet<VertexId>, k: i64, r: usize) -> Self {
        RpfDisjointInstance {
            g,
            s,
            k,
            r,
            deleted: BTreeSet::new(),
        }
    }

    fn outside(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.g.vertices().filter(|v| !self.s.contains(v))
    }

    fn modulator_graph(&self) -> MultiGraph {
        self.g.induced(&self.s)
    }

    fn delete(&mut self, v: VertexId) {
        self.g.delete_vertex(v).expect("deleting a live vertex");
        self.deleted.insert(v);
        self.k -= 1;
    }
}

/// Search telemetry. Violation counters must stay at zero; they exist so the
/// analytical bounds are checked on every run instead of assumed.
#[derive(Debug, Clone, Default)]
pub struct RpfStats {
    pub nodes_expanded: u64,
    pub disjoint_solves: u64,
    pub max_disjoint_nodes: u64,
    pub measure_violations: u64,
    pub root_bound_violations: u64,
    pub node_ceiling_violations: u64,
    pub root_measure_max: i64,
    pub br2_path_max: usize,
    pub br2_path_violations: u64,
    pub trace: bool,
}

/// Rule 1: drop vertices outside S of degree at most one (isolated vertices
/// included). Returns true if anything changed.
pub fn rule1_prune_leaves(inst: &mut RpfDisjointInstance) -> bool {
    let mut changed = false;
    loop {
        let victims: Vec<VertexId> = inst.outside().filter(|&v| inst.g.degree(v) <= 1).collect();
        if victims.is_empty() {
            return changed;
        }
        inst.g.delete_vertices(victims);
        changed = true;
    }
}

/// Rule 2: any v outside S for which G[S + v] is not an r-pseudoforest must
/// be in every solution disjoint from S; delete it and charge the budget.
/// Returns the forced vertices.
pub fn rule2_force_delete(inst: &mut RpfDisjointInstance) -> BTreeSet<VertexId> {
    let mut forced = BTreeSet::new();
    loop {
        let candidates: Vec<VertexId> = inst.outside().collect();
        let mut hit = None;
        for v in candidates {
            let mut with_v = inst.s.clone();
            with_v.insert(v);
            if !is_r_pseudoforest(&inst.g.induced(&with_v), inst.r) {
                hit = Some(v);
                break;
            }
        }
        match hit {
            Some(v) => {
                inst.delete(v);
                forced.insert(v);
            }
            None => return forced,
        }
    }
}

/// Rule 3: bypass degree-2, loop-free vertices outside S that have at least
/// one neighbor outside S. The neighbor condition keeps G[S] untouched: the
/// replacement edge always has an endpoint outside S.
pub fn rule3_bypass(inst: &mut RpfDisjointInstance) -> bool {
    let mut changed = false;
    loop {
        let candidate = inst.outside().find(|&v| {
            inst.g.degree(v) == 2
                && inst.g.loops(v) == 0
                && inst.g.neighbors(v).any(|(n, _)| !inst.s.contains(&n))
        });
        match candidate {
            Some(v) => {
                inst.g.bypass_degree2(v).expect("candidate checked");
                changed = true;
            }
            None => return changed,
        }
    }
}

/// Rule 4: a negative budget is a dead end.
pub fn rule4_budget(inst: &RpfDisjointInstance) -> bool {
    inst.k >= 0
}

/// The search measure phi = k + cc(S) + sum over components of G[S] of
/// (r - ex(C)). Only meaningful while G[S] is an r-pseudoforest.
pub fn measure(inst: &RpfDisjointInstance) -> i64 {
    let gs = inst.modulator_graph();
    let comps = gs.components();
    let mut phi = inst.k + comps.len() as i64;
    for c in &comps {
        phi += inst.r as i64 - excess(c) as i64;
    }
    phi
}

/// BR-1 applies to a vertex outside S with multiplicity-weighted d_S >= 2.
pub fn find_br1_vertex(inst: &RpfDisjointInstance) -> Option<VertexId> {
    inst.outside()
        .find(|&v| inst.g.neighbors_in(v, &inst.s).1 >= 2)
}

/// BR-1: either v joins the solution (budget drops) or v joins S. The merge
/// child is pruned up front when G[S + v] would stop being an
/// r-pseudoforest, which is exactly what Rule 2 would do to it one level
/// deeper. Delete child first.
pub fn branch_br1(inst: &RpfDisjointInstance, v: VertexId) -> Vec<RpfDisjointInstance> {
    debug_assert!(!inst.s.contains(&v));
    debug_assert!(inst.g.neighbors_in(v, &inst.s).1 >= 2, "BR-1 needs d_S >= 2");
    let mut children = Vec::with_capacity(2);
    let mut del = inst.clone();
    del.delete(v);
    children.push(del);
    let mut merged_s = inst.s.clone();
    merged_s.insert(v);
    if is_r_pseudoforest(&inst.g.induced(&merged_s), inst.r) {
        let mut merge = inst.clone();
        merge.s = merged_s;
        children.push(merge);
    }
    children
}

/// The structure BR-2 branches on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Br2Case {
    /// A component of G - S linked to S by exactly one edge; `attachment` is
    /// its endpoint inside the component.
    SingleEdgeComponent {
        attachment: VertexId,
        component: BTreeSet<VertexId>,
    },
    /// Shortest path in G - S realizing two distinct edge attachments to S.
    Path(Vec<VertexId>),
}

/// Identifies what BR-2 would branch on, or None when nothing outside S
/// touches S.
pub fn br2_case(inst: &RpfDisjointInstance) -> Option<Br2Case> {
    let outside_set: BTreeSet<VertexId> = inst.outside().collect();
    let rest = inst.g.induced(&outside_set);
    for c in rest.components() {
        let mut weight = 0usize;
        let mut attachment = None;
        for &v in &c.vertices {
            let (_, w) = inst.g.neighbors_in(v, &inst.s);
            weight += w;
            if w > 0 && attachment.is_none() {
                attachment = Some(v);
            }
        }
        if weight == 1 {
            return Some(Br2Case::SingleEdgeComponent {
                attachment: attachment.unwrap(),
                component: c.vertices,
            });
        }
    }
    inst.g
        .shortest_attached_path(&outside_set, &inst.s)
        .map(Br2Case::Path)
}

/// BR-2: for a single-edge component, delete the attachment vertex or merge
/// the whole component into S; for a path, delete any one path vertex or
/// merge the whole path into S. Merge children are emitted only while they
/// keep G[S] an r-pseudoforest. Delete children first, in ascending id order.
pub fn branch_br2(inst: &RpfDisjointInstance, case: &Br2Case) -> Vec<RpfDisjointInstance> {
    let (delete_candidates, merge_set): (Vec<VertexId>, BTreeSet<VertexId>) = match case {
        Br2Case::SingleEdgeComponent {
            attachment,
            component,
        } => (vec![*attachment], component.clone()),
        Br2Case::Path(p) => {
            let mut vs = p.clone();
            vs.sort_unstable();
            let set = vs.iter().copied().collect();
            (vs, set)
        }
    };
    let mut children = Vec::with_capacity(delete_candidates.len() + 1);
    for &v in &delete_candidates {
        let mut del = inst.clone();
        del.delete(v);
        children.push(del);
    }
    let mut merged_s = inst.s.clone();
    merged_s.extend(merge_set.iter().copied());
    if is_r_pseudoforest(&inst.g.induced(&merged_s), inst.r) {
        let mut merge = inst.clone();
        merge.s = merged_s;
        children.push(merge);
    }
    children
}

fn node_ceiling(k: i64, r: usize) -> Option<u64> {
    if k < 0 {
        return Some(1);
    }
    let base = 2 * r as u64 + 3;
    let exp = (k as u32 + 1).checked_mul(r as u32 + 2)?;
    base.checked_pow(exp)
}

/// Exact answer to the disjoint question. Applies Rules 1-4 to fixpoint,
/// then BR-1, then BR-2, recursing until the graph is an r-pseudoforest or
/// the budget is spent.
pub fn solve_disjoint(inst: RpfDisjointInstance, stats: &mut RpfStats) -> Solution {
    stats.disjoint_solves += 1;
    if !is_r_pseudoforest(&inst.modulator_graph(), inst.r) {
        return Solution::No;
    }
    let (root_k, root_r) = (inst.k, inst.r);
    if root_k >= 0 {
        let phi = measure(&inst);
        stats.root_measure_max = stats.root_measure_max.max(phi);
        if phi >= (root_k + 1) * (root_r as i64 + 2) {
            stats.root_bound_violations += 1;
        }
    }
    let mut nodes = 0u64;
    let sol = solve_rec(inst, stats, &mut nodes);
    stats.max_disjoint_nodes = stats.max_disjoint_nodes.max(nodes);
    if let Some(ceiling) = node_ceiling(root_k, root_r) {
        if nodes > ceiling {
            stats.node_ceiling_violations += 1;
        }
    }
    sol
}

fn solve_rec(mut inst: RpfDisjointInstance, stats: &mut RpfStats, nodes: &mut u64) -> Solution {
    *nodes += 1;
    stats.nodes_expanded += 1;
    // Reduction fixpoint, order 4, 2, 1, 3. Rule 2 runs before 1 and 3
    // because its forced deletions can create new leaves.
    loop {
        if !rule4_budget(&inst) {
            return Solution::No;
        }
        let hit2 = !rule2_force_delete(&mut inst).is_empty();
        if !rule4_budget(&inst) {
            return Solution::No;
        }
        let hit1 = rule1_prune_leaves(&mut inst);
        let hit3 = rule3_bypass(&mut inst);
        if !hit2 && !hit1 && !hit3 {
            break;
        }
    }
    if is_r_pseudoforest(&inst.g, inst.r) {
        return Solution::Yes(inst.deleted.clone());
    }
    let phi_parent = measure(&inst);
    let children = match find_br1_vertex(&inst) {
        Some(v) => {
            if stats.trace {
                eprintln!("rpf: BR-1 on {v} (phi {phi_parent})");
            }
            branch_br1(&inst, v)
        }
        None => {
            let case = br2_case(&inst)
                .expect("a non-r-pseudoforest with valid modulator has S-attached vertices");
            if let Br2Case::Path(p) = &case {
                stats.br2_path_max = stats.br2_path_max.max(p.len());
                if p.len() > 2 * inst.r + 2 {
                    stats.br2_path_violations += 1;
                }
            }
            if stats.trace {
                eprintln!("rpf: BR-2 {case:?} (phi {phi_parent})");
            }
            branch_br2(&inst, &case)
        }
    };
    for child in children {
        if measure(&child) > phi_parent - 1 {
            stats.measure_violations += 1;
        }
        if let Solution::Yes(w) = solve_rec(child, stats, nodes) {
            return Solution::Yes(w);
        }
    }
    Solution::No
}

/// Exact r-pseudoforest deletion via iterative compression. Vertices are
/// introduced in ascending id order; the reported witness is re-verified
/// before it is returned.
pub fn solve(inst: &RpfInstance, stats: &mut RpfStats) -> Result<Solution, EngineError> {
    if inst.k < 0 {
        return Err(EngineError::InvalidArguments(format!(
            "budget k must be non-negative, got {}",
            inst.k
        )));
    }
    let k = inst.k as usize;
    let mut processed: BTreeSet<VertexId> = BTreeSet::new();
    let mut solution: BTreeSet<VertexId> = BTreeSet::new();
    for v in inst.g.vertices() {
        processed.insert(v);
        solution.insert(v);
        if solution.len() <= k {
            continue;
        }
        // The prefix solution would exceed k: compress it by guessing the
        // deleted part D of the size-(k+1) modulator and solving the
        // disjoint instance on what is kept.
        let prefix = inst.g.induced(&processed);
        let modulator: Vec<VertexId> = solution.iter().copied().collect();
        let mut compressed = None;
        for mask in 0u32..(1 << modulator.len()) {
            let delete_part: BTreeSet<VertexId> = modulator
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &u)| u)
                .collect();
            if delete_part.len() > k {
                continue;
            }
            let keep: BTreeSet<VertexId> =
                solution.difference(&delete_part).copied().collect();
            let disjoint = RpfDisjointInstance::new(
                prefix.without(&delete_part),
                keep,
                (k - delete_part.len()) as i64,
                inst.r,
            );
            if let Solution::Yes(extra) = solve_disjoint(disjoint, stats) {
                let mut x = delete_part;
                x.extend(extra);
                compressed = Some(x);
                break;
            }
        }
        match compressed {
            Some(x) => solution = x,
            // No solution for this prefix means none for the whole graph:
            // restricting a solution to an induced subgraph keeps it valid.
            None => return Ok(Solution::No),
        }
    }
    if solution.len() > k || !is_r_pseudoforest(&inst.g.without(&solution), inst.r) {
        return Err(EngineError::InternalInvariant(
            "compression produced an invalid witness".into(),
        ));
    }
    Ok(Solution::Yes(solution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_min_rpf;

    fn graph(n: usize, edges: &[(u32, u32)]) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(n);
        for &(a, b) in edges {
            g.add_edge(VertexId(a), VertexId(b)).unwrap();
        }
        g
    }

    fn complete(n: u32) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(n as usize);
        for a in 0..n {
            for b in (a + 1)..n {
                g.add_edge(VertexId(a), VertexId(b)).unwrap();
            }
        }
        g
    }

    fn ids(xs: &[u32]) -> BTreeSet<VertexId> {
        xs.iter().map(|&x| VertexId(x)).collect()
    }

    fn disjoint(g: MultiGraph, s: &[u32], k: i64, r: usize) -> RpfDisjointInstance {
        RpfDisjointInstance::new(g, ids(s), k, r)
    }

    #[test]
    fn rule1_prunes_pendants_and_chains_but_not_s() {
        // Triangle 0-1-2 with pendant 3 on 0, chain 4-5-6, S-vertex 7 of
        // degree 1.
        let g = graph(
            8,
            &[(0, 1), (1, 2), (0, 2), (0, 3), (4, 5), (5, 6), (2, 7)],
        );
        let mut inst = disjoint(g, &[7], 1, 0);
        assert!(rule1_prune_leaves(&mut inst));
        let alive: Vec<u32> = inst.g.vertices().map(|v| v.0).collect();
        assert_eq!(alive, vec![0, 1, 2, 7]);
    }

    #[test]
    fn rule2_forces_cycle_closers() {
        // S is the path 0-1; vertex 2 has two edges to it; r = 0.
        let g = graph(4, &[(0, 1), (2, 0), (2, 1), (3, 0)]);
        let mut inst = disjoint(g.clone(), &[0, 1], 2, 0);
        let forced = rule2_force_delete(&mut inst);
        assert_eq!(forced, ids(&[2]));
        assert_eq!(inst.k, 1);
        assert_eq!(inst.deleted, ids(&[2]));
        // With r = 1 the same vertex survives.
        let mut relaxed = disjoint(g, &[0, 1], 2, 1);
        assert!(rule2_force_delete(&mut relaxed).is_empty());
        assert_eq!(relaxed.k, 2);
    }

    #[test]
    fn rule3_requires_an_outside_neighbor() {
        // 1 sits between S-vertices 0 and 2: never bypassed. The chain
        // 0-3-4-5-2 dissolves from 3 upward until only 5 is left, pinched
        // between the two S-vertices.
        let g = graph(6, &[(0, 1), (1, 2), (3, 4), (4, 5), (3, 0), (5, 2)]);
        let mut inst = disjoint(g, &[0, 2], 1, 0);
        assert!(rule3_bypass(&mut inst));
        assert!(inst.g.contains(VertexId(1)));
        assert!(!inst.g.contains(VertexId(3)));
        assert!(!inst.g.contains(VertexId(4)));
        assert_eq!(inst.g.multiplicity(VertexId(5), VertexId(0)), 1);
        assert_eq!(inst.g.multiplicity(VertexId(5), VertexId(2)), 1);
        // A second pass has nothing left to do.
        assert!(!rule3_bypass(&mut inst));
    }

    #[test]
    fn rule3_double_edge_bypass_makes_a_loop() {
        let mut g = graph(2, &[(0, 1), (0, 1)]);
        let v = g.add_vertex();
        g.add_edge(v, VertexId(0)).unwrap();
        let mut inst = disjoint(g, &[], 1, 1);
        // Vertex 1 has a double edge to 0; bypassing it must create a loop.
        assert!(rule3_bypass(&mut inst));
        assert!(inst.g.loops(VertexId(0)) >= 1);
    }

    #[test]
    fn rule4_is_the_budget_gate() {
        let inst = disjoint(MultiGraph::with_vertices(1), &[], -1, 0);
        assert!(!rule4_budget(&inst));
        let ok = disjoint(MultiGraph::with_vertices(1), &[], 0, 0);
        assert!(rule4_budget(&ok));
    }

    #[test]
    fn measure_matches_direct_evaluation() {
        // S = triangle, k = 3, r = 2: phi = 3 + 1 + (2 - 1) = 5.
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let inst = disjoint(g, &[0, 1, 2], 3, 2);
        assert_eq!(measure(&inst), 5);
        // Empty S: phi = k.
        let empty_s = disjoint(MultiGraph::with_vertices(2), &[], 4, 1);
        assert_eq!(measure(&empty_s), 4);
    }

    #[test]
    fn root_measure_stays_under_its_bound() {
        // k = 2, r = 1, |S| <= 3: phi < (2+1)(1+2) = 9 for any valid S.
        let g = graph(5, &[(0, 1), (1, 2), (3, 4)]);
        let inst = disjoint(g, &[0, 1, 2], 2, 1);
        assert!(measure(&inst) < 9);
    }

    #[test]
    fn br1_delete_child_always_merge_child_when_feasible() {
        // v = 2 with edges to two S-components {0} and {1}.
        let g = graph(3, &[(2, 0), (2, 1)]);
        let inst = disjoint(g, &[0, 1], 1, 1);
        let phi = measure(&inst);
        let children = branch_br1(&inst, VertexId(2));
        assert_eq!(children.len(), 2);
        assert_eq!(children[0].k, 0);
        assert!(children[0].deleted.contains(&VertexId(2)));
        assert!(children[1].s.contains(&VertexId(2)));
        // Merging two components through v drops phi by at least 1 + r = 2.
        assert!(measure(&children[1]) <= phi - 2);
        assert_eq!(measure(&children[0]), phi - 1);
    }

    #[test]
    fn br1_merge_child_pruned_when_infeasible() {
        // r = 0 and v = 2 closes a cycle with the S-path 0-1.
        let g = graph(3, &[(0, 1), (2, 0), (2, 1)]);
        let inst = disjoint(g, &[0, 1], 1, 0);
        let children = branch_br1(&inst, VertexId(2));
        assert_eq!(children.len(), 1);
        assert!(children[0].deleted.contains(&VertexId(2)));
    }

    #[test]
    fn br1_double_edge_to_one_component_counts() {
        let g = graph(2, &[(0, 1), (0, 1)]);
        let inst = disjoint(g, &[0], 1, 1);
        assert_eq!(find_br1_vertex(&inst), Some(VertexId(1)));
        let phi = measure(&inst);
        let children = branch_br1(&inst, VertexId(1));
        // Merge child keeps the double edge inside S: excess 1 <= r = 1.
        assert_eq!(children.len(), 2);
        assert!(measure(&children[1]) < phi);
    }

    #[test]
    fn br2_single_edge_component_case() {
        // Component {2, 3, 4} is a triangle tied to S = {0} by one edge 2-0.
        let g = graph(5, &[(2, 3), (3, 4), (2, 4), (2, 0), (0, 1)]);
        let inst = disjoint(g, &[0, 1], 1, 1);
        let case = br2_case(&inst).unwrap();
        match &case {
            Br2Case::SingleEdgeComponent {
                attachment,
                component,
            } => {
                assert_eq!(*attachment, VertexId(2));
                assert_eq!(*component, ids(&[2, 3, 4]));
            }
            other => panic!("expected single-edge component, got {other:?}"),
        }
        let children = branch_br2(&inst, &case);
        // Delete child plus merge child (triangle has excess 1 = r).
        assert_eq!(children.len(), 2);
        assert!(children[0].deleted.contains(&VertexId(2)));
        assert!(children[1].s.is_superset(&ids(&[0, 1, 2, 3, 4])));
    }

    #[test]
    fn br2_merge_pruned_when_component_excess_too_big() {
        // Component is K4 (excess 3) attached once; r = 1 forbids merging.
        let mut g = complete(4);
        let s0 = g.add_vertex();
        let s1 = g.add_vertex();
        g.add_edge(s0, s1).unwrap();
        g.add_edge(VertexId(0), s0).unwrap();
        let inst = RpfDisjointInstance::new(g, BTreeSet::from([s0, s1]), 2, 1);
        let case = br2_case(&inst).unwrap();
        let children = branch_br2(&inst, &case);
        assert_eq!(children.len(), 1, "merge child must be pruned");
    }

    #[test]
    fn solve_disjoint_trivial_yes() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let inst = disjoint(g, &[0, 1, 2], 0, 1);
        let mut stats = RpfStats::default();
        assert_eq!(
            solve_disjoint(inst, &mut stats),
            Solution::Yes(BTreeSet::new())
        );
    }

    #[test]
    fn solve_disjoint_two_triangles_sharing_a_vertex() {
        // Triangles {0,1,2} and {2,3,4} share vertex 2; S = {0,1}; r = 0,
        // k = 1. Deleting the shared vertex is the only disjoint option.
        let g = graph(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        let inst = disjoint(g, &[0, 1], 1, 0);
        let mut stats = RpfStats::default();
        match solve_disjoint(inst, &mut stats) {
            Solution::Yes(w) => assert_eq!(w, ids(&[2])),
            Solution::No => panic!("expected yes"),
        }
    }

    #[test]
    fn solve_handles_textbook_cases() {
        let mut stats = RpfStats::default();
        // C5, r = 0, k = 1: a cycle has a 1-vertex feedback vertex set.
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let sol = solve(
            &RpfInstance {
                g: c5,
                k: 1,
                r: 0,
            },
            &mut stats,
        )
        .unwrap();
        assert!(sol.is_yes());
        // K4: r = 1 needs one deletion, zero is not enough.
        let k4 = complete(4);
        let no = solve(
            &RpfInstance {
                g: k4.clone(),
                k: 0,
                r: 1,
            },
            &mut stats,
        )
        .unwrap();
        assert_eq!(no, Solution::No);
        let yes = solve(&RpfInstance { g: k4, k: 1, r: 1 }, &mut stats).unwrap();
        assert!(yes.is_yes());
    }

    #[test]
    fn negative_budget_is_an_argument_error() {
        let inst = RpfInstance {
            g: MultiGraph::with_vertices(1),
            k: -1,
            r: 0,
        };
        assert!(matches!(
            solve(&inst, &mut RpfStats::default()),
            Err(EngineError::InvalidArguments(_))
        ));
    }

    fn petersen() -> MultiGraph {
        let mut g = MultiGraph::with_vertices(10);
        for i in 0..5u32 {
            g.add_edge(VertexId(i), VertexId((i + 1) % 5)).unwrap();
            g.add_edge(VertexId(i), VertexId(i + 5)).unwrap();
            g.add_edge(VertexId(i + 5), VertexId((i + 2) % 5 + 5)).unwrap();
        }
        g
    }

    #[test]
    fn petersen_minimum_matches_oracle() {
        let g = petersen();
        assert_eq!(g.edge_count(), 15);
        let oracle_opt = oracle_min_rpf(&g, 1).opt_size;
        let mut solver_opt = None;
        for k in 0..=10 {
            let mut stats = RpfStats::default();
            let sol = solve(
                &RpfInstance {
                    g: g.clone(),
                    k,
                    r: 1,
                },
                &mut stats,
            )
            .unwrap();
            assert_eq!(stats.measure_violations, 0);
            assert_eq!(stats.root_bound_violations, 0);
            if sol.is_yes() {
                solver_opt = Some(k as usize);
                break;
            }
        }
        assert_eq!(solver_opt, Some(oracle_opt));
    }

    /// Exhaustive agreement with the oracle on every labeled 4-vertex graph
    /// and a random spread of multigraphs up to 8 vertices.
    #[test]
    fn agrees_with_oracle_on_small_graphs() {
        let pairs: Vec<(u32, u32)> = (0..4u32)
            .flat_map(|a| ((a + 1)..4).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let mut g = MultiGraph::with_vertices(4);
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    g.add_edge(VertexId(a), VertexId(b)).unwrap();
                }
            }
            check_against_oracle(&g);
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..120 {
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(0..=14);
            let mut g = MultiGraph::with_vertices(n);
            for _ in 0..m {
                let a = rng.gen_range(0..n) as u32;
                let b = rng.gen_range(0..n) as u32;
                g.add_edge(VertexId(a), VertexId(b)).unwrap();
            }
            check_against_oracle(&g);
        }
    }

    fn check_against_oracle(g: &MultiGraph) {
        for r in 0..=2usize {
            let opt = oracle_min_rpf(g, r).opt_size;
            for k in 0..=3i64 {
                let mut stats = RpfStats::default();
                let sol = solve(
                    &RpfInstance {
                        g: g.clone(),
                        k,
                        r,
                    },
                    &mut stats,
                )
                .unwrap();
                assert_eq!(
                    sol.is_yes(),
                    opt as i64 <= k,
                    "disagreement at r={r} k={k} opt={opt}"
                );
                assert_eq!(stats.measure_violations, 0, "phi must drop on branches");
                assert_eq!(stats.root_bound_violations, 0);
                assert_eq!(stats.node_ceiling_violations, 0);
                assert_eq!(stats.br2_path_violations, 0);
                if let Solution::Yes(w) = sol {
                    assert!(w.len() as i64 <= k);
                    assert!(is_r_pseudoforest(&g.without(&w), r));
                }
            }
        }
    }
}
