//! The d-quasi-forest deletion solver.
//!
//! `solve_dqf` runs iterative compression; each compression guess lands in
//! the disjoint problem with an undeletable modulator Z, solved either by
//! the staged pipeline (`solve_disjoint_pipeline`) or by the exhaustive
//! fallback search (`solve_disjoint_fallback`). The two routes are kept
//! deliberately separate so their answers can be diffed instance by
//! instance.
//!
//! Pipeline stages, each entered only when the previous ones are settled:
//! degree reductions and forced deletions, branching the cycles out of
//! G - Z, partitioning trees with many Z-neighbors, deduplicating trees by
//! neighborhood type, classifying Z-vertices as forced or separable, and a
//! final bounded branch over guessed tree intersections.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::EngineError;
use crate::graph::{Component, MultiGraph, VertexId};
use crate::metrics::{excess, is_d_quasi_forest, minimum_fvs};
use crate::solution::Solution;

/// The plain problem: delete at most k vertices so every remaining
/// component has a feedback vertex set of size at most d.
#[derive(Debug, Clone)]
pub struct DqfInstance {
    pub g: MultiGraph,
    pub k: i64,
    pub d: usize,
}

/// The disjoint version with an undeletable modulator z: the deletion set
/// must avoid z, and G - Z is promised to be a d-quasi-forest. `deleted`
/// accumulates the witness under construction.
#[derive(Debug, Clone)]
pub struct DqfDisjointInstance {
    pub g: MultiGraph,
    pub z: BTreeSet<VertexId>,
    pub k: i64,
    pub d: usize,
    pub deleted: BTreeSet<VertexId>,
}

impl DqfDisjointInstance {
    pub fn new(g: MultiGraph, z: BTreeSet<VertexId>, k: i64, d: usize) -> Self {
        DqfDisjointInstance {
            g,
            z,
            k,
            d,
            deleted: BTreeSet::new(),
        }
    }

    fn outside(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.g.vertices().filter(|v| !self.z.contains(v))
    }

    fn outside_set(&self) -> BTreeSet<VertexId> {
        self.outside().collect()
    }

    fn rest(&self) -> MultiGraph {
        self.g.induced(&self.outside_set())
    }

    fn modulator_graph(&self) -> MultiGraph {
        self.g.induced(&self.z)
    }

    fn delete(&mut self, v: VertexId) {
        self.g.delete_vertex(v).expect("deleting a live vertex");
        self.deleted.insert(v);
        self.k -= 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Pipeline,
    Fallback,
}

/// Telemetry for both solve routes. `z_peak` watches the modulator-growth
/// ledger; `cyclic_fvs_sum_exceedances` counts nodes where the sum of
/// component feedback sizes around one modulator vertex exceeded k + d even
/// though the component count did not (recorded, never acted on).
#[derive(Debug, Clone, Default)]
pub struct DqfStats {
    pub nodes_expanded: u64,
    pub fallback_nodes: u64,
    pub z_peak: usize,
    pub cyclic_fvs_sum_exceedances: u64,
    pub cyclic_branches: u64,
    pub partition_branches: u64,
    pub trees_deduplicated: u64,
    pub separation_guesses: u64,
    pub interior_candidates_pruned: u64,
    pub trace: bool,
}

/// Canonical signature of how a tree of G - Z attaches to Z: its distinct
/// Z-neighbors, each tagged with whether it sends two or more edges into
/// the tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NeighborhoodType {
    pub neighbors: Vec<(VertexId, bool)>,
}

/// Outcome of the forced-vertex classification. Every modulator vertex
/// adjacent to G - Z lands either in `forced` (k + d + 1 vertex-disjoint
/// attachment paths exist, so every small feedback vertex set of its
/// component must contain it) or in `separators` with a set of at most
/// 2(k + d) forest vertices whose removal leaves no component holding two
/// of its neighbors.
#[derive(Debug, Clone, Default)]
pub struct ForcedVertexReport {
    pub forced: BTreeSet<VertexId>,
    pub separators: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

/// Reduction Rules 1-2: delete degree-<=1 vertices outside Z; bypass
/// loop-free degree-2 vertices outside Z that keep at least one neighbor
/// outside Z. Bypassing a vertex with both neighbors in Z would write a new
/// edge into G[Z] and can flip the answer, so such vertices stay.
pub fn dqf_rule12(inst: &mut DqfDisjointInstance) -> bool {
    let mut changed = false;
    loop {
        let leaf = inst.outside().find(|&v| inst.g.degree(v) <= 1);
        if let Some(v) = leaf {
            inst.g.delete_vertex(v).expect("vertex is alive");
            changed = true;
            continue;
        }
        let bypassable = inst.outside().find(|&v| {
            inst.g.degree(v) == 2
                && inst.g.loops(v) == 0
                && inst.g.neighbors(v).any(|(n, _)| !inst.z.contains(&n))
        });
        match bypassable {
            Some(v) => {
                inst.g.bypass_degree2(v).expect("candidate checked");
                changed = true;
            }
            None => return changed,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("the modulator does not induce a d-quasi-forest")]
pub struct ModulatorNotDqf;

/// Reduction Rule 3: any u outside Z for which G[Z + u] is not a
/// d-quasi-forest must be deleted (the budget pays). Errors out when G[Z]
/// itself fails the test, which makes the whole instance a no.
pub fn dqf_rule3(
    inst: &mut DqfDisjointInstance,
) -> Result<BTreeSet<VertexId>, ModulatorNotDqf> {
    if !is_d_quasi_forest(&inst.modulator_graph(), inst.d) {
        return Err(ModulatorNotDqf);
    }
    let mut forced = BTreeSet::new();
    loop {
        let candidates: Vec<VertexId> = inst.outside().collect();
        let mut hit = None;
        for u in candidates {
            let mut with_u = inst.z.clone();
            with_u.insert(u);
            if !is_d_quasi_forest(&inst.g.induced(&with_u), inst.d) {
                hit = Some(u);
                break;
            }
        }
        match hit {
            Some(u) => {
                inst.delete(u);
                forced.insert(u);
            }
            None => return Ok(forced),
        }
    }
}

/// Drops whole components of g that contain no modulator vertex and are
/// already d-quasi-forests on their own; no minimal solution touches them
/// and they would otherwise distort the tree bookkeeping.
pub fn drop_satisfied_free_components(inst: &mut DqfDisjointInstance) -> bool {
    let mut changed = false;
    for c in inst.g.components() {
        if c.vertices.is_disjoint(&inst.z)
            && is_d_quasi_forest(&inst.g.induced(&c.vertices), inst.d)
        {
            inst.g.delete_vertices(c.vertices.iter().copied());
            changed = true;
        }
    }
    changed
}

#[derive(Debug)]
pub enum CyclicOutcome {
    /// Some modulator vertex is adjacent to more than k + d cyclic
    /// components of G - Z; no budget-k deletion can fix its component.
    Prune,
    /// G - Z is already a forest.
    Forest,
    /// One child per assignment of the cyclic components' minimum feedback
    /// vertices to the solution or to Z; in every child G - Z is a forest.
    Branch(Vec<DqfDisjointInstance>),
}

/// Clears cycles out of G - Z by branching every vertex of a minimum
/// feedback vertex set of every cyclic component either into the solution
/// or into Z.
pub fn branch_cyclic_components(
    inst: &DqfDisjointInstance,
    stats: &mut DqfStats,
) -> CyclicOutcome {
    let rest = inst.rest();
    let comps = rest.components();
    let cyclic: Vec<&Component> = comps.iter().filter(|c| excess(c) >= 1).collect();
    if cyclic.is_empty() {
        return CyclicOutcome::Forest;
    }
    let budget = inst.k.max(0) as usize + inst.d;
    let touches = |u: VertexId, c: &Component| -> bool {
        c.vertices.iter().any(|&v| inst.g.multiplicity(u, v) > 0)
    };
    // The count prune decides first; it needs no feedback computation.
    for &u in &inst.z {
        let adjacent = cyclic.iter().filter(|c| touches(u, c)).count();
        if adjacent > budget {
            return CyclicOutcome::Prune;
        }
    }
    let fvs_sets: Vec<BTreeSet<VertexId>> = cyclic
        .iter()
        .map(|c| {
            let sub = inst.g.induced(&c.vertices);
            minimum_fvs(&sub, inst.d).expect("instance contract: G - Z is a d-quasi-forest")
        })
        .collect();
    // Telemetry for the stronger feedback-sum reading of the same bound:
    // recorded when it diverges from the count reading, never acted on.
    for &u in &inst.z {
        let fvs_sum: usize = cyclic
            .iter()
            .zip(&fvs_sets)
            .filter(|(c, _)| touches(u, c))
            .map(|(_, f)| f.len())
            .sum();
        if fvs_sum > budget {
            stats.cyclic_fvs_sum_exceedances += 1;
        }
    }
    let mut fvs_vertices: Vec<VertexId> = fvs_sets.into_iter().flatten().collect();
    fvs_vertices.sort_unstable();
    CyclicOutcome::Branch(assign_children(inst, &fvs_vertices))
}

/// Children for a delete-or-promote assignment over `vs`: bit clear means
/// the vertex joins the solution, bit set means it joins Z. All-delete
/// comes first.
fn assign_children(inst: &DqfDisjointInstance, vs: &[VertexId]) -> Vec<DqfDisjointInstance> {
    assert!(vs.len() < 48, "assignment set too large to branch on");
    let mut children = Vec::new();
    for mask in 0u64..(1 << vs.len()) {
        let deletions = vs.len() - mask.count_ones() as usize;
        if (deletions as i64) > inst.k.max(0) {
            continue;
        }
        let mut child = inst.clone();
        for (i, &v) in vs.iter().enumerate() {
            if mask & (1 << i) == 0 {
                child.delete(v);
            } else {
                child.z.insert(v);
            }
        }
        children.push(child);
    }
    children
}

#[derive(Debug)]
pub enum PartitionOutcome {
    /// More than 2(k+1) + d trees carry d+2 or more distinct Z-neighbors;
    /// a yes-instance cannot support that many.
    Prune,
    NoBigTrees,
    Branch(Vec<DqfDisjointInstance>),
}

/// Distinct Z-neighbors of a vertex set.
fn z_neighbors_of(
    g: &MultiGraph,
    z: &BTreeSet<VertexId>,
    vs: &BTreeSet<VertexId>,
) -> BTreeSet<VertexId> {
    let mut out = BTreeSet::new();
    for &v in vs {
        for (n, _) in g.neighbors(v) {
            if z.contains(&n) {
                out.insert(n);
            }
        }
    }
    out
}

/// Splits every tree with at least d+2 distinct Z-neighbors by branching on
/// boundary vertices. Boundaries are found bottom-up from a fixed root: a
/// vertex is cut as soon as its subtree accumulates a (d+2)-th distinct
/// Z-neighbor, which leaves every uncut subtree with at most d+1 of them.
pub fn partition_big_trees(inst: &DqfDisjointInstance) -> PartitionOutcome {
    let rest = inst.rest();
    let comps = rest.components();
    debug_assert!(comps.iter().all(|c| excess(c) == 0), "G - Z must be a forest");
    let big: Vec<&Component> = comps
        .iter()
        .filter(|c| z_neighbors_of(&inst.g, &inst.z, &c.vertices).len() >= inst.d + 2)
        .collect();
    if big.is_empty() {
        return PartitionOutcome::NoBigTrees;
    }
    if big.len() as i64 > 2 * (inst.k.max(0) + 1) + inst.d as i64 {
        return PartitionOutcome::Prune;
    }
    let mut boundaries: Vec<VertexId> = Vec::new();
    for tree in &big {
        boundaries.extend(tree_boundaries(&rest, &inst.g, &inst.z, tree, inst.d));
    }
    boundaries.sort_unstable();
    boundaries.dedup();
    debug_assert!(!boundaries.is_empty(), "a big tree always yields a cut");
    PartitionOutcome::Branch(assign_children(inst, &boundaries))
}

fn tree_boundaries(
    rest: &MultiGraph,
    g: &MultiGraph,
    z: &BTreeSet<VertexId>,
    tree: &Component,
    d: usize,
) -> Vec<VertexId> {
    let root = tree.min_vertex();
    // Parent pointers via DFS; rest is a forest so this is the unique tree.
    let mut order: Vec<VertexId> = Vec::new();
    let mut parent: BTreeMap<VertexId, Option<VertexId>> = BTreeMap::new();
    let mut stack = vec![(root, None)];
    while let Some((v, from)) = stack.pop() {
        if parent.contains_key(&v) {
            continue;
        }
        parent.insert(v, from);
        order.push(v);
        for (n, _) in rest.neighbors(v) {
            if !parent.contains_key(&n) {
                stack.push((n, Some(v)));
            }
        }
    }
    // Bottom-up accumulation of distinct Z-neighbor sets.
    let mut acc: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    let mut cuts = Vec::new();
    for &v in order.iter().rev() {
        let mut set = acc.remove(&v).unwrap_or_default();
        for (n, _) in g.neighbors(v) {
            if z.contains(&n) {
                set.insert(n);
            }
        }
        if set.len() >= d + 2 {
            cuts.push(v);
            continue; // cut: nothing propagates past v
        }
        if let Some(Some(p)) = parent.get(&v) {
            acc.entry(*p).or_default().extend(set);
        }
    }
    cuts
}

/// Neighborhood type of a tree: distinct Z-neighbors, each flagged when it
/// sends two or more edge copies into the tree.
pub fn neighborhood_type(
    g: &MultiGraph,
    z: &BTreeSet<VertexId>,
    tree: &BTreeSet<VertexId>,
) -> NeighborhoodType {
    let mut weights: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &v in tree {
        for (n, m) in g.neighbors(v) {
            if z.contains(&n) {
                *weights.entry(n).or_insert(0) += m as usize;
            }
        }
    }
    NeighborhoodType {
        neighbors: weights.into_iter().map(|(u, w)| (u, w >= 2)).collect(),
    }
}

/// Reduction Rule 4: per neighborhood type, keep the first k + d + 2 trees
/// (ordered by smallest vertex id) and delete the rest wholesale. Returns
/// the number of trees removed.
pub fn rule4_dedup_trees(inst: &mut DqfDisjointInstance) -> usize {
    let rest = inst.rest();
    let keep_limit = (inst.k.max(0) as usize) + inst.d + 2;
    let mut by_type: BTreeMap<NeighborhoodType, Vec<Component>> = BTreeMap::new();
    for c in rest.components() {
        let ty = neighborhood_type(&inst.g, &inst.z, &c.vertices);
        if ty.neighbors.is_empty() {
            continue; // unattached trees are handled by the component drop
        }
        by_type.entry(ty).or_default().push(c);
    }
    let mut removed = 0usize;
    for (_, mut trees) in by_type {
        trees.sort_by_key(Component::min_vertex);
        for t in trees.iter().skip(keep_limit) {
            inst.g.delete_vertices(t.vertices.iter().copied());
            removed += 1;
        }
    }
    removed
}

/// One element of an attachment-cycle packing for a modulator vertex u:
/// either a forest path between two distinct neighbors of u, or a single
/// neighbor that u reaches through a doubled edge (a cycle on its own).
#[derive(Debug, Clone)]
struct PackElem {
    vertices: Vec<VertexId>,
    is_unit: bool,
}

/// Classifies every modulator vertex with forest neighbors as forced or
/// separable. With s = k + d: a packing of s + 1 pairwise vertex-disjoint
/// attachment cycles survives any k deletions with d + 1 to spare, forcing
/// u into every small feedback vertex set; otherwise a separator of at most
/// 2s forest vertices exists and is found exactly.
pub fn detect_forced(inst: &DqfDisjointInstance) -> ForcedVertexReport {
    let rest = inst.rest();
    let s = inst.k.max(0) as usize + inst.d;
    let mut report = ForcedVertexReport::default();
    for &u in &inst.z {
        let r_set: BTreeSet<VertexId> = inst
            .g
            .neighbors(u)
            .filter(|(n, _)| !inst.z.contains(n))
            .map(|(n, _)| n)
            .collect();
        if r_set.is_empty() {
            continue;
        }
        if inst.g.loops(u) > 0 {
            // A loop already forces u into every feedback vertex set.
            report.forced.insert(u);
            continue;
        }
        let elems = attachment_elements(inst, &rest, u, &r_set);
        if max_disjoint(&elems, s + 1) {
            report.forced.insert(u);
        } else {
            let b = min_attachment_separator(&rest, &r_set, &elems);
            debug_assert!(b.len() <= 2 * s, "the packing alternative bounds B by 2s");
            report.separators.insert(u, b);
        }
    }
    report
}

fn attachment_elements(
    inst: &DqfDisjointInstance,
    rest: &MultiGraph,
    u: VertexId,
    r_set: &BTreeSet<VertexId>,
) -> Vec<PackElem> {
    let mut elems = Vec::new();
    for &w in r_set {
        if inst.g.multiplicity(u, w) >= 2 {
            elems.push(PackElem {
                vertices: vec![w],
                is_unit: true,
            });
        }
    }
    let rs: Vec<VertexId> = r_set.iter().copied().collect();
    for (i, &a) in rs.iter().enumerate() {
        for &b in &rs[i + 1..] {
            if let Some(p) = forest_path(rest, a, b) {
                elems.push(PackElem {
                    vertices: p,
                    is_unit: false,
                });
            }
        }
    }
    elems
}

/// Unique path between a and b in a forest, if they share a tree.
fn forest_path(rest: &MultiGraph, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([a]);
    let mut seen = BTreeSet::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            let mut path = vec![b];
            let mut cur = b;
            while cur != a {
                cur = parent[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for (n, _) in rest.neighbors(v) {
            if seen.insert(n) {
                parent.insert(n, v);
                queue.push_back(n);
            }
        }
    }
    None
}

fn max_disjoint(elems: &[PackElem], want: usize) -> bool {
    fn rec(elems: &[PackElem], want: usize, idx: usize, used: &mut BTreeSet<VertexId>) -> bool {
        if want == 0 {
            return true;
        }
        if idx >= elems.len() || elems.len() - idx < want {
            return false;
        }
        let e = &elems[idx];
        if e.vertices.iter().all(|v| !used.contains(v)) {
            used.extend(e.vertices.iter().copied());
            if rec(elems, want - 1, idx + 1, used) {
                return true;
            }
            for v in &e.vertices {
                used.remove(v);
            }
        }
        rec(elems, want, idx + 1, used)
    }
    rec(elems, want, 0, &mut BTreeSet::new())
}

/// Smallest forest vertex set containing every doubled-edge neighbor and
/// breaking every neighbor-to-neighbor connection. Exhaustive over the
/// vertices that appear in attachment elements (a separator never needs
/// anything else), ascending by size then lexicographically.
fn min_attachment_separator(
    rest: &MultiGraph,
    r_set: &BTreeSet<VertexId>,
    elems: &[PackElem],
) -> BTreeSet<VertexId> {
    let units: BTreeSet<VertexId> = elems
        .iter()
        .filter(|e| e.is_unit)
        .map(|e| e.vertices[0])
        .collect();
    let mut universe: BTreeSet<VertexId> = BTreeSet::new();
    for e in elems {
        universe.extend(e.vertices.iter().copied());
    }
    let universe: Vec<VertexId> = universe.into_iter().collect();
    let separates = |b: &BTreeSet<VertexId>| -> bool {
        if !units.iter().all(|w| b.contains(w)) {
            return false;
        }
        let h = rest.without(b);
        h.components()
            .iter()
            .all(|c| c.vertices.intersection(r_set).count() <= 1)
    };
    if separates(&BTreeSet::new()) {
        return BTreeSet::new();
    }
    for size in 1..=universe.len() {
        let mut found: Option<BTreeSet<VertexId>> = None;
        subsets_of_size(&universe, size, &mut |b| {
            if found.is_none() && separates(b) {
                found = Some(b.clone());
            }
        });
        if let Some(b) = found {
            return b;
        }
    }
    universe.into_iter().collect()
}

fn subsets_of_size(vs: &[VertexId], size: usize, f: &mut impl FnMut(&BTreeSet<VertexId>)) {
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

/// All partitions of 0..n as block-index vectors (restricted growth
/// strings): assignment[i] is the block of element i.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(i: usize, max_used: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max_used + 1 {
            cur[i] = b;
            rec(i + 1, max_used.max(b), cur, out);
        }
    }
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    cur[0] = 0;
    rec(1, 0, &mut cur, &mut out);
    out
}

/// Final stage: guess which trees the solution intersects, branch the
/// separator vertices of unforced modulator neighbors, guess how the
/// relevant modulator components separate, prune boring tree interiors down
/// to representatives, and finish with an exhaustive branch over the
/// remaining candidates. Yes answers are verified on the actual graph, so
/// every guess layer may only narrow where deletions are searched, never
/// what counts as a solution.
pub fn final_branch(
    inst: &DqfDisjointInstance,
    report: &ForcedVertexReport,
    stats: &mut DqfStats,
) -> Solution {
    if inst.k < 0 {
        return Solution::No;
    }
    if is_d_quasi_forest(&inst.g, inst.d) {
        return Solution::Yes(inst.deleted.clone());
    }
    if inst.k == 0 {
        return Solution::No;
    }
    let trees: Vec<BTreeSet<VertexId>> = inst
        .rest()
        .components()
        .into_iter()
        .map(|c| c.vertices)
        .collect();
    let k = inst.k as usize;
    let tree_indices: Vec<usize> = (0..trees.len()).collect();
    // The empty guess (no tree intersected) is the d-quasi-forest check
    // above; a real solution intersects between 1 and k trees.
    for tau_size in 1..=k.min(trees.len()) {
        let mut result = None;
        subsets_of_indices(&tree_indices, tau_size, &mut |tau| {
            if result.is_some() {
                return;
            }
            if let Solution::Yes(w) = try_tree_guess(inst, report, &trees, tau, stats) {
                result = Some(w);
            }
        });
        if let Some(w) = result {
            return Solution::Yes(w);
        }
    }
    Solution::No
}

fn subsets_of_indices(vs: &[usize], size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(vs: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let missing = size - cur.len();
        for i in start..=vs.len().saturating_sub(missing) {
            cur.push(vs[i]);
            rec(vs, size, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(vs, size, 0, &mut Vec::new(), f);
}

fn try_tree_guess(
    inst: &DqfDisjointInstance,
    report: &ForcedVertexReport,
    trees: &[BTreeSet<VertexId>],
    tau: &[usize],
    stats: &mut DqfStats,
) -> Solution {
    // Everything outside the guessed trees becomes undeletable.
    let mut protected = inst.z.clone();
    for (i, t) in trees.iter().enumerate() {
        if !tau.contains(&i) {
            protected.extend(t.iter().copied());
        }
    }
    if !is_d_quasi_forest(&inst.g.induced(&protected), inst.d) {
        return Solution::No; // incompatible guess
    }
    let deletable: BTreeSet<VertexId> = tau
        .iter()
        .flat_map(|&i| trees[i].iter().copied())
        .collect();
    // Branch the separator vertices of unforced modulator neighbors that
    // are still deletable: into the solution or into the protected set.
    let mut bu: BTreeSet<VertexId> = BTreeSet::new();
    for b in report.separators.values() {
        bu.extend(b.iter().filter(|v| deletable.contains(v)).copied());
    }
    let bu: Vec<VertexId> = bu.into_iter().collect();
    assert!(bu.len() < 48, "separator set too large to branch on");
    for mask in 0u64..(1 << bu.len()) {
        let mut g = inst.g.clone();
        let mut prot = protected.clone();
        let mut deleted = inst.deleted.clone();
        let mut budget = inst.k;
        for (i, &v) in bu.iter().enumerate() {
            if mask & (1 << i) == 0 {
                g.delete_vertex(v).expect("separator vertex is alive");
                deleted.insert(v);
                budget -= 1;
            } else {
                prot.insert(v);
            }
        }
        if budget < 0 {
            continue;
        }
        if !is_d_quasi_forest(&g.induced(&prot), inst.d) {
            continue;
        }
        let cands: BTreeSet<VertexId> = deletable
            .iter()
            .filter(|v| g.contains(**v) && !prot.contains(v))
            .copied()
            .collect();
        if let Solution::Yes(w) =
            search_with_separations(inst, &g, &prot, budget, &cands, &deleted, report, stats)
        {
            return Solution::Yes(w);
        }
    }
    Solution::No
}

/// Enumerates how the protected components touching the candidates could be
/// grouped in the final graph. Each grouping pre-deletes the candidates
/// bridging separated groups (discarding groupings that would need more
/// than the budget), prunes boring interiors, and runs the exhaustive
/// search on what remains. Groupings only restrict the candidate set;
/// the union over all of them covers every solution.
#[allow(clippy::too_many_arguments)]
fn search_with_separations(
    inst: &DqfDisjointInstance,
    g: &MultiGraph,
    protected: &BTreeSet<VertexId>,
    budget: i64,
    cands: &BTreeSet<VertexId>,
    deleted: &BTreeSet<VertexId>,
    report: &ForcedVertexReport,
    stats: &mut DqfStats,
) -> Solution {
    let prot_graph = g.induced(protected);
    let prot_comps = prot_graph.components();
    let relevant: Vec<usize> = prot_comps
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            cands.iter().any(|&v| {
                g.neighbors(v)
                    .any(|(n, _)| c.vertices.contains(&n))
            })
        })
        .map(|(i, _)| i)
        .collect();
    let p_limit = inst.k.max(0) as usize + 1;
    if relevant.len() < 2 || relevant.len() > p_limit {
        return exhaustive_branch(g, inst.d, budget, cands, deleted, stats);
    }
    let comp_of = |v: VertexId| -> Option<usize> {
        prot_comps.iter().position(|c| c.vertices.contains(&v))
    };
    for partition in set_partitions(relevant.len()) {
        stats.separation_guesses += 1;
        let block_of_comp: BTreeMap<usize, usize> = relevant
            .iter()
            .copied()
            .zip(partition.iter().copied())
            .collect();
        // Candidates adjacent to two separated blocks must all be deleted.
        let mut pre_delete: BTreeSet<VertexId> = BTreeSet::new();
        for &v in cands {
            let mut blocks = BTreeSet::new();
            for (n, _) in g.neighbors(v) {
                if let Some(ci) = comp_of(n) {
                    if let Some(&b) = block_of_comp.get(&ci) {
                        blocks.insert(b);
                    }
                }
            }
            if blocks.len() >= 2 {
                pre_delete.insert(v);
            }
        }
        if pre_delete.len() as i64 > budget {
            continue; // this grouping needs more deletions than remain
        }
        let mut g2 = g.clone();
        let mut deleted2 = deleted.clone();
        for &v in &pre_delete {
            g2.delete_vertex(v).expect("candidate is alive");
            deleted2.insert(v);
        }
        let budget2 = budget - pre_delete.len() as i64;
        let cands2: BTreeSet<VertexId> = cands
            .iter()
            .filter(|v| g2.contains(**v))
            .copied()
            .collect();
        let pruned = prune_boring_interiors(
            &g2,
            protected,
            &prot_comps,
            &block_of_comp,
            report,
            &cands2,
        );
        stats.interior_candidates_pruned += (cands2.len() - pruned.len()) as u64;
        let cands2 = pruned;
        if let Solution::Yes(w) =
            exhaustive_branch(&g2, inst.d, budget2, &cands2, &deleted2, stats)
        {
            return Solution::Yes(w);
        }
    }
    Solution::No
}

/// Interior pruning: a candidate is boring when all its protected neighbors
/// are forced vertices and it touches no separator vertex. Cycles through
/// such a vertex always run through a forced vertex (which every small
/// feedback vertex set of its component contains anyway), so deleting it is
/// only ever useful as a cut. A connected boring piece is pruned down to
/// one representative per attached protected component (plus one fallback
/// vertex) only when every attachment of the whole piece sits inside a
/// single guessed block: cuts inside such a piece reconnect through that
/// block, while a piece spanning two blocks can hold irreplaceable cut
/// vertices and is kept whole.
fn prune_boring_interiors(
    g: &MultiGraph,
    protected: &BTreeSet<VertexId>,
    prot_comps: &[Component],
    block_of_comp: &BTreeMap<usize, usize>,
    report: &ForcedVertexReport,
    cands: &BTreeSet<VertexId>,
) -> BTreeSet<VertexId> {
    let separator_vertices: BTreeSet<VertexId> = report
        .separators
        .values()
        .flat_map(|b| b.iter().copied())
        .collect();
    let comp_of = |v: VertexId| -> Option<usize> {
        prot_comps.iter().position(|c| c.vertices.contains(&v))
    };
    let boring: BTreeSet<VertexId> = cands
        .iter()
        .copied()
        .filter(|&v| {
            for (n, _) in g.neighbors(v) {
                if protected.contains(&n) {
                    if !report.forced.contains(&n) {
                        return false;
                    }
                    if comp_of(n).and_then(|ci| block_of_comp.get(&ci)).is_none() {
                        return false;
                    }
                } else if separator_vertices.contains(&n) {
                    return false;
                }
            }
            true
        })
        .collect();
    if boring.is_empty() {
        return cands.clone();
    }
    let boring_graph = g.induced(&boring);
    let mut keep: BTreeSet<VertexId> = cands.difference(&boring).copied().collect();
    for piece in boring_graph.components() {
        // Attachments of the whole piece, component-wise and block-wise.
        let mut per_comp: BTreeMap<usize, VertexId> = BTreeMap::new();
        let mut blocks: BTreeSet<usize> = BTreeSet::new();
        for &v in &piece.vertices {
            for (n, _) in g.neighbors(v) {
                if let Some(ci) = comp_of(n) {
                    per_comp.entry(ci).or_insert(v);
                    if let Some(&b) = block_of_comp.get(&ci) {
                        blocks.insert(b);
                    }
                }
            }
        }
        if blocks.len() >= 2 {
            // Impure piece: every vertex may be a necessary cut.
            keep.extend(piece.vertices.iter().copied());
            continue;
        }
        keep.insert(piece.min_vertex());
        keep.extend(per_comp.values().copied());
    }
    keep
}

/// Plain exact search: while some component fails the d-quasi-forest test,
/// branch on deleting each candidate inside it. A component with no
/// candidate left is unfixable, so that path is a no.
fn exhaustive_branch(
    g: &MultiGraph,
    d: usize,
    budget: i64,
    cands: &BTreeSet<VertexId>,
    deleted: &BTreeSet<VertexId>,
    stats: &mut DqfStats,
) -> Solution {
    stats.nodes_expanded += 1;
    if budget < 0 {
        return Solution::No;
    }
    let bad = g.components().into_iter().find(|c| {
        let sub = g.induced(&c.vertices);
        !is_d_quasi_forest(&sub, d)
    });
    let Some(bad) = bad else {
        return Solution::Yes(deleted.clone());
    };
    if budget == 0 {
        return Solution::No;
    }
    for &v in bad.vertices.intersection(cands) {
        let mut g2 = g.clone();
        g2.delete_vertex(v).expect("candidate is alive");
        let mut deleted2 = deleted.clone();
        deleted2.insert(v);
        let mut cands2 = cands.clone();
        cands2.remove(&v);
        if let Solution::Yes(w) = exhaustive_branch(&g2, d, budget - 1, &cands2, &deleted2, stats)
        {
            return Solution::Yes(w);
        }
    }
    Solution::No
}

/// Modulator-growth ledger for the pipeline, phrased with the budget the
/// disjoint solve started from: (k+1)(k+d+1) + 2(2k+d+3)(2(k+1)+d).
fn z_ledger_bound(root_k: i64, d: usize) -> usize {
    let k = root_k.max(0) as usize;
    (k + 1) * (k + d + 1) + 2 * (2 * k + d + 3) * (2 * (k + 1) + d)
}

/// The staged pipeline for the disjoint problem. Expects the instance
/// contract: G - Z is a d-quasi-forest (iterative compression always hands
/// over such instances). Exact; aborts loudly if the modulator ever
/// outgrows its ledger bound (which would mean a stage bound was misread,
/// never a silent wrong answer).
pub fn solve_disjoint_pipeline(
    inst: DqfDisjointInstance,
    stats: &mut DqfStats,
) -> Result<Solution, EngineError> {
    let root_k = inst.k;
    pipeline_rec(inst, root_k, stats)
}

fn pipeline_rec(
    mut inst: DqfDisjointInstance,
    root_k: i64,
    stats: &mut DqfStats,
) -> Result<Solution, EngineError> {
    stats.nodes_expanded += 1;
    stats.z_peak = stats.z_peak.max(inst.z.len());
    if inst.z.len() >= z_ledger_bound(root_k, inst.d) {
        return Err(EngineError::InternalInvariant(format!(
            "modulator grew to {} vertices, ledger bound is {}",
            inst.z.len(),
            z_ledger_bound(root_k, inst.d)
        )));
    }
    if inst.k < 0 {
        return Ok(Solution::No);
    }
    // Reduction fixpoint. Rule 3 also certifies G[Z]; a failure there is a
    // definitive no for the disjoint question.
    loop {
        let dropped = drop_satisfied_free_components(&mut inst);
        let reduced = dqf_rule12(&mut inst);
        let forced = match dqf_rule3(&mut inst) {
            Ok(f) => !f.is_empty(),
            Err(ModulatorNotDqf) => return Ok(Solution::No),
        };
        if inst.k < 0 {
            return Ok(Solution::No);
        }
        if !dropped && !reduced && !forced {
            break;
        }
    }
    if is_d_quasi_forest(&inst.g, inst.d) {
        return Ok(Solution::Yes(inst.deleted.clone()));
    }
    if inst.k == 0 {
        return Ok(Solution::No);
    }
    match branch_cyclic_components(&inst, stats) {
        CyclicOutcome::Prune => {
            if stats.trace {
                eprintln!("dqf: pruned, too many cyclic components around one modulator vertex");
            }
            return Ok(Solution::No);
        }
        CyclicOutcome::Branch(children) => {
            stats.cyclic_branches += 1;
            for child in children {
                if let Solution::Yes(w) = pipeline_rec(child, root_k, stats)? {
                    return Ok(Solution::Yes(w));
                }
            }
            return Ok(Solution::No);
        }
        CyclicOutcome::Forest => {}
    }
    match partition_big_trees(&inst) {
        PartitionOutcome::Prune => {
            if stats.trace {
                eprintln!("dqf: pruned, too many trees with d+2 modulator neighbors");
            }
            return Ok(Solution::No);
        }
        PartitionOutcome::Branch(children) => {
            stats.partition_branches += 1;
            for child in children {
                if let Solution::Yes(w) = pipeline_rec(child, root_k, stats)? {
                    return Ok(Solution::Yes(w));
                }
            }
            return Ok(Solution::No);
        }
        PartitionOutcome::NoBigTrees => {}
    }
    stats.trees_deduplicated += rule4_dedup_trees(&mut inst) as u64;
    let report = detect_forced(&inst);
    Ok(final_branch(&inst, &report, stats))
}

/// Correctness-first fallback: the same reduction rules, then plain
/// branching on the deletable vertices of some failing component.
pub fn solve_disjoint_fallback(mut inst: DqfDisjointInstance, stats: &mut DqfStats) -> Solution {
    stats.fallback_nodes += 1;
    if inst.k < 0 {
        return Solution::No;
    }
    loop {
        let dropped = drop_satisfied_free_components(&mut inst);
        let reduced = dqf_rule12(&mut inst);
        let forced = match dqf_rule3(&mut inst) {
            Ok(f) => !f.is_empty(),
            Err(ModulatorNotDqf) => return Solution::No,
        };
        if inst.k < 0 {
            return Solution::No;
        }
        if !dropped && !reduced && !forced {
            break;
        }
    }
    let bad = inst.g.components().into_iter().find(|c| {
        let sub = inst.g.induced(&c.vertices);
        !is_d_quasi_forest(&sub, inst.d)
    });
    let Some(bad) = bad else {
        return Solution::Yes(inst.deleted.clone());
    };
    if inst.k == 0 {
        return Solution::No;
    }
    for &v in bad.vertices.iter().filter(|v| !inst.z.contains(v)) {
        let mut child = inst.clone();
        child.delete(v);
        if let Solution::Yes(w) = solve_disjoint_fallback(child, stats) {
            return Solution::Yes(w);
        }
    }
    Solution::No
}

/// Exact d-quasi-forest deletion via iterative compression. The mode picks
/// the disjoint solver: the staged pipeline or the fallback search.
pub fn solve_dqf(
    inst: &DqfInstance,
    mode: SolveMode,
    stats: &mut DqfStats,
) -> Result<Solution, EngineError> {
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
            let keep: BTreeSet<VertexId> = solution.difference(&delete_part).copied().collect();
            let disjoint = DqfDisjointInstance::new(
                prefix.without(&delete_part),
                keep,
                (k - delete_part.len()) as i64,
                inst.d,
            );
            let answer = match mode {
                SolveMode::Pipeline => solve_disjoint_pipeline(disjoint, stats)?,
                SolveMode::Fallback => solve_disjoint_fallback(disjoint, stats),
            };
            if let Solution::Yes(extra) = answer {
                let mut x = delete_part;
                x.extend(extra);
                compressed = Some(x);
                break;
            }
        }
        match compressed {
            Some(x) => solution = x,
            None => return Ok(Solution::No),
        }
    }
    if solution.len() > k || !is_d_quasi_forest(&inst.g.without(&solution), inst.d) {
        return Err(EngineError::InternalInvariant(
            "compression produced an invalid witness".into(),
        ));
    }
    Ok(Solution::Yes(solution))
}
