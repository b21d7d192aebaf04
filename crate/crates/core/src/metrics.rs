//! Recognition predicates and measures: component excess, the r-pseudoforest
//! test, exact feedback vertex set computation, and the d-quasi-forest test.
//!
//! Multigraph cycles matter here: a loop is a cycle of length 1 and a
//! multiplicity-2 edge is a cycle of length 2. The degree-2 bypass rule
//! deliberately compresses real cycles into those forms, so ignoring them
//! would make later reductions unsound.

use std::collections::BTreeSet;

use crate::graph::{Component, MultiGraph, VertexId};

/// Excess of a connected component: |E(C)| - |V(C)| + 1, the number of
/// independent cycles. Non-negative for every connected component.
pub fn excess(c: &Component) -> usize {
    c.edge_count + 1 - c.vertices.len()
}

/// Per-component excess values plus the graph excess (their maximum, 0 for
/// the empty graph).
#[derive(Debug, Clone)]
pub struct ExcessReport {
    pub per_component: Vec<(Component, usize)>,
    pub graph_excess: usize,
}

pub fn excess_report(g: &MultiGraph) -> ExcessReport {
    let per_component: Vec<(Component, usize)> = g
        .components()
        .into_iter()
        .map(|c| {
            let e = excess(&c);
            (c, e)
        })
        .collect();
    let graph_excess = per_component.iter().map(|&(_, e)| e).max().unwrap_or(0);
    ExcessReport {
        per_component,
        graph_excess,
    }
}

/// A graph is an r-pseudoforest iff every component has excess at most r.
pub fn is_r_pseudoforest(g: &MultiGraph, r: usize) -> bool {
    g.components().iter().all(|c| excess(c) <= r)
}

/// Deterministic cycle detection. Prefers the cheapest certificates first:
/// a looped vertex, then a doubled edge, then a DFS cycle; all choices scan
/// vertices in ascending id order.
pub fn find_cycle(g: &MultiGraph) -> Option<Vec<VertexId>> {
    for v in g.vertices() {
        if g.loops(v) > 0 {
            return Some(vec![v]);
        }
    }
    for v in g.vertices() {
        if let Some((n, _)) = g.neighbors(v).find(|&(n, m)| m >= 2 && n > v) {
            return Some(vec![v, n]);
        }
    }
    // DFS with parent-edge tracking; the first back edge closes a cycle.
    let bound = g.id_bound();
    let mut state = vec![0u8; bound]; // 0 unvisited, 1 on stack path, 2 done
    let mut parent: Vec<Option<VertexId>> = vec![None; bound];
    for root in g.vertices() {
        if state[root.index()] != 0 {
            continue;
        }
        let mut stack = vec![(root, None::<VertexId>, false)];
        while let Some((v, from, processed)) = stack.pop() {
            if processed {
                state[v.index()] = 2;
                continue;
            }
            if state[v.index()] != 0 {
                continue;
            }
            state[v.index()] = 1;
            parent[v.index()] = from;
            stack.push((v, from, true));
            // Push in descending order so ascending ids are explored first.
            let mut ns: Vec<VertexId> = g.neighbors(v).map(|(n, _)| n).collect();
            ns.reverse();
            for n in ns {
                if Some(n) == from {
                    continue;
                }
                if state[n.index()] == 1 {
                    // Back edge v -> n: walk parents from v up to n.
                    let mut cyc = vec![v];
                    let mut cur = v;
                    while cur != n {
                        cur = parent[cur.index()].expect("back edge target is an ancestor");
                        cyc.push(cur);
                    }
                    return Some(cyc);
                }
                if state[n.index()] == 0 {
                    stack.push((n, Some(v), false));
                }
            }
        }
    }
    None
}

pub fn is_acyclic(g: &MultiGraph) -> bool {
    find_cycle(g).is_none()
}

/// Result of a budgeted exact feedback vertex set computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FvsOutcome {
    Size(usize),
    ExceedsBudget,
}

impl FvsOutcome {
    pub fn within(self, budget: usize) -> bool {
        matches!(self, FvsOutcome::Size(s) if s <= budget)
    }
}

/// Minimum number of vertices whose deletion leaves g acyclic, computed by
/// branching on the vertices of some cycle. Exact whenever the optimum is at
/// most `budget`; loops and doubled edges count as cycles.
pub fn exact_fvs_size(g: &MultiGraph, budget: usize) -> FvsOutcome {
    match fvs_search(g, budget) {
        Some(s) => FvsOutcome::Size(s),
        None => FvsOutcome::ExceedsBudget,
    }
}

fn fvs_search(g: &MultiGraph, budget: usize) -> Option<usize> {
    match find_cycle(g) {
        None => Some(0),
        Some(cyc) => fvs_branch(g, budget, &cyc),
    }
}

fn fvs_branch(g: &MultiGraph, budget: usize, cyc: &[VertexId]) -> Option<usize> {
    if budget == 0 {
        return None;
    }
    let mut vs: Vec<VertexId> = cyc.to_vec();
    vs.sort_unstable();
    let mut best: Option<usize> = None;
    for v in vs {
        let mut h = g.clone();
        h.delete_vertex(v).expect("cycle vertex is present");
        let sub = match find_cycle(&h) {
            None => Some(0),
            Some(c) => fvs_branch(&h, budget - 1, &c),
        };
        if let Some(s) = sub {
            let total = s + 1;
            if best.is_none_or(|b| total < b) {
                best = Some(total);
            }
            if total == 1 {
                break; // cannot improve on a single deletion
            }
        }
    }
    best
}

/// Like [`exact_fvs_size`] but also reports one optimal deletion set, chosen
/// deterministically (first optimum in ascending branch order).
pub fn minimum_fvs(g: &MultiGraph, budget: usize) -> Option<BTreeSet<VertexId>> {
    match find_cycle(g) {
        None => Some(BTreeSet::new()),
        Some(cyc) => {
            if budget == 0 {
                return None;
            }
            let mut vs: Vec<VertexId> = cyc;
            vs.sort_unstable();
            let mut best: Option<BTreeSet<VertexId>> = None;
            for v in vs {
                let mut h = g.clone();
                h.delete_vertex(v).expect("cycle vertex is present");
                if let Some(mut sub) = minimum_fvs(&h, budget - 1) {
                    sub.insert(v);
                    if best.as_ref().is_none_or(|b| sub.len() < b.len()) {
                        best = Some(sub);
                    }
                }
            }
            best
        }
    }
}

/// A graph is a d-quasi-forest iff every component admits a feedback vertex
/// set of size at most d.
pub fn is_d_quasi_forest(g: &MultiGraph, d: usize) -> bool {
    g.components().iter().all(|c| {
        let sub = g.induced(&c.vertices);
        exact_fvs_size(&sub, d).within(d)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId;

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

    fn cycle(n: u32) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(n as usize);
        for a in 0..n {
            g.add_edge(VertexId(a), VertexId((a + 1) % n)).unwrap();
        }
        g
    }

    /// Independent FVS oracle: plain subset enumeration in ascending size.
    fn fvs_by_enumeration(g: &MultiGraph) -> usize {
        let vs: Vec<VertexId> = g.vertices().collect();
        for size in 0..=vs.len() {
            let mut found = false;
            enumerate_subsets(&vs, size, &mut |subset| {
                if !found {
                    let h = g.without(&subset.iter().copied().collect());
                    if is_acyclic(&h) {
                        found = true;
                    }
                }
            });
            if found {
                return size;
            }
        }
        unreachable!("deleting all vertices is always acyclic");
    }

    fn enumerate_subsets(vs: &[VertexId], size: usize, f: &mut impl FnMut(&[VertexId])) {
        fn rec(
            vs: &[VertexId],
            size: usize,
            start: usize,
            cur: &mut Vec<VertexId>,
            f: &mut impl FnMut(&[VertexId]),
        ) {
            if cur.len() == size {
                f(cur);
                return;
            }
            for i in start..vs.len() {
                cur.push(vs[i]);
                rec(vs, size, i + 1, cur, f);
                cur.pop();
            }
        }
        rec(vs, size, 0, &mut Vec::new(), f);
    }

    #[test]
    fn excess_of_standard_shapes() {
        let tri = cycle(3);
        assert_eq!(excess(&tri.components()[0]), 1);
        let tree = graph(4, &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!(excess(&tree.components()[0]), 0);
        let k4 = complete(4);
        assert_eq!(excess(&k4.components()[0]), 3);
    }

    #[test]
    fn excess_report_takes_component_maximum() {
        let mut g = cycle(3);
        let v = g.add_vertex();
        let w = g.add_vertex();
        g.add_edge(v, w).unwrap();
        let rep = excess_report(&g);
        assert_eq!(rep.graph_excess, 1);
        assert_eq!(rep.per_component.len(), 2);
        assert_eq!(excess_report(&MultiGraph::new()).graph_excess, 0);
    }

    #[test]
    fn r_pseudoforest_examples() {
        let two_triangles = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert!(is_r_pseudoforest(&two_triangles, 1));
        assert!(!is_r_pseudoforest(&complete(4), 2));
        assert!(is_r_pseudoforest(&MultiGraph::new(), 0));
    }

    #[test]
    fn fvs_of_standard_shapes() {
        let tree = graph(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]);
        assert_eq!(exact_fvs_size(&tree, 0), FvsOutcome::Size(0));
        assert_eq!(exact_fvs_size(&cycle(5), 1), FvsOutcome::Size(1));
        assert_eq!(exact_fvs_size(&complete(5), 3), FvsOutcome::Size(3));
        assert_eq!(exact_fvs_size(&complete(5), 2), FvsOutcome::ExceedsBudget);
    }

    #[test]
    fn d_quasi_forest_examples() {
        let two_triangles = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert!(is_d_quasi_forest(&two_triangles, 1));
        assert!(!is_d_quasi_forest(&complete(5), 2));
        assert!(is_d_quasi_forest(&complete(5), 3));
        let forest = graph(4, &[(0, 1), (2, 3)]);
        assert!(is_d_quasi_forest(&forest, 0));
    }

    #[test]
    fn loop_forces_positive_fvs_and_excess() {
        let mut g = MultiGraph::with_vertices(1);
        g.add_edge(VertexId(0), VertexId(0)).unwrap();
        assert_eq!(exact_fvs_size(&g, 0), FvsOutcome::ExceedsBudget);
        assert_eq!(exact_fvs_size(&g, 1), FvsOutcome::Size(1));
        assert_eq!(excess(&g.components()[0]), 1);
        assert!(!is_d_quasi_forest(&g, 0));
    }

    #[test]
    fn doubled_edge_is_a_cycle() {
        let g = graph(2, &[(0, 1), (0, 1)]);
        assert_eq!(find_cycle(&g), Some(vec![VertexId(0), VertexId(1)]));
        assert_eq!(exact_fvs_size(&g, 1), FvsOutcome::Size(1));
    }

    #[test]
    fn minimum_fvs_returns_a_verified_witness() {
        let g = complete(5);
        let w = minimum_fvs(&g, 3).unwrap();
        assert_eq!(w.len(), 3);
        assert!(is_acyclic(&g.without(&w)));
        assert!(minimum_fvs(&g, 2).is_none());
    }

    #[test]
    fn branching_fvs_matches_enumeration_on_all_5_vertex_graphs() {
        let pairs: Vec<(u32, u32)> = (0..5u32)
            .flat_map(|a| ((a + 1)..5).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let mut g = MultiGraph::with_vertices(5);
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    g.add_edge(VertexId(a), VertexId(b)).unwrap();
                }
            }
            let want = fvs_by_enumeration(&g);
            assert_eq!(
                exact_fvs_size(&g, 5),
                FvsOutcome::Size(want),
                "mask {mask:b}"
            );
        }
    }

    #[test]
    fn branching_fvs_matches_enumeration_on_random_multigraphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let m = rng.gen_range(0..=15);
            let mut g = MultiGraph::with_vertices(n);
            for _ in 0..m {
                let a = rng.gen_range(0..n) as u32;
                let b = rng.gen_range(0..n) as u32;
                g.add_edge(VertexId(a), VertexId(b)).unwrap();
            }
            let want = fvs_by_enumeration(&g);
            assert_eq!(exact_fvs_size(&g, n), FvsOutcome::Size(want));
        }
    }

    #[test]
    fn recognizers_are_monotone_under_vertex_deletion() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(0..=12);
            let mut g = MultiGraph::with_vertices(n);
            for _ in 0..m {
                let a = rng.gen_range(0..n) as u32;
                let b = rng.gen_range(0..n) as u32;
                g.add_edge(VertexId(a), VertexId(b)).unwrap();
            }
            let drop: BTreeSet<VertexId> = g.vertices().filter(|_| rng.gen_bool(0.3)).collect();
            let h = g.without(&drop);
            for r in 0..3 {
                if is_r_pseudoforest(&g, r) {
                    assert!(is_r_pseudoforest(&h, r));
                }
                if is_d_quasi_forest(&g, r) {
                    assert!(is_d_quasi_forest(&h, r));
                }
            }
        }
    }
}
