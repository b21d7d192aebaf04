//! Instance generators. Everything is deterministic in the seed (ChaCha8),
//! so corpora and sweeps reproduce bit-for-bit across machines.

use std::collections::BTreeSet;

use nearforest::dqf::DqfDisjointInstance;
use nearforest::{MultiGraph, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// PRNG identifier recorded alongside generated artifacts.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("infeasible generator parameters: {0}")]
pub struct GenError(pub String);

/// Random multigraph: m endpoint pairs drawn uniformly, so parallel edges
/// accumulate naturally and a pair hitting the same vertex writes a loop.
pub fn random_multigraph(n: usize, m: usize, seed: u64) -> MultiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = MultiGraph::with_vertices(n);
    if n == 0 {
        return g;
    }
    for _ in 0..m {
        let a = VertexId(rng.gen_range(0..n) as u32);
        let b = VertexId(rng.gen_range(0..n) as u32);
        g.add_edge(a, b).unwrap();
    }
    g
}

/// Graph with a planted r-pseudoforest deletion set: deleting the returned
/// vertex set (ids 0..k) leaves an r-pseudoforest by construction. For
/// k >= 1 every vertex is boosted to degree at least 3 and every component
/// of the remainder is attached to the planted set, all without exceeding
/// `max_degree`.
pub fn gen_planted_rpf(
    n: usize,
    k: usize,
    r: usize,
    max_degree: usize,
    seed: u64,
) -> Result<(MultiGraph, BTreeSet<VertexId>), GenError> {
    if n <= k {
        return Err(GenError(format!("need n > k, got n={n} k={k}")));
    }
    if k >= 1 && max_degree < 3 {
        return Err(GenError("max_degree below 3 cannot host degree-3 vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = MultiGraph::with_vertices(n);
    let planted: BTreeSet<VertexId> = (0..k as u32).map(VertexId).collect();
    let rest: Vec<VertexId> = (k as u32..n as u32).map(VertexId).collect();

    // Forest skeleton over the rest, in randomly sized components.
    let mut components: Vec<Vec<VertexId>> = Vec::new();
    for &v in &rest {
        let fresh = components.is_empty() || rng.gen_bool(0.3);
        if fresh {
            components.push(vec![v]);
        } else {
            let comp = components.last_mut().unwrap();
            let anchor = *comp.choose(&mut rng).unwrap();
            if g.degree(anchor) < max_degree {
                g.add_edge(v, anchor).unwrap();
                comp.push(v);
            } else {
                components.push(vec![v]);
            }
        }
    }
    // Up to r extra intra-component edges: each component stays within
    // excess r, so the remainder is an r-pseudoforest no matter what.
    for comp in &components {
        let extra = rng.gen_range(0..=r);
        for _ in 0..extra {
            let a = *comp.choose(&mut rng).unwrap();
            let b = *comp.choose(&mut rng).unwrap();
            if g.degree(a) < max_degree && g.degree(b) + usize::from(a == b) < max_degree {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    if k == 0 {
        return Ok((g, planted));
    }
    // Attach every remainder component to the planted set.
    for comp in &components {
        let a = *comp.choose(&mut rng).unwrap();
        let x = pick_with_capacity(&g, &planted, max_degree, &mut rng)
            .ok_or_else(|| GenError("planted set has no degree capacity left".into()))?;
        if g.degree(a) >= max_degree {
            return Err(GenError("remainder vertex ran out of degree capacity".into()));
        }
        g.add_edge(a, x).unwrap();
    }
    // Degree boost: remainder vertices only ever gain edges into the
    // planted set, which cannot disturb the planted property.
    for &v in &rest {
        while g.degree(v) < 3 {
            let x = pick_with_capacity(&g, &planted, max_degree, &mut rng)
                .ok_or_else(|| GenError("planted set has no degree capacity left".into()))?;
            g.add_edge(v, x).unwrap();
        }
    }
    let planted_vec: Vec<VertexId> = planted.iter().copied().collect();
    for &x in &planted_vec {
        while g.degree(x) < 3 {
            let others: BTreeSet<VertexId> =
                planted.iter().copied().filter(|&y| y != x).collect();
            let partner = pick_with_capacity(&g, &others, max_degree, &mut rng).or_else(|| {
                let rest_set: BTreeSet<VertexId> = rest.iter().copied().collect();
                pick_with_capacity(&g, &rest_set, max_degree, &mut rng)
            });
            match partner {
                Some(y) => g.add_edge(x, y).unwrap(),
                None => return Err(GenError("cannot raise planted vertex to degree 3".into())),
            }
        }
    }
    debug_assert!(g.vertices().all(|v| g.degree(v) <= max_degree));
    debug_assert!(nearforest::metrics::is_r_pseudoforest(
        &g.without(&planted),
        r
    ));
    Ok((g, planted))
}

/// Capacity holder with the lowest current degree (random tie-break), so
/// boosting spreads evenly instead of exhausting one vertex early.
fn pick_with_capacity(
    g: &MultiGraph,
    from: &BTreeSet<VertexId>,
    max_degree: usize,
    rng: &mut ChaCha8Rng,
) -> Option<VertexId> {
    let min = from
        .iter()
        .map(|&v| g.degree(v))
        .filter(|&deg| deg < max_degree)
        .min()?;
    let candidates: Vec<VertexId> = from
        .iter()
        .copied()
        .filter(|&v| g.degree(v) == min)
        .collect();
    candidates.choose(rng).copied()
}

/// Decorates a graph with reducible fluff: pendant paths hung on random
/// vertices and subdivisions of random edges. Both dissolve again under the
/// degree-1/degree-2 reduction and neither disturbs a planted deletion set.
pub fn decorate_reducible(g: &MultiGraph, pendants: usize, subdivisions: usize, seed: u64) -> MultiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = g.clone();
    let hosts: Vec<VertexId> = g.vertices().collect();
    if hosts.is_empty() {
        return g;
    }
    for _ in 0..pendants {
        let mut anchor = *hosts.choose(&mut rng).unwrap();
        let len = rng.gen_range(1..=3);
        for _ in 0..len {
            let v = g.add_vertex();
            g.add_edge(anchor, v).unwrap();
            anchor = v;
        }
    }
    for _ in 0..subdivisions {
        let edges: Vec<(VertexId, VertexId)> = g
            .vertices()
            .flat_map(|v| {
                g.neighbors(v)
                    .filter(move |&(u, _)| u > v)
                    .map(move |(u, _)| (v, u))
            })
            .collect();
        let Some(&(a, b)) = edges.choose(&mut rng) else {
            break;
        };
        // Replace one a-b copy by a two-edge path through a fresh vertex.
        remove_one_copy(&mut g, a, b);
        let mid = g.add_vertex();
        g.add_edge(a, mid).unwrap();
        g.add_edge(mid, b).unwrap();
    }
    g
}

/// Removes a single copy of the edge a-b by rebuilding the graph without it.
fn remove_one_copy(g: &mut MultiGraph, a: VertexId, b: VertexId) {
    let mut fresh = MultiGraph::new();
    let ids: Vec<VertexId> = (0..g.id_bound() as u32).map(VertexId).collect();
    for &v in &ids {
        fresh.add_vertex();
        if !g.contains(v) {
            fresh.delete_vertex(v).unwrap();
        }
    }
    let mut removed = false;
    for v in g.vertices() {
        for _ in 0..g.loops(v) {
            fresh.add_edge(v, v).unwrap();
        }
        for (u, m) in g.neighbors(v) {
            if u < v {
                continue;
            }
            let mut copies = m;
            if !removed && ((v, u) == (a, b) || (v, u) == (b, a)) {
                copies -= 1;
                removed = true;
            }
            for _ in 0..copies {
                fresh.add_edge(v, u).unwrap();
            }
        }
    }
    *g = fresh;
}

/// Shapes for the duplicate-tree fixture.
#[derive(Debug, Clone, Copy)]
enum DupTreeShape {
    /// Single-vertex trees, doubled edge to one modulator vertex.
    DoubledSingleton,
    /// Single-vertex trees, one edge to each of two modulator vertices.
    TwoAnchors,
    /// Two-vertex trees, each endpoint tied once to one modulator vertex.
    EdgeTree,
}

/// Disjoint instance whose remainder holds `copies` trees of one
/// neighborhood type, for deduplication-safety testing. The shape is
/// seed-selected but identical across the copies.
pub fn gen_dup_tree_dqf(k: i64, d: usize, copies: usize, seed: u64) -> DqfDisjointInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = *[
        DupTreeShape::DoubledSingleton,
        DupTreeShape::TwoAnchors,
        DupTreeShape::EdgeTree,
    ]
    .choose(&mut rng)
    .unwrap();
    let mut g = MultiGraph::new();
    let mut z = BTreeSet::new();
    match shape {
        DupTreeShape::DoubledSingleton => {
            let z0 = g.add_vertex();
            z.insert(z0);
            for _ in 0..copies {
                let t = g.add_vertex();
                g.add_edge(z0, t).unwrap();
                g.add_edge(z0, t).unwrap();
            }
        }
        DupTreeShape::TwoAnchors => {
            let z0 = g.add_vertex();
            let z1 = g.add_vertex();
            z.insert(z0);
            z.insert(z1);
            for _ in 0..copies {
                let t = g.add_vertex();
                g.add_edge(z0, t).unwrap();
                g.add_edge(z1, t).unwrap();
            }
        }
        DupTreeShape::EdgeTree => {
            let z0 = g.add_vertex();
            z.insert(z0);
            for _ in 0..copies {
                let a = g.add_vertex();
                let b = g.add_vertex();
                g.add_edge(a, b).unwrap();
                g.add_edge(z0, a).unwrap();
                g.add_edge(z0, b).unwrap();
            }
        }
    }
    DqfDisjointInstance::new(g, z, k, d)
}

/// All connected simple graphs on exactly n vertices, one per isomorphism
/// class, built by augmenting the (n-1)-vertex classes with one new vertex
/// per non-empty neighborhood and deduplicating canonical forms. Practical
/// for n <= 7.
pub fn connected_simple_graphs(n: usize) -> Vec<MultiGraph> {
    assert!((1..=8).contains(&n), "enumeration is sized for small n");
    let mut level: Vec<u64> = vec![0]; // K1: empty edge mask
    for size in 2..=n {
        let perms = permutations(size);
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut next = Vec::new();
        for &parent in &level {
            for nbrs in 1u32..(1 << (size - 1)) {
                let mut mask = parent;
                for b in 0..size - 1 {
                    if nbrs & (1 << b) != 0 {
                        mask |= 1 << pair_index(b, size - 1);
                    }
                }
                let canon = canonical_mask(mask, size, &perms);
                if seen.insert(canon) {
                    next.push(canon);
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|mask| mask_to_graph(mask, n)).collect()
}

fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

fn canonical_mask(mask: u64, n: usize, perms: &[Vec<usize>]) -> u64 {
    let mut best = u64::MAX;
    for p in perms {
        let mut relabeled = 0u64;
        for j in 1..n {
            for i in 0..j {
                if mask & (1 << pair_index(i, j)) != 0 {
                    let (a, b) = (p[i].min(p[j]), p[i].max(p[j]));
                    relabeled |= 1 << pair_index(a, b);
                }
            }
        }
        best = best.min(relabeled);
    }
    best
}

fn mask_to_graph(mask: u64, n: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    for j in 1..n {
        for i in 0..j {
            if mask & (1 << pair_index(i, j)) != 0 {
                g.add_edge(VertexId(i as u32), VertexId(j as u32)).unwrap();
            }
        }
    }
    g
}
