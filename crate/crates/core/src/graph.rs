//! Undirected multigraph with parallel edges and self-loops.
//!
//! The reduction rules used by the solvers need three mutations beyond plain
//! insertion: vertex deletion, degree-2 bypass (which may create a parallel
//! edge or a loop), and component extraction with multiplicity-aware edge
//! counts. Vertex ids are dense indices that stay stable across mutations:
//! deleted ids are tombstoned and never reused, so a witness computed on a
//! branch-local copy is reported in the ids of the original input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Dense vertex index, stable for the lifetime of a graph value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not present in the graph")]
    UnknownVertex(VertexId),
    #[error("vertex {0} has degree {1}, expected exactly 2")]
    NotDegreeTwo(VertexId, usize),
    #[error("vertex {0} carries a loop and cannot be bypassed")]
    LoopedVertex(VertexId),
}

/// Per-vertex adjacency: neighbor -> multiplicity, plus a loop count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Adjacency {
    neighbors: BTreeMap<u32, u32>,
    loops: u32,
}

/// Undirected multigraph. A loop contributes 2 to the degree of its vertex
/// and 1 to the edge count, so a loop keeps its component cyclic and a
/// looped degree-2 vertex is never eligible for bypassing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    slots: Vec<Option<Adjacency>>,
}

/// A connected piece of a graph together with its multiplicity-aware edge
/// count (loops included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: BTreeSet<VertexId>,
    pub edge_count: usize,
}

impl Component {
    pub fn min_vertex(&self) -> VertexId {
        *self.vertices.iter().next().expect("component is non-empty")
    }
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with vertices 0..n and no edges.
    pub fn with_vertices(n: usize) -> Self {
        MultiGraph {
            slots: vec![Some(Adjacency::default()); n],
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.slots.push(Some(Adjacency::default()));
        VertexId((self.slots.len() - 1) as u32)
    }

    /// Size of the id space (alive + tombstoned).
    pub fn id_bound(&self) -> usize {
        self.slots.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.slots.get(v.index()).is_some_and(|s| s.is_some())
    }

    fn adj(&self, v: VertexId) -> Result<&Adjacency, GraphError> {
        self.slots
            .get(v.index())
            .and_then(|s| s.as_ref())
            .ok_or(GraphError::UnknownVertex(v))
    }

    /// Alive vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn vertex_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count() == 0
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices().collect()
    }

    /// Total edge count: half the sum of cross multiplicities plus loops.
    pub fn edge_count(&self) -> usize {
        let mut twice_cross = 0usize;
        let mut loops = 0usize;
        for s in self.slots.iter().flatten() {
            twice_cross += s.neighbors.values().map(|&m| m as usize).sum::<usize>();
            loops += s.loops as usize;
        }
        twice_cross / 2 + loops
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> u32 {
        self.slots
            .get(u.index())
            .and_then(|s| s.as_ref())
            .and_then(|s| s.neighbors.get(&v.0).copied())
            .unwrap_or(0)
    }

    pub fn loops(&self, v: VertexId) -> u32 {
        self.slots
            .get(v.index())
            .and_then(|s| s.as_ref())
            .map_or(0, |s| s.loops)
    }

    /// deg(v) = sum of multiplicities to neighbors + 2 per loop.
    pub fn degree(&self, v: VertexId) -> usize {
        match self.adj(v) {
            Ok(a) => {
                a.neighbors.values().map(|&m| m as usize).sum::<usize>() + 2 * a.loops as usize
            }
            Err(_) => 0,
        }
    }

    /// Distinct neighbors of v with multiplicities, ascending by id. Loops
    /// are not reported here; query them via [`MultiGraph::loops`].
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.slots
            .get(v.index())
            .and_then(|s| s.as_ref())
            .into_iter()
            .flat_map(|a| a.neighbors.iter().map(|(&n, &m)| (VertexId(n), m)))
    }

    /// Adds one edge copy between u and v; u = v adds a loop.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.adj(u)?;
        self.adj(v)?;
        if u == v {
            self.slots[u.index()].as_mut().unwrap().loops += 1;
        } else {
            *self.slots[u.index()]
                .as_mut()
                .unwrap()
                .neighbors
                .entry(v.0)
                .or_insert(0) += 1;
            *self.slots[v.index()]
                .as_mut()
                .unwrap()
                .neighbors
                .entry(u.0)
                .or_insert(0) += 1;
        }
        Ok(())
    }

    /// Removes v with all incident edges and loops. The id is tombstoned.
    pub fn delete_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        let adj = self
            .slots
            .get_mut(v.index())
            .and_then(|s| s.take())
            .ok_or(GraphError::UnknownVertex(v))?;
        for &n in adj.neighbors.keys() {
            let other = self.slots[n as usize]
                .as_mut()
                .expect("adjacency symmetry: neighbor must be alive");
            other.neighbors.remove(&v.0);
        }
        Ok(())
    }

    pub fn delete_vertices<I: IntoIterator<Item = VertexId>>(&mut self, vs: I) {
        for v in vs {
            let _ = self.delete_vertex(v);
        }
    }

    /// Removes a degree-2, loop-free vertex and reconnects its two edge
    /// endpoints: distinct endpoints x, y gain one x-y copy (even if already
    /// adjacent); a double edge to a single endpoint x becomes a loop on x.
    /// Decreases both the vertex count and the edge count by exactly one.
    pub fn bypass_degree2(&mut self, u: VertexId) -> Result<(), GraphError> {
        let a = self.adj(u)?;
        if a.loops > 0 {
            return Err(GraphError::LoopedVertex(u));
        }
        let deg = self.degree(u);
        if deg != 2 {
            return Err(GraphError::NotDegreeTwo(u, deg));
        }
        let ends: Vec<(VertexId, u32)> = self.neighbors(u).collect();
        self.delete_vertex(u)?;
        match ends.as_slice() {
            [(x, 2)] => self.add_edge(*x, *x)?,
            [(x, 1), (y, 1)] => self.add_edge(*x, *y)?,
            _ => unreachable!("degree-2 loop-free vertex has one double or two single edges"),
        }
        Ok(())
    }

    /// Connected components, ordered by smallest contained vertex id.
    pub fn components(&self) -> Vec<Component> {
        let mut seen = vec![false; self.slots.len()];
        let mut out = Vec::new();
        for root in self.vertices() {
            if seen[root.index()] {
                continue;
            }
            let mut stack = vec![root];
            seen[root.index()] = true;
            let mut vertices = BTreeSet::new();
            let mut twice_cross = 0usize;
            let mut loops = 0usize;
            while let Some(v) = stack.pop() {
                vertices.insert(v);
                loops += self.loops(v) as usize;
                for (n, m) in self.neighbors(v) {
                    twice_cross += m as usize;
                    if !seen[n.index()] {
                        seen[n.index()] = true;
                        stack.push(n);
                    }
                }
            }
            out.push(Component {
                vertices,
                edge_count: twice_cross / 2 + loops,
            });
        }
        out
    }

    /// Component membership map: vertex -> component index in the vector
    /// returned by [`MultiGraph::components`].
    pub fn component_index(components: &[Component]) -> BTreeMap<VertexId, usize> {
        let mut map = BTreeMap::new();
        for (i, c) in components.iter().enumerate() {
            for &v in &c.vertices {
                map.insert(v, i);
            }
        }
        map
    }

    /// Distinct neighbors of v inside `region` plus the multiplicity-weighted
    /// edge count from v into the region. Loops on v never count.
    pub fn neighbors_in(
        &self,
        v: VertexId,
        region: &BTreeSet<VertexId>,
    ) -> (BTreeSet<VertexId>, usize) {
        let mut set = BTreeSet::new();
        let mut weight = 0usize;
        for (n, m) in self.neighbors(v) {
            if region.contains(&n) {
                set.insert(n);
                weight += m as usize;
            }
        }
        (set, weight)
    }

    /// Shortest path inside `inside` realizing two distinct edge attachments
    /// to `anchors`: either a single vertex with two or more anchor edges, or
    /// a longer path whose two endpoints each have an anchor edge and whose
    /// interior has none. Ties break to the lexicographically smallest vertex
    /// sequence. When no such path exists but some vertex of `inside` still
    /// touches `anchors`, that vertex is returned as a degenerate one-vertex
    /// path; `None` means nothing in `inside` touches `anchors` at all.
    pub fn shortest_attached_path(
        &self,
        inside: &BTreeSet<VertexId>,
        anchors: &BTreeSet<VertexId>,
    ) -> Option<Vec<VertexId>> {
        debug_assert!(inside.is_disjoint(anchors));
        let weight = |v: VertexId| self.neighbors_in(v, anchors).1;
        let touching: Vec<VertexId> = inside.iter().copied().filter(|&v| weight(v) > 0).collect();
        if touching.is_empty() {
            return None;
        }
        // t = 1: a vertex carrying two anchor edge-endpoints on its own.
        if let Some(&v) = touching.iter().find(|&&v| weight(v) >= 2) {
            return Some(vec![v]);
        }
        // t >= 2: lexicographic DFS at increasing target length; interior
        // vertices must not touch the anchors.
        for target in 2..=inside.len() {
            let mut path: Vec<VertexId> = Vec::with_capacity(target);
            let mut on_path: BTreeSet<VertexId> = BTreeSet::new();
            for &start in &touching {
                path.push(start);
                on_path.insert(start);
                if self.lex_path_search(inside, &touching, target, &mut path, &mut on_path) {
                    return Some(path);
                }
                on_path.remove(&start);
                path.pop();
            }
        }
        // Degenerate: some vertex touches, but no two-attachment path exists.
        Some(vec![touching[0]])
    }

    fn lex_path_search(
        &self,
        inside: &BTreeSet<VertexId>,
        touching: &[VertexId],
        target: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut BTreeSet<VertexId>,
    ) -> bool {
        if path.len() == target {
            return touching.contains(path.last().unwrap());
        }
        let last = *path.last().unwrap();
        // Interior vertices must not touch the anchors: every vertex except
        // the first and the final one must be anchor-free.
        let next_is_last = path.len() + 1 == target;
        let nexts: Vec<VertexId> = self
            .neighbors(last)
            .map(|(n, _)| n)
            .filter(|n| inside.contains(n) && !on_path.contains(n))
            .filter(|n| next_is_last || !touching.contains(n))
            .collect();
        for n in nexts {
            path.push(n);
            on_path.insert(n);
            if self.lex_path_search(inside, touching, target, path, on_path) {
                return true;
            }
            on_path.remove(&n);
            path.pop();
        }
        false
    }

    /// Copy restricted to `keep`; all other ids are tombstoned, so vertex ids
    /// carry over unchanged.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> MultiGraph {
        let mut g = self.clone();
        let drop: Vec<VertexId> = g.vertices().filter(|v| !keep.contains(v)).collect();
        g.delete_vertices(drop);
        g
    }

    /// Copy with the given vertices removed.
    pub fn without(&self, drop: &BTreeSet<VertexId>) -> MultiGraph {
        let mut g = self.clone();
        g.delete_vertices(drop.iter().copied());
        g
    }

    /// Structural audit used by tests: adjacency symmetry and the degree/edge
    /// identities from the multigraph definition.
    pub fn is_consistent(&self) -> bool {
        for v in self.vertices() {
            for (n, m) in self.neighbors(v) {
                if !self.contains(n) || self.multiplicity(n, v) != m || n == v {
                    return false;
                }
            }
        }
        let degree_sum: usize = self.vertices().map(|v| self.degree(v)).sum();
        degree_sum == 2 * self.edge_count()
    }
}
