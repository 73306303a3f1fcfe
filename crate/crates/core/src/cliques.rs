//! Enumeration of k-cliques, oriented clique copies and small motif copies.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, UndirectedGraph, Vertex};

/// Largest order accepted for orientations and motifs.
pub const MAX_PATTERN_ORDER: usize = 8;

pub(crate) type VertexTuple = SmallVec<[Vertex; 8]>;

/// Anything occupying a sorted set of host vertices.
pub trait VertexSet {
    /// Host vertices in strictly increasing order.
    fn vertices(&self) -> &[Vertex];
}

/// A complete subgraph, stored as its strictly increasing vertex tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Clique(VertexTuple);

impl Clique {
    /// Panics unless `vertices` is strictly increasing.
    pub fn new(vertices: &[Vertex]) -> Self {
        assert!(
            vertices.windows(2).all(|w| w[0] < w[1]),
            "clique vertices must be strictly increasing"
        );
        Clique(vertices.into())
    }

    pub fn from_unsorted(vertices: &[Vertex]) -> Self {
        let mut v: VertexTuple = vertices.into();
        v.sort_unstable();
        Self::new(&v)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn is_clique_of(&self, g: &UndirectedGraph) -> bool {
        self.0
            .iter()
            .tuple_combinations()
            .all(|(&u, &v)| g.has_edge(u, v))
    }
}

impl VertexSet for Clique {
    fn vertices(&self) -> &[Vertex] {
        &self.0
    }
}

impl fmt::Display for Clique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

/// Vertices ordered by a degeneracy (smallest-last) ordering; returns the rank
/// of every vertex.
fn degeneracy_rank(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v as Vertex)).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_degree + 1];
    for (v, &d) in degree.iter().enumerate() {
        buckets[d].push(v);
    }
    let mut rank = vec![usize::MAX; n];
    let mut next_rank = 0;
    let mut lowest = 0;
    while next_rank < n {
        while buckets[lowest].is_empty() {
            lowest += 1;
        }
        let v = buckets[lowest].pop().unwrap();
        // Stale entry: the vertex moved to a lower bucket or was already ranked.
        if rank[v] != usize::MAX || degree[v] != lowest {
            continue;
        }
        rank[v] = next_rank;
        next_rank += 1;
        for &u in g.neighbors(v as Vertex) {
            let u = u as usize;
            if rank[u] == usize::MAX {
                degree[u] -= 1;
                buckets[degree[u]].push(u);
                lowest = lowest.min(degree[u]);
            }
        }
    }
    rank
}

fn intersect_sorted(a: &[Vertex], b: &[Vertex], out: &mut Vec<Vertex>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

fn extend_cliques<F: FnMut(&[Vertex])>(
    forward: &[Vec<Vertex>],
    k: usize,
    stack: &mut Vec<Vertex>,
    candidates: &[Vertex],
    visit: &mut F,
) {
    let remaining = k - stack.len();
    if remaining == 1 {
        for &v in candidates {
            stack.push(v);
            visit(stack);
            stack.pop();
        }
        return;
    }
    let mut next = Vec::new();
    for &v in candidates {
        intersect_sorted(candidates, &forward[v as usize], &mut next);
        if next.len() + 1 < remaining {
            continue;
        }
        stack.push(v);
        extend_cliques(forward, k, stack, &next, visit);
        stack.pop();
    }
}

/// Calls `visit` once per k-clique of `g`, without materializing the list.
///
/// Vertices are handed over in degeneracy order, not sorted; the visiting
/// order is deterministic but unspecified.
pub fn for_each_k_clique<F>(g: &UndirectedGraph, k: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[Vertex]),
{
    if k < 2 {
        return Err(Error::invalid(format!("clique order k={k} must be at least 2")));
    }
    if k > g.n() {
        return Ok(());
    }
    let rank = degeneracy_rank(g);
    let forward: Vec<Vec<Vertex>> = (0..g.n() as Vertex)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&u| rank[u as usize] > rank[v as usize])
                .collect()
        })
        .collect();
    let mut stack = Vec::with_capacity(k);
    for v in 0..g.n() as Vertex {
        if forward[v as usize].len() + 1 < k {
            continue;
        }
        stack.push(v);
        extend_cliques(&forward, k, &mut stack, &forward[v as usize], &mut visit);
        stack.pop();
    }
    Ok(())
}

/// Counts k-cliques without storing them.
pub fn count_k_cliques(g: &UndirectedGraph, k: usize) -> Result<usize> {
    let mut count = 0;
    for_each_k_clique(g, k, |_| count += 1)?;
    Ok(count)
}

/// All k-cliques of `g` in lexicographic order.
pub fn enumerate_k_cliques(g: &UndirectedGraph, k: usize) -> Result<Vec<Clique>> {
    let mut out = Vec::new();
    for_each_k_clique(g, k, |vs| out.push(Clique::from_unsorted(vs)))?;
    out.sort_unstable();
    Ok(out)
}

/// An orientation of the complete graph on roles `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationSpec {
    k: usize,
    /// Row-major `k x k`; `beats[i * k + j]` iff role `i` sends an arc to `j`.
    beats: Vec<bool>,
    automorphism_count: u64,
}

impl OrientationSpec {
    /// Builds an orientation from its arc list. Every role pair must be
    /// covered by exactly one arc.
    pub fn from_arcs(k: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("orientation order k={k} must be at least 2")));
        }
        if k > MAX_PATTERN_ORDER {
            return Err(Error::Unsupported(format!(
                "orientation order k={k} exceeds {MAX_PATTERN_ORDER}"
            )));
        }
        let mut beats = vec![false; k * k];
        for &(i, j) in arcs {
            if i >= k || j >= k || i == j {
                return Err(Error::invalid(format!("arc {i}->{j} is not a role pair of K_{k}")));
            }
            if beats[i * k + j] || beats[j * k + i] {
                return Err(Error::invalid(format!("role pair {{{i},{j}}} oriented twice")));
            }
            beats[i * k + j] = true;
        }
        if arcs.len() != k * (k - 1) / 2 {
            return Err(Error::invalid(format!(
                "orientation of K_{k} needs {} arcs, got {}",
                k * (k - 1) / 2,
                arcs.len()
            )));
        }
        let mut spec = OrientationSpec {
            k,
            beats,
            automorphism_count: 0,
        };
        spec.automorphism_count = (0..k)
            .permutations(k)
            .filter(|perm| spec.is_automorphism(perm))
            .count() as u64;
        Ok(spec)
    }

    /// Parses `"0>1,1>2,0>2"` style arc lists; `k` is inferred from the
    /// largest role index.
    pub fn parse_arcs(text: &str) -> Result<Self> {
        let mut arcs = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item
                .split_once('>')
                .ok_or_else(|| Error::invalid(format!("arc {item:?} is not of the form i>j")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad role index {s:?}")))
            };
            arcs.push((parse(a)?, parse(b)?));
        }
        let k = arcs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Self::from_arcs(k, &arcs)
    }

    /// The transitive tournament: role `i` beats role `j` whenever `i < j`.
    pub fn transitive(k: usize) -> Result<Self> {
        let arcs: Vec<_> = (0..k).tuple_combinations().collect();
        Self::from_arcs(k, &arcs)
    }

    /// The rigid orientation of `K_4` with two cyclic and two transitive
    /// triangles. With roles `a, b, c, d = 0, 1, 2, 3` the arcs are
    /// `b->a, a->c, d->a, b->c, d->b, c->d`; the triangles on `{b,c,d}` and
    /// `{a,c,d}` are cyclic.
    pub fn k4_two_cyclic() -> Self {
        Self::from_arcs(4, &[(1, 0), (0, 2), (3, 0), (1, 2), (3, 1), (2, 3)])
            .expect("valid tournament")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn automorphism_count(&self) -> u64 {
        self.automorphism_count
    }

    /// Whether role `i` sends an arc to role `j`.
    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.beats[i * self.k + j]
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.k)
            .cartesian_product(0..self.k)
            .filter(|&(i, j)| self.beats(i, j))
            .collect()
    }

    fn is_automorphism(&self, perm: &[usize]) -> bool {
        (0..self.k)
            .tuple_combinations()
            .all(|(i, j)| self.beats(i, j) == self.beats(perm[i], perm[j]))
    }
}

impl fmt::Display for OrientationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs = self.arcs().iter().map(|(i, j)| format!("{i}>{j}")).join(",");
        f.write_str(&arcs)
    }
}

/// A copy of an orientation inside a digraph. Identity is the arc set.
#[derive(Debug, Clone)]
pub struct OrientedCopy {
    arcs: Vec<(Vertex, Vertex)>,
    vertices: VertexTuple,
    role_map: VertexTuple,
}

impl OrientedCopy {
    /// Host arcs of the copy, sorted.
    pub fn arcs(&self) -> &[(Vertex, Vertex)] {
        &self.arcs
    }

    /// `role_map()[i]` is the host vertex playing role `i`.
    pub fn role_map(&self) -> &[Vertex] {
        &self.role_map
    }
}

impl VertexSet for OrientedCopy {
    fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }
}

impl PartialEq for OrientedCopy {
    fn eq(&self, other: &Self) -> bool {
        self.arcs == other.arcs
    }
}

impl Eq for OrientedCopy {}

impl std::hash::Hash for OrientedCopy {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.arcs.hash(state);
    }
}

/// Copies of `h` in `d`, deduplicated by arc set, ordered by vertex set and
/// then by arc list.
///
/// Candidate vertex sets are the k-cliques of the underlying simple graph;
/// each is checked against every role assignment.
pub fn enumerate_oriented_copies(d: &DirectedGraph, h: &OrientationSpec) -> Result<Vec<OrientedCopy>> {
    let k = h.k();
    let underlying = d.underlying();
    let role_pairs: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let mut out = Vec::new();
    for kset in enumerate_k_cliques(&underlying, k)? {
        let vs = kset.vertices();
        let mut found: Vec<OrientedCopy> = Vec::new();
        for perm in &perms {
            let role_map: VertexTuple = perm.iter().map(|&i| vs[i]).collect();
            let mut arcs = Vec::with_capacity(role_pairs.len());
            let ok = role_pairs.iter().all(|&(i, j)| {
                let (a, b) = if h.beats(i, j) {
                    (role_map[i], role_map[j])
                } else {
                    (role_map[j], role_map[i])
                };
                arcs.push((a, b));
                d.has_arc(a, b)
            });
            if !ok {
                continue;
            }
            arcs.sort_unstable();
            if found.iter().all(|c| c.arcs != arcs) {
                found.push(OrientedCopy {
                    arcs,
                    vertices: vs.into(),
                    role_map,
                });
            }
        }
        found.sort_by(|a, b| a.arcs.cmp(&b.arcs));
        out.extend(found);
    }
    Ok(out)
}

/// A small connected pattern graph on vertices `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Motif {
    k: usize,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Motif {
    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if k > MAX_PATTERN_ORDER {
            return Err(Error::Unsupported(format!(
                "motif order {k} exceeds {MAX_PATTERN_ORDER}"
            )));
        }
        if k < 2 {
            return Err(Error::invalid("motif needs at least two vertices"));
        }
        let mut adjacency = vec![Vec::new(); k];
        for &(u, v) in edges {
            if u >= k || v >= k || u == v {
                return Err(Error::invalid(format!("bad motif edge {u}-{v}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let motif = Motif {
            k,
            adjacency,
            edge_count,
        };
        if motif.bfs_order().len() != k {
            return Err(Error::invalid("motif must be connected"));
        }
        Ok(motif)
    }

    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::invalid(format!("cycle length {k} must be at least 3")));
        }
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::from_edges(k, &edges)
    }

    pub fn complete_bipartite(r: usize, s: usize) -> Result<Self> {
        let edges: Vec<_> = (0..r).cartesian_product(r..r + s).collect();
        Self::from_edges(r + s, &edges)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.k];
        let mut order = Vec::with_capacity(self.k);
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        order
    }
}

/// A subgraph of the host isomorphic to a motif. Identity is the edge set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotifCopy {
    vertices: VertexTuple,
    edges: Vec<(Vertex, Vertex)>,
}

impl MotifCopy {
    /// Host edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }
}

impl VertexSet for MotifCopy {
    fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }
}

struct EmbeddingSearch<'a> {
    g: &'a UndirectedGraph,
    h: &'a Motif,
    order: Vec<usize>,
    /// For each position in `order`, motif neighbours that appear earlier.
    back_edges: Vec<Vec<usize>>,
    image: Vec<Vertex>,
    seen: HashSet<MotifCopy>,
}

impl EmbeddingSearch<'_> {
    fn extend(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.record();
            return;
        }
        let anchor = self.back_edges[depth][0];
        let candidates = self.g.neighbors(self.image[anchor]).to_vec();
        for c in candidates {
            let placed = &self.order[..depth];
            if placed.iter().any(|&m| self.image[m] == c) {
                continue;
            }
            if self.back_edges[depth][1..]
                .iter()
                .all(|&m| self.g.has_edge(self.image[m], c))
            {
                self.image[self.order[depth]] = c;
                self.extend(depth + 1);
            }
        }
    }

    fn record(&mut self) {
        let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(self.h.edge_count);
        for (u, list) in self.h.adjacency.iter().enumerate() {
            for &v in list.iter().filter(|&&v| v > u) {
                let (a, b) = (self.image[u], self.image[v]);
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        let mut vertices: VertexTuple = self.image.iter().copied().collect();
        vertices.sort_unstable();
        self.seen.insert(MotifCopy { vertices, edges });
    }
}

/// Copies of motif `h` in `g` (not necessarily induced), each counted once
/// per distinct image edge set, sorted by vertex set then edge set.
pub fn enumerate_subgraph_copies(g: &UndirectedGraph, h: &Motif) -> Result<Vec<MotifCopy>> {
    let order = h.bfs_order();
    let position: Vec<usize> = {
        let mut pos = vec![0; h.k];
        for (i, &m) in order.iter().enumerate() {
            pos[m] = i;
        }
        pos
    };
    let back_edges: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            h.adjacency[m]
                .iter()
                .copied()
                .filter(|&u| position[u] < i)
                .sorted_by_key(|&u| position[u])
                .collect()
        })
        .collect();
    let mut search = EmbeddingSearch {
        g,
        h,
        order,
        back_edges,
        image: vec![0; h.k],
        seen: HashSet::new(),
    };
    for v in 0..g.n() as Vertex {
        search.image[search.order[0]] = v;
        search.extend(1);
    }
    let mut copies: Vec<MotifCopy> = search.seen.into_iter().collect();
    copies.sort_unstable();
    Ok(copies)
}
