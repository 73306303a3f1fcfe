//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use clique_percolation::{ComponentSummary, DirectedGraph, OrientationSpec, UndirectedGraph, Vertex};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Per-pair Bernoulli graph, independent of the library's skip sampler.
pub fn bernoulli_graph(n: usize, p: f64, seed: u64) -> UndirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(Vertex, Vertex)> = (0..n as Vertex)
        .tuple_combinations()
        .filter(|_| rng.random_bool(p))
        .collect();
    UndirectedGraph::from_edges(n, edges)
}

pub fn bernoulli_digraph(n: usize, p: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
        .cartesian_product(0..n as Vertex)
        .filter(|(u, v)| u != v)
        .filter(|_| rng.random_bool(p))
        .collect();
    DirectedGraph::from_arcs(n, arcs)
}

/// All k-subsets whose pairs are all edges, in lexicographic order.
pub fn brute_cliques(g: &UndirectedGraph, k: usize) -> Vec<Vec<Vertex>> {
    (0..g.n() as Vertex)
        .combinations(k)
        .filter(|s| s.iter().tuple_combinations().all(|(&a, &b)| g.has_edge(a, b)))
        .collect()
}

/// Sorted arc set and sorted vertex set of an oriented copy.
pub type ArcCopy = (Vec<(Vertex, Vertex)>, Vec<Vertex>);

/// Copies of `h` as distinct arc sets.
pub fn brute_oriented(d: &DirectedGraph, h: &OrientationSpec) -> Vec<ArcCopy> {
    let k = h.k();
    let mut found = BTreeSet::new();
    for set in (0..d.n() as Vertex).combinations(k) {
        for perm in set.iter().copied().permutations(k) {
            let arcs: Option<Vec<(Vertex, Vertex)>> = h
                .arcs()
                .into_iter()
                .map(|(i, j)| (perm[i], perm[j]))
                .map(|(u, v)| d.has_arc(u, v).then_some((u, v)))
                .collect();
            if let Some(mut arcs) = arcs {
                arcs.sort_unstable();
                found.insert((arcs, set.clone()));
            }
        }
    }
    found.into_iter().collect()
}

/// Components of the graph on `0..len` with adjacency `adj`, by BFS over all
/// pairs. Returned as sorted member lists, sorted.
pub fn bfs_partition(len: usize, adj: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; len];
    let mut parts = Vec::new();
    for s in 0..len {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut part = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for b in 0..len {
                if !seen[b] && adj(a, b) {
                    seen[b] = true;
                    part.push(b);
                    queue.push_back(b);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    parts.sort();
    parts
}

pub fn shared(a: &[Vertex], b: &[Vertex]) -> usize {
    a.iter().filter(|v| b.contains(v)).count()
}

pub fn cross_edges(g: &UndirectedGraph, a: &[Vertex], b: &[Vertex]) -> usize {
    a.iter()
        .cartesian_product(b)
        .filter(|(&u, &v)| g.has_edge(u, v))
        .count()
}

pub fn canonical(summary: &ComponentSummary) -> Vec<Vec<usize>> {
    let mut parts = summary.members();
    parts.iter_mut().for_each(|p| p.sort_unstable());
    parts.sort();
    parts
}

/// True if every part of `fine` lies inside a part of `coarse`.
pub fn refines(fine: &ComponentSummary, coarse: &ComponentSummary) -> bool {
    fine.members().iter().all(|part| {
        part.iter()
            .map(|&c| coarse.component_of(c))
            .all_equal()
    })
}
