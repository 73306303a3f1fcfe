//! Connected components of clique-overlap graphs.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cliques::{for_each_k_clique, Clique, VertexSet, VertexTuple};
use crate::error::{Error, Result};
use crate::graph::{UndirectedGraph, Vertex};

/// Clique count above which the edge-joined pairwise scan logs a warning.
pub const PAIR_SCAN_WARN_CLIQUES: usize = 100_000;

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let grandparent = self.parent[self.parent[x]];
            self.parent[x] = grandparent;
            x = grandparent;
        }
        x
    }

    /// Returns true when `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// Partition of a clique list into overlap components.
///
/// Component ids run over `0..count`, ordered by decreasing size; ties go to
/// the component holding the smaller clique index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    component_of: Vec<u32>,
    sizes: Vec<usize>,
}

impl ComponentSummary {
    pub fn from_union_find(uf: &mut UnionFind) -> Self {
        let n = uf.len();
        // root -> (size, smallest member); first visit of a root is its smallest member
        let mut first_member: HashMap<usize, usize> = HashMap::new();
        let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
        let mut root_size: HashMap<usize, usize> = HashMap::new();
        for (i, &r) in roots.iter().enumerate() {
            first_member.entry(r).or_insert(i);
            *root_size.entry(r).or_insert(0) += 1;
        }
        let ranked: Vec<usize> = first_member
            .iter()
            .sorted_by_key(|&(r, &first)| (std::cmp::Reverse(root_size[r]), first))
            .map(|(&r, _)| r)
            .collect();
        let id_of: HashMap<usize, u32> = ranked
            .iter()
            .enumerate()
            .map(|(id, &r)| (r, id as u32))
            .collect();
        Self {
            component_of: roots.iter().map(|r| id_of[r]).collect(),
            sizes: ranked.iter().map(|r| root_size[r]).collect(),
        }
    }

    /// Number of cliques partitioned.
    pub fn clique_count(&self) -> usize {
        self.component_of.len()
    }

    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn component_of(&self, clique: usize) -> u32 {
        self.component_of[clique]
    }

    pub fn assignments(&self) -> &[u32] {
        &self.component_of
    }

    /// Component sizes in decreasing order.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Largest component size, 0 when there are no cliques.
    pub fn c1(&self) -> usize {
        self.sizes.first().copied().unwrap_or(0)
    }

    /// Second largest component size, 0 if absent.
    pub fn c2(&self) -> usize {
        self.sizes.get(1).copied().unwrap_or(0)
    }

    /// Clique indices of every component, ids in order, members ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.sizes.len()];
        for (i, &c) in self.component_of.iter().enumerate() {
            out[c as usize].push(i);
        }
        out
    }
}

fn check_shared_overlap(k: usize, ell: usize) -> Result<()> {
    if ell < 1 || ell >= k {
        return Err(Error::invalid(format!(
            "overlap ell={ell} outside [1, k-1] for k={k}"
        )));
    }
    Ok(())
}

/// Order shared by every set in `sets`.
fn common_order<S: VertexSet>(sets: &[S]) -> Result<Option<usize>> {
    let Some(first) = sets.first() else {
        return Ok(None);
    };
    let k = first.vertices().len();
    if sets.iter().any(|s| s.vertices().len() != k) {
        return Err(Error::invalid("all cliques must have the same order"));
    }
    Ok(Some(k))
}

/// Components of the graph joining vertex sets that share at least `ell`
/// vertices.
///
/// Each set is keyed by all of its `ell`-subsets; two sets share `ell`
/// vertices exactly when they share a key. The keys are exact vertex tuples.
pub fn components_by_overlap<S: VertexSet>(sets: &[S], ell: usize) -> Result<ComponentSummary> {
    let mut uf = UnionFind::new(sets.len());
    let Some(k) = common_order(sets)? else {
        return Ok(ComponentSummary::from_union_find(&mut uf));
    };
    check_shared_overlap(k, ell)?;
    let mut owner: HashMap<VertexTuple, usize> = HashMap::new();
    for (i, s) in sets.iter().enumerate() {
        for key in s.vertices().iter().copied().combinations(ell) {
            let key: VertexTuple = key.into();
            match owner.get(&key) {
                Some(&j) => {
                    uf.union(i, j);
                }
                None => {
                    owner.insert(key, i);
                }
            }
        }
    }
    Ok(ComponentSummary::from_union_find(&mut uf))
}

/// Components of the k-clique graph where cliques sharing at least `ell`
/// vertices are adjacent.
pub fn components_by_shared_vertices(cliques: &[Clique], ell: usize) -> Result<ComponentSummary> {
    components_by_overlap(cliques, ell)
}

/// Components of the copy graph where oriented copies sharing at least `ell`
/// vertices are adjacent. Copies on the same vertex set are always adjacent.
pub fn components_oriented<S: VertexSet>(copies: &[S], ell: usize) -> Result<ComponentSummary> {
    components_by_overlap(copies, ell)
}

fn disjoint_sorted(a: &[Vertex], b: &[Vertex]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

fn has_cross_edges(g: &UndirectedGraph, a: &[Vertex], b: &[Vertex], ell: usize) -> bool {
    let mut count = 0;
    for &u in a {
        for &v in b {
            if g.has_edge(u, v) {
                count += 1;
                if count >= ell {
                    return true;
                }
            }
        }
    }
    false
}

/// Components of the graph joining vertex-disjoint cliques with at least
/// `ell` edges of `g` between them. Quadratic in the number of cliques.
pub fn components_by_cross_edges(
    g: &UndirectedGraph,
    cliques: &[Clique],
    ell: usize,
) -> Result<ComponentSummary> {
    let mut uf = UnionFind::new(cliques.len());
    let Some(k) = common_order(cliques)? else {
        return Ok(ComponentSummary::from_union_find(&mut uf));
    };
    if ell < 1 || ell > k * k {
        return Err(Error::invalid(format!(
            "cross-edge threshold ell={ell} outside [1, k^2] for k={k}"
        )));
    }
    if cliques.len() > PAIR_SCAN_WARN_CLIQUES {
        log::warn!(
            "edge-joined components: pairwise scan over {} cliques",
            cliques.len()
        );
    }
    for i in 0..cliques.len() {
        let a = cliques[i].vertices();
        for j in i + 1..cliques.len() {
            let b = cliques[j].vertices();
            if disjoint_sorted(a, b) && has_cross_edges(g, a, b, ell) {
                uf.union(i, j);
            }
        }
    }
    Ok(ComponentSummary::from_union_find(&mut uf))
}

/// Result of a local component exploration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exploration {
    /// Cliques reached, sorted.
    pub reached: Vec<Clique>,
    /// Rounds that reached at least one new clique.
    pub rounds: usize,
    /// True when the budget stopped the exploration early.
    pub truncated: bool,
}

/// k-cliques of `g` containing every vertex of `base`.
fn cliques_through(g: &UndirectedGraph, base: &[Vertex], k: usize) -> Vec<Clique> {
    let mut common: Vec<Vertex> = g.neighbors(base[0]).to_vec();
    for &v in &base[1..] {
        common.retain(|&u| g.has_edge(u, v));
    }
    let extra = k - base.len();
    let local = UndirectedGraph::from_edges(
        common.len(),
        common.iter().enumerate().flat_map(|(i, &u)| {
            common[i + 1..]
                .iter()
                .enumerate()
                .filter(move |&(_, &w)| g.has_edge(u, w))
                .map(move |(j, _)| (i as Vertex, (i + 1 + j) as Vertex))
        }),
    );
    let mut out = Vec::new();
    let mut emit = |local_vs: &[Vertex]| {
        let mut vs: VertexTuple = base.iter().copied().collect();
        vs.extend(local_vs.iter().map(|&x| common[x as usize]));
        out.push(Clique::from_unsorted(&vs));
    };
    if extra == 1 {
        (0..common.len() as Vertex).for_each(|x| emit(&[x]));
    } else {
        for_each_k_clique(&local, extra, emit).expect("extra >= 2");
    }
    out
}

/// Explores the shared-vertex component of `start` locally, in rounds.
///
/// Round 0 tests the `ell`-subsets of `start`; round `i >= 1` tests the
/// `ell`-subsets first created in round `i - 1`. Testing a subset reaches
/// every k-clique of `g` containing it. Stops once more than `budget`
/// cliques would be reached.
pub fn explore_component(
    g: &UndirectedGraph,
    start: &Clique,
    ell: usize,
    budget: usize,
) -> Result<Exploration> {
    let k = start.order();
    check_shared_overlap(k, ell)?;
    if budget == 0 {
        return Err(Error::invalid("exploration budget must be positive"));
    }
    if !start.is_clique_of(g) {
        return Err(Error::invalid(format!("{start} is not a clique of the graph")));
    }
    let mut reached: HashSet<Clique> = HashSet::from([start.clone()]);
    let mut seen_keys: HashSet<VertexTuple> = HashSet::new();
    let mut frontier: Vec<VertexTuple> = Vec::new();
    for key in start.vertices().iter().copied().combinations(ell) {
        let key: VertexTuple = key.into();
        if seen_keys.insert(key.clone()) {
            frontier.push(key);
        }
    }
    let mut rounds = 0;
    let mut truncated = false;
    'rounds: while !frontier.is_empty() {
        let mut next = Vec::new();
        let mut grew = false;
        for key in &frontier {
            for clique in cliques_through(g, key, k) {
                if reached.contains(&clique) {
                    continue;
                }
                if reached.len() >= budget {
                    truncated = true;
                    if grew {
                        rounds += 1;
                    }
                    break 'rounds;
                }
                for sub in clique.vertices().iter().copied().combinations(ell) {
                    let sub: VertexTuple = sub.into();
                    if seen_keys.insert(sub.clone()) {
                        next.push(sub);
                    }
                }
                reached.insert(clique);
                grew = true;
            }
        }
        if grew {
            rounds += 1;
        }
        frontier = next;
    }
    let mut reached: Vec<Clique> = reached.into_iter().collect();
    reached.sort_unstable();
    Ok(Exploration {
        reached,
        rounds,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::enumerate_k_cliques;

    fn c(vs: &[Vertex]) -> Clique {
        Clique::new(vs)
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(0), uf.find(1));
        assert_ne!(uf.find(0), uf.find(3));
        let s = ComponentSummary::from_union_find(&mut uf);
        assert_eq!(s.sizes(), [2, 2, 1]);
        assert_eq!(s.assignments(), [0, 0, 2, 1, 1]);
        assert_eq!((s.c1(), s.c2()), (2, 2));
    }

    #[test]
    fn shared_edge_vs_shared_vertex() {
        let s = components_by_shared_vertices(&[c(&[0, 1, 2]), c(&[1, 2, 3])], 2).unwrap();
        assert_eq!(s.sizes(), [2]);
        let s = components_by_shared_vertices(&[c(&[0, 1, 2]), c(&[2, 3, 4])], 2).unwrap();
        assert_eq!(s.sizes(), [1, 1]);
        let s = components_by_shared_vertices(&[c(&[0, 1, 2]), c(&[2, 3, 4])], 1).unwrap();
        assert_eq!(s.sizes(), [2]);
    }

    #[test]
    fn empty_input_and_bad_ell() {
        let s = components_by_shared_vertices(&[], 2).unwrap();
        assert_eq!((s.c1(), s.c2(), s.component_count()), (0, 0, 0));
        assert!(components_by_shared_vertices(&[c(&[0, 1, 2])], 3).is_err());
        assert!(components_by_shared_vertices(&[c(&[0, 1, 2])], 0).is_err());
        assert!(components_by_shared_vertices(&[c(&[0, 1, 2]), c(&[0, 1])], 1).is_err());
    }

    #[test]
    fn cross_edges() {
        let g = UndirectedGraph::from_edges(
            6,
            [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
        );
        let cliques = enumerate_k_cliques(&g, 3).unwrap();
        let s = components_by_cross_edges(&g, &cliques, 1).unwrap();
        assert_eq!(s.sizes(), [2]);
        let s = components_by_cross_edges(&g, &cliques, 2).unwrap();
        assert_eq!(s.sizes(), [1, 1]);
        assert!(components_by_cross_edges(&g, &cliques, 10).is_err());

        // bowtie: two triangles sharing vertex 2, plus an edge between them
        let bowtie = UndirectedGraph::from_edges(
            5,
            [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (0, 3)],
        );
        let cliques = enumerate_k_cliques(&bowtie, 3).unwrap();
        let s = components_by_cross_edges(&bowtie, &cliques, 1).unwrap();
        // {0,2,3} exists via 0-3; no two triangles are vertex-disjoint
        assert_eq!(s.component_count(), cliques.len());
    }

    #[test]
    fn explore_isolated_and_chain() {
        let g = UndirectedGraph::complete(3);
        let ex = explore_component(&g, &c(&[0, 1, 2]), 2, 10).unwrap();
        assert_eq!(ex.reached, [c(&[0, 1, 2])]);
        assert_eq!(ex.rounds, 0);
        assert!(!ex.truncated);

        // triangles 012, 123, 234 glued edge to edge
        let chain = UndirectedGraph::from_edges(
            5,
            [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)],
        );
        let ex = explore_component(&chain, &c(&[0, 1, 2]), 2, 100).unwrap();
        assert_eq!(ex.reached.len(), 3);
        assert!(ex.rounds <= 2);
        let ex = explore_component(&chain, &c(&[1, 2, 3]), 2, 100).unwrap();
        assert_eq!((ex.reached.len(), ex.rounds), (3, 1));

        let ex = explore_component(&chain, &c(&[0, 1, 2]), 2, 2).unwrap();
        assert_eq!(ex.reached.len(), 2);
        assert!(ex.truncated);
    }

    #[test]
    fn explore_errors() {
        let g = UndirectedGraph::complete(4);
        assert!(explore_component(&g, &c(&[0, 1, 2]), 2, 0).is_err());
        assert!(explore_component(&g, &c(&[0, 1, 2]), 3, 5).is_err());
        let path = UndirectedGraph::from_edges(3, [(0, 1), (1, 2)]);
        assert!(explore_component(&path, &c(&[0, 1, 2]), 2, 5).is_err());
    }

    #[test]
    fn explore_k4_cliques() {
        let g = UndirectedGraph::complete(6);
        let ex = explore_component(&g, &c(&[0, 1, 2, 3]), 3, 1000).unwrap();
        assert_eq!(ex.reached.len(), 15);
        let ex = explore_component(&g, &c(&[0, 1, 2, 3]), 1, 1000).unwrap();
        assert_eq!(ex.reached.len(), 15);
    }
}
