//! Random graph generation and edge-list ingestion.

use std::collections::HashMap;
use std::io::BufRead;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::seed::Seed;

/// Vertex index. Labels from ingested files live in [`LabeledGraph`].
pub type Vertex = u32;

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n as Vertex)
            .map(|v| (0..n as Vertex).filter(|&u| u != v).collect())
            .collect();
        Self {
            adjacency,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    /// Builds a graph from an edge iterator. Self-loops are dropped and
    /// repeated edges collapsed.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                continue;
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        Self::from_raw(adjacency)
    }

    fn from_raw(mut adjacency: Vec<Vec<Vertex>>) -> Self {
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Self {
            adjacency,
            edge_count: degree_sum / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a as usize].binary_search(&b).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as Vertex;
            list.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    /// Returns a copy of the graph with edge `{u, v}` added.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Self {
        Self::from_edges(self.n(), self.edges().chain(std::iter::once((u, v))))
    }
}

/// Digraph without self-loops; antiparallel arcs may coexist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    out_adjacency: Vec<Vec<Vertex>>,
    in_adjacency: Vec<Vec<Vertex>>,
    arc_count: usize,
}

impl DirectedGraph {
    pub fn from_arcs<I>(n: usize, arcs: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut out_adjacency = vec![Vec::new(); n];
        let mut in_adjacency = vec![Vec::new(); n];
        for (u, v) in arcs {
            if u == v {
                continue;
            }
            out_adjacency[u as usize].push(v);
            in_adjacency[v as usize].push(u);
        }
        let mut arc_count = 0;
        for list in out_adjacency.iter_mut().chain(in_adjacency.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        for list in &out_adjacency {
            arc_count += list.len();
        }
        Self {
            out_adjacency,
            in_adjacency,
            arc_count,
        }
    }

    pub fn n(&self) -> usize {
        self.out_adjacency.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out_adjacency[v as usize]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.in_adjacency[v as usize]
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.out_adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out_adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u as Vertex, v)))
    }

    /// Simple graph joining `u` and `v` whenever at least one arc connects them.
    pub fn underlying(&self) -> UndirectedGraph {
        UndirectedGraph::from_edges(self.n(), self.arcs())
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn check_vertex_count(n: usize) -> Result<()> {
    if n > Vertex::MAX as usize {
        return Err(Error::invalid(format!("vertex count {n} exceeds 32-bit index")));
    }
    Ok(())
}

/// Visits the indices in `0..total` selected independently with probability
/// `p`, in increasing order, by sampling geometric gaps.
fn for_each_selected<F>(total: u64, p: f64, seed: Seed, mut visit: F)
where
    F: FnMut(u64),
{
    if total == 0 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(visit);
        return;
    }
    let mut rng = seed.rng();
    let log_q = (-p).ln_1p();
    let mut next: u64 = 0;
    loop {
        let u: f64 = rng.random();
        // gap ~ Geometric(p) on {0, 1, ...}
        let gap = ((-u).ln_1p() / log_q).floor();
        if gap >= (total - next) as f64 {
            return;
        }
        next += gap as u64;
        visit(next);
        next += 1;
        if next >= total {
            return;
        }
    }
}

/// Samples `G(n, p)`: each of the `n(n-1)/2` pairs is an edge independently
/// with probability `p`.
pub fn gen_gnp(n: usize, p: f64, seed: Seed) -> Result<UndirectedGraph> {
    check_probability(p)?;
    check_vertex_count(n)?;
    let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    // Pair index enumerates rows v = 1..n, then columns w = 0..v.
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let mut row: u64 = 1;
    let mut row_start: u64 = 0;
    for_each_selected(total, p, seed, |idx| {
        while idx >= row_start + row {
            row_start += row;
            row += 1;
        }
        let (v, w) = (row as Vertex, (idx - row_start) as Vertex);
        adjacency[v as usize].push(w);
        adjacency[w as usize].push(v);
    });
    Ok(UndirectedGraph::from_raw(adjacency))
}

/// Samples the directed analogue of `G(n, p)` over all `n(n-1)` ordered pairs.
pub fn gen_directed_gnp(n: usize, p: f64, seed: Seed) -> Result<DirectedGraph> {
    check_probability(p)?;
    check_vertex_count(n)?;
    let mut arcs = Vec::new();
    if n >= 2 {
        let width = n as u64 - 1;
        for_each_selected(n as u64 * width, p, seed, |idx| {
            let u = idx / width;
            let t = idx % width;
            let v = if t >= u { t + 1 } else { t };
            arcs.push((u as Vertex, v as Vertex));
        });
    }
    Ok(DirectedGraph::from_arcs(n, arcs))
}

/// Undirected graph read from an edge list, with the original vertex labels.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: UndirectedGraph,
    /// `labels[v]` is the label of vertex `v`, in order of first appearance.
    pub labels: Vec<String>,
}

impl LabeledGraph {
    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v as usize]
    }
}

/// Reads whitespace-separated `u v` pairs. Blank lines and lines starting with
/// `#` are skipped; self-loops are dropped and repeated edges collapsed, but
/// their endpoints still get an index.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LabeledGraph> {
    let mut index: HashMap<String, Vertex> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: &str, line: usize| -> Result<Vertex> {
        if let Some(&v) = index.get(label) {
            return Ok(v);
        }
        let v = Vertex::try_from(labels.len()).map_err(|_| Error::Parse {
            line,
            message: "too many distinct vertices".into(),
        })?;
        index.insert(label.to_owned(), v);
        labels.push(label.to_owned());
        Ok(v)
    };
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected two vertex labels, got {trimmed:?}"),
            });
        };
        let u = intern(a, lineno)?;
        let v = intern(b, lineno)?;
        edges.push((u, v));
    }
    let graph = UndirectedGraph::from_edges(labels.len(), edges);
    Ok(LabeledGraph { graph, labels })
}
