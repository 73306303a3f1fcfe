//! Clique percolation on random graphs.
//!
//! Generates `G(n, p)` and its directed analogue, enumerates k-cliques and
//! oriented clique copies, and computes the components of the clique-overlap
//! graph under three adjacency rules. The [`theory`] module evaluates the
//! branching-process predictions for thresholds and giant-component sizes,
//! and [`experiment`] runs seeded Monte Carlo sweeps comparing the two.
//!
//! Theory routines are generic over the [`Scalar`] type; [`Report`] and the
//! other aliases below fix it to `f64`.

pub mod cliques;
pub mod components;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod output;
pub mod scalar;
pub mod seed;
pub mod theory;

pub use cliques::{
    count_k_cliques, enumerate_k_cliques, enumerate_oriented_copies, enumerate_subgraph_copies,
    for_each_k_clique, Clique, Motif, MotifCopy, OrientationSpec, OrientedCopy, VertexSet,
};
pub use components::{
    components_by_cross_edges, components_by_overlap, components_by_shared_vertices,
    components_oriented, explore_component, ComponentSummary, Exploration, UnionFind,
};
pub use error::{Error, Result};
pub use graph::{
    gen_directed_gnp, gen_gnp, load_edge_list, DirectedGraph, LabeledGraph, UndirectedGraph,
    Vertex,
};
pub use scalar::Scalar;
pub use seed::{Seed, RNG_ALGORITHM};

pub type Report = theory::ThresholdReport<f64>;
pub type Report32 = theory::ThresholdReport<f32>;
pub type TypeModel = theory::MultiTypeModel<f64>;
pub type TypeModel32 = theory::MultiTypeModel<f32>;
pub type MatrixF64 = theory::Matrix<f64>;
pub type MatrixF32 = theory::Matrix<f32>;
pub type Params = theory::BranchingParams<f64>;
pub type Params32 = theory::BranchingParams<f32>;
pub type Heuristic = theory::HeuristicThreshold<f64>;
