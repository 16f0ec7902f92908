//! Local search for minimum spanning trees on randomly weighted complete graphs.
//!
//! The operator [`local_search::phi`] replaces a connected induced subgraph of
//! the current spanning subgraph by the MST of the corresponding induced
//! subgraph of the weighted complete graph. Chaining such replacements turns
//! any connected start into the MST; the cost of a chain is its heaviest
//! replaced subgraph. This crate builds such chains constructively, computes
//! their optimal cost exactly on tiny instances, and runs the Monte Carlo
//! experiments that show the cost concentrating at the top of the weight
//! distribution's support.

pub mod dist;
pub mod dsu;
pub mod eating;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod local_search;
pub mod mst;
pub mod oracle;
pub mod starpath;
pub mod subgraph;
pub mod tree;
pub mod witness;

pub use dist::Distribution;
pub use error::{Error, Result};
pub use graph::{edge_endpoints, edge_index, EdgeId, WeightedCompleteGraph};
pub use local_search::{phi, run_sequence, OptimizingSequence, SequenceTrace};
pub use mst::mst;
pub use oracle::exact_cost;
pub use starpath::full_pipeline;
pub use subgraph::{make_start_graph, SpanningSubgraph, StartKind};
pub use witness::{find_witness, StructuralWitness, WitnessKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/operator.md")]
    mod operator {}
    #[doc = include_str!("../../../book/src/kruskal.md")]
    mod kruskal {}
    #[doc = include_str!("../../../book/src/eating.md")]
    mod eating {}
    #[doc = include_str!("../../../book/src/structures.md")]
    mod structures {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
