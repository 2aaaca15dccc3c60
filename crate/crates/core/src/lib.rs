//! Constructive toolkit for squared Hamiltonian cycles in dense 3-uniform
//! hypergraphs.
//!
//! The crate follows the absorption method end to end: a reservoir of spare
//! vertices, an absorbing path built from `v`-absorbers, a near-spanning cover
//! by squared paths, connections routed through the reservoir, and a final
//! absorption of the leftover vertices. Every object the searches produce is
//! checked by the predicates in [`certify`], and small instances can be
//! settled exactly by the backtracking oracles in [`oracle`].

pub mod absorber;
pub mod auxgraphs;
pub mod bitset;
pub mod certify;
pub mod config;
pub mod connector;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod probe;
pub mod tiling;

/// Vertices are dense ids `0..n`.
pub type Vertex = usize;
pub type Triple = [Vertex; 3];

pub use bitset::VertexSet;
pub use certify::VertexSeq;
pub use config::Config;
pub use error::{Error, Result};
pub use graph::AuxGraph;
pub use hypergraph::Hypergraph3;
pub use absorber::AbsorberFamily;
pub use connector::Reservoir;
pub use oracle::Verdict;
pub use pipeline::{ConstructionReport, Outcome, Stage};
pub use probe::{ProbeMode, ProbeReport};
pub use tiling::{GoodPairOracle, Tiling};
