//! Induced subgraph isomorphism and maximum common induced subgraph for pairs
//! of independent binomial random graphs.

pub mod bits;
pub mod error;
pub mod graph;
pub mod montecarlo;
pub mod pseudorandom;
pub mod solver;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{edge_count, gen_gnm, gen_gnp, induced_subgraph, Graph, ProbPair, Seed};
