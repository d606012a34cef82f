//! Simulated CONGEST algorithms for approximate and exact minimum vertex cover
//! in bipartite graphs, with sequential oracles for checking every result.

pub mod clustering;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod konig;
pub mod matching;
pub mod oracle;
pub mod primitives;
pub mod repair;
pub mod runtime;

pub use error::{Error, Result};
