//! Distributed building blocks shared by the algorithms.

pub mod aggregate;
pub mod alternating;
pub mod bfs;
pub mod exchange;

pub use aggregate::{pipelined_aggregate, AggOp};
pub use alternating::{alternating_bfs, alternating_bfs_per_node, alternating_bfs_with_sides, AlternatingLayering};
pub use bfs::{bfs_from, elect_leader_and_bfs, BfsForest, TreeLinks};
pub use exchange::exchange;
