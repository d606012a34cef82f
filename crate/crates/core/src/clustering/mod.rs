//! Low-diameter clustering and the randomized cover pipeline on top of it.

pub mod combine;
pub mod mpx;
pub mod trees;

pub use combine::{combine_with_clusters, inner_k, ClusterReport, CombinedCover, InnerSolver};
pub use mpx::{mpx_partition, shift_cap, MpxPartition};
pub use trees::{build_cluster_trees, shrink_partition, ClusterSet};

use crate::error::{Error, Result};
use crate::graph::{Matching, SubgraphView, VertexCover};
use crate::matching::maximal_matching;
use crate::runtime::{RoundStats, RunConfig};

/// Maximal matching, then a shrunk MPX clustering with trees.
#[derive(Clone, Debug)]
pub struct Clustering {
    pub matching: Matching,
    pub partition: MpxPartition,
    pub clusters: ClusterSet,
    pub lambda: f64,
}

pub fn cluster_view(view: &SubgraphView<'_>, lambda: f64, cfg: &RunConfig) -> Result<(Clustering, RoundStats)> {
    let (matching, mut stats) = maximal_matching(view, &cfg.with_seed(cfg.seed ^ 0x6d61_7463_6869_6e67))?;
    let (partition, s) = mpx_partition(view, lambda, &cfg.with_seed(cfg.seed ^ 0x7368_6966_7473))?;
    stats.then(s);
    let (mut clusters, s) = shrink_partition(view, &partition.origin, cfg)?;
    stats.then(s);
    stats.then(build_cluster_trees(view, &mut clusters, cfg)?);
    Ok((Clustering { matching, partition, clusters, lambda }, stats))
}

#[derive(Clone, Debug)]
pub struct RandomizedCover {
    pub cover: VertexCover,
    pub clustering: Clustering,
    pub combined: CombinedCover,
}

/// Expected `(1+ε)`-approximate cover: `λ = ε/4` for the clustering and
/// `ψ = ε/2` for the per-cluster solver.
pub fn randomized_pipeline(view: &SubgraphView<'_>, eps: f64, solver: InnerSolver, cfg: &RunConfig) -> Result<(RandomizedCover, RoundStats)> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParam(format!("eps = {eps} outside (0, 1]")));
    }
    let (clustering, mut stats) = cluster_view(view, eps / 4.0, cfg)?;
    let (combined, s) = combine_with_clusters(view, &clustering.matching, &clustering.clusters, eps / 2.0, solver, cfg)?;
    stats.then(s);
    Ok((RandomizedCover { cover: combined.cover.clone(), clustering, combined }, stats))
}
