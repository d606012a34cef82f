//! Repairing an approximate matching that may still have short augmenting
//! paths, and the deterministic cover pipeline built on it.

pub mod count;
pub mod cover;

pub use count::{count_paths, count_paths_with_degree, PathCounts};
pub use cover::{cover_short_paths, cover_short_paths_with_degree, repair_alpha, repair_matching, PathCover, RepairResult, StageReport};

use crate::error::{Error, Result};
use crate::graph::{SubgraphView, VertexCover};
use crate::konig::koenig_approx_cover;
use crate::matching::Provider;
use crate::runtime::{RoundStats, RunConfig};

#[derive(Clone, Debug)]
pub struct DetCover {
    pub cover: VertexCover,
    pub k: u32,
    pub alpha: f64,
    pub delta: f64,
    pub matching_size: usize,
    pub s1_size: usize,
    pub s2_size: usize,
}

/// Parameters `(k', α, δ)` for a target `ε`.
pub fn det_parameters(eps: f64, max_degree: usize) -> Result<(u32, f64, f64)> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParam(format!("eps = {eps} outside (0, 1]")));
    }
    let k = (2.0 / eps).ceil() as u32;
    let alpha = repair_alpha(k, max_degree);
    Ok((k, alpha, eps / (2.0 * alpha)))
}

/// `(1+ε)`-approximate cover: a deterministic `(1-δ)`-approximate matching,
/// repaired by removing `S1`, then the layered cover `S2` of the rest.
pub fn det_cover_low_diameter(view: &SubgraphView<'_>, eps: f64, cfg: &RunConfig) -> Result<(DetCover, RoundStats)> {
    let (k, alpha, delta) = det_parameters(eps, view.max_degree())?;
    let (m, mut stats) = Provider::DetApprox { delta }.provide(view, cfg)?;
    let (repair, mbar, s) = repair_matching(view, &m, k, delta, cfg)?;
    stats.then(s);
    let residual = repair.residual(view);
    let (approx, s) = koenig_approx_cover(&residual, &mbar, k, cfg)?;
    stats.then(s);
    let s1 = VertexCover::from_members(repair.s1.clone());
    let mut cover = approx.cover.clone();
    cover.union_with(&s1);
    if !cover.is_valid_for(view) {
        return Err(Error::Internal("S1 ∪ S2 misses an edge".into()));
    }
    let out = DetCover { cover, k, alpha, delta, matching_size: m.len(), s1_size: s1.len(), s2_size: approx.cover.len() };
    Ok((out, stats))
}
