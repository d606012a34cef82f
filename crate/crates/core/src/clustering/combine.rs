//! Turning per-cluster covers into a cover of the whole view.
//!
//! Matched nodes outside clusters form `X`. Every cluster is extended by
//! the unclustered nodes adjacent to it; the inner solver covers each
//! extended cluster on a local graph made of the cluster's partition class,
//! its extension, and the edges among them. `X ∪ ⋃ C_i` covers the view.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching, SubgraphView, VertexCover};
use crate::konig::koenig_approx_cover;
use crate::matching::{eliminate_short_aug_paths, Priorities};
use crate::primitives::exchange;
use crate::repair::det_cover_low_diameter;
use crate::runtime::{width_for, RoundStats, RunConfig};

use super::ClusterSet;

/// Solver for one extended cluster with approximation target `1 + ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerSolver {
    /// Eliminate augmenting paths up to `2k-1` with `k = ceil(2/ψ)` starting
    /// from the given matching, then take the layered cover.
    Eliminate,
    /// The deterministic repair pipeline with `ε = ψ`.
    Deterministic,
}

#[derive(Clone, Debug)]
pub struct ClusterReport {
    pub cluster: u64,
    pub nodes: usize,
    pub edges: usize,
    pub cover: usize,
    pub rounds: u64,
}

#[derive(Clone, Debug)]
pub struct CombinedCover {
    pub cover: VertexCover,
    pub x: Vec<usize>,
    pub per_cluster: Vec<ClusterReport>,
    pub congestion: u64,
}

/// `k = ceil(2/ψ)`.
pub fn inner_k(psi: f64) -> Result<u32> {
    if !(psi > 0.0 && psi <= 1.0) {
        return Err(Error::InvalidParam(format!("psi = {psi} outside (0, 1]")));
    }
    Ok((2.0 / psi).ceil() as u32)
}

struct Extended {
    /// Nodes of the extended cluster `S'_i`.
    members: Vec<usize>,
    /// View edges of `G'_i`.
    edges: Vec<usize>,
    /// Edges inside the partition class, used for routing.
    routes: Vec<usize>,
    class: Vec<usize>,
}

fn run_inner(
    g: &BipartiteGraph,
    m: &Matching,
    ext: &Extended,
    psi: f64,
    solver: InnerSolver,
    cfg: &RunConfig,
) -> Result<(Vec<usize>, RoundStats)> {
    let mut nodes = ext.class.clone();
    nodes.extend(&ext.members);
    let mut edges = ext.routes.clone();
    edges.extend(&ext.edges);
    edges.sort_unstable();
    edges.dedup();
    let (local, to_parent) = g.subgraph(&nodes, &edges)?;
    let mut to_local = BTreeMap::new();
    for (i, &v) in to_parent.iter().enumerate() {
        to_local.insert(v, i);
    }
    let mut node_in = vec![false; local.n()];
    for v in &ext.members {
        node_in[to_local[v]] = true;
    }
    let mut edge_in = vec![false; local.m()];
    for &e in &ext.edges {
        let (u, v) = g.edge(e);
        let le = local.find_edge(to_local[&u], to_local[&v]).expect("edge kept in the local graph");
        edge_in[le] = true;
    }
    let view = SubgraphView::new(&local, node_in, edge_in)?;
    let local_cfg = cfg.with_n(cfg.n.unwrap_or(0).max(g.n() as u64));
    let cover = match solver {
        InnerSolver::Eliminate => {
            let k = inner_k(psi)?;
            let pairs: Vec<(usize, usize)> = m
                .edges()
                .into_iter()
                .filter_map(|(u, v)| Some((*to_local.get(&u)?, *to_local.get(&v)?)))
                .filter(|&(u, v)| view.has_edge(u, v))
                .collect();
            let m0 = Matching::from_edges(&view, &pairs)?;
            let (m1, mut stats) = eliminate_short_aug_paths(&view, &m0, k, &local_cfg, Priorities::Random, None)?;
            let (res, s) = koenig_approx_cover(&view, &m1, k, &local_cfg)?;
            stats.then(s);
            (res.cover, stats)
        }
        InnerSolver::Deterministic => {
            let (res, stats) = det_cover_low_diameter(&view, psi, &local_cfg)?;
            (res.cover, stats)
        }
    };
    let (cover, stats) = cover;
    Ok((cover.nodes().map(|v| to_parent[v]).collect(), stats))
}

/// Cover of the view from a maximal matching and a 3-hop separated
/// clustering with trees. Clusters run side by side; rounds are the
/// congestion times the slowest cluster.
pub fn combine_with_clusters(
    view: &SubgraphView<'_>,
    m: &Matching,
    clusters: &ClusterSet,
    psi: f64,
    solver: InnerSolver,
    cfg: &RunConfig,
) -> Result<(CombinedCover, RoundStats)> {
    inner_k(psi)?;
    m.validate(view)?;
    let g = view.graph();
    let n = g.n();
    let max_id = g.ids().last().copied().unwrap_or(0).max(cfg.n.unwrap_or(0).saturating_sub(1));
    // Unclustered nodes learn which clusters they border; the value is `id + 1`, with 0 for none.
    let values: Vec<u64> = clusters.cluster.iter().map(|c| c.map_or(0, |c| c + 1)).collect();
    let (heard, mut stats) = exchange(view, &values, width_for(max_id + 1), cfg)?;
    stats = stats.labeled("cluster-extension");

    let mut ext: BTreeMap<u64, Extended> = clusters
        .cluster_ids()
        .into_iter()
        .map(|c| (c, Extended { members: Vec::new(), edges: Vec::new(), routes: Vec::new(), class: Vec::new() }))
        .collect();
    let mut attached: Vec<Option<u64>> = vec![None; n];
    for v in view.nodes() {
        if let Some(c) = clusters.cluster[v] {
            ext.get_mut(&c).expect("known cluster").members.push(v);
            continue;
        }
        for c in heard[v].iter().flatten().filter(|&&x| x > 0).map(|&x| x - 1) {
            match attached[v] {
                None => {
                    attached[v] = Some(c);
                    ext.get_mut(&c).expect("known cluster").members.push(v);
                }
                Some(first) if first != c => {
                    return Err(Error::ClusterOverlap { first: first.min(c), second: first.max(c), node: g.id(v) });
                }
                _ => {}
            }
        }
    }
    for v in 0..n {
        if let Some(o) = clusters.origin[v] {
            if let Some(e) = ext.get_mut(&o) {
                e.class.push(v);
            }
        }
    }
    for e in view.edge_ids() {
        let (u, v) = g.edge(e);
        match (clusters.cluster[u], clusters.cluster[v]) {
            (Some(a), Some(b)) if a == b => ext.get_mut(&a).expect("known cluster").edges.push(e),
            (Some(a), None) | (None, Some(a)) => ext.get_mut(&a).expect("known cluster").edges.push(e),
            (Some(_), Some(_)) => return Err(Error::Internal("edge between two clusters".into())),
            (None, None) => {}
        }
        if clusters.origin[u].is_some() && clusters.origin[u] == clusters.origin[v] {
            if let Some(x) = ext.get_mut(&clusters.origin[u].expect("checked")) {
                x.routes.push(e);
            }
        }
    }

    let congestion = clusters.congestion(view).max(1) as u64;
    let mut members = vec![false; n];
    let x: Vec<usize> = view.nodes().filter(|&v| clusters.cluster[v].is_none() && m.is_matched(v)).collect();
    for &v in &x {
        members[v] = true;
    }
    let mut per_cluster = Vec::new();
    let mut parts = Vec::new();
    for (&c, e) in &ext {
        if e.edges.is_empty() {
            continue;
        }
        let seed = cfg.seed ^ (c + 1).wrapping_mul(0xd1b5_4a32_d192_ed03);
        let (cover, s) = run_inner(g, m, e, psi, solver, &cfg.with_seed(seed))?;
        for &v in &cover {
            members[v] = true;
        }
        per_cluster.push(ClusterReport { cluster: c, nodes: e.members.len(), edges: e.edges.len(), cover: cover.len(), rounds: s.rounds });
        parts.push(s);
    }
    stats.then(RoundStats::parallel(congestion, parts, "clusters"));
    let cover = VertexCover::from_members(members);
    if !cover.is_valid_for(view) {
        return Err(Error::Internal("combined cover misses an edge".into()));
    }
    Ok((CombinedCover { cover, x, per_cluster, congestion }, stats))
}
