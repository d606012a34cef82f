//! Shrinking a partition into a 3-hop separated clustering and routing trees
//! for the clusters.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Matching, SubgraphView};
use crate::primitives::{bfs_from, exchange, BfsForest};
use crate::runtime::{width_for, RoundStats, RunConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSet {
    /// Origin per node before shrinking (the partition).
    pub origin: Vec<Option<u64>>,
    /// Cluster ID (the origin) per node after shrinking; `None` outside clusters.
    pub cluster: Vec<Option<u64>>,
    /// One tree per cluster, spanning its pre-shrink partition class.
    pub trees: Option<BfsForest>,
}

impl ClusterSet {
    /// Number of clustered nodes.
    pub fn clustered(&self) -> usize {
        self.cluster.iter().flatten().count()
    }

    /// Distinct cluster IDs in increasing order.
    pub fn cluster_ids(&self) -> Vec<u64> {
        let mut ids: Vec<u64> = self.cluster.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Fraction of matching edges without both endpoints in one cluster.
    pub fn outside_fraction(&self, m: &Matching) -> f64 {
        let edges = m.edges();
        if edges.is_empty() {
            return 0.0;
        }
        let outside = edges.iter().filter(|&&(u, v)| self.cluster[u].is_none() || self.cluster[u] != self.cluster[v]).count();
        outside as f64 / edges.len() as f64
    }

    /// A pair of nodes from different clusters at distance at most 2 in the view.
    pub fn separation_violation(&self, view: &SubgraphView<'_>) -> Option<(usize, usize)> {
        let n = self.cluster.len();
        let mut dist = vec![u32::MAX; n];
        for s in view.nodes() {
            let Some(c) = self.cluster[s] else { continue };
            let mut seen = vec![s];
            let mut queue = VecDeque::from([s]);
            dist[s] = 0;
            while let Some(u) = queue.pop_front() {
                if let Some(other) = self.cluster[u] {
                    if other != c {
                        for &w in &seen {
                            dist[w] = u32::MAX;
                        }
                        return Some((s, u));
                    }
                }
                if dist[u] == 2 {
                    continue;
                }
                for w in view.neighbors(u) {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        seen.push(w);
                        queue.push_back(w);
                    }
                }
            }
            for w in seen {
                dist[w] = u32::MAX;
            }
        }
        None
    }

    /// Height of each cluster's tree.
    pub fn tree_heights(&self) -> BTreeMap<u64, u32> {
        let mut out = BTreeMap::new();
        if let Some(f) = &self.trees {
            for v in f.roots() {
                let l = f.links[v].as_ref().expect("root has links");
                if self.cluster_ids().binary_search(&l.root_id).is_ok() {
                    out.insert(l.root_id, l.height);
                }
            }
        }
        out
    }

    pub fn max_tree_height(&self) -> u32 {
        self.tree_heights().values().copied().max().unwrap_or(0)
    }

    /// Largest number of cluster trees sharing one edge.
    pub fn congestion(&self, view: &SubgraphView<'_>) -> usize {
        let Some(f) = &self.trees else { return 0 };
        let g = view.graph();
        let mut load = vec![0usize; g.m()];
        for v in 0..g.n() {
            if let Some(p) = f.links[v].as_ref().and_then(|l| l.parent) {
                load[g.neighbors(v)[p].edge] += 1;
            }
        }
        load.into_iter().max().unwrap_or(0)
    }
}

/// Removes both endpoints of every edge whose endpoints have different
/// origins. Neighbors learn each other's origin in one exchange.
pub fn shrink_partition(view: &SubgraphView<'_>, origin: &[Option<u64>], cfg: &RunConfig) -> Result<(ClusterSet, RoundStats)> {
    let g = view.graph();
    if origin.len() != g.n() || view.nodes().any(|v| origin[v].is_none()) {
        return Err(Error::InvalidParam("every in-view node needs an origin".into()));
    }
    let max_id = g.ids().last().copied().unwrap_or(0).max(cfg.n.unwrap_or(0).saturating_sub(1));
    let values: Vec<u64> = origin.iter().map(|o| o.unwrap_or(0)).collect();
    let (heard, stats) = exchange(view, &values, width_for(max_id), cfg)?;
    let cluster = (0..g.n())
        .map(|v| {
            let own = origin[v]?;
            heard[v].iter().flatten().all(|&o| o == own).then_some(own)
        })
        .collect();
    Ok((ClusterSet { origin: origin.to_vec(), cluster, trees: None }, stats.labeled("shrink")))
}

/// BFS tree from each origin over the edges inside its partition class.
/// Trees are edge-disjoint, so the congestion is 1.
pub fn build_cluster_trees(view: &SubgraphView<'_>, clusters: &mut ClusterSet, cfg: &RunConfig) -> Result<RoundStats> {
    let g = view.graph();
    let inner: Vec<bool> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| view.contains_edge(e) && clusters.origin[u].is_some() && clusters.origin[u] == clusters.origin[v])
        .collect();
    let routes = SubgraphView::new(g, view.node_flags().to_vec(), inner)?;
    let initiators: Vec<bool> = (0..g.n()).map(|v| clusters.origin[v] == Some(g.id(v))).collect();
    let (forest, stats) = bfs_from(&routes, initiators, cfg)?;
    for v in 0..g.n() {
        if let Some(c) = clusters.cluster[v] {
            if forest.root_id(v) != Some(c) {
                return Err(Error::DisconnectedCluster { cluster: c, node: g.id(v) });
            }
        }
    }
    clusters.trees = Some(forest);
    Ok(stats.labeled("cluster-trees"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    fn ids(v: &[u64]) -> Vec<Option<u64>> {
        v.iter().map(|&x| Some(x)).collect()
    }

    #[test]
    fn one_cluster_keeps_everything() {
        let g = generate(&GraphFamily::Path { n: 5 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(5, 0);
        let (mut c, _) = shrink_partition(&view, &ids(&[2; 5]), &cfg).unwrap();
        assert_eq!(c.clustered(), 5);
        build_cluster_trees(&view, &mut c, &cfg).unwrap();
        assert_eq!(c.tree_heights(), BTreeMap::from([(2, 2)]));
        assert_eq!(c.congestion(&view), 1);
        assert!(c.separation_violation(&view).is_none());
    }

    #[test]
    fn crossing_edge_loses_endpoints() {
        let g = generate(&GraphFamily::Path { n: 6 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(6, 0);
        let (mut c, _) = shrink_partition(&view, &ids(&[0, 0, 0, 5, 5, 5]), &cfg).unwrap();
        assert_eq!(c.cluster, vec![Some(0), Some(0), None, None, Some(5), Some(5)]);
        assert!(c.separation_violation(&view).is_none());
        build_cluster_trees(&view, &mut c, &cfg).unwrap();
        assert_eq!(c.tree_heights(), BTreeMap::from([(0, 2), (5, 2)]));
        assert_eq!(c.congestion(&view), 1);
    }

    #[test]
    fn disjoint_edges_stay_dense() {
        let g = generate(&GraphFamily::DisjointEdges { m: 3 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let (c, _) = shrink_partition(&view, &ids(&[0, 0, 2, 2, 4, 4]), &RunConfig::for_n(6, 0)).unwrap();
        let m = Matching::from_edges(&view, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(c.clustered(), 6);
        assert_eq!(c.outside_fraction(&m), 0.0);
    }

    #[test]
    fn singleton_tree() {
        let g = generate(&GraphFamily::Path { n: 3 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(3, 0);
        let (mut c, _) = shrink_partition(&view, &ids(&[0, 1, 2]), &cfg).unwrap();
        assert_eq!(c.clustered(), 0);
        build_cluster_trees(&view, &mut c, &cfg).unwrap();
        assert!(c.tree_heights().is_empty());
        let g = crate::graph::BipartiteGraph::from_edges(1, &[]).unwrap();
        let view = SubgraphView::full(&g);
        let (mut c, _) = shrink_partition(&view, &ids(&[0]), &RunConfig::for_n(1, 0)).unwrap();
        build_cluster_trees(&view, &mut c, &RunConfig::for_n(1, 0)).unwrap();
        assert_eq!(c.tree_heights(), BTreeMap::from([(0, 0)]));
    }

    #[test]
    fn detects_close_clusters() {
        let g = generate(&GraphFamily::Path { n: 3 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let c = ClusterSet { origin: ids(&[0, 1, 2]), cluster: vec![Some(0), None, Some(2)], trees: None };
        assert_eq!(c.separation_violation(&view), Some((0, 2)));
    }
}
