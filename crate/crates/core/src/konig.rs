//! Vertex covers from matchings via alternating layers.
//!
//! With a matching that has no augmenting path of length at most `2k-1`, an
//! alternating BFS to depth `2k` splits the nodes into `A'_0` (free A-nodes),
//! `B'_i`/`A'_i` (first reached at levels `2i-1`/`2i`) and the unreached
//! `A'_∞`/`B'_∞`. Every `C'_s = A'_∞ ∪ A'_s..A'_k ∪ B'_1..B'_s` is a cover of
//! size `|M| + |B'_s|`; picking the smallest `B'_s` gives a `(1+1/k)` bound.

use crate::error::{Error, Result};
use crate::graph::{Matching, Side, SubgraphView, VertexCover};
use crate::matching::{eliminate_short_aug_paths, Priorities};
use crate::primitives::{
    alternating_bfs_per_node, alternating_bfs_with_sides, elect_leader_and_bfs, pipelined_aggregate, AggOp, BfsForest,
};
use crate::runtime::{width_for, RoundStats, RunConfig};

/// Layer class per node: `Some(i)` for `A'_i`/`B'_i`, `None` for the
/// `∞` classes. Nodes outside the view carry `None` and are never covered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerPartition {
    pub k: u32,
    pub side: Vec<Side>,
    pub in_view: Vec<bool>,
    pub class: Vec<Option<u32>>,
}

impl LayerPartition {
    pub fn a_class(&self, v: usize) -> Option<u32> {
        debug_assert_eq!(self.side[v], Side::A);
        self.class[v]
    }

    pub fn b_class(&self, v: usize) -> Option<u32> {
        debug_assert_eq!(self.side[v], Side::B);
        self.class[v]
    }

    /// `|B'_1|, …, |B'_k|` over the nodes selected by `filter`.
    pub fn b_sizes(&self, filter: impl Fn(usize) -> bool) -> Vec<u64> {
        let mut sizes = vec![0u64; self.k as usize];
        for v in 0..self.class.len() {
            if self.in_view[v] && self.side[v] == Side::B && filter(v) {
                if let Some(i) = self.class[v] {
                    sizes[i as usize - 1] += 1;
                }
            }
        }
        sizes
    }

    fn covered(&self, v: usize, s: u32) -> bool {
        self.in_view[v]
            && match (self.side[v], self.class[v]) {
                (Side::A, None) => true,
                (Side::A, Some(i)) => i >= s,
                (Side::B, Some(i)) => i <= s,
                (Side::B, None) => false,
            }
    }
}

fn classify(level: Option<u32>, side: Side, k: u32) -> Option<u32> {
    match (side, level) {
        (Side::A, Some(l)) if l <= 2 * k => Some(l / 2),
        (Side::B, Some(l)) if l < 2 * k => Some(l.div_ceil(2)),
        _ => None,
    }
}

/// Partition of the view into alternating layers, using the given sides.
/// Fails with `ShortAugPathWitness` if a free B-node is reached at an odd
/// level of at most `2k-1`.
pub fn compute_partition_with_sides(
    view: &SubgraphView<'_>,
    m: &Matching,
    k: u32,
    sides: &[Side],
    cfg: &RunConfig,
) -> Result<(LayerPartition, RoundStats)> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be at least 1".into()));
    }
    let g = view.graph();
    let (layers, stats) = alternating_bfs_with_sides(view, m, sides, 2 * k, cfg)?;
    if let Some(&(v, level)) = layers
        .free_b_witnesses(view, sides, m)
        .iter()
        .filter(|(_, l)| *l < 2 * k)
        .min_by_key(|&&(v, l)| (l, v))
    {
        return Err(Error::ShortAugPathWitness { node: g.id(v), level });
    }
    let class = (0..g.n()).map(|v| classify(layers.level[v], sides[v], k)).collect();
    let partition = LayerPartition { k, side: sides.to_vec(), in_view: view.node_flags().to_vec(), class };
    Ok((partition, stats.labeled("partition")))
}

pub fn compute_partition(view: &SubgraphView<'_>, m: &Matching, k: u32, cfg: &RunConfig) -> Result<(LayerPartition, RoundStats)> {
    compute_partition_with_sides(view, m, k, view.graph().sides(), cfg)
}

/// `C'_s` for `1 ≤ s ≤ k`.
pub fn candidate_cover(partition: &LayerPartition, s: u32) -> Result<VertexCover> {
    if s == 0 || s > partition.k {
        return Err(Error::InvalidParam(format!("s = {s} outside 1..={}", partition.k)));
    }
    let n = partition.class.len();
    Ok(VertexCover::from_nodes(n, (0..n).filter(|&v| partition.covered(v, s))))
}

#[derive(Clone, Debug)]
pub struct ApproxCover {
    pub cover: VertexCover,
    pub partition: LayerPartition,
    /// Chosen index per node (shared by a component of the base graph).
    pub i_star: Vec<Option<u32>>,
    /// `Σ |B'_{i*}|` over components.
    pub b_star_total: u64,
    pub forest: BfsForest,
}

/// `(1+1/k)`-approximate cover of the view. A BFS tree of the base graph
/// supplies the bipartition and carries the aggregation of `|B'_1..B'_k|`;
/// every component then picks its smallest class (lowest index on ties).
pub fn koenig_approx_cover(view: &SubgraphView<'_>, m: &Matching, k: u32, cfg: &RunConfig) -> Result<(ApproxCover, RoundStats)> {
    let g = view.graph();
    let n = g.n();
    let full = SubgraphView::full(g);
    let (forest, mut stats) = elect_leader_and_bfs(&full, cfg)?;
    let sides: Vec<Side> = (0..n).map(|v| forest.parity_side(v).expect("every node is in a tree")).collect();
    let (partition, s) = compute_partition_with_sides(view, m, k, &sides, cfg)?;
    stats.then(s);

    let values: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            let mut row = vec![0u64; k as usize];
            if view.contains_node(v) && sides[v] == Side::B {
                if let Some(i) = partition.class[v] {
                    row[i as usize - 1] = 1;
                }
            }
            row
        })
        .collect();
    let (sums, s) = pipelined_aggregate(&full, &forest, &values, AggOp::Sum, width_for(n as u64), cfg)?;
    stats.then(s.labeled("class-sizes"));

    let mut i_star = vec![None; n];
    let mut members = vec![false; n];
    let mut b_star_total = 0;
    for v in 0..n {
        let sizes = sums[v].as_ref().ok_or_else(|| Error::Internal("aggregate did not reach every node".into()))?;
        let (best, _) = sizes
            .iter()
            .enumerate()
            .min_by_key(|&(i, &size)| (size, i))
            .ok_or_else(|| Error::Internal("empty class sizes".into()))?;
        let s = best as u32 + 1;
        i_star[v] = Some(s);
        members[v] = partition.covered(v, s);
        if forest.links[v].as_ref().is_some_and(|l| l.parent.is_none()) {
            b_star_total += sizes[best];
        }
    }
    let cover = VertexCover::from_members(members);
    if !cover.is_valid_for(view) {
        return Err(Error::Internal("layered cover misses an edge".into()));
    }
    Ok((ApproxCover { cover, partition, i_star, b_star_total, forest }, stats))
}

/// Minimum vertex cover: grow a maximum matching by elimination with
/// doubling `k` until an alternating search from the free A-nodes finds no
/// free B-node, then take `(U \ L) ∪ (V ∩ L)`.
pub fn koenig_exact_cover(view: &SubgraphView<'_>, cfg: &RunConfig) -> Result<(VertexCover, Matching, RoundStats)> {
    let g = view.graph();
    let n = g.n();
    let full = SubgraphView::full(g);
    let (forest, mut stats) = elect_leader_and_bfs(&full, cfg)?;
    let sides: Vec<Side> = (0..n).map(|v| forest.parity_side(v).expect("every node is in a tree")).collect();
    let count_width = width_for(n as u64);

    let mut m = Matching::empty(n);
    let mut k = 1u32;
    loop {
        let (next, s) = eliminate_short_aug_paths(view, &m, k, cfg, Priorities::Ids, None)?;
        m = next;
        stats.then(s);

        // Each component learns |M| and searches alternating paths up to 2|M|+1.
        let matched_a: Vec<Vec<u64>> =
            (0..n).map(|v| vec![u64::from(sides[v] == Side::A && m.is_matched(v))]).collect();
        let (sizes, s) = pipelined_aggregate(&full, &forest, &matched_a, AggOp::Sum, count_width, cfg)?;
        stats.then(s.labeled("matching-size"));
        let limits: Vec<u32> = sizes.iter().map(|s| 2 * s.as_ref().map_or(0, |x| x[0]) as u32 + 1).collect();
        let (layers, s) = alternating_bfs_per_node(view, &m, &sides, &limits, cfg)?;
        stats.then(s);
        let open: Vec<Vec<u64>> = (0..n)
            .map(|v| {
                let free_b = view.contains_node(v) && sides[v] == Side::B && !m.is_matched(v);
                vec![u64::from(free_b && layers.level[v].is_some())]
            })
            .collect();
        let (found, s) = pipelined_aggregate(&full, &forest, &open, AggOp::Max, 1, cfg)?;
        stats.then(s.labeled("augmentable"));
        if found.iter().all(|f| f.as_ref().is_some_and(|x| x[0] == 0)) {
            let cover = VertexCover::from_nodes(
                n,
                view.nodes().filter(|&v| match sides[v] {
                    Side::A => layers.level[v].is_none(),
                    Side::B => layers.level[v].is_some(),
                }),
            );
            if cover.len() != m.len() || !cover.is_valid_for(view) {
                return Err(Error::Internal("König cover does not match the matching".into()));
            }
            return Ok((cover, m, stats));
        }
        if 2 * k as u64 > n as u64 + 1 {
            return Err(Error::Internal("augmenting path survived elimination beyond n".into()));
        }
        k *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, BipartiteGraph, GraphFamily};
    use crate::oracle;

    fn p4() -> BipartiteGraph {
        generate(&GraphFamily::Path { n: 4 }, 0).unwrap()
    }

    #[test]
    fn partition_p4_k1() {
        let g = p4();
        let view = SubgraphView::full(&g);
        let m = Matching::from_edges(&view, &[(1, 2)]).unwrap();
        let (p, _) = compute_partition(&view, &m, 1, &RunConfig::for_n(4, 0)).unwrap();
        assert_eq!(p.class, vec![Some(0), Some(1), Some(1), None]);
        assert_eq!(p.a_class(0), Some(0));
        assert_eq!(p.b_class(3), None);
        let c = candidate_cover(&p, 1).unwrap();
        assert_eq!(c.nodes().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn partition_with_maximum_matching() {
        let g = p4();
        let view = SubgraphView::full(&g);
        let m = oracle::max_matching(&view);
        let (p, _) = compute_partition(&view, &m, 2, &RunConfig::for_n(4, 0)).unwrap();
        assert!(p.class.iter().all(Option::is_none));
    }

    #[test]
    fn witness_detected() {
        let g = p4();
        let view = SubgraphView::full(&g);
        let m = Matching::from_edges(&view, &[(1, 2)]).unwrap();
        let err = compute_partition(&view, &m, 2, &RunConfig::for_n(4, 0)).unwrap_err();
        assert_eq!(err, Error::ShortAugPathWitness { node: 3, level: 3 });
    }

    #[test]
    fn candidate_cover_examples() {
        let e = generate(&GraphFamily::DisjointEdges { m: 1 }, 0).unwrap();
        let view = SubgraphView::full(&e);
        let m = Matching::from_edges(&view, &[(0, 1)]).unwrap();
        let (p, _) = compute_partition(&view, &m, 1, &RunConfig::for_n(2, 0)).unwrap();
        assert_eq!(candidate_cover(&p, 1).unwrap().nodes().collect::<Vec<_>>(), vec![0]);

        let k23 = generate(&GraphFamily::Complete { a: 2, b: 3 }, 0).unwrap();
        let view = SubgraphView::full(&k23);
        let m = oracle::max_matching(&view);
        let (p, _) = compute_partition(&view, &m, 1, &RunConfig::for_n(5, 0)).unwrap();
        assert_eq!(candidate_cover(&p, 1).unwrap().nodes().collect::<Vec<_>>(), vec![0, 1]);
        assert!(candidate_cover(&p, 2).is_err());
    }

    #[test]
    fn approx_cover_p4() {
        let g = p4();
        let view = SubgraphView::full(&g);
        let m = Matching::from_edges(&view, &[(1, 2)]).unwrap();
        let (res, _) = koenig_approx_cover(&view, &m, 1, &RunConfig::for_n(4, 0)).unwrap();
        assert_eq!(res.cover.len(), 2);
        assert_eq!(res.cover.len() as u64, m.len() as u64 + res.b_star_total);
    }

    #[test]
    fn approx_cover_edgeless() {
        let g = BipartiteGraph::from_edges(3, &[]).unwrap();
        let view = SubgraphView::full(&g);
        let (res, _) = koenig_approx_cover(&view, &Matching::empty(3), 2, &RunConfig::for_n(3, 0)).unwrap();
        assert!(res.cover.is_empty());
    }

    #[test]
    fn exact_cover_examples() {
        for (family, want) in [
            (GraphFamily::Path { n: 4 }, 2),
            (GraphFamily::Complete { a: 2, b: 3 }, 2),
            (GraphFamily::DisjointEdges { m: 4 }, 4),
            (GraphFamily::EvenCycle { n: 10 }, 5),
        ] {
            let g = generate(&family, 0).unwrap();
            let view = SubgraphView::full(&g);
            let (c, m, _) = koenig_exact_cover(&view, &RunConfig::for_n(g.n(), 0)).unwrap();
            assert_eq!((c.len(), m.len()), (want, want), "{family}");
            assert!(c.is_valid_for(&view));
        }
    }
}
