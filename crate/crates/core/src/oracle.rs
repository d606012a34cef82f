//! Sequential reference computations. None of these share code with the
//! simulated algorithms they are used to check.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Matching, Side, SubgraphView, VertexCover};

pub const DEFAULT_PATH_CAP: u64 = 10_000_000;

/// Maximum matching of the view by Hopcroft–Karp phases (A-side on the left).
pub fn max_matching(view: &SubgraphView<'_>) -> Matching {
    let g = view.graph();
    let n = g.n();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    let left: Vec<usize> = view.nodes().filter(|&v| g.side(v) == Side::A).collect();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| view.neighbors(v).collect()).collect();
    let mut dist = vec![u32::MAX; n];
    loop {
        let mut queue = VecDeque::new();
        for &u in &left {
            if mate[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &b in &adj[u] {
                match mate[b] {
                    None => found = true,
                    Some(a) if dist[a] == u32::MAX => {
                        dist[a] = dist[u] + 1;
                        queue.push_back(a);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; n];
        for &u in &left {
            if mate[u].is_none() {
                augment_dfs(u, &adj, &mut mate, &mut dist, &mut next);
            }
        }
    }
    Matching::from_partners(view, mate).expect("Hopcroft-Karp keeps a valid matching")
}

fn augment_dfs(
    u: usize,
    adj: &[Vec<usize>],
    mate: &mut [Option<usize>],
    dist: &mut [u32],
    next: &mut [usize],
) -> bool {
    while next[u] < adj[u].len() {
        let b = adj[u][next[u]];
        next[u] += 1;
        let ok = match mate[b] {
            None => true,
            Some(a) => dist[a] == dist[u] + 1 && augment_dfs(a, adj, mate, dist, next),
        };
        if ok {
            mate[u] = Some(b);
            mate[b] = Some(u);
            return true;
        }
    }
    dist[u] = u32::MAX;
    false
}

/// Shortest alternating distance from the free in-view A-nodes: unmatched
/// edges are followed A→B, matching edges B→A.
pub fn alternating_distances(view: &SubgraphView<'_>, m: &Matching) -> Vec<Option<u32>> {
    let g = view.graph();
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    for v in view.nodes() {
        if g.side(v) == Side::A && !m.is_matched(v) {
            dist[v] = Some(0);
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued");
        let next: Vec<usize> = match g.side(u) {
            Side::A => view.neighbors(u).filter(|&b| m.partner(u) != Some(b)).collect(),
            Side::B => m.partner(u).filter(|&a| view.has_edge(u, a)).into_iter().collect(),
        };
        for w in next {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Length of a shortest augmenting path, `None` if the matching is maximum.
pub fn shortest_aug_path_len(view: &SubgraphView<'_>, m: &Matching) -> Option<u32> {
    let g = view.graph();
    let dist = alternating_distances(view, m);
    view.nodes()
        .filter(|&v| g.side(v) == Side::B && !m.is_matched(v))
        .filter_map(|v| dist[v])
        .min()
}

/// Minimum vertex cover `(A \ L) ∪ (B ∩ L)` where `L` is the set of nodes
/// reachable by alternating paths from free A-nodes under a maximum matching.
pub fn min_vertex_cover(view: &SubgraphView<'_>) -> VertexCover {
    let g = view.graph();
    let m = max_matching(view);
    let reach = alternating_distances(view, &m);
    VertexCover::from_nodes(
        g.n(),
        view.nodes().filter(|&v| match g.side(v) {
            Side::A => reach[v].is_none(),
            Side::B => reach[v].is_some(),
        }),
    )
}

/// Number of length-`d` augmenting paths through each node and each matching edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCensus {
    pub total: u64,
    pub node: Vec<u64>,
    /// Keyed by `(u, v)` with `u < v`.
    pub matching_edge: BTreeMap<(usize, usize), u64>,
}

/// Counts augmenting paths of length exactly `d` by plain depth-first search
/// over simple alternating paths. Fails if a shorter augmenting path exists or
/// if more than `cap` partial paths are explored.
pub fn enumerate_aug_paths(view: &SubgraphView<'_>, m: &Matching, d: u32, cap: u64) -> Result<PathCensus> {
    if d.is_multiple_of(2) {
        return Err(Error::InvalidParam(format!("augmenting path length {d} must be odd")));
    }
    if let Some(found) = shortest_aug_path_len(view, m) {
        if found < d {
            return Err(Error::ShorterPathExists { found, requested: d });
        }
    }
    let g = view.graph();
    let mut census = PathCensus {
        total: 0,
        node: vec![0; g.n()],
        matching_edge: m
            .edges()
            .into_iter()
            .filter(|&(u, v)| view.has_edge(u, v))
            .map(|e| (e, 0))
            .collect(),
    };
    let mut walker = Walker { view, m, d: d as usize, cap, explored: 0, path: Vec::new(), on_path: vec![false; g.n()] };
    for s in view.nodes() {
        if g.side(s) == Side::A && !m.is_matched(s) {
            walker.path.push(s);
            walker.on_path[s] = true;
            walker.extend(&mut census)?;
            walker.on_path[s] = false;
            walker.path.pop();
        }
    }
    Ok(census)
}

struct Walker<'a, 'g> {
    view: &'a SubgraphView<'g>,
    m: &'a Matching,
    d: usize,
    cap: u64,
    explored: u64,
    path: Vec<usize>,
    on_path: Vec<bool>,
}

impl Walker<'_, '_> {
    fn extend(&mut self, census: &mut PathCensus) -> Result<()> {
        self.explored += 1;
        if self.explored > self.cap {
            return Err(Error::PathCapExceeded { cap: self.cap });
        }
        let u = *self.path.last().expect("non-empty");
        let len = self.path.len() - 1;
        let candidates: Vec<usize> = self.view.neighbors(u).filter(|&b| self.m.partner(u) != Some(b)).collect();
        for b in candidates {
            if self.on_path[b] {
                continue;
            }
            if len + 1 == self.d {
                if !self.m.is_matched(b) {
                    self.path.push(b);
                    self.record(census);
                    self.path.pop();
                }
                continue;
            }
            let Some(a) = self.m.partner(b) else { continue };
            if self.on_path[a] || !self.view.has_edge(b, a) {
                continue;
            }
            self.path.extend([b, a]);
            self.on_path[b] = true;
            self.on_path[a] = true;
            self.extend(census)?;
            self.on_path[b] = false;
            self.on_path[a] = false;
            self.path.truncate(self.path.len() - 2);
        }
        Ok(())
    }

    fn record(&self, census: &mut PathCensus) {
        census.total += 1;
        for &v in &self.path {
            census.node[v] += 1;
        }
        for i in (1..self.path.len() - 1).step_by(2) {
            let (u, v) = (self.path[i], self.path[i + 1]);
            *census.matching_edge.get_mut(&(u.min(v), u.max(v))).expect("matching edge") += 1;
        }
    }
}

/// Maximum matching size by exhaustive search over edges. Small views only.
pub fn brute_max_matching_size(view: &SubgraphView<'_>) -> usize {
    fn go(edges: &[(usize, usize)], used: &mut [bool]) -> usize {
        let Some((&(u, v), rest)) = edges.split_first() else { return 0 };
        let mut best = go(rest, used);
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            best = best.max(1 + go(rest, used));
            used[u] = false;
            used[v] = false;
        }
        best
    }
    let edges: Vec<_> = view.edges().collect();
    go(&edges, &mut vec![false; view.graph().n()])
}

/// Minimum vertex cover size over all node subsets of the view. At most 20 nodes.
pub fn brute_min_vertex_cover_size(view: &SubgraphView<'_>) -> usize {
    let nodes: Vec<usize> = view.nodes().collect();
    assert!(nodes.len() <= 20, "exhaustive cover search is limited to 20 nodes");
    let edges: Vec<(usize, usize)> = view
        .edges()
        .map(|(u, v)| {
            let pos = |x| nodes.iter().position(|&y| y == x).expect("edge endpoints are in view");
            (pos(u), pos(v))
        })
        .collect();
    (0u32..1 << nodes.len())
        .filter(|mask| edges.iter().all(|&(a, b)| mask >> a & 1 == 1 || mask >> b & 1 == 1))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// True iff every in-view edge has a matched endpoint.
pub fn is_maximal(view: &SubgraphView<'_>, m: &Matching) -> bool {
    view.edges().all(|(u, v)| m.is_matched(u) || m.is_matched(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, BipartiteGraph, GraphFamily};

    fn p4() -> BipartiteGraph {
        generate(&GraphFamily::Path { n: 4 }, 0).unwrap()
    }

    #[test]
    fn matching_sizes() {
        let g = p4();
        assert_eq!(max_matching(&SubgraphView::full(&g)).len(), 2);
        let k23 = generate(&GraphFamily::Complete { a: 2, b: 3 }, 0).unwrap();
        assert_eq!(max_matching(&SubgraphView::full(&k23)).len(), 2);
        let empty = BipartiteGraph::from_edges(4, &[]).unwrap();
        assert_eq!(max_matching(&SubgraphView::full(&empty)).len(), 0);
    }

    #[test]
    fn covers() {
        let g = p4();
        let view = SubgraphView::full(&g);
        let c = min_vertex_cover(&view);
        assert_eq!(c.len(), 2);
        assert!(c.is_valid_for(&view));
        let k23 = generate(&GraphFamily::Complete { a: 2, b: 3 }, 0).unwrap();
        let c = min_vertex_cover(&SubgraphView::full(&k23));
        assert_eq!(c.nodes().collect::<Vec<_>>(), vec![0, 1]);
        let e = generate(&GraphFamily::DisjointEdges { m: 1 }, 0).unwrap();
        assert_eq!(min_vertex_cover(&SubgraphView::full(&e)).len(), 1);
    }

    #[test]
    fn census_examples() {
        let e = generate(&GraphFamily::DisjointEdges { m: 1 }, 0).unwrap();
        let ev = SubgraphView::full(&e);
        let c = enumerate_aug_paths(&ev, &Matching::empty(2), 1, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(c.node, vec![1, 1]);

        let g = p4();
        let view = SubgraphView::full(&g);
        let m = Matching::from_edges(&view, &[(1, 2)]).unwrap();
        let c = enumerate_aug_paths(&view, &m, 3, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(c.total, 1);
        assert_eq!(c.node, vec![1, 1, 1, 1]);
        assert_eq!(c.matching_edge[&(1, 2)], 1);
        assert_eq!(
            enumerate_aug_paths(&view, &m, 5, DEFAULT_PATH_CAP),
            Err(Error::ShorterPathExists { found: 3, requested: 5 })
        );

        let max = max_matching(&view);
        for d in [1, 3, 5] {
            let c = enumerate_aug_paths(&view, &max, d, DEFAULT_PATH_CAP).unwrap();
            assert_eq!(c.total, 0);
            assert!(c.node.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn shortest_lengths() {
        let g = p4();
        let view = SubgraphView::full(&g);
        let m = Matching::from_edges(&view, &[(1, 2)]).unwrap();
        assert_eq!(shortest_aug_path_len(&view, &m), Some(3));
        assert_eq!(shortest_aug_path_len(&view, &max_matching(&view)), None);
        let e = generate(&GraphFamily::DisjointEdges { m: 1 }, 0).unwrap();
        assert_eq!(shortest_aug_path_len(&SubgraphView::full(&e), &Matching::empty(2)), Some(1));
    }

    #[test]
    fn cap_is_enforced() {
        let g = generate(&GraphFamily::Complete { a: 6, b: 6 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let err = enumerate_aug_paths(&view, &Matching::empty(12), 1, 3).unwrap_err();
        assert_eq!(err, Error::PathCapExceeded { cap: 3 });
    }

    #[test]
    fn brute_force_agrees_on_small_cases() {
        let g = p4();
        let view = SubgraphView::full(&g);
        assert_eq!(brute_max_matching_size(&view), 2);
        assert_eq!(brute_min_vertex_cover_size(&view), 2);
    }
}
