//! Greedy covering of all shortest augmenting paths of one length, and the
//! stage loop that removes every augmenting path up to length `2k-1`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::count::{count_limit, count_paths_with_degree, PathCounts};
use crate::error::{Error, Result};
use crate::graph::{Matching, Side, SubgraphView};
use crate::oracle;
use crate::primitives::{elect_leader_and_bfs, exchange, pipelined_aggregate, AggOp};
use crate::runtime::{width_for, RoundStats, RunConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCover {
    /// `S_H` as membership flags.
    pub removed: Vec<bool>,
    /// Phases (not counting the final sweep) in which some node was added.
    pub active_phases: Vec<u32>,
    pub phases: u32,
}

impl PathCover {
    pub fn len(&self) -> usize {
        self.removed.iter().filter(|&&r| r).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sweep positions `0, 1, 3, …, d-2, d`: the endpoints at `0` and `d`, and
/// at each odd `ℓ < d` the matching edges between levels `ℓ` and `ℓ+1`.
fn positions(d: u32) -> Vec<u32> {
    let mut out = vec![0];
    out.extend((1..d).step_by(2));
    out.push(d);
    out
}

/// Phase count `ceil(log2 Δ^d) + 1`, so the last threshold is below one.
fn phase_count(limit: &BigUint) -> u32 {
    if limit.is_one() {
        1
    } else {
        (limit - 1u32).bits() as u32 + 1
    }
}

/// Nodes picked at `pos` with at least `limit / 2^shift` paths (`shift = None`
/// means at least one path). Matching edges contribute both endpoints.
fn select(view: &SubgraphView<'_>, m: &Matching, counts: &PathCounts, pos: u32, limit: &BigUint, shift: Option<u32>) -> Vec<usize> {
    let g = view.graph();
    let heavy = |p: &BigUint| !p.is_zero() && shift.is_none_or(|i| (p << i as usize) >= *limit);
    let mut out = Vec::new();
    for v in view.nodes() {
        if counts.level[v] != Some(pos) || !heavy(&counts.p[v]) {
            continue;
        }
        let endpoint = pos == 0 || pos == counts.d;
        match (endpoint, m.partner(v)) {
            (true, None) => out.push(v),
            (false, Some(u)) if g.side(v) == Side::B => out.extend([v, u]),
            _ => {}
        }
    }
    out
}

/// Picks a node set `S_H` that meets every augmenting path of length `d`,
/// where `d` is the shortest augmenting path length. Matched nodes join in
/// pairs, so removing `S_H` creates no new free nodes.
pub fn cover_short_paths_with_degree(
    view: &SubgraphView<'_>,
    m: &Matching,
    d: u32,
    max_degree: usize,
    cfg: &RunConfig,
) -> Result<(PathCover, RoundStats)> {
    let n = view.graph().n();
    let limit = count_limit(max_degree, d);
    let phases = phase_count(&limit);
    let mut removed = vec![false; n];
    let mut current = view.clone();
    let mut m_cur = m.restrict_to(&current);
    let mut stats = RoundStats::default();
    let mut memo: Option<(PathCounts, RoundStats)> = None;
    let mut active_phases = Vec::new();

    for i in 1..=phases + 1 {
        let shift = (i <= phases).then_some(i);
        for (idx, &pos) in positions(d).iter().enumerate() {
            // Counts are recomputed before every position; unchanged views give identical runs.
            let (counts, s) = match memo.take() {
                Some(hit) => hit,
                None => count_paths_with_degree(&current, &m_cur, d, max_degree, cfg)?,
            };
            stats.then(s.clone());
            if idx == 0 {
                if let Some(i) = shift {
                    let cap = &limit;
                    if let Some(v) = (0..n).find(|&v| (&counts.p[v] << (i as usize - 1)) > *cap) {
                        return Err(Error::Internal(format!("phase {i} starts with {} paths through node {v}", counts.p[v])));
                    }
                }
            }
            let picked = select(&current, &m_cur, &counts, pos, &limit, shift);
            if picked.is_empty() {
                memo = Some((counts, s));
                continue;
            }
            if let Some(i) = shift {
                if active_phases.last() != Some(&i) {
                    active_phases.push(i);
                }
            }
            let mut flags = vec![false; n];
            for &v in &picked {
                flags[v] = true;
                removed[v] = true;
            }
            let announce: Vec<u64> = flags.iter().map(|&f| u64::from(f)).collect();
            let (_, s) = exchange(&current, &announce, 1, cfg)?;
            stats.then(s.labeled("announce-removal"));
            current = current.without_nodes(&flags);
            m_cur = m_cur.restrict_to(&current);
        }
    }
    let label = format!("cover-d{d}");
    Ok((PathCover { removed, active_phases, phases }, stats.labeled(&label)))
}

pub fn cover_short_paths(view: &SubgraphView<'_>, m: &Matching, d: u32, cfg: &RunConfig) -> Result<(PathCover, RoundStats)> {
    cover_short_paths_with_degree(view, m, d, view.max_degree(), cfg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageReport {
    pub d: u32,
    pub max_degree: usize,
    pub removed: Vec<usize>,
    pub phases: u32,
    pub active_phases: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepairResult {
    /// `S1` as membership flags.
    pub s1: Vec<bool>,
    pub per_stage: Vec<StageReport>,
    /// `4k(k+1)(1 + 2k ln Δ)`.
    pub alpha: f64,
    pub delta_claimed: f64,
}

impl RepairResult {
    pub fn len(&self) -> usize {
        self.s1.iter().filter(|&&r| r).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The view with `S1` removed.
    pub fn residual<'g>(&self, view: &SubgraphView<'g>) -> SubgraphView<'g> {
        view.without_nodes(&self.s1)
    }

    /// `α·δ·OPT` for the claimed `δ`.
    pub fn claimed_bound(&self, opt: usize) -> f64 {
        self.alpha * self.delta_claimed * opt as f64
    }
}

/// `4k(k+1)(1 + 2k ln Δ)`.
pub fn repair_alpha(k: u32, max_degree: usize) -> f64 {
    let k = k as f64;
    4.0 * k * (k + 1.0) * (1.0 + 2.0 * k * (max_degree.max(1) as f64).ln())
}

/// Removes a node set `S1` so that `M` restricted to the rest has no
/// augmenting path of length at most `2k-1`. Stages `d = 1, 3, …` each cover
/// the then-shortest paths; `Δ` is re-aggregated over the current view per stage.
pub fn repair_matching(
    view: &SubgraphView<'_>,
    m: &Matching,
    k: u32,
    delta_claimed: f64,
    cfg: &RunConfig,
) -> Result<(RepairResult, Matching, RoundStats)> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be at least 1".into()));
    }
    m.validate(view)?;
    let g = view.graph();
    let n = g.n();
    let full = SubgraphView::full(g);
    let (forest, mut stats) = elect_leader_and_bfs(&full, cfg)?;
    let mut s1 = vec![false; n];
    let mut current = view.clone();
    let mut m_cur = m.clone();
    let mut per_stage = Vec::new();
    let last = (2 * k as u64 - 1).min(n.saturating_sub(1) as u64) as u32;

    let mut d = 1;
    while d <= last {
        if let Some(found) = oracle::shortest_aug_path_len(&current, &m_cur) {
            if found < d {
                return Err(Error::Internal(format!("stage {d} starts with an augmenting path of length {found}")));
            }
        }
        let degrees: Vec<Vec<u64>> = (0..n).map(|v| vec![if current.contains_node(v) { current.degree(v) as u64 } else { 0 }]).collect();
        let (maxima, s) = pipelined_aggregate(&full, &forest, &degrees, AggOp::Max, width_for(n as u64), cfg)?;
        stats.then(s.labeled("max-degree"));
        let max_degree = maxima.iter().flatten().map(|x| x[0]).max().unwrap_or(0) as usize;

        let (cover, s) = cover_short_paths_with_degree(&current, &m_cur, d, max_degree, cfg)?;
        stats.then(s);
        let picked: Vec<usize> = (0..n).filter(|&v| cover.removed[v]).collect();
        for &v in &picked {
            s1[v] = true;
        }
        current = current.without_nodes(&cover.removed);
        m_cur = m_cur.restrict_to(&current);
        per_stage.push(StageReport { d, max_degree, removed: picked, phases: cover.phases, active_phases: cover.active_phases });
        d += 2;
    }

    for v in current.nodes() {
        if !m_cur.is_matched(v) && m.is_matched(v) {
            return Err(Error::Internal(format!("node {} became unmatched during repair", g.id(v))));
        }
    }
    let alpha = repair_alpha(k, view.max_degree());
    Ok((RepairResult { s1, per_stage, alpha, delta_claimed }, m_cur, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};
    use crate::matching::maximal_matching;

    fn full(family: GraphFamily) -> crate::graph::BipartiteGraph {
        generate(&family, 0).unwrap()
    }

    #[test]
    fn free_edge_takes_one_endpoint() {
        let g = full(GraphFamily::DisjointEdges { m: 1 });
        let view = SubgraphView::full(&g);
        let (c, _) = cover_short_paths(&view, &Matching::empty(2), 1, &RunConfig::for_n(2, 0)).unwrap();
        assert_eq!(c.removed, vec![true, false]);
        assert_eq!(c.active_phases, vec![1]);
    }

    #[test]
    fn nothing_to_cover() {
        let g = full(GraphFamily::Path { n: 4 });
        let view = SubgraphView::full(&g);
        let m = oracle::max_matching(&view);
        let (c, _) = cover_short_paths(&view, &m, 3, &RunConfig::for_n(4, 0)).unwrap();
        assert!(c.is_empty());
        assert!(c.active_phases.is_empty());
    }

    #[test]
    fn p4_path_is_cut() {
        let g = full(GraphFamily::Path { n: 4 });
        let view = SubgraphView::full(&g);
        let m = Matching::from_edges(&view, &[(1, 2)]).unwrap();
        let (c, _) = cover_short_paths(&view, &m, 3, &RunConfig::for_n(4, 0)).unwrap();
        let rest = view.without_nodes(&c.removed);
        assert!(oracle::shortest_aug_path_len(&rest, &m.restrict_to(&rest)).is_none_or(|l| l > 3));
        assert!(c.len() == 1 || c.removed[1] && c.removed[2]);
    }

    #[test]
    fn repair_examples() {
        let g = full(GraphFamily::Path { n: 4 });
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(4, 0);
        let (r, _, _) = repair_matching(&view, &oracle::max_matching(&view), 2, 0.0, &cfg).unwrap();
        assert!(r.is_empty());

        let m = Matching::from_edges(&view, &[(1, 2)]).unwrap();
        let (r, mbar, _) = repair_matching(&view, &m, 2, 0.5, &cfg).unwrap();
        assert!(r.per_stage[0].removed.is_empty());
        let rest = r.residual(&view);
        assert!(oracle::shortest_aug_path_len(&rest, &mbar).is_none_or(|l| l >= 5));

        let g = generate(&GraphFamily::Random { a: 10, b: 10, p: 0.3 }, 3).unwrap();
        let view = SubgraphView::full(&g);
        let (m, _) = maximal_matching(&view, &RunConfig::for_n(20, 3)).unwrap();
        let (r, _, _) = repair_matching(&view, &m, 1, 0.5, &RunConfig::for_n(20, 3)).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn repair_leaves_no_short_paths() {
        for seed in 0..8 {
            let g = generate(&GraphFamily::Random { a: 12, b: 12, p: 0.2 }, seed).unwrap();
            let view = SubgraphView::full(&g);
            let cfg = RunConfig::for_n(g.n(), seed);
            let (m, _) = maximal_matching(&view, &cfg).unwrap();
            for k in [2, 3] {
                let (r, mbar, _) = repair_matching(&view, &m, k, 0.5, &cfg).unwrap();
                let rest = r.residual(&view);
                assert!(oracle::shortest_aug_path_len(&rest, &mbar).is_none_or(|l| l > 2 * k - 1));
                for v in 0..g.n() {
                    if r.s1[v] && m.is_matched(v) {
                        assert!(r.s1[m.partner(v).unwrap()]);
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_formula() {
        assert!((repair_alpha(1, 1) - 8.0).abs() < 1e-12);
        let want = 4.0 * 2.0 * 3.0 * (1.0 + 4.0 * 2f64.ln());
        assert!((repair_alpha(2, 2) - want).abs() < 1e-9);
    }
}
