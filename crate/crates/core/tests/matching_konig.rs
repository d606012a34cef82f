mod common;

use bvc_core::graph::{Matching, Side, SubgraphView};
use bvc_core::konig::{candidate_cover, compute_partition, koenig_approx_cover, koenig_exact_cover};
use bvc_core::matching::{
    approx_matching, eliminate_short_aug_paths, find_disjoint_aug_paths, k_for_delta, maximal_matching,
    maximal_matching_deterministic, Priorities, Provider,
};
use bvc_core::oracle;
use bvc_core::runtime::RunConfig;
use bvc_core::Error;
use common::{family, random_graph};
use proptest::prelude::*;

fn is_aug_path(view: &SubgraphView<'_>, m: &Matching, path: &[usize]) -> bool {
    let ends_free = !m.is_matched(path[0]) && !m.is_matched(*path.last().unwrap());
    let alternates = path.windows(2).enumerate().all(|(i, w)| {
        view.has_edge(w[0], w[1]) && (m.partner(w[0]) == Some(w[1])) == (i % 2 == 1)
    });
    ends_free && alternates
}

proptest! {
    #[test]
    fn maximal_matchings_are_maximal(g in random_graph(12), seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        for (m, stats) in [maximal_matching(&view, &cfg).unwrap(), maximal_matching_deterministic(&view, &cfg).unwrap()] {
            prop_assert!(m.validate(&view).is_ok());
            prop_assert!(oracle::is_maximal(&view, &m));
            prop_assert!(2 * m.len() >= oracle::max_matching(&view).len());
            prop_assert!(stats.max_message_bits <= cfg.bandwidth as u64);
        }
    }

    #[test]
    fn disjoint_paths_are_valid_and_maximal(g in random_graph(9), seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        let (m, _) = maximal_matching(&view, &cfg).unwrap();
        let Some(d) = oracle::shortest_aug_path_len(&view, &m) else { return Ok(()) };
        let (paths, _) = find_disjoint_aug_paths(&view, &m, d, &cfg, Priorities::Random).unwrap();
        prop_assert!(!paths.is_empty());
        let mut used = vec![false; g.n()];
        for p in &paths {
            prop_assert_eq!(p.len() as u32, d + 1);
            prop_assert!(is_aug_path(&view, &m, p));
            for &v in p {
                prop_assert!(!used[v]);
                used[v] = true;
            }
        }
        let mut after = m.clone();
        for p in &paths {
            after.augment(p).unwrap();
        }
        let rest = view.without_nodes(&used);
        if let Some(l) = oracle::shortest_aug_path_len(&rest, &after.restrict_to(&rest)) {
            prop_assert!(l > d || oracle::enumerate_aug_paths(&rest, &after.restrict_to(&rest), d, 1 << 20).map(|c| c.total == 0).unwrap_or(true));
        }
    }

    #[test]
    fn elimination_removes_short_paths(g in random_graph(10), k in 1u32..4, seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        let empty = Matching::empty(g.n());
        let mut phases = Vec::new();
        let mut obs = |d: u32, m: &Matching| phases.push((d, m.len()));
        let (m, _) = eliminate_short_aug_paths(&view, &empty, k, &cfg, Priorities::Random, Some(&mut obs)).unwrap();
        if let Some(l) = oracle::shortest_aug_path_len(&view, &m) {
            prop_assert!(l > 2 * k - 1);
        }
        let opt = oracle::max_matching(&view).len();
        prop_assert!((k as usize + 1) * m.len() >= k as usize * opt);
        prop_assert!(phases.windows(2).all(|w| w[0].1 <= w[1].1));
    }

    #[test]
    fn approx_matching_meets_delta(g in random_graph(10), delta in 0.05..1.0f64, seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        let opt = oracle::max_matching(&view).len() as f64;
        for pr in [Priorities::Random, Priorities::Ids] {
            let (m, _) = approx_matching(&view, delta, &cfg, pr).unwrap();
            prop_assert!(m.len() as f64 >= (1.0 - delta) * opt - 1e-9);
        }
    }

    #[test]
    fn exact_cover_is_optimal(g in random_graph(12), seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        let (cover, m, stats) = koenig_exact_cover(&view, &cfg).unwrap();
        prop_assert!(cover.is_valid_for(&view));
        prop_assert_eq!(cover.len(), m.len());
        prop_assert_eq!(cover.len(), oracle::min_vertex_cover(&view).len());
        prop_assert!(stats.max_message_bits <= cfg.bandwidth as u64);
    }

    #[test]
    fn approx_cover_bound_and_identity(g in random_graph(12), k in 1u32..5, seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        let (m, _) = eliminate_short_aug_paths(&view, &Matching::empty(g.n()), k, &cfg, Priorities::Random, None).unwrap();
        let (res, _) = koenig_approx_cover(&view, &m, k, &cfg).unwrap();
        prop_assert!(res.cover.is_valid_for(&view));
        prop_assert_eq!(res.cover.len() as u64, m.len() as u64 + res.b_star_total);
        prop_assert!(res.cover.len() as f64 <= (1.0 + 1.0 / k as f64) * m.len() as f64 + 1e-9);
        prop_assert!(res.b_star_total * k as u64 <= m.len() as u64);
        for v in view.nodes() {
            let layered = match res.partition.side[v] {
                Side::B => res.partition.b_class(v).is_some(),
                Side::A => res.partition.a_class(v).is_some_and(|i| i >= 1),
            };
            if layered {
                prop_assert!(m.is_matched(v));
            }
        }
    }

    #[test]
    fn every_candidate_cover_is_valid(g in random_graph(10), k in 1u32..4, seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        let (m, _) = eliminate_short_aug_paths(&view, &Matching::empty(g.n()), k, &cfg, Priorities::Random, None).unwrap();
        let (part, _) = compute_partition(&view, &m, k, &cfg).unwrap();
        let sizes = part.b_sizes(|_| true);
        for s in 1..=k {
            let c = candidate_cover(&part, s).unwrap();
            prop_assert!(c.is_valid_for(&view));
            prop_assert_eq!(c.len() as u64, m.len() as u64 + sizes[s as usize - 1]);
        }
        prop_assert!(candidate_cover(&part, 0).is_err());
    }
}

#[test]
fn short_path_witness_is_raised() {
    let g = family("path:4");
    let view = SubgraphView::full(&g);
    let m = Matching::from_edges(&view, &[(1, 2)]).unwrap();
    let err = koenig_approx_cover(&view, &m, 2, &RunConfig::for_n(4, 0)).unwrap_err();
    assert!(matches!(err, Error::ShortAugPathWitness { level: 3, .. }));
    assert!(koenig_approx_cover(&view, &m, 1, &RunConfig::for_n(4, 0)).is_ok());
}

#[test]
fn provider_strings() {
    for s in ["maximal", "eliminate:k=3", "approx:delta=0.25", "det-approx:delta=0.5"] {
        assert_eq!(s.parse::<Provider>().unwrap().to_string(), s);
    }
    assert!("eliminate:k=0".parse::<Provider>().is_err());
    assert!("approx:delta=0".parse::<Provider>().is_err());
    assert_eq!(k_for_delta(0.25).unwrap(), 3);
    assert_eq!(k_for_delta(1.0).unwrap(), 1);
}

#[test]
fn k23_elimination_reaches_optimum() {
    let g = family("complete:2,3");
    let view = SubgraphView::full(&g);
    let (m, _) = eliminate_short_aug_paths(&view, &Matching::empty(5), 2, &RunConfig::for_n(5, 9), Priorities::Ids, None).unwrap();
    assert_eq!(m.len(), 2);
    let (res, _) = koenig_approx_cover(&view, &m, 2, &RunConfig::for_n(5, 9)).unwrap();
    assert_eq!(res.cover.len(), 2);
}
