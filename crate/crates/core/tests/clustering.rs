mod common;

use bvc_core::clustering::{cluster_view, mpx_partition, randomized_pipeline, shift_cap, InnerSolver};
use bvc_core::graph::SubgraphView;
use bvc_core::oracle;
use bvc_core::runtime::RunConfig;
use common::{graph, random_graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn clusters_are_separated_and_spanned(g in random_graph(12), lambda in 0.1..1.0f64, seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        let (c, stats) = cluster_view(&view, lambda, &cfg).unwrap();
        prop_assert!(c.clusters.separation_violation(&view).is_none());
        prop_assert!(oracle::is_maximal(&view, &c.matching));
        prop_assert!(c.clusters.congestion(&view) <= 1);
        let eta = c.clusters.outside_fraction(&c.matching);
        prop_assert!((0.0..=1.0).contains(&eta));
        let trees = c.clusters.trees.as_ref().unwrap();
        for v in 0..g.n() {
            if let Some(cl) = c.clusters.cluster[v] {
                prop_assert_eq!(trees.root_id(v), Some(cl));
            }
        }
        let bound = shift_cap(g.n() as u64, lambda / 4.0) as u32;
        prop_assert!(c.clusters.max_tree_height() <= bound);
        prop_assert!(stats.max_message_bits <= cfg.bandwidth as u64);
    }

    #[test]
    fn cluster_optima_fit_under_opt(g in random_graph(12), lambda in 0.1..1.0f64, seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let (c, _) = cluster_view(&view, lambda, &RunConfig::for_n(g.n(), seed)).unwrap();
        let mut owner: Vec<Option<u64>> = vec![None; g.n()];
        let mut total = 0;
        for id in c.clusters.cluster_ids() {
            let inside = |v: usize| c.clusters.cluster[v] == Some(id);
            let mut node_in = vec![false; g.n()];
            let mut edge_in = vec![false; g.m()];
            for e in view.edge_ids() {
                let (u, v) = g.edge(e);
                if inside(u) || inside(v) {
                    edge_in[e] = true;
                    node_in[u] = true;
                    node_in[v] = true;
                }
            }
            for v in 0..g.n() {
                if node_in[v] {
                    prop_assert!(owner[v].is_none(), "extended clusters share node {}", v);
                    owner[v] = Some(id);
                }
            }
            let ext = SubgraphView::new(&g, node_in, edge_in).unwrap();
            total += oracle::max_matching(&ext).len();
        }
        prop_assert!(total <= oracle::max_matching(&view).len());
    }

    #[test]
    fn mpx_assigns_every_node(g in random_graph(12), seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let (p, _) = mpx_partition(&view, 0.5, &RunConfig::for_n(g.n(), seed)).unwrap();
        for v in 0..g.n() {
            let o = p.origin[v].unwrap();
            let u = g.index_of(o).unwrap();
            prop_assert!(g.bfs_distances(u)[v].is_some());
        }
    }

    #[test]
    fn pipeline_covers_are_valid(g in random_graph(12), seed in any::<u64>(), det in any::<bool>()) {
        let view = SubgraphView::full(&g);
        let solver = if det { InnerSolver::Deterministic } else { InnerSolver::Eliminate };
        let (r, _) = randomized_pipeline(&view, 0.5, solver, &RunConfig::for_n(g.n(), seed)).unwrap();
        prop_assert!(r.cover.is_valid_for(&view));
        let opt = oracle::min_vertex_cover(&view).len();
        let eta = r.clustering.clusters.outside_fraction(&r.clustering.matching);
        prop_assert!(r.cover.len() as f64 <= (1.0 + 2.0 * eta + 0.25) * opt as f64 + 1e-9);
    }
}

#[test]
fn seeds_change_the_clustering_but_reruns_do_not() {
    let g = graph(30, 30, 0.08, 5);
    let view = SubgraphView::full(&g);
    let run = |s| cluster_view(&view, 0.25, &RunConfig::for_n(g.n(), s)).unwrap();
    let (a, sa) = run(1);
    let (b, sb) = run(1);
    assert_eq!(a.clusters.cluster, b.clusters.cluster);
    assert_eq!(sa, sb);
    let differs = (2..6).any(|s| run(s).0.clusters.cluster != a.clusters.cluster);
    assert!(differs);
}

#[test]
fn larger_lambda_cuts_more() {
    let g = graph(60, 60, 0.04, 1);
    let view = SubgraphView::full(&g);
    let mean = |lambda: f64| {
        (0..20)
            .map(|s| {
                let (c, _) = cluster_view(&view, lambda, &RunConfig::for_n(g.n(), s)).unwrap();
                c.clusters.outside_fraction(&c.matching)
            })
            .sum::<f64>()
            / 20.0
    };
    assert!(mean(0.05) < mean(1.0));
}
