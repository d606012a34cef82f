mod common;

use bvc_core::graph::{BipartiteGraph, Matching, SubgraphView};
use bvc_core::matching::maximal_matching;
use bvc_core::oracle;
use bvc_core::primitives::{alternating_bfs, bfs_from, elect_leader_and_bfs, exchange, pipelined_aggregate, AggOp};
use bvc_core::runtime::{
    default_bandwidth, run, width_for, Activity, BitWriter, NodeContext, NodeProgram, RoundIo, RunConfig,
};
use common::random_graph;
use proptest::prelude::*;

/// Floods a token from node index 0; each node records the round it first heard it.
struct Flood;

impl NodeProgram for Flood {
    type State = Option<u64>;
    type Output = Option<u64>;

    fn init(&self, _: &NodeContext) -> Option<u64> {
        None
    }

    fn step(&self, ctx: &NodeContext, heard: &mut Option<u64>, io: &mut RoundIo<'_>) -> Result<Activity, String> {
        let start = io.round() == 0 && ctx.index == 0;
        if heard.is_none() && (start || !io.inbox().is_empty()) {
            *heard = Some(io.round());
            for p in ctx.view_ports() {
                io.send(p, BitWriter::new().uint(ctx.id, ctx.id_bits).finish());
            }
        }
        Ok(Activity::Halt)
    }

    fn output(&self, _: &NodeContext, heard: Option<u64>) -> Option<u64> {
        heard
    }
}

fn components(g: &BipartiteGraph) -> Vec<usize> {
    g.components()
}

proptest! {
    #[test]
    fn flood_time_is_distance(g in random_graph(10)) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), 0);
        let (heard, stats) = run(&Flood, &view, &cfg).unwrap();
        let dist = g.bfs_distances(0);
        for v in 0..g.n() {
            prop_assert_eq!(heard[v], dist[v].map(|d| d as u64));
        }
        prop_assert!(stats.max_message_bits <= cfg.bandwidth as u64);
        let ecc = dist.iter().flatten().max().copied().unwrap_or(0) as u64;
        // The last layer's sends still arrive one round later.
        prop_assert_eq!(stats.rounds, if g.degree(0) > 0 { ecc + 1 } else { 0 });
    }

    #[test]
    fn leader_bfs_matches_sequential_bfs(g in random_graph(10)) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), 1);
        let (forest, stats) = elect_leader_and_bfs(&view, &cfg).unwrap();
        let comp = components(&g);
        for v in 0..g.n() {
            let root = (0..g.n()).filter(|&u| comp[u] == comp[v]).min_by_key(|&u| g.id(u)).unwrap();
            prop_assert_eq!(forest.root_id(v), Some(g.id(root)));
            prop_assert_eq!(forest.depth(v).map(|d| d as usize), g.bfs_distances(root)[v]);
            if let Some(p) = forest.parent_node(&view, v) {
                prop_assert_eq!(forest.depth(p).unwrap() + 1, forest.depth(v).unwrap());
            }
        }
        prop_assert!(stats.max_message_bits <= cfg.bandwidth as u64);
    }

    #[test]
    fn initiated_bfs_roots_at_smallest_initiator(g in random_graph(10), pick in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let initiators: Vec<bool> = (0..g.n()).map(|v| (pick >> (v % 64)) & 1 == 1).collect();
        let (forest, _) = bfs_from(&view, initiators.clone(), &RunConfig::for_n(g.n(), 0)).unwrap();
        let comp = components(&g);
        for v in 0..g.n() {
            let root = (0..g.n()).filter(|&u| initiators[u] && comp[u] == comp[v]).min_by_key(|&u| g.id(u));
            prop_assert_eq!(forest.root_id(v), root.map(|r| g.id(r)));
            prop_assert_eq!(forest.depth(v).map(|x| x as usize), root.and_then(|r| g.bfs_distances(r)[v]));
        }
    }

    #[test]
    fn aggregate_sums_per_component(g in random_graph(10), vals in proptest::collection::vec(0u64..50, 20)) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), 0);
        let (forest, _) = elect_leader_and_bfs(&view, &cfg).unwrap();
        let values: Vec<Vec<u64>> = (0..g.n()).map(|v| vec![vals[v % vals.len()], 1]).collect();
        let (out, stats) = pipelined_aggregate(&view, &forest, &values, AggOp::Sum, width_for(50 * 20), &cfg).unwrap();
        let comp = components(&g);
        for v in 0..g.n() {
            let members: Vec<usize> = (0..g.n()).filter(|&u| comp[u] == comp[v]).collect();
            let sum: u64 = members.iter().map(|&u| values[u][0]).sum();
            prop_assert_eq!(out[v].clone(), Some(vec![sum, members.len() as u64]));
        }
        prop_assert!(stats.max_message_bits <= cfg.bandwidth as u64);
        let (mx, _) = pipelined_aggregate(&view, &forest, &values, AggOp::Max, width_for(50 * 20), &cfg).unwrap();
        for v in 0..g.n() {
            let best = (0..g.n()).filter(|&u| comp[u] == comp[v]).map(|u| values[u][0]).max().unwrap();
            prop_assert_eq!(mx[v].as_ref().unwrap()[0], best);
        }
    }

    #[test]
    fn exchange_delivers_neighbor_values(g in random_graph(10)) {
        let view = SubgraphView::full(&g);
        let values: Vec<u64> = (0..g.n()).map(|v| (v * 7 % 13) as u64).collect();
        let (heard, stats) = exchange(&view, &values, 4, &RunConfig::for_n(g.n(), 0)).unwrap();
        for (v, got) in heard.iter().enumerate() {
            for (p, port) in g.neighbors(v).iter().enumerate() {
                prop_assert_eq!(got[p], Some(values[port.neighbor]));
            }
        }
        prop_assert!(stats.rounds <= 1);
    }

    #[test]
    fn alternating_levels_match_oracle(g in random_graph(10), seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        let (m, _) = maximal_matching(&view, &cfg).unwrap();
        let limit = g.n() as u32 + 1;
        let (layers, _) = alternating_bfs(&view, &m, limit, &cfg).unwrap();
        let dist = oracle::alternating_distances(&view, &m);
        prop_assert_eq!(layers.level, dist);
    }

    #[test]
    fn runs_are_deterministic(g in random_graph(10), seed in any::<u64>()) {
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(g.n(), seed);
        let a = maximal_matching(&view, &cfg).unwrap();
        let b = maximal_matching(&view, &cfg).unwrap();
        prop_assert_eq!(a.0.partners(), b.0.partners());
        prop_assert_eq!(a.1, b.1);
    }
}

#[test]
fn views_limit_communication() {
    let g = common::family("path:6");
    let mut node_in = vec![true; 6];
    node_in[3] = false;
    let view = SubgraphView::induced(&g, node_in);
    let (forest, _) = elect_leader_and_bfs(&view, &RunConfig::for_n(6, 0)).unwrap();
    assert_eq!(forest.root_id(2), Some(g.id(0)));
    assert_eq!(forest.root_id(4), Some(g.id(4)));
    assert_eq!(forest.depth(3), None);
}

#[test]
fn minimum_bandwidth_is_enforced() {
    let g = common::family("path:16");
    let view = SubgraphView::full(&g);
    assert!(run(&Flood, &view, &RunConfig::new(0, 7)).is_err());
    assert!(run(&Flood, &view, &RunConfig::new(0, 8)).is_ok());
    assert_eq!(default_bandwidth(16), 16);
}

#[test]
fn alternating_bfs_respects_limit() {
    let g = common::family("path:8");
    let view = SubgraphView::full(&g);
    let m = Matching::from_edges(&view, &[(1, 2), (3, 4), (5, 6)]).unwrap();
    let (layers, stats) = alternating_bfs(&view, &m, 3, &RunConfig::for_n(8, 0)).unwrap();
    assert_eq!(layers.level, vec![Some(0), Some(1), Some(2), Some(3), None, None, None, None]);
    assert_eq!(stats.rounds, 3);
}
