//! Running pipelines on instances, checking them against the oracles, and
//! re-verifying stored records.

pub mod config;
pub mod record;

use std::time::Instant;

pub use config::{parse_config_text, ExperimentConfig, GraphSource, Pipeline, CONFIG_KEYS};
pub use record::{csv_header, csv_row, summarize, Record, Summary, CSV_COLUMNS};

use crate::clustering::{cluster_view, randomized_pipeline};
use crate::error::Result;
use crate::graph::{BipartiteGraph, SubgraphView};
use crate::konig::{koenig_approx_cover, koenig_exact_cover};
use crate::matching::{k_for_delta, Provider};
use crate::oracle;
use crate::repair::det_cover_low_diameter;
use crate::runtime::{default_bandwidth, RoundStats, RunConfig};

const SLACK: f64 = 1e-9;

struct Outcome {
    cover: Option<crate::graph::VertexCover>,
    matching_size: Option<usize>,
    valid: bool,
    bound: Option<f64>,
    within: Option<bool>,
    metrics: Vec<(&'static str, f64)>,
    stats: RoundStats,
}

fn upper(bound: Option<f64>, size: usize) -> Option<bool> {
    bound.map(|b| size as f64 <= b + SLACK)
}

fn execute(cfg: &ExperimentConfig, view: &SubgraphView<'_>, opt: Option<usize>, run_cfg: &RunConfig) -> Result<Outcome> {
    let optf = opt.map(|o| o as f64);
    Ok(match cfg.pipeline {
        Pipeline::Exact => {
            let (cover, m, stats) = koenig_exact_cover(view, run_cfg)?;
            let within = opt.map(|o| cover.len() == o);
            Outcome {
                valid: cover.is_valid_for(view),
                matching_size: Some(m.len()),
                bound: optf,
                within,
                metrics: vec![],
                cover: Some(cover),
                stats,
            }
        }
        Pipeline::Diameter1 => {
            let k = cfg.k_value();
            let (m, mut stats) = cfg.provider_value().provide(view, run_cfg)?;
            let (res, s) = koenig_approx_cover(view, &m, k, run_cfg)?;
            stats.then(s);
            let bound = (1.0 + 1.0 / k as f64) * m.len() as f64;
            let identity = res.cover.len() == m.len() + res.b_star_total as usize;
            Outcome {
                valid: res.cover.is_valid_for(view),
                matching_size: Some(m.len()),
                bound: Some(bound),
                within: Some(identity && res.cover.len() as f64 <= bound + SLACK),
                metrics: vec![("k", k as f64), ("b_star", res.b_star_total as f64)],
                cover: Some(res.cover),
                stats,
            }
        }
        Pipeline::RandPipeline => {
            let (res, stats) = randomized_pipeline(view, cfg.eps, cfg.inner, run_cfg)?;
            let clusters = &res.clustering.clusters;
            let eta = clusters.outside_fraction(&res.clustering.matching);
            let bound = optf.map(|o| (1.0 + 2.0 * eta + cfg.eps / 2.0) * o);
            Outcome {
                valid: res.cover.is_valid_for(view) && clusters.separation_violation(view).is_none(),
                matching_size: Some(res.clustering.matching.len()),
                bound,
                within: upper(bound, res.cover.len()),
                metrics: vec![
                    ("clusters", clusters.cluster_ids().len() as f64),
                    ("outside_fraction", eta),
                    ("max_tree_height", clusters.max_tree_height() as f64),
                    ("x_size", res.combined.x.len() as f64),
                ],
                cover: Some(res.cover),
                stats,
            }
        }
        Pipeline::DetLowDiam => {
            let (res, stats) = det_cover_low_diameter(view, cfg.eps, run_cfg)?;
            let bound = optf.map(|o| (1.0 + cfg.eps) * o);
            Outcome {
                valid: res.cover.is_valid_for(view),
                matching_size: Some(res.matching_size),
                bound,
                within: upper(bound, res.cover.len()),
                metrics: vec![
                    ("k", res.k as f64),
                    ("delta", res.delta),
                    ("s1_size", res.s1_size as f64),
                    ("s2_size", res.s2_size as f64),
                ],
                cover: Some(res.cover),
                stats,
            }
        }
        Pipeline::ClusteringOnly => {
            let (res, stats) = cluster_view(view, cfg.lambda_value(), run_cfg)?;
            let clusters = &res.clusters;
            Outcome {
                valid: clusters.separation_violation(view).is_none() && clusters.congestion(view) <= 1,
                matching_size: Some(res.matching.len()),
                bound: None,
                within: None,
                metrics: vec![
                    ("clusters", clusters.cluster_ids().len() as f64),
                    ("clustered", clusters.clustered() as f64),
                    ("outside_fraction", clusters.outside_fraction(&res.matching)),
                    ("max_tree_height", clusters.max_tree_height() as f64),
                    ("lambda", res.lambda),
                ],
                cover: None,
                stats,
            }
        }
        Pipeline::MatchingOnly => {
            let provider = cfg.provider_value();
            let (m, stats) = provider.provide(view, run_cfg)?;
            let fraction = match provider {
                Provider::Maximal => 0.5,
                Provider::Eliminate { k } => k as f64 / (k as f64 + 1.0),
                Provider::Approx { delta } | Provider::DetApprox { delta } => {
                    let k = k_for_delta(delta)? as f64;
                    k / (k + 1.0)
                }
            };
            let bound = optf.map(|o| fraction * o);
            let maximal = provider != Provider::Maximal || oracle::is_maximal(view, &m);
            Outcome {
                valid: m.validate(view).is_ok() && maximal,
                matching_size: Some(m.len()),
                bound,
                within: bound.map(|b| m.len() as f64 + SLACK >= b),
                metrics: vec![],
                cover: None,
                stats,
            }
        }
    })
}

/// Runs the configured pipeline once with `seed` on `graph`.
pub fn run_one(cfg: &ExperimentConfig, graph: &BipartiteGraph, seed: u64) -> Result<Record> {
    let view = SubgraphView::full(graph);
    let bandwidth = cfg.bandwidth.unwrap_or_else(|| default_bandwidth(graph.n()));
    let run_cfg = RunConfig::new(seed, bandwidth);
    let opt = cfg.oracle.then(|| oracle::max_matching(&view).len());
    let start = Instant::now();
    let out = execute(cfg, &view, opt, &run_cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut params_cfg = cfg.clone();
    params_cfg.seed = seed;
    params_cfg.repeat = 1;
    Ok(Record {
        pipeline: cfg.pipeline.to_string(),
        params: params_cfg.to_entries().into_iter().collect(),
        graph: cfg.graph.to_string(),
        n: graph.n(),
        m: graph.m(),
        diameter: graph.diameter(),
        max_degree: graph.max_degree(),
        opt,
        cover_size: out.cover.as_ref().map(|c| c.len()),
        matching_size: out.matching_size,
        valid: out.valid,
        bound: out.bound,
        within_bound: out.within,
        rounds: out.stats.rounds,
        max_message_bits: out.stats.max_message_bits,
        total_bits: out.stats.total_bits,
        fragmentation_rounds: out.stats.fragmentation_rounds,
        bandwidth,
        seed,
        cover_digest: out.cover.as_ref().map(|c| c.digest(graph)),
        metrics: out.metrics.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        per_phase: out.stats.per_phase,
        wall_ms,
    })
}

/// Seeds `seed, seed+1, …` for `repeat` runs.
pub fn seeds(cfg: &ExperimentConfig) -> impl Iterator<Item = u64> {
    let start = cfg.seed;
    (0..cfg.repeat as u64).map(move |i| start.wrapping_add(i))
}

/// All runs of a config, in seed order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Record>> {
    let graph = cfg.graph.load(cfg.graph_seed)?;
    seeds(cfg).map(|s| run_one(cfg, &graph, s)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub mismatches: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-runs a record from its parameters and compares every deterministic
/// field, with a fresh oracle value for `opt`.
pub fn verify(record: &Record) -> Result<VerifyReport> {
    let mut cfg = ExperimentConfig::from_entries(record.params.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
    cfg.oracle = true;
    let graph = cfg.graph.load(cfg.graph_seed)?;
    let fresh = run_one(&cfg, &graph, record.seed)?;
    let mut mismatches = Vec::new();
    let mut check = |name: &str, a: String, b: String| {
        if a != b {
            mismatches.push(format!("{name}: recorded {a}, rerun {b}"));
        }
    };
    check("pipeline", record.pipeline.clone(), fresh.pipeline.clone());
    check("n", record.n.to_string(), fresh.n.to_string());
    check("m", record.m.to_string(), fresh.m.to_string());
    if record.opt.is_some() {
        check("opt", format!("{:?}", record.opt), format!("{:?}", fresh.opt));
    }
    check("cover_size", format!("{:?}", record.cover_size), format!("{:?}", fresh.cover_size));
    check("matching_size", format!("{:?}", record.matching_size), format!("{:?}", fresh.matching_size));
    check("cover_digest", format!("{:?}", record.cover_digest), format!("{:?}", fresh.cover_digest));
    check("rounds", record.rounds.to_string(), fresh.rounds.to_string());
    check("total_bits", record.total_bits.to_string(), fresh.total_bits.to_string());
    check("max_message_bits", record.max_message_bits.to_string(), fresh.max_message_bits.to_string());
    check("valid", record.valid.to_string(), fresh.valid.to_string());
    if !fresh.valid {
        mismatches.push("rerun produced an invalid result".into());
    }
    if fresh.within_bound == Some(false) {
        mismatches.push(format!("rerun exceeds its bound {:?}", fresh.bound));
    }
    if fresh.max_message_bits > fresh.bandwidth as u64 {
        mismatches.push(format!("message of {} bits over a {}-bit link", fresh.max_message_bits, fresh.bandwidth));
    }
    Ok(VerifyReport { mismatches })
}
