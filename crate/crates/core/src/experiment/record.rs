//! One result line per (instance, seed) run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub pipeline: String,
    /// Config entries that reproduce this run.
    pub params: BTreeMap<String, String>,
    pub graph: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "D")]
    pub diameter: usize,
    #[serde(rename = "Δ")]
    pub max_degree: usize,
    pub opt: Option<usize>,
    pub cover_size: Option<usize>,
    pub matching_size: Option<usize>,
    pub valid: bool,
    /// Declared per-run bound on the reported size (upper for covers, lower for matchings).
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
    pub rounds: u64,
    pub max_message_bits: u64,
    pub total_bits: u64,
    pub fragmentation_rounds: u64,
    pub bandwidth: u32,
    pub seed: u64,
    pub cover_digest: Option<String>,
    pub metrics: BTreeMap<String, f64>,
    pub per_phase: Vec<(String, u64)>,
    pub wall_ms: f64,
}

impl Record {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_json(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
    }

    /// `cover_size / opt` when both are known.
    pub fn ratio(&self) -> Option<f64> {
        match (self.cover_size, self.opt) {
            (Some(c), Some(o)) if o > 0 => Some(c as f64 / o as f64),
            (Some(0), Some(0)) => Some(1.0),
            _ => None,
        }
    }

    /// Valid and, where checked, within its bound.
    pub fn passed(&self) -> bool {
        self.valid && self.within_bound != Some(false)
    }
}

/// CSV columns, in order.
pub const CSV_COLUMNS: [&str; 17] = [
    "pipeline",
    "graph",
    "seed",
    "n",
    "m",
    "D",
    "max_degree",
    "opt",
    "cover_size",
    "matching_size",
    "valid",
    "within_bound",
    "rounds",
    "max_message_bits",
    "total_bits",
    "bandwidth",
    "wall_ms",
];

pub fn csv_header() -> String {
    CSV_COLUMNS.join(",")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn csv_row(r: &Record) -> String {
    let graph = if r.graph.contains(',') { format!("\"{}\"", r.graph.replace('"', "\"\"")) } else { r.graph.clone() };
    [
        r.pipeline.clone(),
        graph,
        r.seed.to_string(),
        r.n.to_string(),
        r.m.to_string(),
        r.diameter.to_string(),
        r.max_degree.to_string(),
        opt(r.opt),
        opt(r.cover_size),
        opt(r.matching_size),
        r.valid.to_string(),
        opt(r.within_bound),
        r.rounds.to_string(),
        r.max_message_bits.to_string(),
        r.total_bits.to_string(),
        r.bandwidth.to_string(),
        format!("{:.3}", r.wall_ms),
    ]
    .join(",")
}

/// Aggregates recomputed from a set of records.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub runs: usize,
    pub passed: usize,
    pub mean_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub mean_rounds: f64,
}

pub fn summarize(records: &[Record]) -> Summary {
    let ratios: Vec<f64> = records.iter().filter_map(Record::ratio).collect();
    let mean = |xs: &[f64]| if xs.is_empty() { None } else { Some(xs.iter().sum::<f64>() / xs.len() as f64) };
    let rounds: Vec<f64> = records.iter().map(|r| r.rounds as f64).collect();
    Summary {
        runs: records.len(),
        passed: records.iter().filter(|r| r.passed()).count(),
        mean_ratio: mean(&ratios),
        max_ratio: ratios.iter().copied().reduce(f64::max),
        mean_rounds: mean(&rounds).unwrap_or(0.0),
    }
}
