//! Experiment configuration: a flat `key = value` format whose entries can be
//! overridden one by one (command-line flags win over file entries).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::clustering::InnerSolver;
use crate::error::{Error, Result};
use crate::graph::{generate, BipartiteGraph, GraphFamily};
use crate::matching::Provider;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    Exact,
    Diameter1,
    RandPipeline,
    DetLowDiam,
    ClusteringOnly,
    MatchingOnly,
}

impl Pipeline {
    pub const ALL: [Pipeline; 6] = [
        Pipeline::Exact,
        Pipeline::Diameter1,
        Pipeline::RandPipeline,
        Pipeline::DetLowDiam,
        Pipeline::ClusteringOnly,
        Pipeline::MatchingOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Exact => "exact",
            Pipeline::Diameter1 => "diameter1",
            Pipeline::RandPipeline => "rand-pipeline",
            Pipeline::DetLowDiam => "det-low-diam",
            Pipeline::ClusteringOnly => "clustering-only",
            Pipeline::MatchingOnly => "matching-only",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown pipeline {s:?}")))
    }
}

/// A graph file path, or `gen:<family>` for a generated instance.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Gen(GraphFamily),
}

impl GraphSource {
    pub fn load(&self, graph_seed: u64) -> Result<BipartiteGraph> {
        match self {
            GraphSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidParam(format!("cannot read {}: {e}", path.display())))?;
                BipartiteGraph::parse_text(&text)
            }
            GraphSource::Gen(family) => generate(family, graph_seed),
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File(p) => write!(f, "{}", p.display()),
            GraphSource::Gen(family) => write!(f, "gen:{family}"),
        }
    }
}

impl FromStr for GraphSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("gen:") {
            Some(family) => Ok(GraphSource::Gen(family.parse()?)),
            None if s.is_empty() => Err(Error::InvalidParam("empty graph source".into())),
            None => Ok(GraphSource::File(PathBuf::from(s))),
        }
    }
}

fn inner_name(s: InnerSolver) -> &'static str {
    match s {
        InnerSolver::Eliminate => "eliminate",
        InnerSolver::Deterministic => "deterministic",
    }
}

fn parse_inner(s: &str) -> Result<InnerSolver> {
    match s {
        "eliminate" => Ok(InnerSolver::Eliminate),
        "deterministic" => Ok(InnerSolver::Deterministic),
        _ => Err(Error::InvalidParam(format!("unknown inner solver {s:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub pipeline: Pipeline,
    pub graph: GraphSource,
    pub graph_seed: u64,
    pub seed: u64,
    pub repeat: u32,
    pub eps: f64,
    /// Overrides the `k` derived from `eps` where a pipeline uses one.
    pub k: Option<u32>,
    pub lambda: Option<f64>,
    pub bandwidth: Option<u32>,
    pub provider: Option<Provider>,
    pub inner: InnerSolver,
    pub oracle: bool,
}

pub const CONFIG_KEYS: [&str; 12] =
    ["pipeline", "graph", "graph_seed", "seed", "repeat", "eps", "k", "lambda", "bandwidth", "provider", "inner", "oracle"];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key = value, got {line:?}") })?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::Parse { line: i + 1, msg: format!("unknown key {key:?}") });
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Builds a config from entries; later entries override earlier ones.
    pub fn from_entries<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut cfg = ExperimentConfig {
            pipeline: Pipeline::Exact,
            graph: GraphSource::Gen(GraphFamily::Path { n: 4 }),
            graph_seed: 0,
            seed: 0,
            repeat: 1,
            eps: 0.5,
            k: None,
            lambda: None,
            bandwidth: None,
            provider: None,
            inner: InnerSolver::Eliminate,
            oracle: true,
        };
        let mut have_pipeline = false;
        let mut have_graph = false;
        for (key, value) in entries {
            let field = |e: Error| Error::InvalidParam(format!("field {key}: {e}"));
            let num = |e: std::num::ParseIntError| Error::InvalidParam(format!("field {key}: {e}"));
            let float = |e: std::num::ParseFloatError| Error::InvalidParam(format!("field {key}: {e}"));
            match key {
                "pipeline" => {
                    cfg.pipeline = value.parse().map_err(field)?;
                    have_pipeline = true;
                }
                "graph" => {
                    cfg.graph = value.parse().map_err(field)?;
                    have_graph = true;
                }
                "graph_seed" => cfg.graph_seed = value.parse().map_err(num)?,
                "seed" => cfg.seed = value.parse().map_err(num)?,
                "repeat" => cfg.repeat = value.parse().map_err(num)?,
                "eps" => cfg.eps = value.parse().map_err(float)?,
                "k" => cfg.k = Some(value.parse().map_err(num)?),
                "lambda" => cfg.lambda = Some(value.parse().map_err(float)?),
                "bandwidth" => cfg.bandwidth = Some(value.parse().map_err(num)?),
                "provider" => cfg.provider = Some(value.parse().map_err(field)?),
                "inner" => cfg.inner = parse_inner(value).map_err(field)?,
                "oracle" => {
                    cfg.oracle = value.parse().map_err(|e: std::str::ParseBoolError| Error::InvalidParam(format!("field {key}: {e}")))?
                }
                _ => return Err(Error::InvalidParam(format!("unknown key {key:?}"))),
            }
        }
        if !have_pipeline {
            return Err(Error::InvalidParam("field pipeline: missing".into()));
        }
        if !have_graph {
            return Err(Error::InvalidParam("field graph: missing".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::InvalidParam(format!("field eps: {} outside (0, 1]", self.eps)));
        }
        if self.k == Some(0) {
            return Err(Error::InvalidParam("field k: must be at least 1".into()));
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l <= 1.0) {
                return Err(Error::InvalidParam(format!("field lambda: {l} outside (0, 1]")));
            }
        }
        if self.repeat == 0 {
            return Err(Error::InvalidParam("field repeat: must be at least 1".into()));
        }
        Ok(())
    }

    /// `k` for the layered cover: the explicit value, else `ceil(1/ε)`.
    pub fn k_value(&self) -> u32 {
        self.k.unwrap_or_else(|| (1.0 / self.eps).ceil() as u32).max(1)
    }

    pub fn lambda_value(&self) -> f64 {
        self.lambda.unwrap_or(self.eps / 4.0)
    }

    pub fn provider_value(&self) -> Provider {
        self.provider.unwrap_or(Provider::Eliminate { k: self.k_value() })
    }

    pub fn inner_name(&self) -> &'static str {
        inner_name(self.inner)
    }

    /// Entries that reproduce this config.
    pub fn to_entries(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("pipeline".to_string(), self.pipeline.to_string()),
            ("graph".to_string(), self.graph.to_string()),
            ("graph_seed".to_string(), self.graph_seed.to_string()),
            ("seed".to_string(), self.seed.to_string()),
            ("repeat".to_string(), self.repeat.to_string()),
            ("eps".to_string(), self.eps.to_string()),
            ("inner".to_string(), self.inner_name().to_string()),
            ("oracle".to_string(), self.oracle.to_string()),
        ];
        if let Some(k) = self.k {
            out.push(("k".into(), k.to_string()));
        }
        if let Some(l) = self.lambda {
            out.push(("lambda".into(), l.to_string()));
        }
        if let Some(b) = self.bandwidth {
            out.push(("bandwidth".into(), b.to_string()));
        }
        if let Some(p) = self.provider {
            out.push(("provider".into(), p.to_string()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_overrides() {
        let file = parse_config_text("# demo\npipeline = exact\ngraph = gen:path:6\neps=0.25\n").unwrap();
        let mut entries: Vec<(&str, &str)> = file.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        entries.push(("eps", "0.5"));
        let cfg = ExperimentConfig::from_entries(entries).unwrap();
        assert_eq!(cfg.graph, GraphSource::Gen(GraphFamily::Path { n: 6 }));
        assert_eq!(cfg.eps, 0.5);
        assert_eq!(cfg.k_value(), 2);
    }

    #[test]
    fn errors_carry_context() {
        assert_eq!(parse_config_text("pipeline exact").unwrap_err(), Error::Parse { line: 1, msg: "expected key = value, got \"pipeline exact\"".into() });
        assert!(matches!(parse_config_text("\ncolour = red"), Err(Error::Parse { line: 2, .. })));
        let err = ExperimentConfig::from_entries([("pipeline", "exact"), ("graph", "gen:path:4"), ("eps", "2")]).unwrap_err();
        assert!(err.to_string().contains("field eps"));
        assert!(ExperimentConfig::from_entries([("graph", "gen:path:4")]).is_err());
    }

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig::from_entries([
            ("pipeline", "matching-only"),
            ("graph", "gen:random:5,5,0.5"),
            ("provider", "eliminate:k=2"),
            ("bandwidth", "12"),
        ])
        .unwrap();
        let entries = cfg.to_entries();
        let again = ExperimentConfig::from_entries(entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))).unwrap();
        assert_eq!(cfg, again);
        for p in Pipeline::ALL {
            assert_eq!(p.name().parse::<Pipeline>().unwrap(), p);
        }
    }
}
