//! Matching providers: maximal matching, elimination of short augmenting
//! paths, and `(1-δ)`-approximate matchings built on it.

pub mod aug_paths;
pub mod maximal;

use std::fmt;
use std::str::FromStr;

pub use aug_paths::find_disjoint_aug_paths;
pub use maximal::{maximal_matching, maximal_matching_deterministic};

use crate::error::{Error, Result};
use crate::graph::{Matching, SubgraphView};
use crate::runtime::{RoundStats, RunConfig};

/// How targets rank their claims when paths compete for nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Priorities {
    Random,
    Ids,
}

/// Largest phase length worth running: no simple path is longer than `n - 1`.
fn last_phase(view: &SubgraphView<'_>, k: u32) -> u32 {
    let longest = view.graph().n().saturating_sub(1) as u64;
    (2 * k as u64 - 1).min(longest) as u32
}

/// Called with `(d, matching)` after phase `d`.
pub type PhaseObserver<'a> = &'a mut dyn FnMut(u32, &Matching);

/// Runs phases `d = 1, 3, …, 2k-1` starting from `m0`; afterwards no
/// augmenting path of length at most `2k-1` remains. The observer sees the
/// matching after every phase.
pub fn eliminate_short_aug_paths(
    view: &SubgraphView<'_>,
    m0: &Matching,
    k: u32,
    cfg: &RunConfig,
    priorities: Priorities,
    mut observer: Option<PhaseObserver<'_>>,
) -> Result<(Matching, RoundStats)> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be at least 1".into()));
    }
    m0.validate(view)?;
    let mut m = m0.clone();
    let mut stats = RoundStats::default();
    let last = last_phase(view, k);
    let mut d = 1;
    while d <= last {
        let phase_cfg = cfg.with_seed(cfg.seed ^ (d as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let (paths, s) = find_disjoint_aug_paths(view, &m, d, &phase_cfg, priorities)?;
        for p in &paths {
            m.augment(p)?;
        }
        stats.then(s.labeled(&format!("eliminate-d{d}")));
        if let Some(obs) = observer.as_mut() {
            obs(d, &m);
        }
        d += 2;
    }
    Ok((m, stats))
}

/// `k = max(1, ceil(1/δ) - 1)`, so that `1 - 1/(k+1) ≥ 1 - δ`.
pub fn k_for_delta(delta: f64) -> Result<u32> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParam(format!("delta = {delta} outside (0, 1]")));
    }
    let k = (1.0 / delta).ceil() - 1.0;
    if k > u32::MAX as f64 / 2.0 {
        return Err(Error::InvalidParam(format!("delta = {delta} too small")));
    }
    Ok((k as u32).max(1))
}

/// Matching of size at least `(1-δ)` times the maximum.
pub fn approx_matching(
    view: &SubgraphView<'_>,
    delta: f64,
    cfg: &RunConfig,
    priorities: Priorities,
) -> Result<(Matching, RoundStats)> {
    let k = k_for_delta(delta)?;
    let empty = Matching::empty(view.graph().n());
    eliminate_short_aug_paths(view, &empty, k, cfg, priorities, None)
}

/// Provider selection: `maximal`, `eliminate:k=<int>`, `approx:delta=<float>`,
/// `det-approx:delta=<float>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Provider {
    Maximal,
    Eliminate { k: u32 },
    Approx { delta: f64 },
    DetApprox { delta: f64 },
}

impl Provider {
    pub fn provide(&self, view: &SubgraphView<'_>, cfg: &RunConfig) -> Result<(Matching, RoundStats)> {
        match *self {
            Provider::Maximal => maximal_matching(view, cfg),
            Provider::Eliminate { k } => {
                let empty = Matching::empty(view.graph().n());
                eliminate_short_aug_paths(view, &empty, k, cfg, Priorities::Random, None)
            }
            Provider::Approx { delta } => approx_matching(view, delta, cfg, Priorities::Random),
            Provider::DetApprox { delta } => approx_matching(view, delta, cfg, Priorities::Ids),
        }
    }
}

impl fmt::Display for Provider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provider::Maximal => write!(f, "maximal"),
            Provider::Eliminate { k } => write!(f, "eliminate:k={k}"),
            Provider::Approx { delta } => write!(f, "approx:delta={delta}"),
            Provider::DetApprox { delta } => write!(f, "det-approx:delta={delta}"),
        }
    }
}

impl FromStr for Provider {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParam(format!("unknown matching provider {s:?}"));
        if s == "maximal" {
            return Ok(Provider::Maximal);
        }
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        let (key, value) = arg.split_once('=').ok_or_else(bad)?;
        match (name, key) {
            ("eliminate", "k") => {
                let k: u32 = value.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(Error::InvalidParam("k must be at least 1".into()));
                }
                Ok(Provider::Eliminate { k })
            }
            ("approx", "delta") | ("det-approx", "delta") => {
                let delta: f64 = value.parse().map_err(|_| bad())?;
                k_for_delta(delta)?;
                Ok(if name == "approx" { Provider::Approx { delta } } else { Provider::DetApprox { delta } })
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};
    use crate::oracle;

    #[test]
    fn delta_to_k() {
        assert_eq!(k_for_delta(1.0).unwrap(), 1);
        assert_eq!(k_for_delta(0.5).unwrap(), 1);
        assert_eq!(k_for_delta(0.34).unwrap(), 2);
        assert_eq!(k_for_delta(0.01).unwrap(), 99);
        assert!(k_for_delta(0.0).is_err());
        assert!(k_for_delta(1.5).is_err());
    }

    #[test]
    fn provider_strings() {
        for s in ["maximal", "eliminate:k=3", "approx:delta=0.25", "det-approx:delta=0.5"] {
            assert_eq!(s.parse::<Provider>().unwrap().to_string(), s);
        }
        assert!("eliminate:k=0".parse::<Provider>().is_err());
        assert!("approx:k=2".parse::<Provider>().is_err());
        assert!("greedy".parse::<Provider>().is_err());
    }

    #[test]
    fn p4_examples() {
        let g = generate(&GraphFamily::Path { n: 4 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let cfg = RunConfig::for_n(4, 5);
        let (m, _) = eliminate_short_aug_paths(&view, &Matching::empty(4), 1, &cfg, Priorities::Random, None).unwrap();
        assert!(oracle::is_maximal(&view, &m));
        let m0 = Matching::from_edges(&view, &[(1, 2)]).unwrap();
        let (m, _) = eliminate_short_aug_paths(&view, &m0, 2, &cfg, Priorities::Random, None).unwrap();
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn k23_half() {
        let g = generate(&GraphFamily::Complete { a: 2, b: 3 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let (m, _) = approx_matching(&view, 0.5, &RunConfig::for_n(5, 1), Priorities::Random).unwrap();
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn large_k_gives_maximum() {
        for seed in 0..5 {
            let g = generate(&GraphFamily::Random { a: 12, b: 12, p: 0.2 }, seed).unwrap();
            let view = SubgraphView::full(&g);
            let k = g.n() as u32 / 2;
            let (m, _) = eliminate_short_aug_paths(&view, &Matching::empty(g.n()), k, &RunConfig::for_n(g.n(), seed), Priorities::Random, None)
                .unwrap();
            assert_eq!(m.len(), oracle::max_matching(&view).len());
        }
    }
}
