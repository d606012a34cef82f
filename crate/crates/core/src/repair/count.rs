//! Counting shortest augmenting paths through every node and matching edge.
//!
//! After an alternating BFS to depth `d`, a top-down sweep computes `x(v)`,
//! the number of shortest alternating paths from a free A-node to `v`. A
//! bottom-up sweep then computes `p(u) = Σ p(v)·x(u)/x(v)` over the DAG
//! successors `v`, starting from `p = x` at free B-nodes on level `d`.
//! Layer `ℓ` of each sweep owns one slot, sized for a count of `Δ^d`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::graph::{Matching, Side, SubgraphView};
use crate::primitives::alternating::partner_ports;
use crate::primitives::alternating_bfs;
use crate::runtime::{frames, run, width_for_big, Activity, BitWriter, NodeContext, NodeProgram, RoundIo, RoundStats, RunConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCounts {
    pub d: u32,
    pub level: Vec<Option<u32>>,
    pub x: Vec<BigUint>,
    pub p: Vec<BigUint>,
    /// Keyed by `(u, v)` with `u < v`; only matching edges inside the layers.
    pub p_edge: BTreeMap<(usize, usize), BigUint>,
}

impl PathCounts {
    /// Number of length-`d` augmenting paths.
    pub fn total(&self) -> BigUint {
        (0..self.p.len()).filter(|&v| self.level[v] == Some(0)).map(|v| self.p[v].clone()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.p.iter().all(Zero::is_zero)
    }
}

struct CountProgram<'a> {
    d: u32,
    level: &'a [Option<u32>],
    free: &'a [bool],
    partner_port: &'a [Option<usize>],
    count_bits: u32,
    slot_down: u64,
    slot_up: u64,
}

#[derive(Default)]
struct CountState {
    x: BigUint,
    p: BigUint,
    preds: Vec<usize>,
}

impl CountProgram<'_> {
    fn down_time(&self, l: u32) -> u64 {
        l as u64 * self.slot_down
    }

    fn up_time(&self, l: u32) -> u64 {
        self.down_time(self.d) + (self.d - l) as u64 * self.slot_up
    }

    fn check(&self, v: &BigUint) -> std::result::Result<(), String> {
        if v.bits() > self.count_bits as u64 {
            return Err(format!("count {v} exceeds {} bits", self.count_bits));
        }
        Ok(())
    }
}

impl NodeProgram for CountProgram<'_> {
    type State = CountState;
    type Output = (BigUint, BigUint);

    fn init(&self, _: &NodeContext) -> CountState {
        CountState::default()
    }

    fn step(&self, ctx: &NodeContext, s: &mut CountState, io: &mut RoundIo<'_>) -> std::result::Result<Activity, String> {
        let v = ctx.index;
        let Some(l) = self.level[v].filter(|_| ctx.in_view) else {
            return Ok(Activity::Halt);
        };
        let r = io.round();
        let (down, up) = (self.down_time(l), self.up_time(l));

        if r == down {
            if l == 0 {
                s.x = BigUint::one();
            } else {
                for (port, msg) in io.inbox() {
                    s.x += msg.reader().big(self.count_bits)?;
                    s.preds.push(*port);
                }
            }
            self.check(&s.x)?;
            if l < self.d {
                let msg = || BitWriter::new().big(&s.x, self.count_bits).finish();
                match ctx.side {
                    Side::A => {
                        for p in ctx.view_ports().filter(|&p| Some(p) != self.partner_port[v]) {
                            io.send(p, msg());
                        }
                    }
                    Side::B => {
                        if let Some(p) = self.partner_port[v] {
                            io.send(p, msg());
                        }
                    }
                }
            }
        }
        if r == up {
            if l == self.d {
                if self.free[v] {
                    s.p = s.x.clone();
                }
            } else {
                let x_u = BigRational::from_integer(s.x.clone().into());
                let mut acc = BigRational::zero();
                for (_, msg) in io.inbox() {
                    let mut rd = msg.reader();
                    let p_v = rd.big(self.count_bits)?;
                    let x_v = rd.big(self.count_bits)?;
                    if x_v.is_zero() {
                        return Err("successor reported zero paths".into());
                    }
                    acc += BigRational::from_integer(p_v.into()) * &x_u / BigRational::from_integer(x_v.into());
                }
                if !acc.is_integer() {
                    return Err(format!("non-integral path count {acc}"));
                }
                s.p = acc.to_integer().to_biguint().ok_or("negative path count")?;
            }
            self.check(&s.p)?;
            if !s.p.is_zero() {
                for &port in &s.preds {
                    io.send(port, BitWriter::new().big(&s.p, self.count_bits).big(&s.x, self.count_bits).finish());
                }
            }
            return Ok(Activity::Halt);
        }
        Ok(Activity::SleepUntil(if r < down { down } else { up }))
    }

    fn output(&self, _: &NodeContext, s: CountState) -> (BigUint, BigUint) {
        (s.x, s.p)
    }
}

/// Largest possible count: `Δ^d`.
pub fn count_limit(max_degree: usize, d: u32) -> BigUint {
    BigUint::from(max_degree.max(1)).pow(d)
}

/// Path counts for length `d` with `max_degree` as the agreed degree bound.
pub fn count_paths_with_degree(
    view: &SubgraphView<'_>,
    m: &Matching,
    d: u32,
    max_degree: usize,
    cfg: &RunConfig,
) -> Result<(PathCounts, RoundStats)> {
    if d.is_multiple_of(2) {
        return Err(Error::InvalidParam(format!("augmenting path length {d} must be odd")));
    }
    let g = view.graph();
    let (layers, mut stats) = alternating_bfs(view, m, d, cfg)?;
    let witnesses = layers.free_b_witnesses(view, g.sides(), m);
    if let Some(found) = witnesses.iter().map(|&(_, l)| l).filter(|&l| l < d).min() {
        return Err(Error::ShorterPathExists { found, requested: d });
    }
    let free: Vec<bool> = (0..g.n()).map(|v| !m.is_matched(v)).collect();
    let ports = partner_ports(view, m);
    let count_bits = width_for_big(&count_limit(max_degree, d));
    let bandwidth = cfg.bandwidth;
    let program = CountProgram {
        d,
        level: &layers.level,
        free: &free,
        partner_port: &ports,
        count_bits,
        slot_down: frames(count_bits as u64, bandwidth),
        slot_up: frames(2 * count_bits as u64, bandwidth),
    };
    let (out, s) = run(&program, view, cfg)?;
    stats.then(s.labeled("path-counts"));
    let (x, p): (Vec<BigUint>, Vec<BigUint>) = out.into_iter().unzip();
    let p_edge = m
        .edges()
        .into_iter()
        .filter(|&(u, v)| view.has_edge(u, v))
        .filter_map(|(u, v)| {
            let b = if g.side(u) == Side::B { u } else { v };
            layers.level[b].map(|_| ((u, v), p[b].clone()))
        })
        .collect();
    Ok((PathCounts { d, level: layers.level, x, p, p_edge }, stats))
}

/// Path counts for length `d`, using the view's maximum degree as `Δ`.
pub fn count_paths(view: &SubgraphView<'_>, m: &Matching, d: u32, cfg: &RunConfig) -> Result<(PathCounts, RoundStats)> {
    count_paths_with_degree(view, m, d, view.max_degree(), cfg)
}
