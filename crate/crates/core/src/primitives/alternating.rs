//! Layered BFS along alternating paths: free A-nodes start at level 0,
//! unmatched edges are crossed A→B and matching edges B→A. One layer per
//! round; the schedule always lasts `limit` rounds so callers can start the
//! next phase at a fixed time.

use crate::error::{Error, Result};
use crate::graph::{Matching, Side, SubgraphView};
use crate::runtime::{run, Activity, BitWriter, NodeContext, NodeProgram, RoundIo, RoundStats, RunConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingLayering {
    pub level: Vec<Option<u32>>,
    pub limit: u32,
}

impl AlternatingLayering {
    /// Free B-nodes reached at an odd level: each witnesses an augmenting path.
    pub fn free_b_witnesses(&self, view: &SubgraphView<'_>, sides: &[Side], m: &Matching) -> Vec<(usize, u32)> {
        view.nodes()
            .filter(|&v| sides[v] == Side::B && !m.is_matched(v))
            .filter_map(|v| self.level[v].map(|l| (v, l)))
            .collect()
    }
}

/// Each node's side and the port of its matching partner.
pub(crate) struct AlternatingBfs<'a> {
    pub sides: &'a [Side],
    pub partner_port: &'a [Option<usize>],
    pub limits: &'a [u32],
}

impl NodeProgram for AlternatingBfs<'_> {
    type State = Option<u32>;
    type Output = Option<u32>;

    fn init(&self, _: &NodeContext) -> Option<u32> {
        None
    }

    fn step(&self, ctx: &NodeContext, level: &mut Option<u32>, io: &mut RoundIo<'_>) -> std::result::Result<Activity, String> {
        if !ctx.in_view {
            return Ok(Activity::Halt);
        }
        let v = ctx.index;
        let r = io.round();
        let limit = self.limits[v] as u64;
        let reached_now = if r == 0 {
            self.sides[v] == Side::A && self.partner_port[v].is_none()
        } else {
            !io.inbox().is_empty() && level.is_none()
        };
        if reached_now {
            *level = Some(r as u32);
            if r < limit {
                let reach = || BitWriter::new().flag(true).finish();
                match self.sides[v] {
                    Side::A => {
                        for p in ctx.view_ports() {
                            if Some(p) != self.partner_port[v] {
                                io.send(p, reach());
                            }
                        }
                    }
                    Side::B => {
                        if let Some(p) = self.partner_port[v] {
                            io.send(p, reach());
                        }
                    }
                }
            }
        }
        Ok(if r < limit { Activity::SleepUntil(limit) } else { Activity::Halt })
    }

    fn output(&self, _: &NodeContext, level: Option<u32>) -> Option<u32> {
        level
    }
}

pub(crate) fn partner_ports(view: &SubgraphView<'_>, m: &Matching) -> Vec<Option<usize>> {
    let g = view.graph();
    (0..g.n()).map(|v| m.partner(v).and_then(|u| g.port_of(v, u))).collect()
}

/// Alternating levels with per-node sides and depth limits. Nodes of one
/// component must agree on their limit.
pub fn alternating_bfs_per_node(
    view: &SubgraphView<'_>,
    m: &Matching,
    sides: &[Side],
    limits: &[u32],
    cfg: &RunConfig,
) -> Result<(AlternatingLayering, RoundStats)> {
    m.validate(view)?;
    let n = view.graph().n();
    if sides.len() != n || limits.len() != n {
        return Err(Error::InvalidParam("per-node inputs do not match the graph".into()));
    }
    let ports = partner_ports(view, m);
    let program = AlternatingBfs { sides, partner_port: &ports, limits };
    let (level, stats) = run(&program, view, cfg)?;
    let limit = limits.iter().copied().max().unwrap_or(0);
    Ok((AlternatingLayering { level, limit }, stats.labeled("alternating-bfs")))
}

/// Alternating levels up to `limit` with sides taken from `sides`.
pub fn alternating_bfs_with_sides(
    view: &SubgraphView<'_>,
    m: &Matching,
    sides: &[Side],
    limit: u32,
    cfg: &RunConfig,
) -> Result<(AlternatingLayering, RoundStats)> {
    alternating_bfs_per_node(view, m, sides, &vec![limit; view.graph().n()], cfg)
}

/// Alternating levels up to `limit` using the graph's own bipartition.
pub fn alternating_bfs(
    view: &SubgraphView<'_>,
    m: &Matching,
    limit: u32,
    cfg: &RunConfig,
) -> Result<(AlternatingLayering, RoundStats)> {
    alternating_bfs_with_sides(view, m, view.graph().sides(), limit, cfg)
}
