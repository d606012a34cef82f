//! Minimum-ID flooding with echo termination.
//!
//! Every initiator floods `OFFER(leader, dist)`. A node adopts the offer that
//! is smallest in `(leader, dist, sender id)` and re-floods it. A port is
//! settled when the neighbor sends an `OFFER` for the same leader (not a
//! child) or a `DONE` (child). A node whose ports are all settled reports
//! `DONE(leader, subtree height)` to its parent; the root then sends
//! `FINAL(leader, height)` down the tree. Offers from smaller leaders keep
//! overriding earlier states, so only the minimum leader's tree survives.

use crate::error::Result;
use crate::graph::{Side, SubgraphView};
use crate::runtime::{run, width_for, Activity, BitWriter, NodeContext, NodeProgram, Payload, RoundIo, RoundStats, RunConfig};

const OFFER: u64 = 0;
const DONE: u64 = 1;
const FINAL: u64 = 2;

/// What a node knows about its tree once the protocol ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeLinks {
    pub root_id: u64,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: u32,
    pub height: u32,
}

/// Per-node tree links over a base graph; nodes outside every tree have `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsForest {
    pub links: Vec<Option<TreeLinks>>,
}

impl BfsForest {
    pub fn parent_node(&self, view: &SubgraphView<'_>, v: usize) -> Option<usize> {
        let port = self.links[v].as_ref()?.parent?;
        Some(view.graph().neighbors(v)[port].neighbor)
    }

    pub fn depth(&self, v: usize) -> Option<u32> {
        self.links[v].as_ref().map(|l| l.depth)
    }

    pub fn root_id(&self, v: usize) -> Option<u64> {
        self.links[v].as_ref().map(|l| l.root_id)
    }

    /// Side by depth parity: even depth is A.
    pub fn parity_side(&self, v: usize) -> Option<Side> {
        self.depth(v).map(|d| Side::from_parity(d as u64))
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.links.len())
            .filter(|&v| self.links[v].as_ref().is_some_and(|l| l.parent.is_none()))
            .collect()
    }

    pub fn max_height(&self) -> u32 {
        self.links.iter().flatten().map(|l| l.height).max().unwrap_or(0)
    }
}

/// Flood-echo BFS program. With `initiators = None` every in-view node starts
/// (leader election); otherwise only flagged nodes do.
pub struct FloodBfs {
    pub initiators: Option<Vec<bool>>,
}

pub struct FloodState {
    leader: Option<(u64, u32, u64)>,
    parent: Option<usize>,
    pending: Vec<bool>,
    children: Vec<usize>,
    sub_height: u32,
    reported: bool,
    height: Option<u32>,
}

impl FloodBfs {
    fn msg(ctx: &NodeContext, tag: u64, leader: u64, value: u32) -> Payload {
        BitWriter::new().uint(tag, 2).uint(leader, ctx.id_bits).uint(value as u64, width_for(ctx.n)).finish()
    }

    fn adopt(&self, ctx: &NodeContext, s: &mut FloodState, io: &mut RoundIo<'_>, key: (u64, u32, u64), parent: Option<usize>) {
        s.leader = Some(key);
        s.parent = parent;
        s.children.clear();
        s.sub_height = 0;
        s.reported = false;
        s.height = None;
        for p in 0..ctx.degree() {
            s.pending[p] = ctx.ports[p].edge_in_view && Some(p) != parent;
            if s.pending[p] {
                io.send(p, Self::msg(ctx, OFFER, key.0, key.1));
            }
        }
    }

    fn try_finish(&self, ctx: &NodeContext, s: &mut FloodState, io: &mut RoundIo<'_>) {
        if s.reported || s.pending.iter().any(|&p| p) {
            return;
        }
        let (leader, _, _) = s.leader.expect("finishing requires a leader");
        s.reported = true;
        match s.parent {
            Some(p) => io.send(p, Self::msg(ctx, DONE, leader, s.sub_height + 1)),
            None => {
                s.height = Some(s.sub_height);
                for &c in &s.children {
                    io.send(c, Self::msg(ctx, FINAL, leader, s.sub_height));
                }
            }
        }
    }
}

impl NodeProgram for FloodBfs {
    type State = FloodState;
    type Output = Option<TreeLinks>;

    fn init(&self, ctx: &NodeContext) -> FloodState {
        FloodState {
            leader: None,
            parent: None,
            pending: vec![false; ctx.degree()],
            children: Vec::new(),
            sub_height: 0,
            reported: false,
            height: None,
        }
    }

    fn step(&self, ctx: &NodeContext, s: &mut FloodState, io: &mut RoundIo<'_>) -> std::result::Result<Activity, String> {
        if !ctx.in_view {
            return Ok(Activity::Halt);
        }
        if io.round() == 0 {
            let starts = self.initiators.as_ref().is_none_or(|f| f[ctx.index]);
            if starts {
                self.adopt(ctx, s, io, (ctx.id, 0, ctx.id), None);
                self.try_finish(ctx, s, io);
            }
            return Ok(Activity::Halt);
        }
        let inbox: Vec<(usize, u64, u64, u32)> = io
            .inbox()
            .iter()
            .map(|(p, m)| {
                let mut r = m.reader();
                let tag = r.uint(2)?;
                let leader = r.uint(ctx.id_bits)?;
                let value = r.uint(width_for(ctx.n))? as u32;
                Ok((*p, tag, leader, value))
            })
            .collect::<std::result::Result<_, String>>()?;

        // Best offer this round, then settle the remaining messages against it.
        let best = inbox
            .iter()
            .filter(|m| m.1 == OFFER && ctx.ports[m.0].edge_in_view)
            .map(|&(p, _, l, d)| ((l, d + 1, ctx.ports[p].neighbor_id), p))
            .min();
        if let Some((key, port)) = best {
            if s.leader.is_none_or(|cur| key < cur) {
                self.adopt(ctx, s, io, key, Some(port));
            }
        }
        let Some((leader, _, _)) = s.leader else { return Ok(Activity::Halt) };
        for &(p, tag, l, value) in &inbox {
            if l != leader || !ctx.ports[p].edge_in_view {
                continue;
            }
            match tag {
                OFFER if Some(p) != s.parent => s.pending[p] = false,
                DONE if s.pending[p] && !s.reported => {
                    s.pending[p] = false;
                    s.children.push(p);
                    s.sub_height = s.sub_height.max(value);
                }
                FINAL if Some(p) == s.parent && s.reported => {
                    s.height = Some(value);
                    for &c in &s.children {
                        io.send(c, Self::msg(ctx, FINAL, leader, value));
                    }
                }
                _ => {}
            }
        }
        self.try_finish(ctx, s, io);
        Ok(Activity::Halt)
    }

    fn output(&self, _: &NodeContext, s: FloodState) -> Option<TreeLinks> {
        let (root_id, depth, _) = s.leader?;
        let mut children = s.children;
        children.sort_unstable();
        Some(TreeLinks { root_id, parent: s.parent, children, depth, height: s.height? })
    }
}

/// Elects the minimum-ID node of every view component and builds a BFS tree
/// rooted there. Communication uses view edges only.
pub fn elect_leader_and_bfs(view: &SubgraphView<'_>, cfg: &RunConfig) -> Result<(BfsForest, RoundStats)> {
    let (links, stats) = run(&FloodBfs { initiators: None }, view, cfg)?;
    Ok((BfsForest { links }, stats.labeled("leader-bfs")))
}

/// BFS trees grown from the flagged initiators inside the view (one per
/// component that contains an initiator; the smallest initiator ID wins).
pub fn bfs_from(view: &SubgraphView<'_>, initiators: Vec<bool>, cfg: &RunConfig) -> Result<(BfsForest, RoundStats)> {
    let (links, stats) = run(&FloodBfs { initiators: Some(initiators) }, view, cfg)?;
    Ok((BfsForest { links }, stats.labeled("bfs")))
}
