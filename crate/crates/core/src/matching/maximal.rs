//! Proposal-based maximal matching.
//!
//! Even rounds: every free A-node with a free in-view neighbor proposes to one
//! of them (uniformly at random, or the smallest ID in the deterministic
//! variant). Odd rounds: every free B-node that received proposals accepts
//! the smallest-ID proposer. Newly matched nodes tell their other neighbors
//! with `TAKEN`, so candidate sets only shrink.

use rand::Rng;

use crate::error::Result;
use crate::graph::{Matching, Side, SubgraphView};
use crate::runtime::{clog2, run, Activity, BitWriter, NodeContext, NodeProgram, Payload, RoundIo, RoundStats, RunConfig};

const PROPOSE: u64 = 0;
const ACCEPT: u64 = 1;
const TAKEN: u64 = 2;

pub(crate) struct MaximalMatching {
    pub randomized: bool,
}

pub(crate) struct MmState {
    free_nbr: Vec<bool>,
    partner: Option<usize>,
}

fn tag(t: u64) -> Payload {
    BitWriter::new().uint(t, 2).finish()
}

impl MaximalMatching {
    fn announce(ctx: &NodeContext, s: &MmState, io: &mut RoundIo<'_>) {
        for p in ctx.view_ports() {
            if Some(p) != s.partner && s.free_nbr[p] {
                io.send(p, tag(TAKEN));
            }
        }
    }
}

impl NodeProgram for MaximalMatching {
    type State = MmState;
    type Output = Option<usize>;

    fn init(&self, ctx: &NodeContext) -> MmState {
        MmState { free_nbr: ctx.ports.iter().map(|p| p.edge_in_view).collect(), partner: None }
    }

    fn step(&self, ctx: &NodeContext, s: &mut MmState, io: &mut RoundIo<'_>) -> std::result::Result<Activity, String> {
        if !ctx.in_view || s.partner.is_some() {
            return Ok(Activity::Halt);
        }
        let mut proposals = Vec::new();
        let mut accepted = None;
        for (p, msg) in io.inbox() {
            match msg.reader().uint(2)? {
                PROPOSE => proposals.push(*p),
                ACCEPT => accepted = Some(*p),
                TAKEN => s.free_nbr[*p] = false,
                other => return Err(format!("unknown tag {other}")),
            }
        }
        let a_turn = io.round().is_multiple_of(2);
        match ctx.side {
            Side::A => {
                if let Some(p) = accepted {
                    s.partner = Some(p);
                    Self::announce(ctx, s, io);
                    return Ok(Activity::Halt);
                }
                let candidates: Vec<usize> = (0..ctx.degree()).filter(|&p| s.free_nbr[p]).collect();
                if candidates.is_empty() {
                    return Ok(Activity::Halt);
                }
                if a_turn {
                    let pick = if self.randomized {
                        candidates[io.rng().random_range(0..candidates.len())]
                    } else {
                        candidates[0]
                    };
                    io.send(pick, tag(PROPOSE));
                }
                Ok(Activity::Continue)
            }
            Side::B => {
                if !a_turn {
                    // Ports are ordered by neighbor ID, so the first proposer has the smallest ID.
                    if let Some(&p) = proposals.iter().min() {
                        s.partner = Some(p);
                        io.send(p, tag(ACCEPT));
                        Self::announce(ctx, s, io);
                        return Ok(Activity::Halt);
                    }
                }
                if s.free_nbr.iter().any(|&f| f) {
                    Ok(Activity::Continue)
                } else {
                    Ok(Activity::Halt)
                }
            }
        }
    }

    fn output(&self, _: &NodeContext, s: MmState) -> Option<usize> {
        s.partner
    }
}

/// Round cap for the randomized variant: `2·(64·ceil(log2 n) + 64)`.
pub fn maximal_round_cap(n: usize, randomized: bool) -> u64 {
    if randomized {
        2 * (64 * clog2(n as u64) as u64 + 64)
    } else {
        2 * (n as u64 + 2)
    }
}

pub(crate) fn matching_from_ports(view: &SubgraphView<'_>, ports: &[Option<usize>]) -> Result<Matching> {
    let g = view.graph();
    let partner = ports
        .iter()
        .enumerate()
        .map(|(v, p)| p.map(|p| g.neighbors(v)[p].neighbor))
        .collect();
    Matching::from_partners(view, partner)
}

fn run_maximal(view: &SubgraphView<'_>, cfg: &RunConfig, randomized: bool) -> Result<(Matching, RoundStats)> {
    let cap = maximal_round_cap(view.graph().n(), randomized).min(cfg.round_cap);
    let (ports, stats) = run(&MaximalMatching { randomized }, view, &cfg.with_cap(cap))?;
    Ok((matching_from_ports(view, &ports)?, stats.labeled("maximal-matching")))
}

/// Randomized maximal matching of the view.
pub fn maximal_matching(view: &SubgraphView<'_>, cfg: &RunConfig) -> Result<(Matching, RoundStats)> {
    run_maximal(view, cfg, true)
}

/// Seed-independent variant: proposals go to the smallest free neighbor ID.
pub fn maximal_matching_deterministic(view: &SubgraphView<'_>, cfg: &RunConfig) -> Result<(Matching, RoundStats)> {
    run_maximal(view, cfg, false)
}
