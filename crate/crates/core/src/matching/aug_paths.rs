//! Maximal sets of vertex-disjoint shortest augmenting paths.
//!
//! After an alternating BFS to depth `d`, iterations of period `T = 4·d·s`
//! (`s` = frames per message) run four sweeps over the level DAG:
//!
//! * `FWD`: live free A-nodes flood forward; a node takes part in the
//!   iteration only if reached.
//! * `CLAIM`: reached free B-nodes at level `d` send `(priority, id)` keys
//!   backward; every node keeps the smallest key and remembers the port it
//!   came from as its successor.
//! * `CONFIRM`: sources that got a claim push a token forward along
//!   successors; a node that gets several tokens keeps the smallest-ID sender
//!   as predecessor and forwards once.
//! * `COMMIT`: targets reached by a token send it back along predecessors.
//!   Every node on such a path is used and leaves the DAG.
//!
//! A message is only accepted when it arrives at the time its sweep reaches
//! the receiver's level, which filters out edges that are not DAG arcs. A
//! source that gets no claim has no live path left and stops for good; the
//! phase ends when the network goes quiet.

use crate::error::{Error, Result};
use crate::graph::{Matching, Side, SubgraphView};
use crate::matching::Priorities;
use crate::primitives::alternating::{alternating_bfs, partner_ports};
use crate::runtime::{frames, run, Activity, BitWriter, NodeContext, NodeProgram, Payload, RoundIo, RoundStats, RunConfig};

use rand::Rng;

const FWD: u64 = 0;
const CLAIM: u64 = 1;
const CONFIRM: u64 = 2;
const COMMIT: u64 = 3;

struct PathSweep<'a> {
    level: &'a [Option<u32>],
    partner_port: &'a [Option<usize>],
    d: u64,
    priorities: Priorities,
}

#[derive(Default)]
struct SweepState {
    finished: bool,
    used: bool,
    t0: Option<u64>,
    key: Option<(u64, u64)>,
    succ: Option<usize>,
    claim_t0: Option<u64>,
    pred: Option<usize>,
    confirm_t0: Option<u64>,
}

/// `(used, predecessor port, successor port)` per node.
type SweepOutput = (bool, Option<usize>, Option<usize>);

impl PathSweep<'_> {
    fn prio_bits(&self, ctx: &NodeContext) -> u32 {
        match self.priorities {
            Priorities::Random => ctx.id_bits,
            Priorities::Ids => 0,
        }
    }

    fn slot(&self, ctx: &NodeContext) -> u64 {
        frames((2 + self.prio_bits(ctx) + ctx.id_bits) as u64, ctx.bandwidth)
    }

    fn msg(&self, ctx: &NodeContext, tag: u64, key: (u64, u64)) -> Payload {
        BitWriter::new()
            .uint(tag, 2)
            .uint(key.0, self.prio_bits(ctx))
            .uint(key.1, ctx.id_bits)
            .finish()
    }

    /// Iteration start implied by receiving a message at `round` whose sweep
    /// reaches this node at `offset` slots into the iteration.
    fn iteration_of(&self, round: u64, offset: u64, slot: u64) -> Option<u64> {
        let period = 4 * self.d * slot;
        let off = offset * slot;
        (round >= off && (round - off).is_multiple_of(period)).then(|| round - off)
    }

    fn start_iteration(&self, ctx: &NodeContext, s: &mut SweepState, io: &mut RoundIo<'_>, t0: u64) {
        s.t0 = Some(t0);
        for p in ctx.view_ports() {
            io.send(p, self.msg(ctx, FWD, (0, 0)));
        }
    }
}

impl NodeProgram for PathSweep<'_> {
    type State = SweepState;
    type Output = SweepOutput;

    fn init(&self, _: &NodeContext) -> SweepState {
        SweepState::default()
    }

    fn step(&self, ctx: &NodeContext, s: &mut SweepState, io: &mut RoundIo<'_>) -> std::result::Result<Activity, String> {
        let v = ctx.index;
        let Some(level) = self.level[v].map(u64::from) else { return Ok(Activity::Halt) };
        if !ctx.in_view || s.finished || s.used || level > self.d {
            return Ok(Activity::Halt);
        }
        let d = self.d;
        let slot = self.slot(ctx);
        let period = 4 * d * slot;
        let r = io.round();
        let partner = self.partner_port[v];
        let is_source = level == 0;
        let is_target = level == d && ctx.side == Side::B && partner.is_none();

        let mut fwd = false;
        let mut claims: Vec<(usize, (u64, u64))> = Vec::new();
        let mut confirms: Vec<usize> = Vec::new();
        let mut commit = false;
        for (p, m) in io.inbox() {
            let mut rd = m.reader();
            let tag = rd.uint(2)?;
            let key = (rd.uint(self.prio_bits(ctx))?, rd.uint(ctx.id_bits)?);
            match tag {
                FWD if !is_source && self.iteration_of(r, level, slot).is_some() => fwd = true,
                CLAIM if self.iteration_of(r, 2 * d - level, slot).is_some_and(|t| s.t0 == Some(t)) => {
                    claims.push((*p, key));
                }
                CONFIRM if self.iteration_of(r, 2 * d + level, slot).is_some_and(|t| s.claim_t0 == Some(t)) => {
                    confirms.push(*p);
                }
                COMMIT if self.iteration_of(r, 4 * d - level, slot).is_some_and(|t| s.confirm_t0 == Some(t)) => {
                    commit = true;
                }
                _ => {}
            }
        }

        if is_source && r == 0 {
            self.start_iteration(ctx, s, io, 0);
            return Ok(Activity::Halt);
        }

        if commit {
            s.used = true;
            if !is_source {
                io.send(s.pred.ok_or("commit without predecessor")?, self.msg(ctx, COMMIT, (0, 0)));
            }
            return Ok(Activity::Halt);
        }

        if is_source {
            if let Some(t0) = s.t0 {
                if r == t0 + period && s.claim_t0 == Some(t0) {
                    self.start_iteration(ctx, s, io, r);
                    return Ok(Activity::Halt);
                }
            }
        }

        if fwd {
            let t0 = r - level * slot;
            s.t0 = Some(t0);
            if is_target {
                let prio = match self.priorities {
                    Priorities::Random => io.rng().random_range(0..1u64 << ctx.id_bits),
                    Priorities::Ids => 0,
                };
                for p in ctx.view_ports() {
                    io.send(p, self.msg(ctx, CLAIM, (prio, ctx.id)));
                }
                s.key = Some((prio, ctx.id));
                s.claim_t0 = Some(t0);
            } else if level < d {
                match ctx.side {
                    Side::A => {
                        for p in ctx.view_ports().filter(|&p| Some(p) != partner) {
                            io.send(p, self.msg(ctx, FWD, (0, 0)));
                        }
                    }
                    Side::B => {
                        if let Some(p) = partner {
                            io.send(p, self.msg(ctx, FWD, (0, 0)));
                        }
                    }
                }
            }
        }

        if let Some(&(_, best)) = claims.iter().min_by_key(|(p, k)| (*k, *p)) {
            let t0 = s.t0.expect("claims are only accepted after a forward sweep");
            let succ = claims.iter().filter(|(_, k)| *k == best).map(|(p, _)| *p).min();
            s.key = Some(best);
            s.succ = succ;
            s.claim_t0 = Some(t0);
            if is_source {
                s.confirm_t0 = Some(t0);
                io.send(succ.expect("non-empty"), self.msg(ctx, CONFIRM, best));
                return Ok(Activity::SleepUntil(t0 + period));
            }
            match ctx.side {
                Side::A => io.send(partner.ok_or("matched A-node expected")?, self.msg(ctx, CLAIM, best)),
                Side::B => {
                    for p in ctx.view_ports().filter(|&p| Some(p) != partner) {
                        io.send(p, self.msg(ctx, CLAIM, best));
                    }
                }
            }
        }

        if let Some(&pred) = confirms.iter().min() {
            let t0 = s.claim_t0.expect("confirms are only accepted after a claim");
            s.pred = Some(pred);
            s.confirm_t0 = Some(t0);
            if is_target {
                s.used = true;
                io.send(pred, self.msg(ctx, COMMIT, (0, 0)));
                return Ok(Activity::Halt);
            }
            io.send(s.succ.ok_or("confirm without successor")?, self.msg(ctx, CONFIRM, s.key.unwrap_or((0, 0))));
        }

        if let (true, Some(t0)) = (is_source, s.t0) {
            if r >= t0 + 2 * d * slot && s.claim_t0 != Some(t0) {
                // No claim reached this source: no live path starts here any more.
                s.finished = true;
            }
        }
        Ok(Activity::Halt)
    }

    fn output(&self, _: &NodeContext, s: SweepState) -> SweepOutput {
        if s.used {
            (true, s.pred, s.succ)
        } else {
            (false, None, None)
        }
    }
}

/// Finds a maximal set of vertex-disjoint augmenting paths of length `d`,
/// assuming no shorter augmenting path exists. Paths are returned as node
/// sequences from a free A-node to a free B-node.
pub fn find_disjoint_aug_paths(
    view: &SubgraphView<'_>,
    m: &Matching,
    d: u32,
    cfg: &RunConfig,
    priorities: Priorities,
) -> Result<(Vec<Vec<usize>>, RoundStats)> {
    if d.is_multiple_of(2) {
        return Err(Error::InvalidParam(format!("augmenting path length {d} must be odd")));
    }
    let g = view.graph();
    let (layers, mut stats) = alternating_bfs(view, m, d, cfg)?;
    if let Some(&(_, found)) = layers
        .free_b_witnesses(view, g.sides(), m)
        .iter()
        .filter(|(_, l)| *l < d)
        .min_by_key(|(_, l)| *l)
    {
        return Err(Error::ShorterPathExists { found, requested: d });
    }
    let ports = partner_ports(view, m);
    let program = PathSweep { level: &layers.level, partner_port: &ports, d: d as u64, priorities };
    let (out, sweep_stats) = run(&program, view, cfg)?;
    stats.then(sweep_stats.labeled("path-sweeps"));

    let mut paths = Vec::new();
    for v in view.nodes() {
        if layers.level[v] != Some(0) || !out[v].0 {
            continue;
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = out[cur].2 {
            cur = g.neighbors(cur)[p].neighbor;
            path.push(cur);
        }
        if path.len() != d as usize + 1 {
            return Err(Error::Internal(format!("committed path of {} nodes, expected {}", path.len(), d + 1)));
        }
        paths.push(path);
    }
    let mut seen = vec![false; g.n()];
    for v in paths.iter().flatten() {
        if std::mem::replace(&mut seen[*v], true) {
            return Err(Error::Internal("committed paths overlap".into()));
        }
    }
    if (0..g.n()).any(|v| out[v].0 != seen[v]) {
        return Err(Error::Internal("used node outside every committed path".into()));
    }
    Ok((paths, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    fn cfg(n: usize) -> RunConfig {
        RunConfig::for_n(n, 11)
    }

    #[test]
    fn single_free_edge() {
        let g = generate(&GraphFamily::DisjointEdges { m: 1 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let (paths, _) = find_disjoint_aug_paths(&view, &Matching::empty(2), 1, &cfg(2), Priorities::Random).unwrap();
        assert_eq!(paths, vec![vec![0, 1]]);
    }

    #[test]
    fn two_free_edges() {
        let g = generate(&GraphFamily::DisjointEdges { m: 2 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let (paths, _) = find_disjoint_aug_paths(&view, &Matching::empty(4), 1, &cfg(4), Priorities::Ids).unwrap();
        assert_eq!(paths, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn p4_length_three() {
        let g = generate(&GraphFamily::Path { n: 4 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        let m = Matching::from_edges(&view, &[(1, 2)]).unwrap();
        let (paths, _) = find_disjoint_aug_paths(&view, &m, 3, &cfg(4), Priorities::Random).unwrap();
        assert_eq!(paths, vec![vec![0, 1, 2, 3]]);
        let err = find_disjoint_aug_paths(&view, &m, 5, &cfg(4), Priorities::Random).unwrap_err();
        assert_eq!(err, Error::ShorterPathExists { found: 3, requested: 5 });
    }

    #[test]
    fn star_yields_one_path() {
        let g = generate(&GraphFamily::Complete { a: 1, b: 5 }, 0).unwrap();
        let view = SubgraphView::full(&g);
        for prio in [Priorities::Random, Priorities::Ids] {
            let (paths, _) = find_disjoint_aug_paths(&view, &Matching::empty(6), 1, &cfg(6), prio).unwrap();
            assert_eq!(paths.len(), 1);
        }
    }
}
