//! Pipelined convergecast of `k` values per node followed by a broadcast of
//! the `k` results. One value travels per tree edge per message slot.

use crate::error::{Error, Result};
use crate::graph::SubgraphView;
use crate::primitives::bfs::{BfsForest, TreeLinks};
use crate::runtime::{frames, run, Activity, BitWriter, NodeContext, NodeProgram, RoundIo, RoundStats, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AggOp {
    Sum,
    Min,
    Max,
}

impl AggOp {
    pub fn apply(self, a: u64, b: u64) -> Option<u64> {
        match self {
            AggOp::Sum => a.checked_add(b),
            AggOp::Min => Some(a.min(b)),
            AggOp::Max => Some(a.max(b)),
        }
    }
}

struct Aggregate<'a> {
    links: &'a [Option<TreeLinks>],
    values: &'a [Vec<u64>],
    op: AggOp,
    k: usize,
    width: u32,
}

struct AggState {
    acc: Vec<u64>,
    got: Vec<usize>,
    sent_up: usize,
    result: Vec<u64>,
    sent_down: usize,
}

impl NodeProgram for Aggregate<'_> {
    type State = AggState;
    type Output = Option<Vec<u64>>;

    fn init(&self, ctx: &NodeContext) -> AggState {
        let children = self.links[ctx.index].as_ref().map_or(0, |l| l.children.len());
        AggState {
            acc: self.values[ctx.index].clone(),
            got: vec![0; children],
            sent_up: 0,
            result: Vec::new(),
            sent_down: 0,
        }
    }

    fn step(&self, ctx: &NodeContext, s: &mut AggState, io: &mut RoundIo<'_>) -> std::result::Result<Activity, String> {
        let Some(links) = &self.links[ctx.index] else { return Ok(Activity::Halt) };
        if s.acc.len() != self.k {
            return Err(format!("expected {} values, got {}", self.k, s.acc.len()));
        }
        for (port, msg) in io.inbox() {
            let value = msg.reader().uint(self.width)?;
            if Some(*port) == links.parent {
                s.result.push(value);
            } else if let Some(c) = links.children.iter().position(|c| c == port) {
                let i = s.got[c];
                if i >= self.k {
                    return Err("child sent too many values".into());
                }
                s.acc[i] = self.op.apply(s.acc[i], value).ok_or("aggregate overflow")?;
                s.got[c] += 1;
            }
        }
        let ready = s.got.iter().copied().min().unwrap_or(self.k);
        let fits = |v: u64| self.width >= 64 || v >> self.width == 0;
        match links.parent {
            Some(parent) if s.sent_up < ready => {
                let v = s.acc[s.sent_up];
                if !fits(v) {
                    return Err(format!("partial aggregate {v} exceeds {} bits", self.width));
                }
                io.send(parent, BitWriter::new().uint(v, self.width).finish());
                s.sent_up += 1;
            }
            None if ready == self.k && s.result.is_empty() => {
                if let Some(&v) = s.acc.iter().find(|&&v| !fits(v)) {
                    return Err(format!("aggregate {v} exceeds {} bits", self.width));
                }
                s.result = s.acc.clone();
            }
            _ => {}
        }
        if s.sent_down < s.result.len() && !links.children.is_empty() {
            let v = s.result[s.sent_down];
            for &c in &links.children {
                io.send(c, BitWriter::new().uint(v, self.width).finish());
            }
            s.sent_down += 1;
        }
        let more_up = links.parent.is_some() && s.sent_up < ready;
        let more_down = !links.children.is_empty() && s.sent_down < s.result.len();
        if more_up || more_down {
            Ok(Activity::SleepUntil(io.round() + frames(self.width as u64, ctx.bandwidth)))
        } else {
            Ok(Activity::Halt)
        }
    }

    fn output(&self, _: &NodeContext, s: AggState) -> Option<Vec<u64>> {
        (s.result.len() == self.k).then_some(s.result)
    }
}

/// Every tree node learns the `k` componentwise aggregates of its tree.
/// `width` must hold every partial and final aggregate.
pub fn pipelined_aggregate(
    view: &SubgraphView<'_>,
    forest: &BfsForest,
    values: &[Vec<u64>],
    op: AggOp,
    width: u32,
    cfg: &RunConfig,
) -> Result<(Vec<Option<Vec<u64>>>, RoundStats)> {
    let n = view.graph().n();
    if values.len() != n || forest.links.len() != n {
        return Err(Error::InvalidParam("aggregate inputs do not match the graph".into()));
    }
    let k = forest
        .links
        .iter()
        .zip(values)
        .find(|(l, _)| l.is_some())
        .map_or(0, |(_, v)| v.len());
    let program = Aggregate { links: &forest.links, values, op, k, width };
    let (out, stats) = run(&program, view, cfg)?;
    Ok((out, stats.labeled("aggregate")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, BipartiteGraph, GraphFamily};
    use crate::primitives::bfs::elect_leader_and_bfs;

    fn setup(g: &BipartiteGraph) -> (SubgraphView<'_>, BfsForest, RunConfig) {
        let view = SubgraphView::full(g);
        let cfg = RunConfig::for_n(g.n(), 0);
        let (f, _) = elect_leader_and_bfs(&view, &cfg).unwrap();
        (view, f, cfg)
    }

    #[test]
    fn sum_on_path() {
        let g = generate(&GraphFamily::Path { n: 5 }, 0).unwrap();
        let (view, f, cfg) = setup(&g);
        let (out, stats) = pipelined_aggregate(&view, &f, &vec![vec![1]; 5], AggOp::Sum, 8, &cfg).unwrap();
        assert!(out.iter().all(|o| o.as_deref() == Some(&[5][..])));
        assert!(stats.rounds <= 2 * (4 + 1), "rounds {}", stats.rounds);
    }

    #[test]
    fn star_sums_three_values() {
        let g = generate(&GraphFamily::Complete { a: 1, b: 4 }, 0).unwrap();
        let (view, f, cfg) = setup(&g);
        let mut values = vec![vec![1, 0, 2]; 5];
        values[0] = vec![0, 0, 0];
        let (out, _) = pipelined_aggregate(&view, &f, &values, AggOp::Sum, 8, &cfg).unwrap();
        assert_eq!(out[3], Some(vec![4, 0, 8]));
    }

    #[test]
    fn min_is_idempotent() {
        let g = generate(&GraphFamily::EvenCycle { n: 6 }, 0).unwrap();
        let (view, f, cfg) = setup(&g);
        let (out, _) = pipelined_aggregate(&view, &f, &vec![vec![7, 3]; 6], AggOp::Min, 4, &cfg).unwrap();
        assert!(out.iter().all(|o| o.as_deref() == Some(&[7, 3][..])));
    }

    #[test]
    fn components_aggregate_separately() {
        let g = generate(&GraphFamily::DisjointEdges { m: 3 }, 0).unwrap();
        let (view, f, cfg) = setup(&g);
        let values: Vec<Vec<u64>> = (0..6).map(|v| vec![v as u64]).collect();
        let (out, _) = pipelined_aggregate(&view, &f, &values, AggOp::Max, 4, &cfg).unwrap();
        assert_eq!(out, vec![Some(vec![1]), Some(vec![1]), Some(vec![3]), Some(vec![3]), Some(vec![5]), Some(vec![5])]);
    }

    #[test]
    fn overflow_is_a_fault() {
        let g = generate(&GraphFamily::Path { n: 5 }, 0).unwrap();
        let (view, f, cfg) = setup(&g);
        let err = pipelined_aggregate(&view, &f, &vec![vec![3]; 5], AggOp::Sum, 2, &cfg).unwrap_err();
        assert!(matches!(err, Error::ProgramFault { .. }));
    }
}
