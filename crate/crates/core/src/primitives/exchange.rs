//! One-shot exchange of a fixed-width value with every in-view neighbor.

use crate::error::{Error, Result};
use crate::graph::SubgraphView;
use crate::runtime::{run, Activity, BitWriter, NodeContext, NodeProgram, RoundIo, RoundStats, RunConfig};

struct Exchange<'a> {
    values: &'a [u64],
    width: u32,
}

impl NodeProgram for Exchange<'_> {
    type State = Vec<Option<u64>>;
    type Output = Vec<Option<u64>>;

    fn init(&self, ctx: &NodeContext) -> Vec<Option<u64>> {
        vec![None; ctx.degree()]
    }

    fn step(&self, ctx: &NodeContext, heard: &mut Vec<Option<u64>>, io: &mut RoundIo<'_>) -> std::result::Result<Activity, String> {
        if !ctx.in_view {
            return Ok(Activity::Halt);
        }
        if io.round() == 0 {
            for p in ctx.view_ports() {
                io.send(p, BitWriter::new().uint(self.values[ctx.index], self.width).finish());
            }
        }
        for (p, msg) in io.inbox() {
            heard[*p] = Some(msg.reader().uint(self.width)?);
        }
        Ok(Activity::Halt)
    }

    fn output(&self, _: &NodeContext, heard: Vec<Option<u64>>) -> Vec<Option<u64>> {
        heard
    }
}

/// Per node and port, the value announced by the neighbor over an in-view edge.
pub fn exchange(
    view: &SubgraphView<'_>,
    values: &[u64],
    width: u32,
    cfg: &RunConfig,
) -> Result<(Vec<Vec<Option<u64>>>, RoundStats)> {
    if values.len() != view.graph().n() {
        return Err(Error::InvalidParam("one value per node expected".into()));
    }
    let (out, stats) = run(&Exchange { values, width }, view, cfg)?;
    Ok((out, stats.labeled("exchange")))
}
