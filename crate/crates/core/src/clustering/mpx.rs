//! Partition by exponentially shifted distances.
//!
//! Node `u` draws `δ_u ~ Exp(σ)` with `σ = λ/4` and every node `v` joins the
//! origin minimizing `dist(u, v) - δ_u`. Shifts are kept in fixed point with
//! `Q = n³` steps per unit. Origin `u` wakes at `R - δ_u` and floods
//! `(u, frac)`; a node adopts the first flood that reaches it, breaking ties
//! in the same slot by the fractional start and then by origin ID.

use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::graph::SubgraphView;
use crate::runtime::{frames, run, width_for, Activity, BitWriter, NodeContext, NodeProgram, RoundIo, RoundStats, RunConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpxPartition {
    /// Origin ID per node; `None` outside the view.
    pub origin: Vec<Option<u64>>,
    /// `δ_u · Q`, truncated.
    pub shift: Vec<u128>,
    pub q: u128,
    /// Shift cap `R`; larger draws are resampled.
    pub cap: u64,
}

/// `ceil(2 ln n / σ)`, at least 1.
pub fn shift_cap(n: u64, sigma: f64) -> u64 {
    ((2.0 * (n.max(2) as f64).ln() / sigma).ceil() as u64).max(1)
}

struct Mpx {
    sigma: f64,
    cap: u64,
    q: u128,
    frac_bits: u32,
    slot: u64,
}

#[derive(Default)]
struct MpxState {
    shift: u128,
    start: u64,
    frac: u128,
    origin: Option<u64>,
}

impl NodeProgram for Mpx {
    type State = MpxState;
    type Output = (Option<u64>, u128);

    fn init(&self, _: &NodeContext) -> MpxState {
        MpxState::default()
    }

    fn step(&self, ctx: &NodeContext, s: &mut MpxState, io: &mut RoundIo<'_>) -> std::result::Result<Activity, String> {
        if !ctx.in_view || s.origin.is_some() {
            return Ok(Activity::Halt);
        }
        let r = io.round();
        if r == 0 {
            let exp = Exp::new(self.sigma).map_err(|e| e.to_string())?;
            let shift = loop {
                let x: f64 = exp.sample(io.rng());
                if x < self.cap as f64 {
                    break ((x * self.q as f64) as u128).min(self.cap as u128 * self.q - 1);
                }
            };
            let offset = self.cap as u128 * self.q - shift;
            s.shift = shift;
            s.start = (offset / self.q) as u64;
            s.frac = offset % self.q;
        }
        let mut best: Option<(u128, u64)> = None;
        for (_, msg) in io.inbox() {
            let mut rd = msg.reader();
            let origin = rd.uint(ctx.id_bits)?;
            let frac = rd.uint(self.frac_bits)? as u128;
            best = Some(best.map_or((frac, origin), |b| b.min((frac, origin))));
        }
        if r == s.start * self.slot {
            let own = (s.frac, ctx.id);
            best = Some(best.map_or(own, |b| b.min(own)));
        }
        let Some((frac, origin)) = best else {
            return Ok(Activity::SleepUntil(s.start * self.slot));
        };
        s.origin = Some(origin);
        for p in ctx.view_ports() {
            io.send(p, BitWriter::new().uint(origin, ctx.id_bits).uint(frac as u64, self.frac_bits).finish());
        }
        Ok(Activity::Halt)
    }

    fn output(&self, _: &NodeContext, s: MpxState) -> (Option<u64>, u128) {
        (s.origin, s.shift)
    }
}

/// Assigns every in-view node to an origin with `σ = λ/4`.
pub fn mpx_partition(view: &SubgraphView<'_>, lambda: f64, cfg: &RunConfig) -> Result<(MpxPartition, RoundStats)> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParam(format!("lambda = {lambda} outside (0, 1]")));
    }
    let n_known = cfg.n.unwrap_or(0).max(view.graph().n() as u64).max(2);
    let sigma = lambda / 4.0;
    let cap = shift_cap(n_known, sigma);
    let q = (n_known as u128).pow(3);
    if q > u64::MAX as u128 {
        return Err(Error::InvalidParam(format!("n = {n_known} too large for shift precision")));
    }
    let frac_bits = width_for((q - 1) as u64);
    let max_id = view.graph().ids().last().copied().unwrap_or(0).max(n_known - 1);
    let slot = frames((width_for(max_id) + frac_bits) as u64, cfg.bandwidth);
    let program = Mpx { sigma, cap, q, frac_bits, slot };
    let (out, stats) = run(&program, view, cfg)?;
    let (origin, shift) = out.into_iter().unzip();
    Ok((MpxPartition { origin, shift, q, cap }, stats.labeled("mpx")))
}
