//! Synchronous round simulator with per-edge bandwidth.
//!
//! Round 0 is an initial step with an empty inbox. In every later round each
//! directed edge transmits one frame (at most `bandwidth` bits) from its FIFO
//! queue; a message whose last frame arrives is handed to the receiver in the
//! same round. A node steps in round `r` when it asked to continue, when its
//! wake-up round is `r`, or when it has mail.

mod payload;

use std::collections::{BTreeMap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use payload::{clog2, frames, width_for, width_for_big, BitReader, BitWriter, Payload};

use crate::error::{Error, Result};
use crate::graph::{Side, SubgraphView};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Activity {
    Continue,
    SleepUntil(u64),
    Halt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PortInfo {
    pub neighbor_id: u64,
    pub edge_in_view: bool,
}

/// Everything a node may know about itself and the network.
#[derive(Clone, Debug)]
pub struct NodeContext {
    pub index: usize,
    pub id: u64,
    pub side: Side,
    pub in_view: bool,
    pub ports: Vec<PortInfo>,
    pub n: u64,
    pub bandwidth: u32,
    pub id_bits: u32,
}

impl NodeContext {
    pub fn degree(&self) -> usize {
        self.ports.len()
    }

    pub fn view_ports(&self) -> impl Iterator<Item = usize> + '_ {
        self.ports.iter().enumerate().filter(|(_, p)| p.edge_in_view).map(|(i, _)| i)
    }

    pub fn port_to(&self, neighbor_id: u64) -> Option<usize> {
        self.ports.binary_search_by_key(&neighbor_id, |p| p.neighbor_id).ok()
    }
}

/// Per-node random stream keyed by (seed, node id, round); created on first use.
pub struct NodeRng {
    seed: u64,
    stream: u64,
    round: u64,
    inner: Option<ChaCha8Rng>,
}

impl NodeRng {
    pub fn new(seed: u64, stream: u64, round: u64) -> Self {
        Self { seed, stream, round, inner: None }
    }

    pub fn get(&mut self) -> &mut ChaCha8Rng {
        self.inner.get_or_insert_with(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(self.stream);
            rng.set_word_pos((self.round as u128) << 32);
            rng
        })
    }
}

pub struct RoundIo<'a> {
    round: u64,
    inbox: &'a [(usize, Payload)],
    outbox: &'a mut Vec<(usize, Payload)>,
    rng: NodeRng,
}

impl RoundIo<'_> {
    pub fn round(&self) -> u64 {
        self.round
    }

    /// Messages completed this round as `(port, payload)`, ordered by port.
    pub fn inbox(&self) -> &[(usize, Payload)] {
        self.inbox
    }

    pub fn send(&mut self, port: usize, payload: Payload) {
        self.outbox.push((port, payload));
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        self.rng.get()
    }
}

pub trait NodeProgram {
    type State;
    type Output;

    fn init(&self, ctx: &NodeContext) -> Self::State;

    fn step(&self, ctx: &NodeContext, state: &mut Self::State, io: &mut RoundIo<'_>) -> std::result::Result<Activity, String>;

    fn output(&self, ctx: &NodeContext, state: Self::State) -> Self::Output;
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundStats {
    pub rounds: u64,
    pub max_message_bits: u64,
    pub total_bits: u64,
    pub fragmentation_rounds: u64,
    pub per_phase: Vec<(String, u64)>,
}

impl RoundStats {
    /// Replaces the phase breakdown with one entry covering all rounds.
    pub fn labeled(mut self, label: &str) -> Self {
        self.per_phase = vec![(label.to_string(), self.rounds)];
        self
    }

    /// Sequential composition.
    pub fn then(&mut self, other: RoundStats) {
        self.rounds += other.rounds;
        self.max_message_bits = self.max_message_bits.max(other.max_message_bits);
        self.total_bits += other.total_bits;
        self.fragmentation_rounds += other.fragmentation_rounds;
        self.per_phase.extend(other.per_phase);
    }

    /// Runs executed side by side, multiplexed over `congestion` slots per round.
    pub fn parallel(congestion: u64, parts: impl IntoIterator<Item = RoundStats>, label: &str) -> RoundStats {
        let mut out = RoundStats::default();
        for p in parts {
            out.rounds = out.rounds.max(p.rounds);
            out.fragmentation_rounds = out.fragmentation_rounds.max(p.fragmentation_rounds);
            out.max_message_bits = out.max_message_bits.max(p.max_message_bits);
            out.total_bits += p.total_bits;
        }
        out.rounds *= congestion.max(1);
        out.fragmentation_rounds *= congestion.max(1);
        out.labeled(label)
    }

    pub fn phase_rounds(&self, label: &str) -> u64 {
        self.per_phase.iter().filter(|(l, _)| l == label).map(|(_, r)| r).sum()
    }
}

/// `max(4·ceil(log2 n), ceil(log2 n) + 4)` bits.
pub fn default_bandwidth(n: usize) -> u32 {
    let l = clog2(n as u64);
    (4 * l).max(l + 4)
}

pub const DEFAULT_ROUND_CAP: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub bandwidth: u32,
    pub round_cap: u64,
    /// Network size announced to nodes; defaults to the graph's node count.
    pub n: Option<u64>,
}

impl RunConfig {
    pub fn new(seed: u64, bandwidth: u32) -> Self {
        Self { seed, bandwidth, round_cap: DEFAULT_ROUND_CAP, n: None }
    }

    pub fn for_n(n: usize, seed: u64) -> Self {
        Self::new(seed, default_bandwidth(n))
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn with_cap(&self, round_cap: u64) -> Self {
        Self { round_cap, ..self.clone() }
    }

    pub fn with_n(&self, n: u64) -> Self {
        Self { n: Some(n), ..self.clone() }
    }
}

struct InFlight {
    payload: Payload,
    sent_bits: u64,
}

/// Executes `program` on every node of the view's base graph. Programs may
/// use any base-graph edge; `edge_in_view` only informs them.
pub fn run<P: NodeProgram>(
    program: &P,
    view: &SubgraphView<'_>,
    cfg: &RunConfig,
) -> Result<(Vec<P::Output>, RoundStats)> {
    let g = view.graph();
    let n = g.n();
    let n_known = cfg.n.unwrap_or(n as u64).max(n as u64);
    if (cfg.bandwidth as u64) < clog2(n_known) as u64 + 4 {
        return Err(Error::InvalidParam(format!(
            "bandwidth {} below ceil(log2 n) + 4 = {}",
            cfg.bandwidth,
            clog2(n_known) + 4
        )));
    }
    if cfg.round_cap == 0 {
        return Err(Error::InvalidParam("round cap must be positive".into()));
    }
    let max_id = g.ids().last().copied().unwrap_or(0);
    let id_bits = width_for(max_id.max(n_known.saturating_sub(1)));
    let ctxs: Vec<NodeContext> = (0..n)
        .map(|v| NodeContext {
            index: v,
            id: g.id(v),
            side: g.side(v),
            in_view: view.contains_node(v),
            ports: g
                .neighbors(v)
                .iter()
                .map(|p| PortInfo { neighbor_id: g.id(p.neighbor), edge_in_view: view.contains_edge(p.edge) })
                .collect(),
            n: n_known,
            bandwidth: cfg.bandwidth,
            id_bits,
        })
        .collect();

    // Directed edge (u, port) has flat index offset[u] + port.
    let mut offset = vec![0usize; n + 1];
    for v in 0..n {
        offset[v + 1] = offset[v] + g.degree(v);
    }
    let mut target = vec![(0usize, 0usize); offset[n]];
    for u in 0..n {
        for (p, port) in g.neighbors(u).iter().enumerate() {
            let back = g.port_of(port.neighbor, u).expect("adjacency is symmetric");
            target[offset[u] + p] = (port.neighbor, back);
        }
    }

    let bw = cfg.bandwidth as u64;
    let mut stats = RoundStats::default();
    let mut states: Vec<P::State> = ctxs.iter().map(|c| program.init(c)).collect();
    let mut activity = vec![Activity::Continue; n];
    let mut queues: Vec<VecDeque<InFlight>> = (0..offset[n]).map(|_| VecDeque::new()).collect();
    let mut busy: Vec<usize> = Vec::new();
    let mut inbox: Vec<Vec<(usize, Payload)>> = vec![Vec::new(); n];
    let mut sleepers: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let mut continuing: Vec<usize> = Vec::new();
    let mut outbox: Vec<(usize, Payload)> = Vec::new();

    let mut round = 0u64;
    let mut to_step: Vec<usize> = (0..n).collect();
    loop {
        for &v in &to_step {
            let mail = std::mem::take(&mut inbox[v]);
            let mut io = RoundIo {
                round,
                inbox: &mail,
                outbox: &mut outbox,
                rng: NodeRng::new(cfg.seed, ctxs[v].id, round),
            };
            let act = program.step(&ctxs[v], &mut states[v], &mut io).map_err(|msg| Error::ProgramFault {
                node: ctxs[v].id,
                round,
                msg,
            })?;
            for (port, payload) in outbox.drain(..) {
                if port >= ctxs[v].degree() {
                    return Err(Error::ProgramFault {
                        node: ctxs[v].id,
                        round,
                        msg: format!("send on missing port {port}"),
                    });
                }
                let de = offset[v] + port;
                if queues[de].is_empty() {
                    busy.push(de);
                }
                queues[de].push_back(InFlight { payload, sent_bits: 0 });
            }
            activity[v] = act;
            match act {
                Activity::Continue => continuing.push(v),
                Activity::SleepUntil(w) if w <= round + 1 => continuing.push(v),
                Activity::SleepUntil(w) => sleepers.entry(w).or_default().push(v),
                Activity::Halt => {}
            }
        }
        stats.rounds = round;

        let next = if !busy.is_empty() || !continuing.is_empty() {
            round + 1
        } else {
            loop {
                let Some((&w, nodes)) = sleepers.iter().next() else { break None };
                if nodes.iter().any(|&v| activity[v] == Activity::SleepUntil(w)) {
                    break Some(w);
                }
                sleepers.remove(&w);
            }
            .map_or(u64::MAX, |w| w)
        };
        if next == u64::MAX {
            break;
        }
        if next > cfg.round_cap {
            return Err(Error::RoundCapExceeded { cap: cfg.round_cap });
        }
        round = next;

        busy.sort_unstable();
        let mut fragmented = false;
        let mut receivers = Vec::new();
        busy.retain(|&de| {
            let q = &mut queues[de];
            let msg = q.front_mut().expect("busy queues are non-empty");
            let total = msg.payload.len_bits() as u64;
            let frame = (total - msg.sent_bits).min(bw);
            msg.sent_bits += frame;
            stats.total_bits += frame;
            stats.max_message_bits = stats.max_message_bits.max(frame);
            if msg.sent_bits < total {
                fragmented = true;
            } else {
                let done = q.pop_front().expect("front exists");
                let (v, back) = target[de];
                inbox[v].push((back, done.payload));
                receivers.push(v);
            }
            !q.is_empty()
        });
        if fragmented {
            stats.fragmentation_rounds += 1;
        }

        to_step = std::mem::take(&mut continuing);
        if let Some(due) = sleepers.remove(&round) {
            to_step.extend(due.into_iter().filter(|&v| activity[v] == Activity::SleepUntil(round)));
        }
        to_step.extend(receivers);
        to_step.sort_unstable();
        to_step.dedup();
        for &v in &to_step {
            inbox[v].sort_by_key(|(port, _)| *port);
        }
    }

    let outputs = states
        .into_iter()
        .zip(&ctxs)
        .map(|(s, c)| program.output(c, s))
        .collect();
    Ok((outputs, stats))
}
