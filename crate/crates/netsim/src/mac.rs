use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yagi_antenna::{
    AntennaLayout, AntennaModel, BeamConfig, Direction, OperatingPoint, RoleSpacing,
};
use yagi_controller::{
    compile_luts, potentials_for_plan, AntennaState, Controller, DacConfig, LutBudget, Timing,
};
use yagi_physics::{BiasStack, PhysicalConstants, C0};
use yagi_rf::{ChannelPlan, ChannelPlanner};

use crate::channel::{angle_between, bearing_deg, path_gain};
use crate::queue::EventQueue;
use crate::{
    config, GainTable, LinkMetrics, MacVariant, NetsimError, NodeRole, SimScenario, TraceRecord,
};

/// AP sweep order in the directional-only variant.
const SWEEP: [Direction; 4] = [
    Direction::PosX,
    Direction::PosY,
    Direction::NegX,
    Direction::NegY,
];

/// Beam direction whose axis is nearest `bearing`; ties go to +X, then +Y.
pub fn nearest_axis(bearing: f64) -> Direction {
    let mut best = SWEEP[0];
    for d in &SWEEP[1..] {
        if angle_between(bearing, d.azimuth_deg())
            < angle_between(bearing, best.azimuth_deg()) - 1e-9
        {
            best = *d;
        }
    }
    best
}

/// Everything a run needs besides the scenario: a controller template
/// cloned into every node, and the antenna gains.
#[derive(Debug, Clone)]
pub struct MacEnv {
    pub controller: Controller,
    pub gains: GainTable,
}

impl MacEnv {
    /// Controller for `plan` with parasitics at 1.6 times the driver
    /// potential and a DAC of `bits` fitted to the highest parasitic.
    pub fn controller_for_plan(plan: &ChannelPlan, bits: u32) -> Result<Controller, NetsimError> {
        let c = PhysicalConstants::default();
        let stack = plan.stack;
        let pots = potentials_for_plan(plan, 1.6);
        let dac = DacConfig::fit(bits, &pots, &stack, &c)?;
        let luts = compile_luts(
            plan,
            &AntennaLayout::cross(),
            &pots,
            RoleSpacing::default(),
            &dac,
            &LutBudget::default(),
            &stack,
            &c,
        )?;
        Ok(Controller::new(luts, dac, stack, c, Timing::default())?)
    }

    /// Reference plan at 35 V with an 8-bit DAC, and gains from the
    /// reference antenna at its 2.3 THz operating point.
    pub fn reference() -> Result<(Self, ChannelPlan), NetsimError> {
        let plan = ChannelPlanner::reference()
            .plan(35.0, &BiasStack::default())
            .map_err(|e| config(e.to_string()))?;
        let controller = Self::controller_for_plan(&plan, 8)?;
        let gains = GainTable::from_antenna(
            &AntennaModel::reference(),
            &AntennaLayout::cross(),
            &OperatingPoint::HIGH_BAND,
            1.0,
        )?;
        Ok((Self { controller, gains }, plan))
    }
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub trace: Vec<TraceRecord>,
    pub metrics: LinkMetrics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Rts,
    Cts,
    Data,
    Ack,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Rts => "RTS",
            Kind::Cts => "CTS",
            Kind::Data => "DATA",
            Kind::Ack => "ACK",
        }
    }
}

#[derive(Debug, Clone)]
struct Tx {
    src: usize,
    dst: usize,
    kind: Kind,
    channel: usize,
    start: f64,
    end: f64,
    src_beam: BeamConfig,
    /// CTS only: data channel and the station's beam direction.
    payload: Option<(usize, Direction)>,
}

#[derive(Debug, Clone, Copy)]
enum Action {
    Nothing,
    SendRts,
    SendData,
    SweepDwell,
}

#[derive(Debug)]
enum Ev {
    Boot(usize),
    Ready(usize, Action),
    Timeout(usize, u64),
    Backoff(usize, u64),
    Sweep(usize, u64),
    TxEnd(usize),
    Rx(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Idle,
    Connecting,
    WaitCts,
    WaitAck,
    Backoff,
    Done,
    // AP
    Listening,
    Serving { station: usize, channel: usize },
}

struct Node {
    id: u32,
    pos: [f64; 2],
    role: NodeRole,
    ctl: Controller,
    state: Option<AntennaState>,
    /// Time the current antenna state became effective.
    settled: f64,
    token: u64,
    phase: Phase,
    frames_left: u32,
    retries: u32,
    attempt_start: f64,
    sweep_idx: usize,
    reconfigs: u64,
}

struct Sim<'a> {
    sc: &'a SimScenario,
    gains: &'a GainTable,
    q: EventQueue<Ev>,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
    txs: Vec<Tx>,
    trace: Vec<TraceRecord>,
    m: LinkMetrics,
    reserved: BTreeSet<usize>,
    ap: usize,
    rdv: usize,
    timeout: f64,
    slot: f64,
    dwell: f64,
    prop_bound: f64,
    max_air: f64,
    latency_sum: f64,
}

/// Runs the MAC over `sc` until its duration elapses.
pub fn run_mac(sc: &SimScenario, env: &MacEnv) -> Result<SimOutput, NetsimError> {
    sc.validate()?;
    env.gains.validate()?;
    let lut_channels = env.controller.luts.bias.entries.len();
    if lut_channels < sc.channels.len() {
        return Err(config(format!(
            "controller holds {lut_channels} channels, scenario uses {}",
            sc.channels.len()
        )));
    }
    if sc.data_channels().is_empty() {
        return Err(config(
            "no data channel left after the control and rendezvous channels",
        ));
    }
    let rdv = sc.rendezvous_channel();
    let prop_bound = sc.propagation_bound();
    let max_air = sc.max_airtime();
    let latency = env.controller.latency();
    let rts_air = sc.airtime(sc.frames.rts, rdv);
    let mut sim = Sim {
        sc,
        gains: &env.gains,
        q: EventQueue::new(),
        rng: ChaCha8Rng::seed_from_u64(sc.seed),
        nodes: sc
            .nodes
            .iter()
            .map(|n| Node {
                id: n.id,
                pos: n.position,
                role: n.role,
                ctl: env.controller.clone(),
                state: None,
                settled: 0.0,
                token: 0,
                phase: if n.role == NodeRole::Ap {
                    Phase::Listening
                } else {
                    Phase::Idle
                },
                frames_left: if n.role == NodeRole::Station {
                    n.frames
                } else {
                    0
                },
                retries: 0,
                attempt_start: 0.0,
                sweep_idx: 0,
                reconfigs: 0,
            })
            .collect(),
        txs: Vec::new(),
        trace: Vec::new(),
        m: LinkMetrics::default(),
        reserved: BTreeSet::new(),
        ap: sc.ap(),
        rdv,
        timeout: 2.0 * (max_air + prop_bound) + 2.0 * latency,
        slot: rts_air,
        dwell: sc.sweep_dwell.unwrap_or(2.0 * rts_air + prop_bound),
        prop_bound,
        max_air,
        latency_sum: 0.0,
    };
    sim.run()?;
    Ok(SimOutput {
        trace: sim.trace,
        metrics: sim.m,
    })
}

impl Sim<'_> {
    fn run(&mut self) -> Result<(), NetsimError> {
        for i in 0..self.nodes.len() {
            let spec = &self.sc.nodes[i];
            let t = match spec.role {
                NodeRole::Ap => 0.0,
                NodeRole::Station if spec.frames == 0 => continue,
                NodeRole::Station => {
                    let jitter = if self.sc.start_jitter > 0.0 {
                        self.rng.gen_range(0.0..self.sc.start_jitter)
                    } else {
                        0.0
                    };
                    spec.start + jitter
                }
            };
            self.q.push(t, Ev::Boot(i));
        }
        while let Some(t) = self.q.peek_time() {
            if t > self.sc.duration {
                break;
            }
            let (now, ev) = self.q.pop().expect("peeked");
            self.handle(now, ev)?;
        }
        let decided =
            self.m.delivered + self.m.collisions + self.m.deafness_misses + self.m.below_threshold;
        self.m.in_flight = self.m.frames_sent - decided;
        if self.m.handshakes > 0 {
            self.m.mean_handshake_latency = Some(self.latency_sum / self.m.handshakes as f64);
        }
        self.m.throughput_bps =
            self.m.data_delivered as f64 * f64::from(self.sc.frames.data) / self.sc.duration;
        self.m.reconfigurations_by_node = self
            .nodes
            .iter()
            .map(|n| (n.id, n.reconfigs))
            .collect::<BTreeMap<_, _>>();
        Ok(())
    }

    fn log(&mut self, t: f64, node: usize, kind: &str, channel: Option<usize>, detail: String) {
        self.trace.push(TraceRecord {
            t,
            node: self.nodes[node].id,
            kind: kind.to_string(),
            channel,
            detail,
        });
    }

    fn handle(&mut self, now: f64, ev: Ev) -> Result<(), NetsimError> {
        match ev {
            Ev::Boot(n) => {
                if n == self.ap {
                    self.ap_listen(n, now)?;
                } else {
                    self.log(now, n, "timer", None, "traffic".into());
                    self.station_begin(n, now)?;
                }
            }
            Ev::Ready(n, action) => self.ready(n, action, now)?,
            Ev::Timeout(n, token) if token == self.nodes[n].token => self.timeout(n, now)?,
            Ev::Backoff(n, token) if token == self.nodes[n].token => {
                self.log(now, n, "timer", None, "backoff".into());
                self.station_begin(n, now)?;
            }
            Ev::Sweep(n, token) if token == self.nodes[n].token => {
                let node = &mut self.nodes[n];
                node.sweep_idx = (node.sweep_idx + 1) % SWEEP.len();
                let target = AntennaState {
                    channel: self.rdv,
                    beam: BeamConfig::Directional(SWEEP[node.sweep_idx]),
                };
                self.reconfigure(n, target, now, Action::SweepDwell)?;
            }
            Ev::Timeout(..) | Ev::Backoff(..) | Ev::Sweep(..) => {}
            Ev::TxEnd(id) => self.tx_end(id, now)?,
            Ev::Rx(id) => self.receive(id, now)?,
        }
        Ok(())
    }

    fn reconfigure(
        &mut self,
        n: usize,
        target: AntennaState,
        now: f64,
        then: Action,
    ) -> Result<(), NetsimError> {
        if self.nodes[n].state == Some(target) {
            self.q.push(now, Ev::Ready(n, then));
            return Ok(());
        }
        let node = &mut self.nodes[n];
        let latency = node.ctl.set_state(target)?.latency;
        node.state = Some(target);
        node.settled = now + latency;
        node.reconfigs += 1;
        self.m.reconfigurations += 1;
        self.m.reconfiguration_time += latency;
        self.log(now, n, "set", Some(target.channel), target.beam.to_string());
        self.q.push(now + latency, Ev::Ready(n, then));
        Ok(())
    }

    fn arm_timer(&mut self, n: usize) -> u64 {
        self.nodes[n].token += 1;
        self.nodes[n].token
    }

    fn rendezvous_beam(&self, n: usize) -> BeamConfig {
        match self.sc.variant {
            MacVariant::ControlChannel => BeamConfig::Omni,
            MacVariant::DirectionalOnly => BeamConfig::Directional(nearest_axis(bearing_deg(
                self.nodes[n].pos,
                self.nodes[self.ap].pos,
            ))),
        }
    }

    fn station_begin(&mut self, n: usize, now: f64) -> Result<(), NetsimError> {
        self.nodes[n].phase = Phase::Connecting;
        self.nodes[n].attempt_start = now;
        let target = AntennaState {
            channel: self.rdv,
            beam: self.rendezvous_beam(n),
        };
        self.reconfigure(n, target, now, Action::SendRts)
    }

    fn ap_listen(&mut self, n: usize, now: f64) -> Result<(), NetsimError> {
        self.nodes[n].phase = Phase::Listening;
        match self.sc.variant {
            MacVariant::ControlChannel => {
                let target = AntennaState {
                    channel: self.sc.control_channel,
                    beam: BeamConfig::Omni,
                };
                self.reconfigure(n, target, now, Action::Nothing)
            }
            MacVariant::DirectionalOnly => {
                let target = AntennaState {
                    channel: self.rdv,
                    beam: BeamConfig::Directional(SWEEP[self.nodes[n].sweep_idx]),
                };
                self.reconfigure(n, target, now, Action::SweepDwell)
            }
        }
    }

    fn ready(&mut self, n: usize, action: Action, now: f64) -> Result<(), NetsimError> {
        match action {
            Action::Nothing => {}
            Action::SendRts => {
                let ch = self.rdv;
                self.send(n, self.ap, Kind::Rts, ch, None, now);
            }
            Action::SendData => {
                self.m.handshakes += 1;
                self.latency_sum += now - self.nodes[n].attempt_start;
                let ch = self.nodes[n].state.expect("configured").channel;
                self.send(n, self.ap, Kind::Data, ch, None, now);
            }
            Action::SweepDwell => {
                if self.nodes[n].phase == Phase::Listening {
                    let token = self.arm_timer(n);
                    self.q.push(now + self.dwell, Ev::Sweep(n, token));
                }
            }
        }
        Ok(())
    }

    fn bits(&self, kind: Kind) -> u32 {
        let f = self.sc.frames;
        match kind {
            Kind::Rts => f.rts,
            Kind::Cts => f.cts,
            Kind::Data => f.data,
            Kind::Ack => f.ack,
        }
    }

    fn send(
        &mut self,
        src: usize,
        dst: usize,
        kind: Kind,
        channel: usize,
        payload: Option<(usize, Direction)>,
        now: f64,
    ) {
        let air = self.sc.airtime(self.bits(kind), channel);
        let id = self.txs.len();
        let tx = Tx {
            src,
            dst,
            kind,
            channel,
            start: now,
            end: now + air,
            src_beam: self.nodes[src].state.expect("configured").beam,
            payload,
        };
        let prop = self.sc.distance(src, dst) / C0;
        let mut detail = format!(
            "{} {}->{} #{id}",
            kind.name(),
            self.nodes[src].id,
            self.nodes[dst].id
        );
        if let Some((ch, dir)) = payload {
            detail.push_str(&format!(" data_ch={ch} dir={dir}"));
        }
        self.log(now, src, "tx_start", Some(channel), detail);
        self.m.frames_sent += 1;
        self.q.push(tx.end, Ev::TxEnd(id));
        self.q.push(tx.end + prop, Ev::Rx(id));
        self.txs.push(tx);
    }

    fn tx_end(&mut self, id: usize, now: f64) -> Result<(), NetsimError> {
        let tx = self.txs[id].clone();
        let n = tx.src;
        self.log(
            now,
            n,
            "tx_end",
            Some(tx.channel),
            format!("{} #{id}", tx.kind.name()),
        );
        match (self.nodes[n].role, tx.kind) {
            (NodeRole::Station, Kind::Rts) | (NodeRole::Station, Kind::Data) => {
                self.nodes[n].phase = if tx.kind == Kind::Rts {
                    Phase::WaitCts
                } else {
                    Phase::WaitAck
                };
                let token = self.arm_timer(n);
                self.q.push(now + self.timeout, Ev::Timeout(n, token));
            }
            (NodeRole::Ap, Kind::Cts) => {
                let (ch, sta_dir) = tx.payload.expect("CTS carries a payload");
                let target = AntennaState {
                    channel: ch,
                    beam: BeamConfig::Directional(sta_dir.opposite()),
                };
                self.reconfigure(n, target, now, Action::Nothing)?;
                let token = self.arm_timer(n);
                self.q.push(now + self.timeout, Ev::Timeout(n, token));
            }
            (NodeRole::Ap, Kind::Ack) => {
                if let Phase::Serving { station, channel } = self.nodes[n].phase {
                    self.release(n, channel, station, now);
                }
                self.ap_listen(n, now)?;
            }
            _ => {}
        }
        Ok(())
    }

    fn release(&mut self, ap: usize, channel: usize, station: usize, now: f64) {
        self.reserved.remove(&channel);
        let who = format!("station={}", self.nodes[station].id);
        self.log(now, ap, "release", Some(channel), who);
    }

    /// Whether `r` was transmitting at any time in [a, b).
    fn transmitting(&self, r: usize, a: f64, b: f64) -> bool {
        let horizon = a - self.max_air - 2.0 * self.prop_bound;
        self.txs
            .iter()
            .rev()
            .take_while(|t| t.start >= horizon)
            .any(|t| t.src == r && t.start < b && a < t.end)
    }

    fn outcome(&self, id: usize) -> &'static str {
        let tx = &self.txs[id];
        let r = tx.dst;
        let rn = &self.nodes[r];
        let prop = self.sc.distance(tx.src, r) / C0;
        let (a, b) = (tx.start + prop, tx.end + prop);
        let Some(state) = rn.state else {
            return "deafness";
        };
        let toward_src = bearing_deg(rn.pos, self.nodes[tx.src].pos);
        if self.transmitting(r, a, b)
            || rn.settled > a
            || state.channel != tx.channel
            || !self.gains.hears(state.beam, toward_src)
        {
            return "deafness";
        }
        let ch = &self.sc.channels[tx.channel];
        let gain = path_gain(
            self.gains,
            self.nodes[tx.src].pos,
            tx.src_beam,
            rn.pos,
            state.beam,
            ch.f_center,
            ch.k_abs,
        )
        .expect("validated positions are distinct");
        if self.sc.tx_power_dbm + gain - self.sc.noise_dbm < self.sc.snr_threshold_db {
            return "below_threshold";
        }
        let horizon = a - self.max_air - 2.0 * self.prop_bound;
        let overlapped = self
            .txs
            .iter()
            .enumerate()
            .rev()
            .take_while(|(_, t)| t.start >= horizon)
            .any(|(j, t)| {
                if j == id || t.channel != tx.channel || t.src == r {
                    return false;
                }
                let p = self.sc.distance(t.src, r) / C0;
                t.start + p < b && a < t.end + p
            });
        if overlapped {
            "collision"
        } else {
            "delivered"
        }
    }

    fn receive(&mut self, id: usize, now: f64) -> Result<(), NetsimError> {
        let outcome = self.outcome(id);
        let tx = self.txs[id].clone();
        match outcome {
            "delivered" => self.m.delivered += 1,
            "collision" => self.m.collisions += 1,
            "deafness" => self.m.deafness_misses += 1,
            _ => self.m.below_threshold += 1,
        }
        let detail = format!(
            "{} {}->{} #{id} {outcome}",
            tx.kind.name(),
            self.nodes[tx.src].id,
            self.nodes[tx.dst].id
        );
        self.log(now, tx.dst, "rx", Some(tx.channel), detail);
        if outcome == "delivered" {
            self.deliver(&tx, now)?;
        }
        Ok(())
    }

    fn deliver(&mut self, tx: &Tx, now: f64) -> Result<(), NetsimError> {
        let r = tx.dst;
        match (tx.kind, self.nodes[r].phase) {
            (Kind::Rts, Phase::Listening) => {
                let Some(&ch) = self
                    .sc
                    .data_channels()
                    .iter()
                    .find(|c| !self.reserved.contains(c))
                else {
                    self.log(
                        now,
                        r,
                        "busy",
                        None,
                        format!("no free channel for {}", self.nodes[tx.src].id),
                    );
                    return Ok(());
                };
                self.arm_timer(r);
                let ap_dir = nearest_axis(bearing_deg(self.nodes[r].pos, self.nodes[tx.src].pos));
                self.reserved.insert(ch);
                self.nodes[r].phase = Phase::Serving {
                    station: tx.src,
                    channel: ch,
                };
                let detail = format!("station={} dir={ap_dir}", self.nodes[tx.src].id);
                self.log(now, r, "assign", Some(ch), detail);
                let rdv = self.rdv;
                self.send(
                    r,
                    tx.src,
                    Kind::Cts,
                    rdv,
                    Some((ch, ap_dir.opposite())),
                    now,
                );
            }
            (Kind::Data, Phase::Serving { station, .. }) if station == tx.src => {
                self.arm_timer(r);
                self.m.data_delivered += 1;
                self.send(r, tx.src, Kind::Ack, tx.channel, None, now);
            }
            (Kind::Cts, Phase::WaitCts) => {
                self.arm_timer(r);
                let (ch, dir) = tx.payload.expect("CTS carries a payload");
                self.nodes[r].phase = Phase::Connecting;
                let target = AntennaState {
                    channel: ch,
                    beam: BeamConfig::Directional(dir),
                };
                self.reconfigure(r, target, now, Action::SendData)?;
            }
            (Kind::Ack, Phase::WaitAck) => {
                self.arm_timer(r);
                let node = &mut self.nodes[r];
                node.frames_left -= 1;
                node.retries = 0;
                if node.frames_left > 0 {
                    self.station_begin(r, now)?;
                } else {
                    node.phase = Phase::Done;
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn timeout(&mut self, n: usize, now: f64) -> Result<(), NetsimError> {
        match self.nodes[n].phase {
            Phase::Serving { station, channel } => {
                self.log(now, n, "timer", Some(channel), "data_timeout".into());
                self.release(n, channel, station, now);
                self.ap_listen(n, now)
            }
            phase @ (Phase::WaitCts | Phase::WaitAck) => {
                let what = if phase == Phase::WaitCts {
                    "cts_timeout"
                } else {
                    "ack_timeout"
                };
                self.log(now, n, "timer", None, what.into());
                let node = &mut self.nodes[n];
                node.retries += 1;
                if node.retries > self.sc.max_retries {
                    node.retries = 0;
                    node.frames_left -= 1;
                    self.m.dropped += 1;
                    self.log(now, n, "drop", None, "retry limit".into());
                    if self.nodes[n].frames_left > 0 {
                        self.station_begin(n, now)
                    } else {
                        self.nodes[n].phase = Phase::Done;
                        Ok(())
                    }
                } else {
                    let shift = (node.retries - 1).min(10);
                    let window = u64::from(self.sc.backoff_window) << shift;
                    let slots = self.rng.gen_range(0..window);
                    self.nodes[n].phase = Phase::Backoff;
                    let token = self.arm_timer(n);
                    self.q
                        .push(now + slots as f64 * self.slot, Ev::Backoff(n, token));
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}
