use serde::{Deserialize, Serialize};
use yagi_physics::C0;
use yagi_rf::ChannelPlan;

use crate::{config, NetsimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRole {
    Ap,
    Station,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: u32,
    /// XY position (m).
    pub position: [f64; 2],
    pub role: NodeRole,
    /// DATA frames to deliver (stations only).
    #[serde(default = "one")]
    pub frames: u32,
    /// Time the first frame becomes ready (s), before jitter.
    #[serde(default)]
    pub start: f64,
}

fn one() -> u32 {
    1
}

/// One frequency channel as the link layer sees it.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkChannel {
    /// Centre frequency (Hz).
    pub f_center: f64,
    /// Molecular absorption coefficient (1/m).
    #[serde(default)]
    pub k_abs: f64,
    /// Data rate (bit/s).
    pub rate: f64,
}

impl LinkChannel {
    /// Channels of `plan` at one bit per second per hertz of bandwidth, no
    /// absorption.
    pub fn from_plan(plan: &ChannelPlan) -> Vec<Self> {
        plan.channels
            .iter()
            .map(|c| Self {
                f_center: c.f_center,
                k_abs: 0.0,
                rate: c.bandwidth,
            })
            .collect()
    }
}

/// Frame lengths (bits).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameSizes {
    pub rts: u32,
    pub cts: u32,
    pub data: u32,
    pub ack: u32,
}

impl Default for FrameSizes {
    fn default() -> Self {
        Self {
            rts: 160,
            cts: 160,
            data: 12_000,
            ack: 112,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MacVariant {
    /// RTS/CTS in omni mode on the control channel, then directional data.
    ControlChannel,
    /// No omni phase: stations send directional RTS on a rendezvous data
    /// channel while the AP sweeps its beam.
    DirectionalOnly,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimScenario {
    pub nodes: Vec<NodeSpec>,
    pub channels: Vec<LinkChannel>,
    #[serde(default)]
    pub control_channel: usize,
    #[serde(default = "defaults::tx_power")]
    pub tx_power_dbm: f64,
    #[serde(default = "defaults::noise")]
    pub noise_dbm: f64,
    #[serde(default = "defaults::threshold")]
    pub snr_threshold_db: f64,
    #[serde(default)]
    pub frames: FrameSizes,
    #[serde(default)]
    pub seed: u64,
    /// Simulated time (s).
    pub duration: f64,
    #[serde(default = "defaults::variant")]
    pub variant: MacVariant,
    /// Each station's first frame is delayed by U[0, start_jitter) s.
    #[serde(default)]
    pub start_jitter: f64,
    #[serde(default = "defaults::retries")]
    pub max_retries: u32,
    /// Initial backoff window (slots).
    #[serde(default = "defaults::window")]
    pub backoff_window: u32,
    /// Listening time per sweep step in the directional-only variant (s).
    /// `None` picks twice the RTS airtime plus the propagation bound.
    #[serde(default)]
    pub sweep_dwell: Option<f64>,
}

mod defaults {
    use super::MacVariant;

    pub fn tx_power() -> f64 {
        20.0
    }
    pub fn noise() -> f64 {
        -130.0
    }
    pub fn threshold() -> f64 {
        10.0
    }
    pub fn variant() -> MacVariant {
        MacVariant::ControlChannel
    }
    pub fn retries() -> u32 {
        7
    }
    pub fn window() -> u32 {
        16
    }
}

impl SimScenario {
    /// AP at the origin and `stations` stations spread evenly on a circle of
    /// `radius` metres, the first on +X.
    pub fn ring(stations: usize, radius: f64, channels: Vec<LinkChannel>, duration: f64) -> Self {
        let mut nodes = vec![NodeSpec {
            id: 0,
            position: [0.0, 0.0],
            role: NodeRole::Ap,
            frames: 0,
            start: 0.0,
        }];
        for i in 0..stations {
            let a = 2.0 * std::f64::consts::PI * i as f64 / stations as f64;
            // snap near-zero components so axis stations sit exactly on axis
            let snap = |x: f64| if x.abs() < 1e-12 * radius { 0.0 } else { x };
            nodes.push(NodeSpec {
                id: i as u32 + 1,
                position: [snap(radius * a.cos()), snap(radius * a.sin())],
                role: NodeRole::Station,
                frames: 1,
                start: 0.0,
            });
        }
        Self {
            nodes,
            channels,
            control_channel: 0,
            tx_power_dbm: defaults::tx_power(),
            noise_dbm: defaults::noise(),
            snr_threshold_db: defaults::threshold(),
            frames: FrameSizes::default(),
            seed: 0,
            duration,
            variant: defaults::variant(),
            start_jitter: 0.0,
            max_retries: defaults::retries(),
            backoff_window: defaults::window(),
            sweep_dwell: None,
        }
    }

    pub fn ap(&self) -> usize {
        self.nodes
            .iter()
            .position(|n| n.role == NodeRole::Ap)
            .expect("validated scenario has an AP")
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.nodes[a].position, self.nodes[b].position);
        (p[0] - q[0]).hypot(p[1] - q[1])
    }

    /// Longest one-way propagation delay between any two nodes (s).
    pub fn propagation_bound(&self) -> f64 {
        let n = self.nodes.len();
        let mut d: f64 = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                d = d.max(self.distance(a, b));
            }
        }
        d / C0
    }

    pub fn airtime(&self, bits: u32, channel: usize) -> f64 {
        f64::from(bits) / self.channels[channel].rate
    }

    /// Longest airtime of any frame on any channel (s).
    pub fn max_airtime(&self) -> f64 {
        let f = self.frames;
        let bits = f.rts.max(f.cts).max(f.data).max(f.ack);
        (0..self.channels.len())
            .map(|c| self.airtime(bits, c))
            .fold(0.0, f64::max)
    }

    /// Channel used for RTS/CTS.
    pub fn rendezvous_channel(&self) -> usize {
        match self.variant {
            MacVariant::ControlChannel => self.control_channel,
            MacVariant::DirectionalOnly => (0..self.channels.len())
                .find(|&c| c != self.control_channel)
                .expect("validated scenario has a data channel"),
        }
    }

    /// Channels the AP may hand out for data, lowest index first.
    pub fn data_channels(&self) -> Vec<usize> {
        let rdv = self.rendezvous_channel();
        (0..self.channels.len())
            .filter(|&c| c != self.control_channel && c != rdv)
            .collect()
    }

    pub fn validate(&self) -> Result<(), NetsimError> {
        let aps = self.nodes.iter().filter(|n| n.role == NodeRole::Ap).count();
        if aps != 1 {
            return Err(config(format!("need exactly one AP, found {aps}")));
        }
        for (i, a) in self.nodes.iter().enumerate() {
            if !(a.position.iter().all(|x| x.is_finite()) && a.start.is_finite() && a.start >= 0.0)
            {
                return Err(config(format!("node {}: bad position or start", a.id)));
            }
            for b in &self.nodes[i + 1..] {
                if a.id == b.id {
                    return Err(config(format!("duplicate node id {}", a.id)));
                }
                if a.position == b.position {
                    return Err(config(format!(
                        "nodes {} and {} share a position",
                        a.id, b.id
                    )));
                }
            }
        }
        if self.control_channel >= self.channels.len() {
            return Err(config(format!(
                "control channel {} outside a {}-channel plan",
                self.control_channel,
                self.channels.len()
            )));
        }
        for (i, c) in self.channels.iter().enumerate() {
            if !(c.f_center > 0.0 && c.rate > 0.0 && c.k_abs >= 0.0 && c.k_abs.is_finite()) {
                return Err(config(format!(
                    "channel {i}: need f_center > 0, rate > 0, k_abs >= 0"
                )));
            }
        }
        let needed = match self.variant {
            MacVariant::ControlChannel => 2,
            MacVariant::DirectionalOnly => 3,
        };
        if self.channels.len() < needed {
            return Err(config(format!(
                "{:?} needs at least {needed} channels",
                self.variant
            )));
        }
        let f = self.frames;
        if [f.rts, f.cts, f.data, f.ack].contains(&0) {
            return Err(config("frame sizes must be > 0 bits"));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(config("duration must be > 0"));
        }
        if !(self.start_jitter.is_finite() && self.start_jitter >= 0.0) {
            return Err(config("start_jitter must be >= 0"));
        }
        if self.backoff_window == 0 {
            return Err(config("backoff_window must be >= 1"));
        }
        if let Some(d) = self.sweep_dwell {
            if !(d.is_finite() && d > 0.0) {
                return Err(config("sweep_dwell must be > 0"));
            }
        }
        for v in [self.tx_power_dbm, self.noise_dbm, self.snr_threshold_db] {
            if !v.is_finite() {
                return Err(config("link budget values must be finite"));
            }
        }
        Ok(())
    }
}
