//! Discrete-event simulation of the multichannel, beam-switching MAC.
//!
//! Stations contend for the AP with omni RTS/CTS on a control channel;
//! the CTS names a data channel and beam direction, both ends reconfigure
//! through their controllers, and the data exchange runs directionally.

mod channel;
mod damc;
mod error;
mod mac;
pub mod queue;
mod scenario;
mod trace;

pub use channel::{absorption_db, angle_between, bearing_deg, fspl_db, path_gain, GainTable};
pub use damc::{damc_select, estimate_distance, select_channel, snr_at, DamcChoice, DamcLink};
pub(crate) use error::config;
pub use error::NetsimError;
pub use mac::{nearest_axis, run_mac, MacEnv, SimOutput};
pub use scenario::{FrameSizes, LinkChannel, MacVariant, NodeRole, NodeSpec, SimScenario};
pub use trace::{
    audit_channel_exclusivity, write_metrics_json, write_trace_jsonl, LinkMetrics, TraceRecord,
};
