//! Antenna input matching and frequency-channel planning.
//!
//! The antenna near its high-impedance resonance is a parallel RLC seen
//! from a resistive source. Channels are packed greedily upward in
//! chemical potential until the gate-voltage budget runs out.

mod error;
mod export;
mod matching;
mod plan;

pub use error::RfError;
pub use export::{write_channels_csv, write_sweep_csv, CHANNELS_HEADER, SWEEP_HEADER};
pub use matching::{
    channel_bandwidth, input_impedance, return_loss, MatchingModel, RETURN_LOSS_FLOOR_DB,
};
pub use plan::{plan_channels, Channel, ChannelPlan, ChannelPlanner, SweepRow};
