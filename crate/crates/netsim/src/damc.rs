use serde::Serialize;
use yagi_antenna::BeamConfig;

use crate::channel::{absorption_db, bearing_deg, fspl_db};
use crate::{config, GainTable, LinkChannel, NetsimError, SimScenario};

/// Fixed link-budget terms of one node pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DamcLink {
    pub tx_power_dbm: f64,
    pub gain_tx_dbi: f64,
    pub gain_rx_dbi: f64,
    pub noise_dbm: f64,
    pub snr_threshold_db: f64,
}

impl DamcLink {
    /// Omni gains of nodes `a` (transmitting) and `b` toward each other.
    pub fn between(sc: &SimScenario, gains: &GainTable, a: usize, b: usize) -> Self {
        let (pa, pb) = (sc.nodes[a].position, sc.nodes[b].position);
        Self {
            tx_power_dbm: sc.tx_power_dbm,
            gain_tx_dbi: gains.gain(BeamConfig::Omni, bearing_deg(pa, pb)),
            gain_rx_dbi: gains.gain(BeamConfig::Omni, bearing_deg(pb, pa)),
            noise_dbm: sc.noise_dbm,
            snr_threshold_db: sc.snr_threshold_db,
        }
    }

    pub fn received_dbm(&self, ch: &LinkChannel, d: f64) -> f64 {
        self.tx_power_dbm + self.gain_tx_dbi + self.gain_rx_dbi
            - fspl_db(ch.f_center, d)
            - absorption_db(ch.k_abs, d)
    }
}

pub fn snr_at(link: &DamcLink, ch: &LinkChannel, d: f64) -> f64 {
    link.received_dbm(ch, d) - link.noise_dbm
}

/// Distance at which `ch` delivers `rx_dbm`, by bisection in log distance.
pub fn estimate_distance(
    rx_dbm: f64,
    ch: &LinkChannel,
    link: &DamcLink,
) -> Result<f64, NetsimError> {
    let (mut lo, mut hi) = (1e-9f64, 1e9f64);
    let g = |d: f64| link.received_dbm(ch, d) - rx_dbm;
    if !(g(lo) >= 0.0 && g(hi) <= 0.0) {
        return Err(config(format!(
            "received power {rx_dbm} dBm is outside the invertible range"
        )));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok((lo * hi).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DamcChoice {
    pub channel: usize,
    /// Estimated distance (m).
    pub distance: f64,
    pub snr_db: f64,
}

/// Picks the channel, other than `safe`, with the highest SNR at the
/// distance implied by `rx_dbm` on `safe`. Ties go to the lower centre
/// frequency.
pub fn select_channel(
    rx_dbm: f64,
    safe: usize,
    channels: &[LinkChannel],
    link: &DamcLink,
) -> Result<DamcChoice, NetsimError> {
    let safe_ch = channels
        .get(safe)
        .ok_or_else(|| config(format!("safe channel {safe} outside the plan")))?;
    let d = estimate_distance(rx_dbm, safe_ch, link)?;
    let mut best: Option<DamcChoice> = None;
    for (i, ch) in channels.iter().enumerate() {
        if i == safe {
            continue;
        }
        let snr = snr_at(link, ch, d);
        let better = match best {
            None => true,
            Some(b) => {
                snr > b.snr_db + 1e-12
                    || (snr >= b.snr_db - 1e-12 && ch.f_center < channels[b.channel].f_center)
            }
        };
        if better {
            best = Some(DamcChoice {
                channel: i,
                distance: d,
                snr_db: snr,
            });
        }
    }
    let best = best.ok_or_else(|| config("no channel besides the safe one"))?;
    if best.snr_db < link.snr_threshold_db {
        return Err(NetsimError::NoViableChannel {
            best_snr_db: best.snr_db,
            distance: d,
        });
    }
    Ok(best)
}

/// Noiseless distance-aware channel choice for the pair (`a` -> `b`):
/// measure the received power on `safe` with omni gains, estimate the
/// distance, then pick the best channel at that distance.
pub fn damc_select(
    sc: &SimScenario,
    gains: &GainTable,
    a: usize,
    b: usize,
    safe: usize,
) -> Result<DamcChoice, NetsimError> {
    sc.validate()?;
    if a == b || a >= sc.nodes.len() || b >= sc.nodes.len() {
        return Err(config(format!("bad node pair ({a}, {b})")));
    }
    let link = DamcLink::between(sc, gains, a, b);
    let safe_ch = sc
        .channels
        .get(safe)
        .ok_or_else(|| config(format!("safe channel {safe} outside the plan")))?;
    let rx = link.received_dbm(safe_ch, sc.distance(a, b));
    select_channel(rx, safe, &sc.channels, &link)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link() -> DamcLink {
        DamcLink {
            tx_power_dbm: 20.0,
            gain_tx_dbi: 0.0,
            gain_rx_dbi: 0.0,
            noise_dbm: -130.0,
            snr_threshold_db: 10.0,
        }
    }

    #[test]
    fn inversion_round_trip() {
        let ch = LinkChannel {
            f_center: 1e12,
            k_abs: 0.3,
            rate: 1e10,
        };
        for d in [1e-3, 0.5, 3.0, 42.0] {
            let rx = link().received_dbm(&ch, d);
            let e = estimate_distance(rx, &ch, &link()).unwrap();
            assert!((e / d - 1.0).abs() < 1e-12, "{d} -> {e}");
        }
    }
}
