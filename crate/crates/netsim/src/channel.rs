use std::f64::consts::{E, PI};

use yagi_antenna::{evaluate_beam, AntennaLayout, AntennaModel, BeamConfig, OperatingPoint};
use yagi_physics::C0;

use crate::{config, NetsimError};

/// Free-space path loss 20 log10(4 pi d f / c) (dB).
pub fn fspl_db(f: f64, d: f64) -> f64 {
    20.0 * (4.0 * PI * d * f / C0).log10()
}

/// Molecular absorption over `d` metres at coefficient `k` (1/m), in dB.
pub fn absorption_db(k: f64, d: f64) -> f64 {
    10.0 * E.log10() * k * d
}

/// Azimuth (deg, [0, 360)) of `to` seen from `from` in the XY plane.
pub fn bearing_deg(from: [f64; 2], to: [f64; 2]) -> f64 {
    let a = (to[1] - from[1]).atan2(to[0] - from[0]).to_degrees();
    a.rem_euclid(360.0)
}

/// Smallest angle between two azimuths (deg).
pub fn angle_between(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Realised gain on the XY cut for each beam configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct GainTable {
    step_deg: f64,
    cuts: Vec<(BeamConfig, Vec<f64>)>,
    /// -3 dB width of the directional beams (deg); sets the listening sector.
    pub beamwidth_deg: f64,
}

impl GainTable {
    /// 0 dBi in every direction, with 90 degree directional sectors.
    pub fn isotropic() -> Self {
        Self {
            step_deg: 90.0,
            cuts: BeamConfig::ALL.iter().map(|&b| (b, vec![0.0; 4])).collect(),
            beamwidth_deg: 90.0,
        }
    }

    /// Directivity cut plus 10 log10(efficiency), per beam, for one
    /// operating point. All channels share these patterns.
    pub fn from_antenna(
        model: &AntennaModel,
        layout: &AntennaLayout,
        point: &OperatingPoint,
        step_deg: f64,
    ) -> Result<Self, NetsimError> {
        let mut cuts = Vec::with_capacity(BeamConfig::ALL.len());
        let mut beamwidth: f64 = 0.0;
        for beam in BeamConfig::ALL {
            let ev = evaluate_beam(model, layout, beam, point, step_deg)?;
            let eta = 10.0 * ev.pattern.efficiency.log10();
            cuts.push((beam, ev.pattern.xy_cut().iter().map(|d| d + eta).collect()));
            if beam != BeamConfig::Omni {
                beamwidth = beamwidth.max(ev.metrics.beamwidth_3db);
            }
        }
        Ok(Self {
            step_deg,
            cuts,
            beamwidth_deg: beamwidth,
        })
    }

    /// Gain (dBi) of `beam` toward azimuth `phi_deg`, linear in dB between samples.
    pub fn gain(&self, beam: BeamConfig, phi_deg: f64) -> f64 {
        let cut = &self
            .cuts
            .iter()
            .find(|(b, _)| *b == beam)
            .expect("every beam has a cut")
            .1;
        let x = phi_deg.rem_euclid(360.0) / self.step_deg;
        let i = x.floor() as usize % cut.len();
        let j = (i + 1) % cut.len();
        let w = x - x.floor();
        if w == 0.0 {
            cut[i]
        } else {
            (1.0 - w) * cut[i] + w * cut[j]
        }
    }

    /// Whether a receiver using `beam` listens toward `phi_deg`.
    pub fn hears(&self, beam: BeamConfig, phi_deg: f64) -> bool {
        match beam {
            BeamConfig::Omni => true,
            BeamConfig::Directional(d) => {
                angle_between(phi_deg, d.azimuth_deg()) <= 0.5 * self.beamwidth_deg + 1e-9
            }
        }
    }

    pub fn validate(&self) -> Result<(), NetsimError> {
        if !(self.beamwidth_deg > 0.0 && self.beamwidth_deg <= 360.0) {
            return Err(config(format!(
                "directional beamwidth must be in (0, 360], got {}",
                self.beamwidth_deg
            )));
        }
        Ok(())
    }
}

/// Link gain (dB) between two positions:
/// G_tx + G_rx - FSPL(f, d) - absorption(k, d).
#[allow(clippy::too_many_arguments)]
pub fn path_gain(
    gains: &GainTable,
    src: [f64; 2],
    src_beam: BeamConfig,
    dst: [f64; 2],
    dst_beam: BeamConfig,
    f: f64,
    k: f64,
) -> Result<f64, NetsimError> {
    let d = (dst[0] - src[0]).hypot(dst[1] - src[1]);
    if !(d > 0.0) {
        return Err(config("path gain needs distinct positions"));
    }
    let g_tx = gains.gain(src_beam, bearing_deg(src, dst));
    let g_rx = gains.gain(dst_beam, bearing_deg(dst, src));
    Ok(g_tx + g_rx - fspl_db(f, d) - absorption_db(k, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use yagi_antenna::Direction;

    #[test]
    fn bearings() {
        assert_eq!(bearing_deg([0.0, 0.0], [1.0, 0.0]), 0.0);
        assert_eq!(bearing_deg([0.0, 0.0], [0.0, 1.0]), 90.0);
        assert_eq!(bearing_deg([0.0, 0.0], [-1.0, 0.0]), 180.0);
        assert_eq!(bearing_deg([0.0, 0.0], [0.0, -1.0]), 270.0);
        assert_eq!(angle_between(350.0, 10.0), 20.0);
    }

    #[test]
    fn absorption_one_db_per_metre() {
        // 0.23 / m is about 1 dB / m
        assert!((absorption_db(0.23, 10.0) - 9.989).abs() < 1e-3);
        assert!((absorption_db(1.0 / E.log10() / 10.0, 10.0) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn isotropic_sectors() {
        let g = GainTable::isotropic();
        let b = BeamConfig::Directional(Direction::PosY);
        assert!(g.hears(b, 90.0) && g.hears(b, 135.0) && !g.hears(b, 136.0));
        assert_eq!(g.gain(b, 123.4), 0.0);
    }
}
