use serde::Serialize;

use crate::{AntennaError, RadiationPattern};

/// Cuts flatter than this (dB peak to trough) are treated as isotropic.
const FLAT_DB: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternMetrics {
    /// Directivity toward `beam_direction` plus efficiency (dBi).
    pub gain_dbi: f64,
    /// Maximum directivity over the whole sphere (dBi).
    pub peak_directivity_dbi: f64,
    /// Directivity toward `beam_direction` (dBi).
    pub beam_directivity_dbi: f64,
    /// (theta, phi) of the XY-cut maximum, degrees.
    pub beam_direction: (f64, f64),
    /// -3 dB width of the XY cut, degrees; 360 for a flat cut.
    pub beamwidth_3db: f64,
    pub front_to_back_db: f64,
    pub efficiency: f64,
}

/// Walks from `pk` in steps of `dir` until the cut drops 3 dB, returning the
/// interpolated crossing as a signed offset in samples.
fn crossing(cut: &[f64], pk: usize, dir: isize) -> Option<f64> {
    let n = cut.len() as isize;
    let level = cut[pk] - 3.0;
    let at = |k: isize| cut[(pk as isize + dir * k).rem_euclid(n) as usize];
    for k in 1..n {
        let (a, b) = (at(k - 1), at(k));
        if b <= level {
            let frac = (a - level) / (a - b);
            return Some((k - 1) as f64 + frac);
        }
    }
    None
}

/// Gain, XY-cut beam direction, -3 dB beamwidth and front-to-back ratio.
///
/// Ties for the cut maximum resolve to the first azimuth.
pub fn pattern_metrics(p: &RadiationPattern) -> Result<PatternMetrics, AntennaError> {
    if p.directivity_dbi
        .iter()
        .any(|d| d.is_nan() || *d == f64::INFINITY)
    {
        return Err(AntennaError::DegeneratePattern("non-finite samples".into()));
    }
    if !(p.efficiency > 0.0 && p.efficiency <= 1.0 + 1e-12) {
        return Err(AntennaError::DegeneratePattern(format!(
            "efficiency {} outside (0, 1]",
            p.efficiency
        )));
    }
    let cut = p.xy_cut();
    let n = cut.len();
    let mut pk = 0;
    for (j, &d) in cut.iter().enumerate() {
        if d > cut[pk] {
            pk = j;
        }
    }
    let lo = cut.iter().copied().fold(f64::INFINITY, f64::min);
    let flat = cut[pk] - lo <= FLAT_DB;
    if flat {
        pk = 0;
    }
    let (beamwidth, fb) = if flat {
        (360.0, 0.0)
    } else {
        let bw = match (crossing(cut, pk, 1), crossing(cut, pk, -1)) {
            (Some(a), Some(b)) => ((a + b) * p.step_deg).min(360.0),
            _ => 360.0,
        };
        (bw, cut[pk] - cut[(pk + n / 2) % n])
    };
    Ok(PatternMetrics {
        gain_dbi: cut[pk] + 10.0 * p.efficiency.log10(),
        peak_directivity_dbi: p.max_dbi(),
        beam_directivity_dbi: cut[pk],
        beam_direction: (p.theta_deg(p.horizon()), p.phi_deg(pk)),
        beamwidth_3db: beamwidth,
        front_to_back_db: fb,
        efficiency: p.efficiency,
    })
}
