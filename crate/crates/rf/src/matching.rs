use num_complex::Complex64;
use serde::Deserialize;

use crate::RfError;

/// Reported return loss for a perfect match (dB).
pub const RETURN_LOSS_FLOOR_DB: f64 = -100.0;

/// Normalised detuning 2 Q_L (f - f0) / f0 at which a matched parallel tank
/// reaches |S11| = -10 dB: y^2 / (4 + y^2) = 0.1.
const MATCHED_EDGE: f64 = 2.0 / 3.0;

/// Parallel-RLC view of the antenna near resonance.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchingModel {
    /// Source impedance (ohm).
    pub z_s: f64,
    /// Return-loss quality factor: f_res over the -10 dB bandwidth when
    /// the resonance resistance equals the source impedance.
    pub q_res: f64,
    /// Resistance at resonance (ohm).
    pub r_res: f64,
}

impl Default for MatchingModel {
    /// 1 kOhm source, matched, with 140 GHz of -10 dB bandwidth at 1.2 THz.
    fn default() -> Self {
        Self {
            z_s: 1000.0,
            q_res: Self::q_from_bandwidth(1.2e12, 140e9),
            r_res: 1000.0,
        }
    }
}

impl MatchingModel {
    pub fn q_from_bandwidth(f_res: f64, bandwidth: f64) -> f64 {
        f_res / bandwidth
    }

    /// Loaded quality factor of the tank itself.
    pub fn tank_q(&self) -> f64 {
        MATCHED_EDGE * self.q_res
    }

    pub fn validate(&self) -> Result<(), RfError> {
        for (name, v) in [
            ("z_s", self.z_s),
            ("q_res", self.q_res),
            ("r_res", self.r_res),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(RfError::InvalidParameter(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Z_in = R_res / (1 + j 2 Q_L (f - f_res) / f_res).
///
/// This is the narrowband form of the parallel tank, so |Z_in| is exactly
/// symmetric in f - f_res.
pub fn input_impedance(f: f64, f_res: f64, m: &MatchingModel) -> Result<Complex64, RfError> {
    if !(f > 0.0 && f_res > 0.0) {
        return Err(RfError::InvalidParameter(format!(
            "frequencies must be > 0, got f = {f}, f_res = {f_res}"
        )));
    }
    let y = 2.0 * m.tank_q() * (f - f_res) / f_res;
    Ok(m.r_res / Complex64::new(1.0, y))
}

/// 20 log10 |S11|, floored at [`RETURN_LOSS_FLOOR_DB`].
pub fn return_loss(z_in: Complex64, z_s: f64) -> Result<f64, RfError> {
    let den = z_in + z_s;
    if den.norm() == 0.0 {
        return Err(RfError::Degenerate);
    }
    let s11 = (z_in - z_s).norm() / den.norm();
    Ok((20.0 * s11.log10()).max(RETURN_LOSS_FLOOR_DB))
}

/// Width (Hz) of the band around `f_res` with return loss below -10 dB.
///
/// Solves |S11|^2 = 1/10 for the tank detuning y_c in closed form; the band
/// edges sit at f_res (1 +- y_c / 2 Q_L).
pub fn channel_bandwidth(f_res: f64, m: &MatchingModel) -> Result<f64, RfError> {
    m.validate()?;
    if !(f_res > 0.0) {
        return Err(RfError::InvalidParameter(format!(
            "f_res must be > 0, got {f_res}"
        )));
    }
    let (r, zs) = (m.r_res, m.z_s);
    // (r - zs)^2 + zs^2 y^2 = 0.1 [(r + zs)^2 + zs^2 y^2]
    let rhs = 0.1 * (r + zs).powi(2) - (r - zs).powi(2);
    if rhs <= 0.0 {
        let at_res = return_loss(Complex64::new(r, 0.0), zs)?;
        return Err(RfError::NoBand(at_res));
    }
    let y_c = (rhs / 0.9).sqrt() / zs;
    Ok(f_res * y_c / m.tank_q())
}
