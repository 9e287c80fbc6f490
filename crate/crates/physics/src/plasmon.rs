use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Deserialize;

use crate::sheet::invalid;
use crate::{
    kubo_conductivity, layer_conductivity, DrudeResponse, GrapheneSheet, PhysicalConstants,
    PhysicsError, Result, SINGULAR_FLOOR,
};

/// Frequency band (Hz) searched for resonances.
pub const SEARCH_BAND: (f64, f64) = (0.1e12, 10e12);

fn check_eps(eps_eff: f64) -> Result<()> {
    if !(eps_eff.is_finite() && eps_eff >= 1.0) {
        return Err(invalid(format!("eps_eff must be >= 1, got {eps_eff}")));
    }
    Ok(())
}

fn wavevector(sigma: Complex64, f: f64, eps_eff: f64, c: &PhysicalConstants) -> Result<Complex64> {
    let mag = sigma.norm();
    if !(mag >= SINGULAR_FLOOR) {
        return Err(PhysicsError::SingularConductivity(mag));
    }
    let omega = 2.0 * PI * f;
    Ok(Complex64::new(0.0, 2.0 * omega * c.eps0 * eps_eff) / sigma)
}

/// Quasi-static TM plasmon wavevector q = 2 i omega eps0 eps_eff / sigma_N (rad/m).
pub fn plasmon_wavevector(
    sheet: &GrapheneSheet,
    f: f64,
    eps_eff: f64,
    c: &PhysicalConstants,
) -> Result<Complex64> {
    check_eps(eps_eff)?;
    let sigma = layer_conductivity(kubo_conductivity(sheet, f, c)?, sheet.layers)?;
    wavevector(sigma.value, f, eps_eff, c)
}

/// Plasmon wavevector for an arbitrary Drude-form sheet response.
pub fn plasmon_wavevector_for(
    response: &DrudeResponse,
    f: f64,
    eps_eff: f64,
    c: &PhysicalConstants,
) -> Result<Complex64> {
    check_eps(eps_eff)?;
    if !(f.is_finite() && f > 0.0) {
        return Err(invalid(format!("frequency must be > 0, got {f}")));
    }
    wavevector(response.conductivity(f), f, eps_eff, c)
}

/// Dipole resonance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResonanceMode {
    /// Half-wavelength, low-impedance resonance.
    First,
    /// Full-wavelength, high-impedance resonance.
    Second,
}

impl ResonanceMode {
    /// Number of plasmon wavelengths along the dipole.
    pub fn order(self) -> f64 {
        match self {
            ResonanceMode::First => 0.5,
            ResonanceMode::Second => 1.0,
        }
    }
}

/// Resonance condition Re(q(f)) L = 2 pi m cal for a dipole of length L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceModel {
    /// Dipole length (m).
    pub length: f64,
    pub eps_eff: f64,
    pub mode: ResonanceMode,
    /// Multiplicative correction on the right-hand side.
    pub calibration: f64,
}

impl ResonanceModel {
    /// Reference dipole: 25 um, eps_eff 5.15, second resonance, uncalibrated.
    pub fn uncalibrated() -> Self {
        Self {
            length: 25e-6,
            eps_eff: 5.15,
            mode: ResonanceMode::Second,
            calibration: 1.0,
        }
    }

    /// Reference dipole calibrated so that a 0.5 eV, 300 K, single-layer
    /// sheet resonates at 2.3 THz.
    pub fn reference(c: &PhysicalConstants) -> Self {
        let sheet = GrapheneSheet::default();
        Self::uncalibrated()
            .calibrated_to(&sheet, 2.3e12, c)
            .expect("reference sheet is valid")
    }

    /// Returns a copy whose calibration places the resonance of `sheet` at `f_target`.
    pub fn calibrated_to(
        self,
        sheet: &GrapheneSheet,
        f_target: f64,
        c: &PhysicalConstants,
    ) -> Result<Self> {
        let q = plasmon_wavevector(sheet, f_target, self.eps_eff, c)?;
        let calibration = q.re * self.length / (2.0 * PI * self.mode.order());
        Ok(Self {
            calibration,
            ..self
        })
    }

    fn validate(&self) -> Result<()> {
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(invalid(format!(
                "dipole length must be > 0, got {}",
                self.length
            )));
        }
        if !(self.calibration.is_finite() && self.calibration > 0.0) {
            return Err(invalid(format!(
                "calibration must be > 0, got {}",
                self.calibration
            )));
        }
        check_eps(self.eps_eff)
    }

    /// Resonance of a graphene sheet (layer count included).
    pub fn frequency(&self, sheet: &GrapheneSheet, c: &PhysicalConstants) -> Result<f64> {
        self.frequency_for(&DrudeResponse::of_sheet(sheet, c)?, c)
    }

    /// Resonance of an arbitrary Drude-form response, by bisection over [`SEARCH_BAND`].
    pub fn frequency_for(&self, response: &DrudeResponse, c: &PhysicalConstants) -> Result<f64> {
        self.validate()?;
        let target = 2.0 * PI * self.mode.order() * self.calibration;
        let g = |f: f64| -> Result<f64> {
            Ok(plasmon_wavevector_for(response, f, self.eps_eff, c)?.re * self.length - target)
        };
        let (mut lo, mut hi) = SEARCH_BAND;
        let (g_lo, g_hi) = (g(lo)?, g(hi)?);
        if g_lo > 0.0 || g_hi < 0.0 {
            return Err(PhysicsError::NoRoot { lo, hi });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Resonance frequency (Hz) of a graphene dipole of length `length`.
pub fn resonance_frequency(
    length: f64,
    sheet: &GrapheneSheet,
    eps_eff: f64,
    mode: ResonanceMode,
    calibration: f64,
    c: &PhysicalConstants,
) -> Result<f64> {
    ResonanceModel {
        length,
        eps_eff,
        mode,
        calibration,
    }
    .frequency(sheet, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    fn sheet(e_f: f64) -> GrapheneSheet {
        GrapheneSheet::default().with_e_f(e_f)
    }

    #[test]
    fn doubling_conductivity_halves_wavevector() {
        let s1 = sheet(0.4);
        let s2 = GrapheneSheet { layers: 2, ..s1 };
        let q1 = plasmon_wavevector(&s1, 2e12, 5.15, &c()).unwrap();
        let q2 = plasmon_wavevector(&s2, 2e12, 5.15, &c()).unwrap();
        assert_relative_eq!(q1.re, 2.0 * q2.re, max_relative = 1e-14);
        assert_relative_eq!(q1.im, 2.0 * q2.im, max_relative = 1e-14);
    }

    #[test]
    fn slow_wave_and_positive_real_part() {
        let q = plasmon_wavevector(&sheet(0.5), 2.3e12, 5.15, &c()).unwrap();
        let k0 = 2.0 * PI * 2.3e12 / crate::C0;
        assert!(q.re > 0.0);
        assert!(q.re / k0 > 5.0, "slow-wave factor {}", q.re / k0);
    }

    #[test]
    fn drude_limit_scaling() {
        // Re(q) ~ omega^2 / E_F once E_F >> k_B T.
        let f = 2e12;
        let q3 = plasmon_wavevector(&sheet(0.3), f, 5.15, &c()).unwrap().re;
        let q6 = plasmon_wavevector(&sheet(0.6), f, 5.15, &c()).unwrap().re;
        assert_relative_eq!(q3 / q6, 2.0, max_relative = 0.01);
        let q3b = plasmon_wavevector(&sheet(0.3), 2.0 * f, 5.15, &c())
            .unwrap()
            .re;
        assert_relative_eq!(q3b / q3, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn singular_sheet_propagates() {
        let r = DrudeResponse {
            weight: 0.0,
            tau: 0.5e-12,
        };
        assert!(matches!(
            plasmon_wavevector_for(&r, 1e12, 5.15, &c()),
            Err(PhysicsError::SingularConductivity(_))
        ));
        assert!(plasmon_wavevector(&sheet(0.5), 1e12, 0.5, &c()).is_err());
    }

    #[test]
    fn reference_calibration_hits_operating_point() {
        let m = ResonanceModel::reference(&c());
        assert_relative_eq!(
            m.frequency(&sheet(0.5), &c()).unwrap(),
            2.3e12,
            max_relative = 1e-12
        );
        let raw = ResonanceModel::uncalibrated()
            .frequency(&sheet(0.5), &c())
            .unwrap();
        assert!(raw > 1.9e12 && raw < 2.1e12, "{raw}");
        assert!((m.calibration - 1.0).abs() < 0.35);
    }

    #[test]
    fn bisection_matches_closed_form() {
        // Re(q) = 2 eps0 eps_eff omega^2 / D exactly for the Drude form.
        let m = ResonanceModel::reference(&c());
        for e_f in [0.1, 0.2, 0.35, 0.8, 1.2] {
            let d = crate::drude_weight(&sheet(e_f), &c());
            let omega2 = 2.0 * PI * m.mode.order() * m.calibration / m.length * d
                / (2.0 * c().eps0 * m.eps_eff);
            let expect = omega2.sqrt() / (2.0 * PI);
            assert_relative_eq!(
                m.frequency(&sheet(e_f), &c()).unwrap(),
                expect,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn first_below_second() {
        let m = ResonanceModel::reference(&c());
        let first = ResonanceModel {
            mode: ResonanceMode::First,
            ..m
        };
        let s = sheet(0.5);
        assert!(first.frequency(&s, &c()).unwrap() < m.frequency(&s, &c()).unwrap());
    }

    #[test]
    fn quadrupled_potential_doubles_frequency() {
        let m = ResonanceModel::reference(&c());
        let f1 = m.frequency(&sheet(0.3), &c()).unwrap();
        let f4 = m.frequency(&sheet(1.2), &c()).unwrap();
        assert_relative_eq!(f4 / f1, 2.0, max_relative = 0.02);
    }

    #[test]
    fn unbracketed_root() {
        let m = ResonanceModel::reference(&c());
        assert!(matches!(
            m.frequency(&sheet(1e-6).with_e_f(40.0), &c()),
            Err(PhysicsError::NoRoot { .. })
        ));
    }
}
