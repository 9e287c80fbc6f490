use std::f64::consts::PI;

use num_complex::Complex64;

use crate::sheet::invalid;
use crate::{ComplexSurfaceQuantity, GrapheneSheet, PhysicalConstants, PhysicsError, Result};

/// Conductivities with a smaller magnitude than this (S) are treated as singular.
pub const SINGULAR_FLOOR: f64 = 1e-12;

/// ln(2 cosh x) without overflow for large |x|.
pub fn ln_2cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Intraband Drude weight D of a single layer, so that sigma = D i/(omega + i/tau).
///
/// D = (2 e^2 / pi hbar) (k_B T / hbar) ln[2 cosh(E_F / 2 k_B T)], in S/s.
pub fn drude_weight(sheet: &GrapheneSheet, c: &PhysicalConstants) -> f64 {
    let kt = c.k_b * sheet.temperature;
    let x = c.ev_to_joule(sheet.e_f) / (2.0 * kt);
    2.0 * c.e * c.e / (PI * c.hbar) * (kt / c.hbar) * ln_2cosh(x)
}

/// A Drude-form sheet response, sigma(omega) = weight i/(omega + i/tau).
///
/// Both the intraband Kubo term and its layered or residual variants have
/// this shape, which lets the antenna model describe tuned-off elements
/// as a fraction of a driver's weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeResponse {
    /// Drude weight (S/s).
    pub weight: f64,
    /// Relaxation time (s).
    pub tau: f64,
}

impl DrudeResponse {
    /// Response of the full sheet including the layer count.
    pub fn of_sheet(sheet: &GrapheneSheet, c: &PhysicalConstants) -> Result<Self> {
        sheet.validate()?;
        Ok(Self {
            weight: drude_weight(sheet, c) * sheet.layers as f64,
            tau: sheet.tau,
        })
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            weight: self.weight * factor,
            ..self
        }
    }

    pub fn conductivity(&self, f: f64) -> Complex64 {
        let omega = 2.0 * PI * f;
        self.weight * Complex64::i() / Complex64::new(omega, 1.0 / self.tau)
    }
}

/// Single-layer intraband Kubo conductivity at frequency `f` (Hz).
///
/// The sheet's layer count is ignored here; apply [`layer_conductivity`].
pub fn kubo_conductivity(
    sheet: &GrapheneSheet,
    f: f64,
    c: &PhysicalConstants,
) -> Result<ComplexSurfaceQuantity> {
    if !(f.is_finite() && f > 0.0) {
        return Err(invalid(format!("frequency must be > 0, got {f}")));
    }
    sheet.validate()?;
    let omega = 2.0 * PI * f;
    let value = drude_weight(sheet, c) * Complex64::i() / Complex64::new(omega, 1.0 / sheet.tau);
    Ok(ComplexSurfaceQuantity {
        value,
        frequency: f,
    })
}

/// Few-layer approximation sigma_N = N sigma.
pub fn layer_conductivity(
    sigma: ComplexSurfaceQuantity,
    layers: u32,
) -> Result<ComplexSurfaceQuantity> {
    if !(1..crate::MAX_LAYERS).contains(&layers) {
        return Err(invalid(format!(
            "layer count must be in 1..{}, got {layers}",
            crate::MAX_LAYERS
        )));
    }
    Ok(ComplexSurfaceQuantity {
        value: sigma.value * layers as f64,
        ..sigma
    })
}

/// Surface impedance Z = 1/sigma_N.
pub fn surface_impedance(sigma_n: ComplexSurfaceQuantity) -> Result<ComplexSurfaceQuantity> {
    let mag = sigma_n.value.norm();
    if !(mag >= SINGULAR_FLOOR) {
        return Err(PhysicsError::SingularConductivity(mag));
    }
    Ok(ComplexSurfaceQuantity {
        value: sigma_n.value.inv(),
        ..sigma_n
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn consts() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn ln_2cosh_matches_naive_form() {
        for x in [-30.0, -2.5, -0.1, 0.0, 0.7, 5.0, 19.0] {
            let naive = (2.0 * f64::cosh(x)).ln();
            assert_relative_eq!(ln_2cosh(x), naive, max_relative = 1e-14);
        }
        assert_relative_eq!(ln_2cosh(0.0), std::f64::consts::LN_2);
        assert!(ln_2cosh(1e4).is_finite());
    }

    #[test]
    fn zero_potential_keeps_thermal_ln2_term() {
        let c = consts();
        let sheet = GrapheneSheet::new(0.0, 0.5e-12, 300.0, 1).unwrap();
        let f = 1e12;
        let s = kubo_conductivity(&sheet, f, &c).unwrap().value;
        let omega = 2.0 * PI * f;
        let pref = 2.0 * c.e * c.e / (PI * c.hbar) * (c.k_b * 300.0 / c.hbar);
        let expect =
            pref * std::f64::consts::LN_2 * Complex64::i() / Complex64::new(omega, 1.0 / 0.5e-12);
        assert_relative_eq!(s.re, expect.re, max_relative = 1e-14);
        assert_relative_eq!(s.im, expect.im, max_relative = 1e-14);
    }

    #[test]
    fn long_relaxation_limit_is_lossless() {
        let c = consts();
        let f = 2.3e12;
        let short = GrapheneSheet::new(0.5, 0.5e-12, 300.0, 1).unwrap();
        let long = GrapheneSheet { tau: 1e-3, ..short };
        let s_long = kubo_conductivity(&long, f, &c).unwrap().value;
        let s_short = kubo_conductivity(&short, f, &c).unwrap().value;
        assert!(s_long.re / s_long.im < 1e-8);
        assert!(s_long.im > 0.0);
        let lossless = drude_weight(&long, &c) / (2.0 * PI * f);
        assert_relative_eq!(s_long.im, lossless, max_relative = 1e-12);
        assert!(s_short.re > s_long.re);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = consts();
        let sheet = GrapheneSheet::default();
        assert!(kubo_conductivity(&sheet, 0.0, &c).is_err());
        assert!(kubo_conductivity(&sheet, -1.0, &c).is_err());
        assert!(kubo_conductivity(&GrapheneSheet { tau: 0.0, ..sheet }, 1e12, &c).is_err());
        assert!(kubo_conductivity(
            &GrapheneSheet {
                temperature: -3.0,
                ..sheet
            },
            1e12,
            &c
        )
        .is_err());
    }

    #[test]
    fn layer_rule() {
        let s = ComplexSurfaceQuantity {
            value: Complex64::new(1e-4, 2e-3),
            frequency: 1e12,
        };
        assert_eq!(layer_conductivity(s, 1).unwrap(), s);
        assert_eq!(layer_conductivity(s, 3).unwrap().value, s.value * 3.0);
        assert!(layer_conductivity(s, 6).is_err());
        assert!(layer_conductivity(s, 0).is_err());
    }

    #[test]
    fn impedance_inverts() {
        let q = |v| ComplexSurfaceQuantity {
            value: v,
            frequency: 1e12,
        };
        assert_eq!(
            surface_impedance(q(Complex64::new(1.0, 0.0)))
                .unwrap()
                .value,
            Complex64::new(1.0, 0.0)
        );
        let z = surface_impedance(q(Complex64::new(0.0, 1e-3)))
            .unwrap()
            .value;
        assert_relative_eq!(z.re, 0.0, epsilon = 1e-12);
        assert_relative_eq!(z.im, -1e3, max_relative = 1e-15);
        assert!(matches!(
            surface_impedance(q(Complex64::new(1e-13, 0.0))),
            Err(PhysicsError::SingularConductivity(_))
        ));
    }

    #[test]
    fn drude_response_matches_kubo() {
        let c = consts();
        let sheet = GrapheneSheet::new(0.37, 0.3e-12, 250.0, 2).unwrap();
        let r = DrudeResponse::of_sheet(&sheet, &c).unwrap();
        let k = kubo_conductivity(&sheet, 1.7e12, &c).unwrap();
        let n = layer_conductivity(k, 2).unwrap().value;
        let d = r.conductivity(1.7e12);
        assert_relative_eq!(d.re, n.re, max_relative = 1e-14);
        assert_relative_eq!(d.im, n.im, max_relative = 1e-14);
    }
}
