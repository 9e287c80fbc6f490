use std::f64::consts::PI;

use crate::sheet::invalid;
use crate::{BiasStack, PhysicalConstants, Result};

// V per J^2: e t / (pi hbar^2 v_F^2 eps0 eps_r)
fn volts_per_joule2(stack: &BiasStack, c: &PhysicalConstants) -> f64 {
    c.e * stack.thickness / (PI * c.hbar * c.hbar * c.v_f * c.v_f * c.eps0 * stack.eps_r)
}

/// Single-layer gate voltage needed to reach chemical potential `e_f` (eV).
pub fn gate_voltage(e_f: f64, stack: &BiasStack, c: &PhysicalConstants) -> Result<f64> {
    if !(e_f.is_finite() && e_f >= 0.0) {
        return Err(invalid(format!("E_F must be >= 0 eV, got {e_f}")));
    }
    stack.validate()?;
    let ej = c.ev_to_joule(e_f);
    Ok(volts_per_joule2(stack, c) * ej * ej)
}

/// Inverse of [`gate_voltage`]: chemical potential (eV) reached at gate voltage `v`.
pub fn chemical_potential_from_voltage(
    v: f64,
    stack: &BiasStack,
    c: &PhysicalConstants,
) -> Result<f64> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(invalid(format!("gate voltage must be >= 0 V, got {v}")));
    }
    stack.validate()?;
    Ok((v / volts_per_joule2(stack, c)).sqrt() / c.e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn zero_bias() {
        let s = BiasStack::default();
        assert_eq!(gate_voltage(0.0, &s, &c()).unwrap(), 0.0);
        assert_eq!(chemical_potential_from_voltage(0.0, &s, &c()).unwrap(), 0.0);
    }

    #[test]
    fn half_ev_on_default_spacer() {
        // Independent evaluation with the constants spelled out.
        let e = 1.602_176_634e-19_f64;
        let hbar = 1.054_571_817e-34_f64;
        let eps0 = 8.854_187_812_8e-12_f64;
        let ej = 0.5 * e;
        let expect = e * ej * ej * 100e-9 / (PI * hbar.powi(2) * 1e12 * eps0 * 9.3);
        let v = gate_voltage(0.5, &BiasStack::default(), &c()).unwrap();
        assert_relative_eq!(v, expect, max_relative = 1e-14);
        assert!((v - 35.74).abs() < 0.01, "{v}");
    }

    #[test]
    fn quarter_voltage_at_half_potential() {
        let s = BiasStack::default();
        let v1 = gate_voltage(0.5, &s, &c()).unwrap();
        let v2 = gate_voltage(0.25, &s, &c()).unwrap();
        assert_relative_eq!(v2, v1 / 4.0, max_relative = 1e-15);
        let back = chemical_potential_from_voltage(v1 / 4.0, &s, &c()).unwrap();
        assert_relative_eq!(back, 0.25, max_relative = 1e-14);
    }

    #[test]
    fn rejects_negative() {
        let s = BiasStack::default();
        assert!(gate_voltage(-0.1, &s, &c()).is_err());
        assert!(chemical_potential_from_voltage(-1.0, &s, &c()).is_err());
        let bad = BiasStack { eps_r: 0.5, ..s };
        assert!(gate_voltage(0.1, &bad, &c()).is_err());
    }

    proptest! {
        #[test]
        fn quadratic_law(x in 1e-4f64..2.0, t in 10e-9f64..1e-6, eps in 1.5f64..30.0) {
            let s = BiasStack { thickness: t, eps_r: eps };
            let r = gate_voltage(2.0 * x, &s, &c()).unwrap() / gate_voltage(x, &s, &c()).unwrap();
            prop_assert_eq!(r, 4.0);
        }

        #[test]
        fn round_trip(v in 0.0f64..500.0, t in 10e-9f64..1e-6, eps in 1.5f64..30.0) {
            let s = BiasStack { thickness: t, eps_r: eps };
            let e_f = chemical_potential_from_voltage(v, &s, &c()).unwrap();
            let back = gate_voltage(e_f, &s, &c()).unwrap();
            prop_assert!((back - v).abs() <= 1e-12 * v.max(f64::MIN_POSITIVE));
        }
    }
}
