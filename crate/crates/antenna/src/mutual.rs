//! Induced-EMF mutual impedance of parallel side-by-side thin dipoles.
//!
//! Both dipoles carry sinusoidal currents and are referred to their base
//! (feed-point) currents. Evaluated in closed form through Si and Ci.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::special::si_ci;

/// Free-space wave impedance (ohm).
pub const ETA0: f64 = 376.730_313_668;

/// Primitive of e^{-jkR}/R e^{-+jk(z-z0)} expressed through w = R +- (z - z0).
fn expint(kw: f64) -> Option<Complex64> {
    let (si, ci) = si_ci(kw)?;
    Some(Complex64::new(ci, -si))
}

// w = R + u, rewritten as d^2/(R - u) when u < 0 to avoid cancellation.
fn w_plus(u: f64, d: f64) -> f64 {
    let r = d.hypot(u);
    if u >= 0.0 {
        r + u
    } else {
        d * d / (r - u)
    }
}

fn w_minus(u: f64, d: f64) -> f64 {
    w_plus(-u, d)
}

/// Integral over the second dipole of sin(k(h - |z|)) e^{-jkR}/R, where R is
/// the distance to the point (d, z0) on the first dipole.
fn weighted_kernel(z0: f64, h: f64, d: f64, k: f64) -> Option<Complex64> {
    let fp = |z: f64| expint(k * w_plus(z - z0, d));
    let fm = |z: f64| expint(k * w_minus(z - z0, d)).map(|e| -e);
    let ph = |a: f64| Complex64::from_polar(1.0, k * a);

    let upper = ph(h - z0) * (fp(h)? - fp(0.0)?) - ph(z0 - h) * (fm(h)? - fm(0.0)?);
    let lower = ph(h + z0) * (fm(0.0)? - fm(-h)?) - ph(-h - z0) * (fp(0.0)? - fp(-h)?);
    Some((upper + lower) / Complex64::new(0.0, 2.0))
}

/// Mutual impedance (ohm) between two parallel dipoles of half-length `h`
/// separated side by side by `d`, at wavenumber `k`.
///
/// Returns `None` if a special-function evaluation fails. Evaluating at
/// `d` equal to the equivalent wire radius gives the self impedance.
pub fn mutual_impedance(d: f64, h: f64, k: f64) -> Option<Complex64> {
    if !(d > 0.0 && h > 0.0 && k > 0.0) {
        return None;
    }
    let kh = k * h;
    let s = kh.sin();
    if s.abs() < 1e-12 {
        return None;
    }
    let sum = weighted_kernel(h, h, d, k)? + weighted_kernel(-h, h, d, k)?
        - 2.0 * kh.cos() * weighted_kernel(0.0, h, d, k)?;
    Some(Complex64::new(0.0, ETA0 / (4.0 * PI * s * s)) * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_wave(d_over_lambda: f64) -> Complex64 {
        let k = 2.0 * PI;
        mutual_impedance(d_over_lambda, 0.25, k).unwrap()
    }

    #[test]
    fn classic_half_wave_values() {
        // Side-by-side half-wave dipoles, widely tabulated induced-EMF results.
        let z = half_wave(0.25);
        assert!(
            (z.re - 40.8).abs() < 0.1 && (z.im + 28.3).abs() < 0.2,
            "{z}"
        );
        let z = half_wave(0.5);
        assert!(
            (z.re + 12.5).abs() < 0.2 && (z.im + 29.9).abs() < 0.2,
            "{z}"
        );
        let z = half_wave(1e-5);
        assert!(
            (z.re - 73.13).abs() < 0.1 && (z.im - 42.5).abs() < 1.0,
            "{z}"
        );
    }

    #[test]
    fn invalid_geometry() {
        assert!(mutual_impedance(0.0, 1.0, 1.0).is_none());
        assert!(mutual_impedance(1.0, PI, 1.0).is_none());
    }
}
