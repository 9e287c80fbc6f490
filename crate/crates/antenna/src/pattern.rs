use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use yagi_physics::C0;

use crate::{AntennaError, AntennaLayout};

/// Gauss-Legendre order in cos(theta) used to normalise patterns.
const QUAD_ORDER: usize = 64;
/// Uniform azimuth samples for normalisation (exact for band-limited integrands).
const QUAD_PHI: usize = 128;

/// Directivity sampled on a regular (theta, phi) grid.
///
/// Rows are theta from 0 to 180 degrees inclusive, columns phi from 0 up to
/// (but excluding) 360 degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiationPattern {
    pub frequency: f64,
    pub step_deg: f64,
    pub n_theta: usize,
    pub n_phi: usize,
    /// Row-major, theta then phi.
    pub directivity_dbi: Vec<f64>,
    /// Radiation efficiency of the state that produced the pattern.
    pub efficiency: f64,
}

impl RadiationPattern {
    pub fn theta_deg(&self, i: usize) -> f64 {
        i as f64 * self.step_deg
    }

    pub fn phi_deg(&self, j: usize) -> f64 {
        j as f64 * self.step_deg
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.directivity_dbi[i * self.n_phi + j]
    }

    /// Row index of the horizon (theta = 90).
    pub fn horizon(&self) -> usize {
        self.n_theta / 2
    }

    /// Directivity (dBi) along the XY-plane cut, indexed by phi.
    pub fn xy_cut(&self) -> &[f64] {
        let i = self.horizon();
        &self.directivity_dbi[i * self.n_phi..(i + 1) * self.n_phi]
    }

    /// Mean linear directivity over the sphere from the stored samples
    /// (trapezoid in theta with sin weighting, rectangle in phi).
    pub fn sphere_mean(&self) -> f64 {
        let d = self.step_deg.to_radians();
        let mut acc = 0.0;
        for i in 0..self.n_theta {
            let w = if i == 0 || i + 1 == self.n_theta {
                0.5
            } else {
                1.0
            };
            let s = self.theta_deg(i).to_radians().sin();
            let row: f64 = (0..self.n_phi)
                .map(|j| 10f64.powf(self.at(i, j) / 10.0))
                .sum();
            acc += w * s * row;
        }
        acc * d * d / (4.0 * PI)
    }

    /// Maximum directivity over the grid (dBi).
    pub fn max_dbi(&self) -> f64 {
        self.directivity_dbi
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Checks that `step` divides 90 degrees.
pub fn check_step(step: f64) -> Result<(usize, usize), AntennaError> {
    let q = 90.0 / step;
    if !(step > 0.0) || (q - q.round()).abs() > 1e-9 || q.round() < 1.0 {
        return Err(AntennaError::InvalidConfig(format!(
            "grid step {step} deg must divide 90"
        )));
    }
    let q = q.round() as usize;
    Ok((2 * q + 1, 4 * q))
}

/// Far-zone field of short dipoles with the given currents.
struct ArrayField {
    k: f64,
    sources: Vec<([f64; 3], [f64; 3], Complex64)>,
}

impl ArrayField {
    /// |E_perp|^2 up to a constant, for unit vector r.
    fn intensity(&self, r: [f64; 3]) -> f64 {
        let mut p = [Complex64::new(0.0, 0.0); 3];
        for (pos, dir, i) in &self.sources {
            let phase = self.k * (r[0] * pos[0] + r[1] * pos[1] + r[2] * pos[2]);
            let a = i * Complex64::from_polar(1.0, phase);
            for c in 0..3 {
                p[c] += a * dir[c];
            }
        }
        let rp = p[0] * r[0] + p[1] * r[1] + p[2] * r[2];
        (p[0].norm_sqr() + p[1].norm_sqr() + p[2].norm_sqr() - rp.norm_sqr()).max(0.0)
    }

    fn total(&self) -> f64 {
        let gl = GaussLegendre::new(NonZeroUsize::new(QUAD_ORDER).unwrap());
        let dphi = 2.0 * PI / QUAD_PHI as f64;
        gl.integrate(-1.0, 1.0, |u| {
            let s = (1.0 - u * u).max(0.0).sqrt();
            (0..QUAD_PHI)
                .map(|j| {
                    let phi = j as f64 * dphi;
                    self.intensity([s * phi.cos(), s * phi.sin(), u])
                })
                .sum::<f64>()
                * dphi
        })
    }
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Directivity pattern of short dipoles carrying `currents` (element
/// index, current) at frequency `f`.
pub fn far_field(
    layout: &AntennaLayout,
    currents: &[(usize, Complex64)],
    f: f64,
    step_deg: f64,
    efficiency: f64,
) -> Result<RadiationPattern, AntennaError> {
    let (n_theta, n_phi) = check_step(step_deg)?;
    let sources = currents
        .iter()
        .map(|&(idx, i)| {
            let e = layout.element(idx).ok_or_else(|| {
                AntennaError::InvalidConfig(format!("no element {idx} in layout"))
            })?;
            Ok((e.position(), e.arm.dipole(), i))
        })
        .collect::<Result<Vec<_>, AntennaError>>()?;
    let field = ArrayField {
        k: 2.0 * PI * f / C0,
        sources,
    };
    let total = field.total();
    if !(total > 0.0 && total.is_finite()) {
        return Err(AntennaError::DegeneratePattern(format!(
            "radiated power {total:e}"
        )));
    }
    let norm = 4.0 * PI / total;
    let mut directivity_dbi = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = (i as f64 * step_deg).to_radians();
        for j in 0..n_phi {
            let phi = (j as f64 * step_deg).to_radians();
            directivity_dbi.push(10.0 * (norm * field.intensity(unit(theta, phi))).log10());
        }
    }
    Ok(RadiationPattern {
        frequency: f,
        step_deg,
        n_theta,
        n_phi,
        directivity_dbi,
        efficiency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_x_dipole() {
        let layout = AntennaLayout::cross();
        let p = far_field(&layout, &[(1, Complex64::new(1.0, 0.0))], 2.3e12, 1.0, 1.0).unwrap();
        // 1.5 = 1.76 dBi broadside
        assert_relative_eq!(p.max_dbi(), 10.0 * 1.5f64.log10(), epsilon = 1e-9);
        // YZ plane (phi = 90) is flat
        let yz: Vec<f64> = (0..p.n_theta).map(|i| p.at(i, 90)).collect();
        let spread = yz.iter().cloned().fold(f64::MIN, f64::max)
            - yz.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 0.01, "{spread}");
        // null along x
        assert!(p.at(90, 0) < -100.0);
        assert!((p.sphere_mean() - 1.0).abs() < 0.01);
    }

    #[test]
    fn step_must_divide_right_angle() {
        assert_eq!(check_step(1.0).unwrap(), (181, 360));
        assert_eq!(check_step(5.0).unwrap(), (37, 72));
        assert!(check_step(7.0).is_err());
        assert!(check_step(0.0).is_err());
    }
}
