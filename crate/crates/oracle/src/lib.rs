//! Reference evaluations of the sheet conductivity in 256-bit floating point.
//!
//! Written directly from the closed form with no shared code paths with the
//! production crates: ln(2 cosh x) is evaluated literally and the complex
//! division is expanded by hand.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

/// Constants as exact decimal strings (CODATA 2018).
pub const E: &str = "1.602176634e-19";
pub const HBAR: &str = "1.054571817e-34";
pub const K_B: &str = "1.380649e-23";
pub const EPS0: &str = "8.8541878128e-12";

pub struct Oracle {
    cc: Consts,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new()
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self {
            cc: Consts::new().expect("constant cache"),
        }
    }

    fn parse(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, P, RM, &mut self.cc)
    }

    fn as_f64(&mut self, x: &BigFloat) -> f64 {
        x.format(Radix::Dec, RM, &mut self.cc)
            .expect("format")
            .parse()
            .expect("decimal")
    }

    /// Single-layer intraband conductivity (S) as (re, im).
    pub fn kubo(&mut self, e_f_ev: f64, temperature: f64, tau: f64, f: f64) -> (f64, f64) {
        let (re, im) = self.kubo_big(e_f_ev, temperature, tau, f);
        (self.as_f64(&re), self.as_f64(&im))
    }

    fn kubo_big(
        &mut self,
        e_f_ev: f64,
        temperature: f64,
        tau: f64,
        f: f64,
    ) -> (BigFloat, BigFloat) {
        let e = self.parse(E);
        let hbar = self.parse(HBAR);
        let kb = self.parse(K_B);
        let pi = self.cc.pi(P, RM);
        let two = BigFloat::from_f64(2.0, P);
        let one = BigFloat::from_f64(1.0, P);
        let t = BigFloat::from_f64(temperature, P);
        let tau = BigFloat::from_f64(tau, P);
        let f = BigFloat::from_f64(f, P);
        let ef = BigFloat::from_f64(e_f_ev, P).mul(&e, P, RM);

        let kt = kb.mul(&t, P, RM);
        let x = ef.div(&two.mul(&kt, P, RM), P, RM);
        let log = two
            .mul(&x.cosh(P, RM, &mut self.cc), P, RM)
            .ln(P, RM, &mut self.cc);
        let pref = two
            .mul(&e, P, RM)
            .mul(&e, P, RM)
            .div(&pi.mul(&hbar, P, RM), P, RM)
            .mul(&kt.div(&hbar, P, RM), P, RM)
            .mul(&log, P, RM);
        // i / (w + i g) = (g + i w) / (w^2 + g^2)
        let w = two.mul(&pi, P, RM).mul(&f, P, RM);
        let g = one.div(&tau, P, RM);
        let den = w.mul(&w, P, RM).add(&g.mul(&g, P, RM), P, RM);
        let re = pref.mul(&g, P, RM).div(&den, P, RM);
        let im = pref.mul(&w, P, RM).div(&den, P, RM);
        (re, im)
    }

    /// Surface impedance 1/(N sigma) (ohm) as (re, im).
    pub fn impedance(
        &mut self,
        e_f_ev: f64,
        temperature: f64,
        tau: f64,
        f: f64,
        layers: u32,
    ) -> (f64, f64) {
        let (re, im) = self.kubo_big(e_f_ev, temperature, tau, f);
        let n = BigFloat::from_f64(layers as f64, P);
        let (re, im) = (re.mul(&n, P, RM), im.mul(&n, P, RM));
        let den = re.mul(&re, P, RM).add(&im.mul(&im, P, RM), P, RM);
        let zr = re.div(&den, P, RM);
        let zi = im.div(&den, P, RM).neg();
        (self.as_f64(&zr), self.as_f64(&zi))
    }

    /// Plasmon wavevector 2 i omega eps0 eps_eff / (N sigma) (rad/m) as (re, im).
    pub fn wavevector(
        &mut self,
        e_f_ev: f64,
        temperature: f64,
        tau: f64,
        f: f64,
        layers: u32,
        eps_eff: f64,
    ) -> (f64, f64) {
        let (re, im) = self.kubo_big(e_f_ev, temperature, tau, f);
        let n = BigFloat::from_f64(layers as f64, P);
        let (re, im) = (re.mul(&n, P, RM), im.mul(&n, P, RM));
        let pi = self.cc.pi(P, RM);
        let two = BigFloat::from_f64(2.0, P);
        let eps0 = self.parse(EPS0);
        let a = two
            .mul(&two, P, RM)
            .mul(&pi, P, RM)
            .mul(&BigFloat::from_f64(f, P), P, RM)
            .mul(&eps0, P, RM)
            .mul(&BigFloat::from_f64(eps_eff, P), P, RM);
        // i a / (re + i im) = i a (re - i im) / |s|^2 = (a im + i a re) / |s|^2
        let den = re.mul(&re, P, RM).add(&im.mul(&im, P, RM), P, RM);
        let qr = a.mul(&im, P, RM).div(&den, P, RM);
        let qi = a.mul(&re, P, RM).div(&den, P, RM);
        (self.as_f64(&qr), self.as_f64(&qi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_potential_reduces_to_ln2() {
        let mut o = Oracle::new();
        let (re, im) = o.kubo(0.0, 300.0, 1e-12, 1e12);
        let pref = 2.0 * 1.602176634e-19f64.powi(2) / (std::f64::consts::PI * 1.054571817e-34)
            * (1.380649e-23 * 300.0 / 1.054571817e-34)
            * std::f64::consts::LN_2;
        let w = 2.0 * std::f64::consts::PI * 1e12;
        let g = 1e12;
        assert!((re - pref * g / (w * w + g * g)).abs() < 1e-12 * re);
        assert!((im - pref * w / (w * w + g * g)).abs() < 1e-12 * im);
    }
}
