//! Sine and cosine integrals.
//!
//! Power series below x = 2, Lentz continued fraction for E1(ix) above.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

const EULER: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 200;
const SWITCH: f64 = 2.0;
const TINY: f64 = 1e-300;

/// Returns (Si(x), Ci(x)) for x > 0, or `None` if an expansion failed to converge.
pub fn si_ci(x: f64) -> Option<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return None;
    }
    if x < 1e-150 {
        return Some((x, EULER + x.ln()));
    }
    if x > SWITCH {
        continued_fraction(x)
    } else {
        series(x)
    }
}

fn continued_fraction(t: f64) -> Option<(f64, f64)> {
    let mut b = Complex64::new(1.0, t);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut converged = false;
    for i in 2..MAX_ITER {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = (a * d + b).inv();
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let h = Complex64::new(t.cos(), -t.sin()) * h;
    Some((FRAC_PI_2 + h.im, -h.re))
}

fn series(t: f64) -> Option<(f64, f64)> {
    let (mut sum, mut sums, mut sumc) = (0.0, 0.0, 0.0);
    let mut sign = 1.0;
    let mut fact = 1.0;
    let mut odd = true;
    for k in 1..MAX_ITER {
        fact *= t / k as f64;
        let term = fact / k as f64;
        sum += sign * term;
        let err = term / sum.abs();
        if odd {
            sign = -sign;
            sums = sum;
            sum = sumc;
        } else {
            sumc = sum;
            sum = sums;
        }
        if err < f64::EPSILON {
            return Some((sums, sumc + t.ln() + EULER));
        }
        odd = !odd;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values to 16 digits.
    const TABLE: &[(f64, f64, f64)] = &[
        (0.1, 0.099_944_461_108_276_97, -1.727_868_386_657_297),
        (0.5, 0.493_107_418_043_066_7, -0.177_784_078_806_612_1),
        (1.0, 0.946_083_070_367_183, 0.337_403_922_900_968_1),
        (2.0, 1.605_412_976_802_695, 0.422_980_828_774_864_9),
        (3.0, 1.848_652_527_999_468, 0.119_629_786_008_000_3),
        (10.0, 1.658_347_594_218_874, -0.045_456_433_004_455_37),
        (50.0, 1.551_617_072_485_936, -0.005_628_386_324_116_305),
    ];

    #[test]
    fn tabulated_values() {
        for &(x, si, ci) in TABLE {
            let (s, c) = si_ci(x).unwrap();
            assert_relative_eq!(s, si, max_relative = 1e-13);
            assert_relative_eq!(c, ci, max_relative = 1e-12);
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        let (s1, c1) = series(SWITCH).unwrap();
        let (s2, c2) = continued_fraction(SWITCH).unwrap();
        assert_relative_eq!(s1, s2, max_relative = 1e-14);
        assert_relative_eq!(c1, c2, max_relative = 1e-13);
    }

    #[test]
    fn asymptotics() {
        let (s, c) = si_ci(1e6).unwrap();
        assert_relative_eq!(s, FRAC_PI_2, max_relative = 1e-6);
        assert!(c.abs() < 1e-6);
        let (s, c) = si_ci(1e-200).unwrap();
        assert_eq!(s, 1e-200);
        assert_relative_eq!(c, EULER + (1e-200f64).ln());
    }

    #[test]
    fn rejects_non_positive() {
        assert!(si_ci(0.0).is_none());
        assert!(si_ci(-1.0).is_none());
        assert!(si_ci(f64::NAN).is_none());
    }
}
