use std::io::{self, Write};

use crate::RadiationPattern;

/// printf-style `%.{digits}g`.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const PATTERN_HEADER: &str = "theta_deg,phi_deg,directivity_dbi";

/// CSV with one row per grid point, theta-major, six significant digits.
pub fn write_pattern_csv<W: Write>(p: &RadiationPattern, mut w: W) -> io::Result<()> {
    writeln!(w, "{PATTERN_HEADER}")?;
    for i in 0..p.n_theta {
        for j in 0..p.n_phi {
            writeln!(
                w,
                "{},{},{}",
                fmt_g(p.theta_deg(i), 6),
                fmt_g(p.phi_deg(j), 6),
                fmt_g(p.at(i, j), 6)
            )?;
        }
    }
    Ok(())
}
