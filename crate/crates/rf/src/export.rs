use std::io::{self, Write};

use crate::{Channel, SweepRow};

pub const CHANNELS_HEADER: &str = "index,f_center_hz,bandwidth_hz,e_f_ev,v_gate_v";
pub const SWEEP_HEADER: &str = "v_range_v,t_nm,eps_r,channel_count,f_res_hz";

pub fn write_channels_csv<W: Write>(mut w: W, channels: &[Channel]) -> io::Result<()> {
    writeln!(w, "{CHANNELS_HEADER}")?;
    for c in channels {
        writeln!(
            w,
            "{},{:e},{:e},{},{}",
            c.index, c.f_center, c.bandwidth, c.e_f, c.v_gate
        )?;
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        let f_res = r.f_res.map(|f| format!("{f:e}")).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{f_res}",
            r.v_range, r.t_nm, r.eps_r, r.channel_count
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_rows() {
        let rows = [
            SweepRow {
                v_range: 35.0,
                t_nm: 100.0,
                eps_r: 9.3,
                channel_count: 8,
                f_res: Some(2.5e12),
            },
            SweepRow {
                v_range: 0.0,
                t_nm: 100.0,
                eps_r: 9.3,
                channel_count: 0,
                f_res: None,
            },
        ];
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "v_range_v,t_nm,eps_r,channel_count,f_res_hz\n35,100,9.3,8,2.5e12\n0,100,9.3,0,\n"
        );
    }
}
