use serde::Serialize;
use yagi_physics::{
    chemical_potential_from_voltage, gate_voltage, BiasStack, GrapheneSheet, PhysicalConstants,
    ResonanceModel,
};

use crate::{channel_bandwidth, MatchingModel, RfError};

/// One frequency channel, reached by biasing the driver to `e_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Channel {
    pub index: usize,
    /// Centre (resonance) frequency (Hz).
    pub f_center: f64,
    /// -10 dB return-loss bandwidth (Hz).
    pub bandwidth: f64,
    /// Driver chemical potential (eV).
    pub e_f: f64,
    /// Gate voltage for `e_f` (V).
    pub v_gate: f64,
}

impl Channel {
    pub fn lower_edge(&self) -> f64 {
        self.f_center - 0.5 * self.bandwidth
    }

    pub fn upper_edge(&self) -> f64 {
        self.f_center + 0.5 * self.bandwidth
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelPlan {
    pub channels: Vec<Channel>,
    pub v_range: f64,
    #[serde(skip)]
    pub stack: BiasStack,
}

impl ChannelPlan {
    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn e_f_per_channel(&self) -> Vec<f64> {
        self.channels.iter().map(|c| c.e_f).collect()
    }
}

/// One row of a channel-count sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub v_range: f64,
    /// Spacer thickness (nm).
    pub t_nm: f64,
    pub eps_r: f64,
    pub channel_count: usize,
    /// Driver resonance with the full `v_range` applied; `None` at 0 V.
    pub f_res: Option<f64>,
}

/// Everything the planner needs besides the voltage budget and bias stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPlanner {
    pub constants: PhysicalConstants,
    /// Relaxation time, temperature and layer count of the driver; its
    /// chemical potential is what the planner varies.
    pub sheet: GrapheneSheet,
    pub resonance: ResonanceModel,
    pub matching: MatchingModel,
    /// Lowest usable chemical potential (eV). `None` means 3 k_B T.
    pub e_f_floor: Option<f64>,
}

impl ChannelPlanner {
    /// 25 um dipole calibrated so the 0.5 eV sheet resonates at 1.2 THz,
    /// default matching model and a thermal floor.
    pub fn reference() -> Self {
        let constants = PhysicalConstants::default();
        let sheet = GrapheneSheet::default();
        let resonance = ResonanceModel::uncalibrated()
            .calibrated_to(&sheet, 1.2e12, &constants)
            .expect("reference sheet is valid");
        Self {
            constants,
            sheet,
            resonance,
            matching: MatchingModel::default(),
            e_f_floor: None,
        }
    }

    pub fn floor(&self) -> f64 {
        self.e_f_floor
            .unwrap_or_else(|| 3.0 * self.constants.thermal_ev(self.sheet.temperature))
    }

    /// Resonance and bandwidth with the driver at `e_f`.
    pub fn band_at(&self, e_f: f64) -> Result<(f64, f64), RfError> {
        let f = self
            .resonance
            .frequency(&self.sheet.with_e_f(e_f), &self.constants)?;
        Ok((f, channel_bandwidth(f, &self.matching)?))
    }

    fn channel(&self, index: usize, e_f: f64, stack: &BiasStack) -> Result<Channel, RfError> {
        let (f_center, bandwidth) = self.band_at(e_f)?;
        Ok(Channel {
            index,
            f_center,
            bandwidth,
            e_f,
            v_gate: gate_voltage(e_f, stack, &self.constants)?,
        })
    }

    /// Highest chemical potential whose gate voltage stays within `v_range`.
    fn e_f_ceiling(&self, v_range: f64, stack: &BiasStack) -> Result<f64, RfError> {
        let c = &self.constants;
        let mut e = chemical_potential_from_voltage(v_range, stack, c)?;
        while gate_voltage(e, stack, c)? > v_range {
            e *= 1.0 - f64::EPSILON;
        }
        Ok(e)
    }

    /// Greedy low-to-high packing.
    ///
    /// Each new channel sits at the lowest chemical potential whose lower
    /// band edge clears the previous channel's upper edge. Since both the
    /// resonance and the lower edge rise monotonically with E_F, no plan can
    /// place its k-th channel below the greedy k-th channel, so greedy is
    /// also the maximum count.
    pub fn plan(&self, v_range: f64, stack: &BiasStack) -> Result<ChannelPlan, RfError> {
        if !(v_range.is_finite() && v_range >= 0.0) {
            return Err(RfError::InvalidParameter(format!(
                "v_range must be >= 0 V, got {v_range}"
            )));
        }
        stack.validate()?;
        self.matching.validate()?;
        let floor = self.floor();
        let needed = gate_voltage(floor, stack, &self.constants)?;
        if needed > v_range {
            return Err(RfError::EmptyPlan { needed, v_range });
        }
        let e_max = self.e_f_ceiling(v_range, stack)?;
        let mut channels = vec![self.channel(0, floor, stack)?];
        loop {
            let prev = channels[channels.len() - 1];
            let clearance = |e: f64| -> Result<f64, RfError> {
                let (f, bw) = self.band_at(e)?;
                Ok(f - 0.5 * bw - prev.upper_edge())
            };
            if clearance(e_max)? < 0.0 {
                break;
            }
            let (mut lo, mut hi) = (prev.e_f, e_max);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if clearance(mid)? < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 4.0 * f64::EPSILON * hi {
                    break;
                }
            }
            channels.push(self.channel(channels.len(), hi, stack)?);
        }
        Ok(ChannelPlan {
            channels,
            v_range,
            stack: *stack,
        })
    }

    /// Number of channels, zero when even the first one is out of reach.
    pub fn channel_count(&self, v_range: f64, stack: &BiasStack) -> Result<usize, RfError> {
        match self.plan(v_range, stack) {
            Ok(p) => Ok(p.len()),
            Err(RfError::EmptyPlan { .. }) => Ok(0),
            Err(e) => Err(e),
        }
    }

    /// Driver resonance with `v` across the gate stack.
    pub fn resonance_at_voltage(&self, v: f64, stack: &BiasStack) -> Result<Option<f64>, RfError> {
        let e_f = chemical_potential_from_voltage(v, stack, &self.constants)?;
        if e_f <= 0.0 {
            return Ok(None);
        }
        Ok(Some(self.band_at(e_f)?.0))
    }

    /// Channel counts over the product of voltage ranges, thicknesses (m)
    /// and permittivities.
    pub fn sweep(
        &self,
        v_ranges: &[f64],
        thicknesses: &[f64],
        eps_rs: &[f64],
    ) -> Result<Vec<SweepRow>, RfError> {
        let mut rows = Vec::with_capacity(v_ranges.len() * thicknesses.len() * eps_rs.len());
        for &thickness in thicknesses {
            for &eps_r in eps_rs {
                let stack = BiasStack { thickness, eps_r };
                for &v_range in v_ranges {
                    rows.push(SweepRow {
                        v_range,
                        t_nm: thickness * 1e9,
                        eps_r,
                        channel_count: self.channel_count(v_range, &stack)?,
                        f_res: self.resonance_at_voltage(v_range, &stack)?,
                    });
                }
            }
        }
        Ok(rows)
    }
}

/// Plans channels for a sheet template, dipole length and matching model,
/// with the resonance calibrated by [`ChannelPlanner::reference`].
pub fn plan_channels(
    v_range: f64,
    stack: &BiasStack,
    length: f64,
    sheet: &GrapheneSheet,
    matching: &MatchingModel,
) -> Result<ChannelPlan, RfError> {
    let mut planner = ChannelPlanner::reference();
    planner.resonance.length = length;
    planner.sheet = GrapheneSheet {
        e_f: planner.sheet.e_f,
        ..*sheet
    };
    planner.matching = *matching;
    planner.plan(v_range, stack)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_calibration() {
        let p = ChannelPlanner::reference();
        let (f, bw) = p.band_at(0.5).unwrap();
        assert!((f / 1.2e12 - 1.0).abs() < 1e-12);
        assert!((bw / 140e9 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn thermal_floor() {
        let p = ChannelPlanner::reference();
        assert!((p.floor() - 0.077_556).abs() < 1e-5);
    }

    #[test]
    fn zero_range_is_empty() {
        let p = ChannelPlanner::reference();
        let r = p.plan(0.0, &BiasStack::default());
        assert!(matches!(r, Err(RfError::EmptyPlan { .. })));
        assert_eq!(p.channel_count(0.0, &BiasStack::default()).unwrap(), 0);
    }

    #[test]
    fn constant_fractional_packing_is_geometric() {
        let p = ChannelPlanner::reference();
        let plan = p.plan(60.0, &BiasStack::default()).unwrap();
        let b = 1.0 / p.matching.q_res;
        let ratio = (1.0 + b / 2.0) / (1.0 - b / 2.0);
        for w in plan.channels.windows(2) {
            assert!((w[1].f_center / w[0].f_center / ratio - 1.0).abs() < 1e-9);
        }
    }
}
