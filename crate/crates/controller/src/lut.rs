use yagi_antenna::{state_for_beam, AntennaLayout, BeamConfig, ChannelPotentials, RoleSpacing};
use yagi_physics::{gate_voltage, BiasStack, PhysicalConstants};
use yagi_rf::ChannelPlan;

use crate::{ControllerError, DacConfig};

/// Bytes per LUT line.
pub const LINE_BYTES: usize = 4;
/// Elements addressable by one 32-bit sel word.
pub const MAX_ELEMENTS: usize = 16;

/// Bias level selected for one element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Off,
    /// Driven element.
    On1,
    /// Director or reflector.
    On2,
}

impl Level {
    pub fn bits(self) -> u32 {
        match self {
            Level::Off => 0b00,
            Level::On1 => 0b01,
            Level::On2 => 0b10,
        }
    }
}

/// Packs element 1 into bits 0-1, element 2 into bits 2-3 and so on.
pub fn encode_sel(levels: &[Level]) -> Result<u32, ControllerError> {
    if levels.len() > MAX_ELEMENTS {
        return Err(ControllerError::InvalidParameter(format!(
            "{} elements do not fit a 32-bit sel word",
            levels.len()
        )));
    }
    Ok(levels
        .iter()
        .enumerate()
        .fold(0, |w, (i, l)| w | (l.bits() << (2 * i))))
}

/// Inverse of [`encode_sel`] for an `n`-element layout. Bits above the
/// last element must be zero.
pub fn decode_sel(word: u32, n: usize) -> Result<Vec<Level>, ControllerError> {
    if n > MAX_ELEMENTS {
        return Err(ControllerError::InvalidParameter(format!(
            "{n} elements do not fit a 32-bit sel word"
        )));
    }
    if n < MAX_ELEMENTS && word >> (2 * n) != 0 {
        return Err(ControllerError::MalformedImage(format!(
            "sel word {word:#010x} sets bits beyond element {n}"
        )));
    }
    (0..n)
        .map(|i| match (word >> (2 * i)) & 0b11 {
            0b00 => Ok(Level::Off),
            0b01 => Ok(Level::On1),
            0b10 => Ok(Level::On2),
            _ => Err(ControllerError::InvalidCode { element: i + 1 }),
        })
        .collect()
}

/// DAC codes for the three levels of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiasLevels {
    pub off: u8,
    pub on1: u8,
    pub on2: u8,
}

impl BiasLevels {
    pub fn code(&self, level: Level) -> u8 {
        match level {
            Level::Off => self.off,
            Level::On1 => self.on1,
            Level::On2 => self.on2,
        }
    }

    /// Line layout: b_OFF in bits 0-7, b_ON1 in 8-15, b_ON2 in 16-23.
    pub fn to_line(self) -> u32 {
        u32::from(self.off) | u32::from(self.on1) << 8 | u32::from(self.on2) << 16
    }

    pub fn from_line(line: u32) -> Result<Self, ControllerError> {
        if line >> 24 != 0 {
            return Err(ControllerError::MalformedImage(format!(
                "bias line {line:#010x} uses the top byte"
            )));
        }
        let b = Self {
            off: line as u8,
            on1: (line >> 8) as u8,
            on2: (line >> 16) as u8,
        };
        b.check()?;
        Ok(b)
    }

    fn check(&self) -> Result<(), ControllerError> {
        if self.off <= self.on1 && self.on1 < self.on2 {
            Ok(())
        } else {
            Err(ControllerError::VoltageOutOfRange(format!(
                "bias codes must satisfy off <= on1 < on2, got {}/{}/{}",
                self.off, self.on1, self.on2
            )))
        }
    }
}

/// Channel index to bias codes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiasLut {
    pub entries: Vec<BiasLevels>,
}

/// Beam configuration to sel word, in [`BeamConfig::ALL`] order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SelLut {
    pub entries: Vec<(BeamConfig, u32)>,
}

impl SelLut {
    pub fn word(&self, beam: BeamConfig) -> Option<u32> {
        self.entries.iter().find(|(b, _)| *b == beam).map(|e| e.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LutBudget {
    pub capacity_bytes: usize,
    pub line_bits: u32,
    pub max_states: usize,
}

impl Default for LutBudget {
    fn default() -> Self {
        Self {
            capacity_bytes: 2048,
            line_bits: 32,
            max_states: 512,
        }
    }
}

impl LutBudget {
    /// Bias and sel lines count against the same budget.
    pub fn check(&self, lines: usize) -> Result<(), ControllerError> {
        let bytes = lines * (self.line_bits as usize).div_ceil(8);
        if lines > self.max_states || bytes > self.capacity_bytes {
            return Err(ControllerError::BudgetExceeded {
                lines,
                bytes,
                max_lines: self.max_states,
                capacity: self.capacity_bytes,
            });
        }
        Ok(())
    }
}

/// Both tables plus the element count the sel words were built for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Luts {
    pub bias: BiasLut,
    pub sel: SelLut,
    pub n_elements: usize,
}

impl Luts {
    pub fn lines(&self) -> usize {
        self.bias.entries.len() + self.sel.entries.len()
    }

    /// Little-endian 32-bit lines: bias lines by channel, then sel lines in
    /// [`BeamConfig::ALL`] order.
    pub fn to_image(&self) -> Vec<u8> {
        let bias = self.bias.entries.iter().map(|b| b.to_line());
        let sel = self.sel.entries.iter().map(|(_, w)| *w);
        bias.chain(sel).flat_map(u32::to_le_bytes).collect()
    }

    pub fn from_image(bytes: &[u8], n_elements: usize) -> Result<Self, ControllerError> {
        if !bytes.len().is_multiple_of(LINE_BYTES) {
            return Err(ControllerError::MalformedImage(format!(
                "{} bytes is not a whole number of lines",
                bytes.len()
            )));
        }
        let lines: Vec<u32> = bytes
            .chunks_exact(LINE_BYTES)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        let n_sel = BeamConfig::ALL.len();
        if lines.len() <= n_sel {
            return Err(ControllerError::MalformedImage(format!(
                "{} lines leave no bias lines",
                lines.len()
            )));
        }
        let (bias, sel) = lines.split_at(lines.len() - n_sel);
        let bias = BiasLut {
            entries: bias
                .iter()
                .map(|&l| BiasLevels::from_line(l))
                .collect::<Result<_, _>>()?,
        };
        let mut entries = Vec::with_capacity(n_sel);
        for (&beam, &word) in BeamConfig::ALL.iter().zip(sel) {
            decode_sel(word, n_elements)?;
            entries.push((beam, word));
        }
        Ok(Self {
            bias,
            sel: SelLut { entries },
            n_elements,
        })
    }
}

/// Per-channel potentials with the parasitic level a fixed multiple of
/// the driver's.
pub fn potentials_for_plan(plan: &ChannelPlan, parasitic_ratio: f64) -> Vec<ChannelPotentials> {
    plan.channels
        .iter()
        .map(|c| ChannelPotentials {
            driver: c.e_f,
            parasitic: parasitic_ratio * c.e_f,
        })
        .collect()
}

fn levels_for_beam(
    layout: &AntennaLayout,
    beam: BeamConfig,
    spacing: RoleSpacing,
) -> Result<Vec<Level>, ControllerError> {
    // Distinct probe potentials tag the role of each element.
    let probe = ChannelPotentials {
        driver: 1.0,
        parasitic: 2.0,
    };
    let state = state_for_beam(layout, beam, probe, spacing)?;
    Ok(state
        .e_f
        .iter()
        .map(|&e| match e {
            e if e == probe.driver => Level::On1,
            e if e == probe.parasitic => Level::On2,
            _ => Level::Off,
        })
        .collect())
}

/// Builds both tables. b_OFF is always code 0.
#[allow(clippy::too_many_arguments)]
pub fn compile_luts(
    plan: &ChannelPlan,
    layout: &AntennaLayout,
    potentials: &[ChannelPotentials],
    spacing: RoleSpacing,
    dac: &DacConfig,
    budget: &LutBudget,
    stack: &BiasStack,
    c: &PhysicalConstants,
) -> Result<Luts, ControllerError> {
    dac.validate()?;
    if potentials.len() != plan.len() {
        return Err(ControllerError::InvalidParameter(format!(
            "{} channel potentials for a {}-channel plan",
            potentials.len(),
            plan.len()
        )));
    }
    if layout.len() > MAX_ELEMENTS {
        return Err(ControllerError::InvalidParameter(format!(
            "{} elements do not fit a 32-bit sel word",
            layout.len()
        )));
    }
    budget.check(plan.len() + BeamConfig::ALL.len())?;

    let mut bias = BiasLut::default();
    for (k, p) in potentials.iter().enumerate() {
        if !(p.driver > 0.0 && p.parasitic > p.driver) {
            return Err(ControllerError::InvalidParameter(format!(
                "channel {k}: need 0 < driver < parasitic, got {}/{}",
                p.driver, p.parasitic
            )));
        }
        let v_par = gate_voltage(p.parasitic, stack, c)?;
        if v_par > dac.v_max {
            return Err(ControllerError::VoltageOutOfRange(format!(
                "channel {k}: parasitic needs {v_par:.3} V, DAC full scale is {} V",
                dac.v_max
            )));
        }
        let levels = BiasLevels {
            off: 0,
            on1: dac.nearest_code(gate_voltage(p.driver, stack, c)?)?,
            on2: dac.nearest_code(v_par)?,
        };
        // All three targets differ, so all three codes must too.
        if levels.on1 == levels.off || levels.on2 == levels.on1 {
            return Err(ControllerError::VoltageOutOfRange(format!(
                "channel {k}: a {}-bit DAC collapses the levels to codes {}/{}/{}",
                dac.bits, levels.off, levels.on1, levels.on2
            )));
        }
        bias.entries.push(levels);
    }

    let mut sel = SelLut::default();
    for beam in BeamConfig::ALL {
        sel.entries
            .push((beam, encode_sel(&levels_for_beam(layout, beam, spacing)?)?));
    }
    Ok(Luts {
        bias,
        sel,
        n_elements: layout.len(),
    })
}
