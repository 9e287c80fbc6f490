use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::{AntennaError, AntennaLayout, Arm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    PosX,
    NegX,
    PosY,
    NegY,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::PosX,
        Direction::NegX,
        Direction::PosY,
        Direction::NegY,
    ];

    pub fn arm(self) -> Arm {
        match self {
            Direction::PosX | Direction::NegX => Arm::X,
            Direction::PosY | Direction::NegY => Arm::Y,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Direction::PosX | Direction::PosY => 1.0,
            Direction::NegX | Direction::NegY => -1.0,
        }
    }

    /// Azimuth of the beam axis in degrees, [0, 360).
    pub fn azimuth_deg(self) -> f64 {
        match self {
            Direction::PosX => 0.0,
            Direction::PosY => 90.0,
            Direction::NegX => 180.0,
            Direction::NegY => 270.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Direction::PosX => Direction::NegX,
            Direction::NegX => Direction::PosX,
            Direction::PosY => Direction::NegY,
            Direction::NegY => Direction::PosY,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::PosX => "+x",
            Direction::NegX => "-x",
            Direction::PosY => "+y",
            Direction::NegY => "-y",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "+x" | "x" => Ok(Direction::PosX),
            "-x" => Ok(Direction::NegX),
            "+y" | "y" => Ok(Direction::PosY),
            "-y" => Ok(Direction::NegY),
            _ => Err(format!(
                "unknown direction {s:?}, expected +x, -x, +y or -y"
            )),
        }
    }
}

/// Beam mode; omni implies "any" direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamConfig {
    Omni,
    Directional(Direction),
}

impl BeamConfig {
    /// Omni first, then the four directions in [`Direction::ALL`] order.
    pub const ALL: [BeamConfig; 5] = [
        BeamConfig::Omni,
        BeamConfig::Directional(Direction::PosX),
        BeamConfig::Directional(Direction::NegX),
        BeamConfig::Directional(Direction::PosY),
        BeamConfig::Directional(Direction::NegY),
    ];
}

impl fmt::Display for BeamConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeamConfig::Omni => f.write_str("omni"),
            BeamConfig::Directional(d) => d.fmt(f),
        }
    }
}

impl FromStr for BeamConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("omni") {
            Ok(BeamConfig::Omni)
        } else {
            s.parse().map(BeamConfig::Directional)
        }
    }
}

impl<'de> Deserialize<'de> for BeamConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Chemical potentials (eV) for a channel.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelPotentials {
    pub driver: f64,
    pub parasitic: f64,
}

impl ChannelPotentials {
    pub const REFERENCE: Self = Self {
        driver: 0.5,
        parasitic: 0.8,
    };
}

/// Distances (m) from the driver of the parasitics used as director and reflector.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleSpacing {
    pub director: f64,
    pub reflector: f64,
}

impl Default for RoleSpacing {
    fn default() -> Self {
        Self {
            director: 40e-6,
            reflector: 25e-6,
        }
    }
}

/// Chemical potential (eV) of every element, in layout order.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementState {
    pub e_f: Vec<f64>,
}

impl ElementState {
    pub fn off(n: usize) -> Self {
        Self { e_f: vec![0.0; n] }
    }

    /// 1-based accessor.
    pub fn get(&self, index: usize) -> f64 {
        self.e_f[index - 1]
    }
}

/// Maps a beam request onto per-element chemical potentials.
///
/// Omni biases both drivers. A directional beam biases the driver on the
/// beam's arm, the parasitic `spacing.director` ahead of it and the one
/// `spacing.reflector` behind it at the parasitic level.
pub fn state_for_beam(
    layout: &AntennaLayout,
    config: BeamConfig,
    potentials: ChannelPotentials,
    spacing: RoleSpacing,
) -> Result<ElementState, AntennaError> {
    let ChannelPotentials { driver, parasitic } = potentials;
    if !(driver > 0.0 && parasitic > 0.0) {
        return Err(AntennaError::InvalidConfig(format!(
            "potentials must be positive, got driver {driver} parasitic {parasitic}"
        )));
    }
    if parasitic <= driver {
        return Err(AntennaError::InvalidConfig(format!(
            "parasitic potential {parasitic} must exceed driver {driver}"
        )));
    }
    let mut state = ElementState::off(layout.len());
    let missing = |what: &str, arm: Arm| {
        AntennaError::InvalidConfig(format!("layout has no {what} on the {arm:?} arm"))
    };
    match config {
        BeamConfig::Omni => {
            for arm in [Arm::Y, Arm::X] {
                let d = layout.driver(arm).ok_or_else(|| missing("driver", arm))?;
                state.e_f[d.index - 1] = driver;
            }
        }
        BeamConfig::Directional(dir) => {
            let arm = dir.arm();
            let d = layout.driver(arm).ok_or_else(|| missing("driver", arm))?;
            let fwd = layout
                .at(arm, dir.sign() * spacing.director)
                .ok_or_else(|| missing("director", arm))?;
            let back = layout
                .at(arm, -dir.sign() * spacing.reflector)
                .ok_or_else(|| missing("reflector", arm))?;
            state.e_f[d.index - 1] = driver;
            state.e_f[fwd.index - 1] = parasitic;
            state.e_f[back.index - 1] = parasitic;
        }
    }
    Ok(state)
}
