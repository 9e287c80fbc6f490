use std::path::Path;

use serde::Deserialize;
use yagi_antenna::{
    AntennaLayout, AntennaModel, ChannelPotentials, Geometry, OperatingPoint, RoleSpacing,
};
use yagi_controller::{DacConfig, LutBudget, Timing};
use yagi_netsim::{FrameSizes, MacVariant, NodeSpec};
use yagi_physics::{BiasStack, GrapheneSheet, PhysicalConstants, ResonanceMode, ResonanceModel};
use yagi_rf::{ChannelPlanner, MatchingModel};

use crate::CliError;

/// Whole run configuration. Every section and key is optional; missing
/// values take the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub physics: PhysicsSection,
    pub antenna: AntennaSection,
    pub rf: RfSection,
    pub controller: ControllerSection,
    pub scenario: ScenarioSection,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsSection {
    pub e: f64,
    pub hbar: f64,
    pub k_b: f64,
    pub eps0: f64,
    pub v_f: f64,
    /// Relaxation time (s).
    pub tau: f64,
    /// Temperature (K).
    pub temperature: f64,
    pub layers: u32,
    /// Gate spacer thickness (m).
    pub spacer_thickness: f64,
    pub spacer_eps_r: f64,
    /// Effective permittivity seen by the plasmon.
    pub eps_eff: f64,
    /// Dipole length (m).
    pub dipole_length: f64,
    pub mode: ResonanceMode,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        let c = PhysicalConstants::default();
        let s = GrapheneSheet::default();
        let b = BiasStack::default();
        let r = ResonanceModel::uncalibrated();
        Self {
            e: c.e,
            hbar: c.hbar,
            k_b: c.k_b,
            eps0: c.eps0,
            v_f: c.v_f,
            tau: s.tau,
            temperature: s.temperature,
            layers: s.layers,
            spacer_thickness: b.thickness,
            spacer_eps_r: b.eps_r,
            eps_eff: r.eps_eff,
            dipole_length: r.length,
            mode: r.mode,
        }
    }
}

impl PhysicsSection {
    pub fn constants(&self) -> PhysicalConstants {
        PhysicalConstants {
            e: self.e,
            hbar: self.hbar,
            k_b: self.k_b,
            eps0: self.eps0,
            v_f: self.v_f,
        }
    }

    /// Sheet at `e_f` with the configured tau, temperature and layers.
    pub fn sheet(&self, e_f: f64) -> GrapheneSheet {
        GrapheneSheet {
            e_f,
            tau: self.tau,
            temperature: self.temperature,
            layers: self.layers,
        }
    }

    pub fn stack(&self) -> BiasStack {
        BiasStack {
            thickness: self.spacer_thickness,
            eps_r: self.spacer_eps_r,
        }
    }

    /// Resonance model calibrated so the `e_f` sheet resonates at `f`.
    pub fn resonance(&self, e_f: f64, f: f64) -> Result<ResonanceModel, CliError> {
        let model = ResonanceModel {
            length: self.dipole_length,
            eps_eff: self.eps_eff,
            mode: self.mode,
            calibration: 1.0,
        };
        Ok(model.calibrated_to(&self.sheet(e_f), f, &self.constants())?)
    }

    fn validate(&self) -> Result<(), CliError> {
        self.constants()
            .validate()
            .map_err(|e| field("physics", "constants", e))?;
        self.sheet(0.5)
            .validate()
            .map_err(|e| field("physics", "sheet", e))?;
        self.stack()
            .validate()
            .map_err(|e| field("physics", "spacer", e))?;
        positive("physics", "eps_eff", self.eps_eff)?;
        positive("physics", "dipole_length", self.dipole_length)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntennaSection {
    /// Operating frequency (Hz).
    pub frequency: f64,
    /// Driver and biased parasitic chemical potentials (eV).
    pub driver_ev: f64,
    pub parasitic_ev: f64,
    /// Director and reflector distances from the driver (m).
    pub director_spacing: f64,
    pub reflector_spacing: f64,
    /// A `calibration_ev` element resonates at `calibration_hz`.
    pub calibration_ev: f64,
    pub calibration_hz: f64,
    /// Strip width (m).
    pub strip_width: f64,
    pub q_elem: f64,
    /// Unbiased conductivity as a fraction of the driver's.
    pub residual: f64,
    pub lossy: bool,
    /// Adds the +-75 um parasitic ring.
    pub third_ring: bool,
    /// Far-field grid step (deg).
    pub step_deg: f64,
    /// Residual fractions used by `pattern --rho-sweep`.
    pub rho_sweep: Vec<f64>,
}

impl Default for AntennaSection {
    fn default() -> Self {
        let p = OperatingPoint::HIGH_BAND;
        let m = AntennaModel::reference();
        Self {
            frequency: p.frequency,
            driver_ev: p.potentials.driver,
            parasitic_ev: p.potentials.parasitic,
            director_spacing: p.spacing.director,
            reflector_spacing: p.spacing.reflector,
            calibration_ev: 0.5,
            calibration_hz: 2.3e12,
            strip_width: m.strip_width,
            q_elem: m.q_elem,
            residual: m.residual,
            lossy: m.lossy,
            third_ring: false,
            step_deg: 1.0,
            rho_sweep: vec![0.0, 1.0 / 15.0, 0.1, 0.2],
        }
    }
}

impl AntennaSection {
    pub fn point(&self) -> OperatingPoint {
        OperatingPoint {
            frequency: self.frequency,
            potentials: ChannelPotentials {
                driver: self.driver_ev,
                parasitic: self.parasitic_ev,
            },
            spacing: RoleSpacing {
                director: self.director_spacing,
                reflector: self.reflector_spacing,
            },
        }
    }

    pub fn layout(&self) -> AntennaLayout {
        if self.third_ring {
            AntennaLayout::cross_with_third_ring()
        } else {
            AntennaLayout::from_geometry(&Geometry::default()).expect("default geometry")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RfSection {
    /// A 0.5 eV driver resonates here (Hz).
    pub calibration_hz: f64,
    /// Source impedance (ohm).
    pub z_s: f64,
    /// Resonant input resistance (ohm).
    pub r_res: f64,
    /// -10 dB bandwidth at the calibration point (Hz); sets Q.
    pub bandwidth_hz: f64,
    /// Lowest usable chemical potential (eV); unset means 3 k_B T.
    pub e_f_floor: Option<f64>,
    /// Voltage budget of the plan used by `pattern` and `simulate` (V).
    pub v_range: f64,
    /// Default grids for `channels`.
    pub v_ranges: Vec<f64>,
    /// Spacer thicknesses (nm).
    pub t_nm: Vec<f64>,
    pub eps_r: Vec<f64>,
}

impl Default for RfSection {
    fn default() -> Self {
        let m = MatchingModel::default();
        Self {
            calibration_hz: 1.2e12,
            z_s: m.z_s,
            r_res: m.r_res,
            bandwidth_hz: 140e9,
            e_f_floor: None,
            v_range: 35.0,
            v_ranges: (0..=12).map(|i| 5.0 * f64::from(i)).collect(),
            t_nm: vec![100.0],
            eps_r: vec![9.3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerSection {
    pub dac_bits: u32,
    /// DAC full scale (V); unset fits the highest parasitic voltage.
    pub v_max: Option<f64>,
    pub settle_time: f64,
    pub lut_read: f64,
    pub graphene_response: f64,
    /// Parasitic potential as a multiple of the driver's.
    pub parasitic_ratio: f64,
    pub capacity_bytes: usize,
    pub line_bits: u32,
    pub max_states: usize,
}

impl Default for ControllerSection {
    fn default() -> Self {
        let t = Timing::default();
        let b = LutBudget::default();
        Self {
            dac_bits: 8,
            v_max: None,
            settle_time: 1e-9,
            lut_read: t.lut_read,
            graphene_response: t.graphene_response,
            parasitic_ratio: 1.6,
            capacity_bytes: b.capacity_bytes,
            line_bits: b.line_bits,
            max_states: b.max_states,
        }
    }
}

impl ControllerSection {
    pub fn timing(&self) -> Timing {
        Timing {
            lut_read: self.lut_read,
            graphene_response: self.graphene_response,
        }
    }

    pub fn budget(&self) -> LutBudget {
        LutBudget {
            capacity_bytes: self.capacity_bytes,
            line_bits: self.line_bits,
            max_states: self.max_states,
        }
    }

    pub fn dac(&self, fitted: DacConfig) -> DacConfig {
        DacConfig {
            bits: self.dac_bits,
            v_max: self.v_max.unwrap_or(fitted.v_max),
            settle_time: self.settle_time,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    /// Explicit node list; unset places `stations` on a ring around the AP.
    pub nodes: Option<Vec<NodeSpec>>,
    pub stations: usize,
    /// Ring radius (m).
    pub radius: f64,
    /// DATA frames per ring station.
    pub frames_per_station: u32,
    /// Simulated time (s).
    pub duration: f64,
    pub variant: MacVariant,
    pub seed: u64,
    pub control_channel: usize,
    /// Absorption coefficient per plan channel (1/m); missing entries are 0.
    pub k_abs: Vec<f64>,
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
    pub snr_threshold_db: f64,
    pub frames: FrameSizes,
    pub start_jitter: f64,
    pub max_retries: u32,
    pub backoff_window: u32,
    pub sweep_dwell: Option<f64>,
    /// Azimuth step of the gain tables (deg).
    pub gain_step_deg: f64,
    /// Replaces the antenna gains with 0 dBi and 90 degree sectors.
    pub isotropic: bool,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        Self {
            nodes: None,
            stations: 4,
            radius: 1.0,
            frames_per_station: 1,
            duration: 1e-4,
            variant: MacVariant::ControlChannel,
            seed: 0,
            control_channel: 0,
            k_abs: Vec::new(),
            tx_power_dbm: 20.0,
            noise_dbm: -130.0,
            snr_threshold_db: 10.0,
            frames: FrameSizes::default(),
            start_jitter: 0.0,
            max_retries: 7,
            backoff_window: 16,
            sweep_dwell: None,
            gain_step_deg: 1.0,
            isotropic: false,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses and validates a TOML document. Errors name the section and key.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = toml::Deserializer::new(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let msg = inner.message().to_string();
            match path.split_once('.') {
                Some((section, key)) => CliError::Config(format!("[{section}] {key}: {msg}")),
                None if path != "." => CliError::Config(format!("{path}: {msg}")),
                None => CliError::Config(inner.to_string().trim_end().to_string()),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.physics.validate()?;
        let a = &self.antenna;
        for (k, v) in [
            ("frequency", a.frequency),
            ("driver_ev", a.driver_ev),
            ("parasitic_ev", a.parasitic_ev),
            ("director_spacing", a.director_spacing),
            ("reflector_spacing", a.reflector_spacing),
            ("calibration_ev", a.calibration_ev),
            ("calibration_hz", a.calibration_hz),
            ("step_deg", a.step_deg),
        ] {
            positive("antenna", k, v)?;
        }
        self.antenna_model()?
            .validate()
            .map_err(|e| field("antenna", "model", e))?;
        if let Some(r) = a.rho_sweep.iter().find(|r| !(0.0..1.0).contains(*r)) {
            return Err(CliError::Config(format!(
                "[antenna] rho_sweep: fractions must be in [0, 1), got {r}"
            )));
        }
        let r = &self.rf;
        for (k, v) in [
            ("calibration_hz", r.calibration_hz),
            ("bandwidth_hz", r.bandwidth_hz),
        ] {
            positive("rf", k, v)?;
        }
        self.matching()
            .validate()
            .map_err(|e| field("rf", "matching", e))?;
        if let Some(f) = r.e_f_floor {
            positive("rf", "e_f_floor", f)?;
        }
        if !(r.v_range.is_finite() && r.v_range >= 0.0) {
            return Err(CliError::Config(format!(
                "[rf] v_range: must be >= 0 V, got {}",
                r.v_range
            )));
        }
        let c = &self.controller;
        if !(1..=DacConfig::MAX_BITS).contains(&c.dac_bits) {
            return Err(CliError::Config(format!(
                "[controller] dac_bits: must be in 1..={}, got {}",
                DacConfig::MAX_BITS,
                c.dac_bits
            )));
        }
        if let Some(v) = c.v_max {
            positive("controller", "v_max", v)?;
        }
        positive("controller", "parasitic_ratio", c.parasitic_ratio - 1.0)
            .map_err(|_| CliError::Config("[controller] parasitic_ratio: must exceed 1".into()))?;
        let s = &self.scenario;
        positive("scenario", "radius", s.radius)?;
        positive("scenario", "duration", s.duration)?;
        positive("scenario", "gain_step_deg", s.gain_step_deg)?;
        if s.nodes.is_none() && s.stations == 0 {
            return Err(CliError::Config(
                "[scenario] stations: need at least one".into(),
            ));
        }
        if let Some(k) = s.k_abs.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
            return Err(CliError::Config(format!(
                "[scenario] k_abs: coefficients must be >= 0, got {k}"
            )));
        }
        Ok(())
    }

    pub fn antenna_model(&self) -> Result<AntennaModel, CliError> {
        let p = &self.physics;
        let a = &self.antenna;
        Ok(AntennaModel {
            constants: p.constants(),
            sheet: p.sheet(a.calibration_ev),
            resonance: p.resonance(a.calibration_ev, a.calibration_hz)?,
            strip_width: a.strip_width,
            q_elem: a.q_elem,
            residual: a.residual,
            lossy: a.lossy,
        })
    }

    pub fn matching(&self) -> MatchingModel {
        let r = &self.rf;
        MatchingModel {
            z_s: r.z_s,
            q_res: MatchingModel::q_from_bandwidth(r.calibration_hz, r.bandwidth_hz),
            r_res: r.r_res,
        }
    }

    /// Planner calibrated so a 0.5 eV driver resonates at `rf.calibration_hz`.
    pub fn planner(&self) -> Result<ChannelPlanner, CliError> {
        let p = &self.physics;
        Ok(ChannelPlanner {
            constants: p.constants(),
            sheet: p.sheet(0.5),
            resonance: p.resonance(0.5, self.rf.calibration_hz)?,
            matching: self.matching(),
            e_f_floor: self.rf.e_f_floor,
        })
    }
}

fn positive(section: &str, key: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "[{section}] {key}: must be > 0, got {v}"
        )))
    }
}

fn field(section: &str, key: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("[{section}] {key}: {e}"))
}
