use std::io::Write;

use serde::Serialize;
use serde_json::json;
use yagi_antenna::{
    evaluate_beam, AntennaLayout, BeamConfig, ChannelPotentials, OperatingPoint, PatternMetrics,
    RadiationPattern, RoleSpacing,
};
use yagi_controller::{compile_luts, potentials_for_plan, Controller, DacConfig};
use yagi_netsim::{
    run_mac, GainTable, LinkChannel, MacEnv, MacVariant, NodeRole, SimOutput, SimScenario,
};
use yagi_physics::{kubo_conductivity, layer_conductivity, surface_impedance};
use yagi_rf::{ChannelPlan, SweepRow};

use crate::{CliError, RunConfig};

pub const KUBO_HEADER: &str = "e_f_ev,f_hz,sigma_re,sigma_im,z_re,z_im";

/// Conductivity of the configured stack and its surface impedance over
/// `e_f` x `f`, E_F-major. Returns the number of rows.
pub fn cmd_kubo<W: Write>(
    cfg: &RunConfig,
    e_f: &[f64],
    f: &[f64],
    mut out: W,
) -> Result<usize, CliError> {
    let p = &cfg.physics;
    let c = p.constants();
    writeln!(out, "{KUBO_HEADER}")?;
    for &e in e_f {
        let sheet = p.sheet(e);
        for &freq in f {
            let sigma = layer_conductivity(kubo_conductivity(&sheet, freq, &c)?, sheet.layers)?;
            let z = surface_impedance(sigma)?;
            writeln!(
                out,
                "{e},{freq:e},{:e},{:e},{:e},{:e}",
                sigma.value.re, sigma.value.im, z.value.re, z.value.im
            )?;
        }
    }
    Ok(e_f.len() * f.len())
}

/// Operating point used by `pattern`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSel {
    /// The `[antenna]` section as written.
    Config,
    /// 1.5 THz preset on the layout with the third parasitic ring.
    Low,
    /// Channel of the `[rf]` plan, parasitics at `controller.parasitic_ratio`.
    Plan(usize),
}

impl std::str::FromStr for ChannelSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "config" | "high" => Ok(ChannelSel::Config),
            "low" => Ok(ChannelSel::Low),
            _ => s
                .parse()
                .map(ChannelSel::Plan)
                .map_err(|_| format!("expected config, low or a plan channel index, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PatternOptions {
    pub rho_sweep: bool,
    pub mirror_check: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternRun {
    pub pattern: RadiationPattern,
    pub metrics: PatternMetrics,
    /// Metrics document written next to the pattern CSV.
    pub report: serde_json::Value,
}

#[derive(Debug, Serialize)]
struct RhoRow {
    rho: f64,
    metrics: PatternMetrics,
}

fn resolve_point(
    cfg: &RunConfig,
    channel: ChannelSel,
) -> Result<(OperatingPoint, AntennaLayout), CliError> {
    match channel {
        ChannelSel::Config => Ok((cfg.antenna.point(), cfg.antenna.layout())),
        ChannelSel::Low => Ok((
            OperatingPoint::LOW_BAND,
            AntennaLayout::cross_with_third_ring(),
        )),
        ChannelSel::Plan(k) => {
            let plan = plan(cfg)?;
            let ch = plan.channels.get(k).ok_or_else(|| {
                CliError::Config(format!(
                    "channel {k} is not in the {}-channel plan",
                    plan.len()
                ))
            })?;
            let model = cfg.antenna_model()?;
            let frequency = model
                .resonance
                .frequency(&cfg.physics.sheet(ch.e_f), &model.constants)?;
            let point = OperatingPoint {
                frequency,
                potentials: ChannelPotentials {
                    driver: ch.e_f,
                    parasitic: cfg.controller.parasitic_ratio * ch.e_f,
                },
                spacing: RoleSpacing {
                    director: cfg.antenna.director_spacing,
                    reflector: cfg.antenna.reflector_spacing,
                },
            };
            Ok((point, cfg.antenna.layout()))
        }
    }
}

fn mirror(beam: BeamConfig) -> BeamConfig {
    match beam {
        BeamConfig::Omni => BeamConfig::Omni,
        BeamConfig::Directional(d) => BeamConfig::Directional(d.opposite()),
    }
}

/// Pattern and metrics of `beam`, optionally with the residual-conductivity
/// sweep and the comparison against the mirrored beam.
pub fn cmd_pattern(
    cfg: &RunConfig,
    beam: BeamConfig,
    channel: ChannelSel,
    opts: PatternOptions,
) -> Result<PatternRun, CliError> {
    let model = cfg.antenna_model()?;
    let (point, layout) = resolve_point(cfg, channel)?;
    let step = cfg.antenna.step_deg;
    let ev = evaluate_beam(&model, &layout, beam, &point, step)?;
    let mut report = json!({
        "beam": beam.to_string(),
        "frequency_hz": point.frequency,
        "driver_ev": point.potentials.driver,
        "parasitic_ev": point.potentials.parasitic,
        "metrics": ev.metrics,
    });
    if opts.rho_sweep {
        let mut rows = Vec::new();
        for &rho in &cfg.antenna.rho_sweep {
            let m = evaluate_beam(&model.with_residual(rho), &layout, beam, &point, step)?.metrics;
            rows.push(RhoRow { rho, metrics: m });
        }
        let monotone = rows.windows(2).all(|w| {
            w[1].metrics.gain_dbi <= w[0].metrics.gain_dbi
                && w[1].metrics.beamwidth_3db >= w[0].metrics.beamwidth_3db
        });
        report["rho_sweep"] = json!(rows);
        report["rho_sweep_monotone"] = json!(monotone);
    }
    if opts.mirror_check {
        let partner = mirror(beam);
        let m = evaluate_beam(&model, &layout, partner, &point, step)?.metrics;
        let a = &ev.metrics;
        let max_diff = [
            a.gain_dbi - m.gain_dbi,
            a.peak_directivity_dbi - m.peak_directivity_dbi,
            a.beamwidth_3db - m.beamwidth_3db,
            a.front_to_back_db - m.front_to_back_db,
        ]
        .iter()
        .fold(0.0f64, |acc, d| acc.max(d.abs()));
        let expected_phi = match beam {
            BeamConfig::Omni => a.beam_direction.1,
            BeamConfig::Directional(_) => (a.beam_direction.1 + 180.0).rem_euclid(360.0),
        };
        let flipped = angle_gap(expected_phi, m.beam_direction.1) <= step / 2.0;
        report["mirror"] = json!({
            "beam": partner.to_string(),
            "metrics": m,
            "max_diff": max_diff,
            "direction_flipped": flipped,
            "ok": max_diff <= 1e-9 && flipped,
        });
    }
    Ok(PatternRun {
        pattern: ev.pattern,
        metrics: ev.metrics,
        report,
    })
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Channel counts and full-range resonance over the grid. Thicknesses in nm.
pub fn cmd_channels(
    cfg: &RunConfig,
    v_ranges: &[f64],
    t_nm: &[f64],
    eps_r: &[f64],
) -> Result<Vec<SweepRow>, CliError> {
    let t: Vec<f64> = t_nm.iter().map(|t| t * 1e-9).collect();
    let mut rows = cfg.planner()?.sweep(v_ranges, &t, eps_r)?;
    // report thicknesses exactly as given rather than after the m/nm round trip
    let per_t = (v_ranges.len() * eps_r.len()).max(1);
    for (i, r) in rows.iter_mut().enumerate() {
        r.t_nm = t_nm[i / per_t];
    }
    Ok(rows)
}

/// Plan at `rf.v_range` on the configured stack.
pub fn plan(cfg: &RunConfig) -> Result<ChannelPlan, CliError> {
    Ok(cfg.planner()?.plan(cfg.rf.v_range, &cfg.physics.stack())?)
}

/// Controller for `plan` built from the `[controller]` section.
pub fn controller(cfg: &RunConfig, plan: &ChannelPlan) -> Result<Controller, CliError> {
    let cs = &cfg.controller;
    let c = cfg.physics.constants();
    let stack = plan.stack;
    let pots = potentials_for_plan(plan, cs.parasitic_ratio);
    let dac = cs.dac(DacConfig::fit(cs.dac_bits, &pots, &stack, &c)?);
    let luts = compile_luts(
        plan,
        &AntennaLayout::cross(),
        &pots,
        RoleSpacing {
            director: cfg.antenna.director_spacing,
            reflector: cfg.antenna.reflector_spacing,
        },
        &dac,
        &cs.budget(),
        &stack,
        &c,
    )?;
    Ok(Controller::new(luts, dac, stack, c, cs.timing())?)
}

/// Scenario from the `[scenario]` section over the channels of `plan`.
pub fn scenario(cfg: &RunConfig, plan: &ChannelPlan) -> SimScenario {
    let s = &cfg.scenario;
    let mut channels = LinkChannel::from_plan(plan);
    for (ch, k) in channels.iter_mut().zip(&s.k_abs) {
        ch.k_abs = *k;
    }
    let mut sc = SimScenario::ring(s.stations, s.radius, channels, s.duration);
    match &s.nodes {
        Some(nodes) => sc.nodes = nodes.clone(),
        None => {
            for n in sc.nodes.iter_mut().filter(|n| n.role == NodeRole::Station) {
                n.frames = s.frames_per_station;
            }
        }
    }
    sc.variant = s.variant;
    sc.seed = s.seed;
    sc.control_channel = s.control_channel;
    sc.tx_power_dbm = s.tx_power_dbm;
    sc.noise_dbm = s.noise_dbm;
    sc.snr_threshold_db = s.snr_threshold_db;
    sc.frames = s.frames;
    sc.start_jitter = s.start_jitter;
    sc.max_retries = s.max_retries;
    sc.backoff_window = s.backoff_window;
    sc.sweep_dwell = s.sweep_dwell;
    sc
}

/// Runs the MAC on the configured plan, controller, antenna and scenario.
pub fn cmd_simulate(
    cfg: &RunConfig,
    seed: Option<u64>,
    variant: Option<MacVariant>,
) -> Result<SimOutput, CliError> {
    let plan = plan(cfg)?;
    let controller = controller(cfg, &plan)?;
    let gains = if cfg.scenario.isotropic {
        GainTable::isotropic()
    } else {
        GainTable::from_antenna(
            &cfg.antenna_model()?,
            &cfg.antenna.layout(),
            &cfg.antenna.point(),
            cfg.scenario.gain_step_deg,
        )?
    };
    let mut sc = scenario(cfg, &plan);
    if let Some(seed) = seed {
        sc.seed = seed;
    }
    if let Some(v) = variant {
        sc.variant = v;
    }
    Ok(run_mac(&sc, &MacEnv { controller, gains })?)
}
