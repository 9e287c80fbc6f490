//! `yagi` command-line front end.
//!
//! Loads a sectioned TOML configuration, runs one of the four experiment
//! commands and writes CSV / JSON outputs into the output directory.

mod commands;
mod config;
mod error;
mod grid;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use yagi_antenna::{BeamConfig, Direction};
use yagi_netsim::{write_metrics_json, write_trace_jsonl, MacVariant};
use yagi_rf::{write_channels_csv, write_sweep_csv, RfError};

pub use commands::{
    cmd_channels, cmd_kubo, cmd_pattern, cmd_simulate, controller, plan, scenario, ChannelSel,
    PatternOptions, PatternRun, KUBO_HEADER,
};
pub use config::{
    AntennaSection, ControllerSection, PhysicsSection, RfSection, RunConfig, ScenarioSection,
};
pub use error::CliError;
pub use grid::Grid;

#[derive(Debug, Parser)]
#[command(
    name = "yagi",
    version,
    about = "Graphene Yagi-Uda array: material, antenna, channel and MAC experiments"
)]
pub struct Args {
    /// TOML configuration with [physics], [antenna], [rf], [controller] and [scenario] sections.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for output files; created if missing.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Overrides scenario.seed for `simulate`.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sheet conductivity and surface impedance table (kubo.csv).
    Kubo {
        /// Chemical potentials (eV): a,b,c or start:stop:count.
        #[arg(long, default_value = "0:1:11")]
        e_f: Grid,
        /// Frequencies (Hz): a,b,c or start:stop:count.
        #[arg(long, default_value = "1e11:1e13:100")]
        freq: Grid,
    },
    /// Radiation pattern and metrics of one beam (pattern_<beam>.csv/.json).
    Pattern {
        /// omni, +x, -x, +y or -y.
        #[arg(long, default_value = "omni", allow_hyphen_values = true)]
        beam: BeamArg,
        /// `config` for the [antenna] section, `low` for the 1.5 THz preset,
        /// or an index into the [rf] channel plan.
        #[arg(long, default_value = "config")]
        channel: ChannelSel,
        /// Also evaluate every antenna.rho_sweep residual fraction.
        #[arg(long)]
        rho_sweep: bool,
        /// Also evaluate the opposite beam and compare metrics.
        #[arg(long)]
        mirror_check: bool,
    },
    /// Channel count and resonance over a voltage / spacer grid
    /// (channels.csv), plus the plan at rf.v_range (plan.csv).
    Channels {
        /// Voltage ranges (V); defaults to rf.v_ranges.
        #[arg(long)]
        v_range: Option<Grid>,
        /// Spacer thicknesses (nm); defaults to rf.t_nm.
        #[arg(long)]
        t_nm: Option<Grid>,
        /// Spacer permittivities; defaults to rf.eps_r.
        #[arg(long)]
        eps_r: Option<Grid>,
    },
    /// Runs the MAC scenario (trace.jsonl, metrics.json).
    Simulate {
        /// Overrides scenario.variant.
        #[arg(long)]
        variant: Option<VariantArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamArg(pub BeamConfig);

impl std::str::FromStr for BeamArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(BeamArg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    ControlChannel,
    DirectionalOnly,
}

impl From<VariantArg> for MacVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::ControlChannel => MacVariant::ControlChannel,
            VariantArg::DirectionalOnly => MacVariant::DirectionalOnly,
        }
    }
}

/// File-name tag for a beam.
pub fn beam_tag(beam: BeamConfig) -> &'static str {
    match beam {
        BeamConfig::Omni => "omni",
        BeamConfig::Directional(Direction::PosX) => "px",
        BeamConfig::Directional(Direction::NegX) => "nx",
        BeamConfig::Directional(Direction::PosY) => "py",
        BeamConfig::Directional(Direction::NegY) => "ny",
    }
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), CliError> {
    let path = dir.join(name);
    Ok((path.clone(), BufWriter::new(File::create(path)?)))
}

/// Runs one command. Returns the paths written.
pub fn run(args: &Args) -> Result<Vec<PathBuf>, CliError> {
    let cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    std::fs::create_dir_all(&args.out)?;
    let out = args.out.as_path();
    let mut written = Vec::new();
    match &args.command {
        Command::Kubo { e_f, freq } => {
            let (path, mut w) = create(out, "kubo.csv")?;
            cmd_kubo(&cfg, &e_f.0, &freq.0, &mut w)?;
            w.flush()?;
            written.push(path);
        }
        Command::Pattern {
            beam,
            channel,
            rho_sweep,
            mirror_check,
        } => {
            let opts = PatternOptions {
                rho_sweep: *rho_sweep,
                mirror_check: *mirror_check,
            };
            let run = cmd_pattern(&cfg, beam.0, *channel, opts)?;
            let tag = beam_tag(beam.0);
            let (path, mut w) = create(out, &format!("pattern_{tag}.csv"))?;
            yagi_antenna::export::write_pattern_csv(&run.pattern, &mut w)?;
            w.flush()?;
            written.push(path);
            let (path, mut w) = create(out, &format!("pattern_{tag}.json"))?;
            serde_json::to_writer_pretty(&mut w, &run.report).map_err(std::io::Error::from)?;
            writeln!(w)?;
            w.flush()?;
            written.push(path);
        }
        Command::Channels {
            v_range,
            t_nm,
            eps_r,
        } => {
            let pick = |g: &Option<Grid>, d: &[f64]| g.as_ref().map_or(d.to_vec(), |g| g.0.clone());
            let rows = cmd_channels(
                &cfg,
                &pick(v_range, &cfg.rf.v_ranges),
                &pick(t_nm, &cfg.rf.t_nm),
                &pick(eps_r, &cfg.rf.eps_r),
            )?;
            let (path, mut w) = create(out, "channels.csv")?;
            write_sweep_csv(&mut w, &rows)?;
            w.flush()?;
            written.push(path);
            match cfg.planner()?.plan(cfg.rf.v_range, &cfg.physics.stack()) {
                Ok(p) => {
                    let (path, mut w) = create(out, "plan.csv")?;
                    write_channels_csv(&mut w, &p.channels)?;
                    w.flush()?;
                    written.push(path);
                }
                Err(RfError::EmptyPlan { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
        Command::Simulate { variant } => {
            let sim = cmd_simulate(&cfg, args.seed, variant.map(Into::into))?;
            let (path, mut w) = create(out, "trace.jsonl")?;
            write_trace_jsonl(&mut w, &sim.trace)?;
            w.flush()?;
            written.push(path);
            let (path, mut w) = create(out, "metrics.json")?;
            write_metrics_json(&mut w, &sim.metrics)?;
            w.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}
