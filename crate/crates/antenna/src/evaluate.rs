use crate::{
    far_field, pattern_metrics, solve_array, state_for_beam, AntennaError, AntennaLayout,
    AntennaModel, ArraySolution, BeamConfig, ChannelPotentials, ElementState, PatternMetrics,
    RadiationPattern, RoleSpacing,
};

/// One operating point of the array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub frequency: f64,
    pub potentials: ChannelPotentials,
    pub spacing: RoleSpacing,
}

impl OperatingPoint {
    /// 2.3 THz with 0.5/0.8 eV and the 40/25 um director/reflector pair.
    pub const HIGH_BAND: Self = Self {
        frequency: 2.3e12,
        potentials: ChannelPotentials {
            driver: 0.5,
            parasitic: 0.8,
        },
        spacing: RoleSpacing {
            director: 40e-6,
            reflector: 25e-6,
        },
    };

    /// 1.5 THz with 0.2/0.5 eV, reflectors at 40 um and directors on the third ring.
    pub const LOW_BAND: Self = Self {
        frequency: 1.5e12,
        potentials: ChannelPotentials {
            driver: 0.2,
            parasitic: 0.5,
        },
        spacing: RoleSpacing {
            director: 75e-6,
            reflector: 40e-6,
        },
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub state: ElementState,
    pub solution: ArraySolution,
    pub pattern: RadiationPattern,
    pub metrics: PatternMetrics,
}

/// Solve, synthesise and measure an explicit element state.
pub fn evaluate_state(
    model: &AntennaModel,
    layout: &AntennaLayout,
    state: ElementState,
    f: f64,
    step_deg: f64,
) -> Result<Evaluation, AntennaError> {
    let solution = solve_array(model, layout, &state, f)?;
    let pattern = far_field(
        layout,
        &solution.element_currents(),
        f,
        step_deg,
        solution.efficiency,
    )?;
    let metrics = pattern_metrics(&pattern)?;
    Ok(Evaluation {
        state,
        solution,
        pattern,
        metrics,
    })
}

/// Beam request to pattern and metrics.
pub fn evaluate_beam(
    model: &AntennaModel,
    layout: &AntennaLayout,
    beam: BeamConfig,
    point: &OperatingPoint,
    step_deg: f64,
) -> Result<Evaluation, AntennaError> {
    let state = state_for_beam(layout, beam, point.potentials, point.spacing)?;
    evaluate_state(model, layout, state, point.frequency, step_deg)
}

/// Metrics of `beam` with unbiased elements carrying each fraction of the
/// driver conductivity in turn.
pub fn residual_conductivity_sweep(
    model: &AntennaModel,
    layout: &AntennaLayout,
    beam: BeamConfig,
    point: &OperatingPoint,
    rho: &[f64],
    step_deg: f64,
) -> Result<Vec<PatternMetrics>, AntennaError> {
    rho.iter()
        .map(|&r| {
            evaluate_beam(&model.with_residual(r), layout, beam, point, step_deg).map(|e| e.metrics)
        })
        .collect()
}
