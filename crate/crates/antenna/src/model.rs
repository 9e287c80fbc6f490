use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use yagi_physics::{DrudeResponse, GrapheneSheet, PhysicalConstants, ResonanceModel, C0};

use crate::mutual::mutual_impedance;
use crate::{AntennaError, AntennaLayout, Arm, Element, ElementState, Role};

/// Circuit surrogate parameters shared by every element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaModel {
    pub constants: PhysicalConstants,
    /// Sheet template; its chemical potential is replaced per element.
    pub sheet: GrapheneSheet,
    /// Resonance condition; its length is replaced by each element's length.
    pub resonance: ResonanceModel,
    /// Strip width (m), used for the ohmic loss and the equivalent radius.
    pub strip_width: f64,
    /// Quality factor of the element reactance.
    pub q_elem: f64,
    /// Conductivity of unbiased elements as a fraction of the driver's.
    pub residual: f64,
    /// Drops the graphene ohmic loss when false.
    pub lossy: bool,
}

impl AntennaModel {
    /// 300 K, 0.5 ps single-layer sheets, resonance calibrated at 2.3 THz,
    /// 5 um strips, Q = 10, no residual conductivity.
    pub fn reference() -> Self {
        let constants = PhysicalConstants::default();
        Self {
            constants,
            sheet: GrapheneSheet::default(),
            resonance: ResonanceModel::reference(&constants),
            strip_width: 5e-6,
            q_elem: 10.0,
            residual: 0.0,
            lossy: true,
        }
    }

    pub fn with_residual(self, residual: f64) -> Self {
        Self { residual, ..self }
    }

    pub fn validate(&self) -> Result<(), AntennaError> {
        let bad = |m: String| Err(AntennaError::InvalidConfig(m));
        self.sheet.validate()?;
        if !(self.strip_width > 0.0 && self.strip_width.is_finite()) {
            return bad(format!("strip width must be > 0, got {}", self.strip_width));
        }
        if !(self.q_elem > 0.0 && self.q_elem.is_finite()) {
            return bad(format!("element Q must be > 0, got {}", self.q_elem));
        }
        if !(0.0..1.0).contains(&self.residual) {
            return bad(format!(
                "residual fraction must be in [0, 1), got {}",
                self.residual
            ));
        }
        Ok(())
    }

    /// Equivalent wire radius of a flat strip.
    pub fn equivalent_radius(&self) -> f64 {
        self.strip_width / 4.0
    }

    /// Radiation resistance (ohm) of a sinusoidal-current dipole of `length` at `f`.
    pub fn radiation_resistance(&self, length: f64, f: f64) -> Result<f64, AntennaError> {
        let k = 2.0 * PI * f / C0;
        mutual_impedance(self.equivalent_radius(), length / 2.0, k)
            .map(|z| z.re)
            .ok_or_else(|| special_failure(length, f))
    }

    /// Sheet response of every element, `None` for elements that take no
    /// part in the solve (unbiased and no residual conductivity).
    pub fn element_responses(
        &self,
        layout: &AntennaLayout,
        state: &ElementState,
    ) -> Result<Vec<Option<DrudeResponse>>, AntennaError> {
        self.validate()?;
        if state.e_f.len() != layout.len() {
            return Err(AntennaError::InvalidConfig(format!(
                "state has {} potentials for {} elements",
                state.e_f.len(),
                layout.len()
            )));
        }
        let response =
            |e_f: f64| DrudeResponse::of_sheet(&self.sheet.with_e_f(e_f), &self.constants);
        let driver_ef = layout
            .elements
            .iter()
            .filter(|e| e.role == Role::Driver)
            .map(|e| state.get(e.index))
            .fold(0.0, f64::max);
        if driver_ef <= 0.0 {
            return Err(AntennaError::InvalidConfig("no driver is biased".into()));
        }
        let residual = response(driver_ef)?.scaled(self.residual);
        state
            .e_f
            .iter()
            .map(|&e_f| {
                if e_f > 0.0 {
                    response(e_f).map(Some).map_err(Into::into)
                } else if self.residual > 0.0 {
                    Ok(Some(residual))
                } else {
                    Ok(None)
                }
            })
            .collect()
    }

    /// Self impedance and ohmic loss resistance of one element.
    ///
    /// Z = R_rad + R_loss + jX, where X is the reactance of an antiresonant
    /// tank of peak resistance Q (R_rad + R_loss) tuned to the element's own
    /// plasmonic resonance: inductive below it, capacitive above.
    pub fn self_impedance(
        &self,
        element: &Element,
        response: &DrudeResponse,
        f: f64,
    ) -> Result<(Complex64, f64), AntennaError> {
        let r_rad = self.radiation_resistance(element.length, f)?;
        let r_loss = if self.lossy {
            response.conductivity(f).inv().re * element.length / self.strip_width
        } else {
            0.0
        };
        let f_k = ResonanceModel {
            length: element.length,
            ..self.resonance
        }
        .frequency_for(response, &self.constants)?;
        let x = self.q_elem * (f / f_k - f_k / f);
        let r = r_rad + r_loss;
        let reactance = -self.q_elem * r * x / (1.0 + x * x);
        Ok((Complex64::new(r, reactance), r_loss))
    }
}

fn special_failure(length: f64, f: f64) -> AntennaError {
    AntennaError::NumericalFailure(format!(
        "sine/cosine integral did not converge for L = {length:e} m at {f:e} Hz"
    ))
}

/// Impedance matrix over the elements taking part in the solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceMatrix {
    /// 1-based indices of the active elements, in matrix order.
    pub active: Vec<usize>,
    pub z: DMatrix<Complex64>,
    /// Ohmic loss resistance of each active element.
    pub r_loss: Vec<f64>,
}

/// Mutual coupling between two elements: induced EMF on a shared arm,
/// zero across arms.
pub fn coupling(a: &Element, b: &Element, f: f64) -> Result<Complex64, AntennaError> {
    if a.arm != b.arm {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let h = 0.5 * (a.length + b.length) / 2.0;
    let k = 2.0 * PI * f / C0;
    mutual_impedance((a.offset - b.offset).abs(), h, k).ok_or_else(|| special_failure(2.0 * h, f))
}

pub fn impedance_matrix(
    model: &AntennaModel,
    layout: &AntennaLayout,
    state: &ElementState,
    f: f64,
) -> Result<ImpedanceMatrix, AntennaError> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(AntennaError::InvalidConfig(format!(
            "frequency must be > 0, got {f}"
        )));
    }
    let responses = model.element_responses(layout, state)?;
    let active: Vec<(&Element, DrudeResponse)> = layout
        .elements
        .iter()
        .zip(&responses)
        .filter_map(|(e, r)| r.map(|r| (e, r)))
        .collect();
    if let Some((first, _)) = active.first() {
        if active
            .iter()
            .any(|(e, _)| (e.length - first.length).abs() > 1e-12)
        {
            return Err(AntennaError::InvalidConfig(
                "coupled elements must share one length".into(),
            ));
        }
    }
    let n = active.len();
    let mut z = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let mut r_loss = Vec::with_capacity(n);
    for (i, (ei, ri)) in active.iter().enumerate() {
        let (zs, rl) = model.self_impedance(ei, ri, f)?;
        z[(i, i)] = zs;
        r_loss.push(rl);
        for (j, (ej, _)) in active.iter().enumerate().skip(i + 1) {
            let m = coupling(ei, ej, f)?;
            z[(i, j)] = m;
            z[(j, i)] = m;
        }
    }
    Ok(ImpedanceMatrix {
        active: active.iter().map(|(e, _)| e.index).collect(),
        z,
        r_loss,
    })
}

/// I = Z^-1 V, rejecting solutions with relative residual above 1e-10.
pub fn solve_currents(
    z: &DMatrix<Complex64>,
    v: &DVector<Complex64>,
) -> Result<DVector<Complex64>, AntennaError> {
    if !z.is_square() || z.nrows() != v.len() {
        return Err(AntennaError::InvalidConfig(format!(
            "{}x{} matrix with {} sources",
            z.nrows(),
            z.ncols(),
            v.len()
        )));
    }
    let i = z
        .clone()
        .lu()
        .solve(v)
        .ok_or(AntennaError::SingularMatrix(f64::INFINITY))?;
    let residual = (z * &i - v).norm() / v.norm();
    if !(residual < 1e-10) {
        return Err(AntennaError::SingularMatrix(residual));
    }
    Ok(i)
}

/// Unit sources at biased drivers. When both drivers are biased the X-arm
/// driver is fed in quadrature with the Y-arm one.
pub fn drive_vector(
    layout: &AntennaLayout,
    state: &ElementState,
    active: &[usize],
) -> DVector<Complex64> {
    let both = layout
        .elements
        .iter()
        .filter(|e| e.role == Role::Driver && state.get(e.index) > 0.0)
        .count()
        == 2;
    DVector::from_iterator(
        active.len(),
        active.iter().map(|&idx| {
            let e = &layout.elements[idx - 1];
            if e.role != Role::Driver || state.get(idx) <= 0.0 {
                Complex64::new(0.0, 0.0)
            } else if both && e.arm == Arm::X {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        }),
    )
}

/// Currents and power balance of one array state.
#[derive(Debug, Clone, PartialEq)]
pub struct ArraySolution {
    pub matrix: ImpedanceMatrix,
    pub drive: DVector<Complex64>,
    pub currents: DVector<Complex64>,
    /// Radiated over delivered power.
    pub efficiency: f64,
}

impl ArraySolution {
    /// (element index, current) pairs.
    pub fn element_currents(&self) -> Vec<(usize, Complex64)> {
        self.matrix
            .active
            .iter()
            .copied()
            .zip(self.currents.iter().copied())
            .collect()
    }
}

pub fn solve_array(
    model: &AntennaModel,
    layout: &AntennaLayout,
    state: &ElementState,
    f: f64,
) -> Result<ArraySolution, AntennaError> {
    let matrix = impedance_matrix(model, layout, state, f)?;
    let drive = drive_vector(layout, state, &matrix.active);
    let currents = solve_currents(&matrix.z, &drive)?;
    let p_in: f64 = drive
        .iter()
        .zip(currents.iter())
        .map(|(v, i)| (v * i.conj()).re)
        .sum();
    let p_loss: f64 = currents
        .iter()
        .zip(&matrix.r_loss)
        .map(|(i, r)| i.norm_sqr() * r)
        .sum();
    if !(p_in > 0.0) {
        return Err(AntennaError::NumericalFailure(format!(
            "non-positive input power {p_in:e}"
        )));
    }
    Ok(ArraySolution {
        efficiency: 1.0 - p_loss / p_in,
        matrix,
        drive,
        currents,
    })
}
