//! Split-step kernels: the exact spectral kinetic flow, pointwise phase
//! substeps, the rotating-frame Strang step, and the lab-frame alternating
//! direction step that solves the kinetic-plus-rotation parts axis by axis.

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{ModelConfig, PotentialEval};
use crate::observables::pow_sigma;
use crate::spectral::{fft, ComplexField, Grid};

#[derive(Debug, Error, PartialEq)]
pub enum PropagationError {
    #[error("this operation requires the rotation axis to be the third coordinate axis")]
    UnsupportedRotationAxis,
    #[error("planar frame mapping requires a square transverse grid")]
    NonSquareTransverseGrid,
    #[error("field insufficiently resolved: spectral tail {tail:.3e}")]
    UnresolvedField { tail: f64 },
    #[error("imaginary-time flow requires a confining trap (all axes attractive)")]
    NonConfiningTrap,
    #[error("imaginary-time flow did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("invalid simulation parameters: {0}")]
    InvalidParams(String),
}

/// Pointwise phase substep `psi <- psi * exp(-i dt (W + lambda |psi|^(2 sigma)))`.
/// Exactly solvable because the substep conserves `|psi|` pointwise.
pub(crate) fn apply_phase(
    psi: &mut ComplexField,
    pot: &PotentialEval,
    dt: f64,
    lambda: f64,
    sigma: f64,
) {
    let grid = psi.grid().clone();
    let values = psi.values_mut();
    grid.for_each_point(|flat, x| {
        let v = values[flat];
        let theta = dt * (pot.value(x) + lambda * pow_sigma(v.norm_sqr(), sigma));
        values[flat] = v * Complex64::from_polar(1.0, -theta);
    });
}

/// Full-grid multiplier `exp(-i |k|^2 dt / 2)`, the exact flow of the free
/// kinetic part over `dt`.
pub(crate) fn kinetic_multiplier(grid: &Grid, dt: f64) -> Vec<Complex64> {
    let mut table = vec![Complex64::new(0.0, 0.0); grid.len()];
    grid.for_each_mode(|flat, k| {
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        table[flat] = Complex64::from_polar(1.0, -0.5 * k2 * dt);
    });
    table
}

pub(crate) fn apply_spectral_multiplier(psi: &mut ComplexField, table: &[Complex64]) {
    let grid = psi.grid().clone();
    let values = psi.values_mut();
    fft::forward_in_place(values, &grid);
    for (v, m) in values.iter_mut().zip(table) {
        *v *= m;
    }
    fft::backward_in_place(values, &grid);
}

/// Exact solve of `i d_t psi = -1/2 Laplace psi` over `dt` via the spectral
/// multiplier `exp(-i |k|^2 dt / 2)`. Preserves mass to round-off.
pub fn kinetic_step(psi: &ComplexField, dt: f64) -> ComplexField {
    let mut out = psi.clone();
    let table = kinetic_multiplier(out.grid(), dt);
    apply_spectral_multiplier(&mut out, &table);
    out
}

/// Phase substep of the rotating-frame equation: the potential is evaluated
/// at the substep midpoint `t + dt/2`, which keeps the composition second
/// order for time-dependent traps.
pub fn phase_step_rotating(psi: &ComplexField, t: f64, dt: f64, model: &ModelConfig) -> ComplexField {
    let mut out = psi.clone();
    let pot = PotentialEval::rotated(&model.trap, &model.rotation, t + 0.5 * dt);
    apply_phase(
        &mut out,
        &pot,
        dt,
        model.nonlinearity.lambda,
        model.nonlinearity.sigma,
    );
    out
}

/// Strang plan for the rotating-frame equation with precomputed kinetic
/// multipliers. The ordering, fixed for a whole run, is
/// phase(dt/2 at t+dt/4), kinetic(dt), phase(dt/2 at t+3dt/4).
pub(crate) struct StrangPlan {
    kinetic: Vec<Complex64>,
    dt: f64,
    model: ModelConfig,
}

impl StrangPlan {
    pub fn new(grid: &Grid, model: &ModelConfig, dt: f64) -> Self {
        StrangPlan {
            kinetic: kinetic_multiplier(grid, dt),
            dt,
            model: model.clone(),
        }
    }

    pub fn step(&self, psi: &mut ComplexField, t: f64) {
        let dt = self.dt;
        let nl = &self.model.nonlinearity;
        let pot1 = PotentialEval::rotated(&self.model.trap, &self.model.rotation, t + 0.25 * dt);
        apply_phase(psi, &pot1, 0.5 * dt, nl.lambda, nl.sigma);
        apply_spectral_multiplier(psi, &self.kinetic);
        let pot2 = PotentialEval::rotated(&self.model.trap, &self.model.rotation, t + 0.75 * dt);
        apply_phase(psi, &pot2, 0.5 * dt, nl.lambda, nl.sigma);
    }
}

/// One Strang step of the rotating-frame equation.
pub fn strang_step_rotating(
    psi: &ComplexField,
    t: f64,
    dt: f64,
    model: &ModelConfig,
) -> ComplexField {
    let plan = StrangPlan::new(psi.grid(), model, dt);
    let mut out = psi.clone();
    plan.step(&mut out, t);
    out
}

/// Per-line 1-d spectral pass along `axis` with a mode multiplier that may
/// depend on the line's coordinate along `coord_axis`. `table` holds one row
/// of length `n(axis)` per coordinate index (a single shared row when
/// `coord_axis` is `None`). Each pass is unitary.
pub(crate) fn axis_multiplier_pass(
    values: &mut [Complex64],
    grid: &Grid,
    axis: usize,
    coord_axis: Option<usize>,
    table: &[Complex64],
) {
    let n = grid.size(axis);
    let inner = grid.stride(axis);
    let outer = grid.len() / (n * inner);
    let inv_n = 1.0 / n as f64;
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..outer {
        let block = o * n * inner;
        for i in 0..inner {
            let base = block + i;
            let row = match coord_axis {
                Some(c) => {
                    let ci = (base / grid.stride(c)) % grid.size(c);
                    &table[ci * n..(ci + 1) * n]
                }
                None => table,
            };
            for (m, v) in line.iter_mut().enumerate() {
                *v = values[base + m * inner];
            }
            fft::transform_axis_line(&mut line, true);
            for (v, r) in line.iter_mut().zip(row) {
                *v *= r;
            }
            fft::transform_axis_line(&mut line, false);
            for (m, v) in line.iter().enumerate() {
                values[base + m * inner] = v * inv_n;
            }
        }
    }
}

/// Lab-frame alternating-direction plan. The composition, palindromic so the
/// step stays second order, is
///
/// phase(dt/2), [axis-3 kinetic dt/2], axis-1(dt/2), axis-2(dt),
/// axis-1(dt/2), [axis-3 kinetic dt/2], phase(dt/2)
///
/// where the axis-1 substep solves `i d_t psi = -1/2 d11 psi - i w x2 d1 psi`
/// exactly through the per-line multiplier `exp(-i dt' (k1^2/2 + w x2 k1))`
/// and the axis-2 substep uses `exp(-i dt' (k2^2/2 - w x1 k2))`. Requires
/// the rotation axis to be the third coordinate axis (automatic in 2-d).
pub(crate) struct AdiPlan {
    dt: f64,
    model: ModelConfig,
    axis1_half: Vec<Complex64>,
    axis2_full: Vec<Complex64>,
    axis3_half: Option<Vec<Complex64>>,
}

impl AdiPlan {
    pub fn new(grid: &Grid, model: &ModelConfig, dt: f64) -> Result<Self, PropagationError> {
        if model.rotation.aligned_axis() != Some(2) {
            return Err(PropagationError::UnsupportedRotationAxis);
        }
        let omega = model.rotation.vector_components()[2];

        let n1 = grid.size(0);
        let n2 = grid.size(1);
        let k1 = grid.wavenumbers(0);
        let k2 = grid.wavenumbers(1);

        // rows indexed by the transverse coordinate
        let mut axis1_half = Vec::with_capacity(n2 * n1);
        for &x2 in grid.coords(1) {
            for &k in k1 {
                let theta = 0.5 * dt * (0.5 * k * k + omega * x2 * k);
                axis1_half.push(Complex64::from_polar(1.0, -theta));
            }
        }
        let mut axis2_full = Vec::with_capacity(n1 * n2);
        for &x1 in grid.coords(0) {
            for &k in k2 {
                let theta = dt * (0.5 * k * k - omega * x1 * k);
                axis2_full.push(Complex64::from_polar(1.0, -theta));
            }
        }
        // the axis-3 substep carries only its kinetic part: (dt/2) * k^2/2
        let axis3_half = (grid.dim() == 3).then(|| {
            grid.wavenumbers(2)
                .iter()
                .map(|&k| Complex64::from_polar(1.0, -0.25 * dt * k * k))
                .collect()
        });

        Ok(AdiPlan {
            dt,
            model: model.clone(),
            axis1_half,
            axis2_full,
            axis3_half,
        })
    }

    pub fn step(&self, psi: &mut ComplexField) {
        let grid = psi.grid().clone();
        let nl = self.model.nonlinearity;
        let pot = PotentialEval::lab(&self.model.trap);
        apply_phase(psi, &pot, 0.5 * self.dt, nl.lambda, nl.sigma);
        let values = psi.values_mut();
        if let Some(t3) = &self.axis3_half {
            axis_multiplier_pass(values, &grid, 2, None, t3);
        }
        axis_multiplier_pass(values, &grid, 0, Some(1), &self.axis1_half);
        axis_multiplier_pass(values, &grid, 1, Some(0), &self.axis2_full);
        axis_multiplier_pass(values, &grid, 0, Some(1), &self.axis1_half);
        if let Some(t3) = &self.axis3_half {
            axis_multiplier_pass(values, &grid, 2, None, t3);
        }
        apply_phase(psi, &pot, 0.5 * self.dt, nl.lambda, nl.sigma);
    }
}

/// One lab-frame alternating-direction step.
pub fn adi_step_lab(
    psi: &ComplexField,
    dt: f64,
    model: &ModelConfig,
) -> Result<ComplexField, PropagationError> {
    let plan = AdiPlan::new(psi.grid(), model, dt)?;
    let mut out = psi.clone();
    plan.step(&mut out);
    Ok(out)
}
