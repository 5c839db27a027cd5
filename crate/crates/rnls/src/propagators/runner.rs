//! Time-stepping orchestration: advance a state to a final time, sample
//! observables, and stop early on blow-up or loss of resolution.

use serde::Serialize;

use crate::model::ModelConfig;
use crate::observables::{compute_record, compute_record_rotating, ObservableRecord};
use crate::spectral::ComplexField;

use super::frame::{map_frame, MapDirection};
use super::steps::{AdiPlan, PropagationError, StrangPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    RotatingFrame,
    LabFrame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Lab,
    Rotating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    BlowupDetected,
    Unresolved,
}

/// Time-stepping parameters shared by both backends.
#[derive(Debug, Clone, Copy)]
pub struct SimParams {
    pub dt: f64,
    pub t_end: f64,
    pub backend: Backend,
    /// Steps between observable records (records are also taken at the
    /// first and last step).
    pub sample_every: usize,
    /// Blow-up fires when `grad_norm_sq` exceeds this multiple of its
    /// initial value.
    pub blowup_grad_factor: f64,
    /// The run is declared unresolved when the spectral tail exceeds this.
    pub blowup_tail: f64,
    /// Frame in which the final field is returned. Observable records are
    /// frame-invariant functionals and do not depend on this choice.
    pub frame_of_record: Frame,
}

impl SimParams {
    pub fn new(dt: f64, t_end: f64, backend: Backend) -> Self {
        SimParams {
            dt,
            t_end,
            backend,
            sample_every: 10,
            blowup_grad_factor: 100.0,
            blowup_tail: 1e-3,
            frame_of_record: Frame::Lab,
        }
    }

    fn validate(&self) -> Result<(), PropagationError> {
        if self.dt <= 0.0 || self.dt.is_nan() || self.t_end <= 0.0 || self.t_end.is_nan() {
            return Err(PropagationError::InvalidParams(
                "dt and t_end must be positive".into(),
            ));
        }
        if self.sample_every == 0 {
            return Err(PropagationError::InvalidParams(
                "sample_every must be at least 1".into(),
            ));
        }
        if self.blowup_grad_factor <= 0.0
            || self.blowup_grad_factor.is_nan()
            || self.blowup_tail <= 0.0
            || self.blowup_tail.is_nan()
        {
            return Err(PropagationError::InvalidParams(
                "blow-up thresholds must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a run: status, the observable series, the detection time when
/// blow-up fired, and the final state with the frame it is expressed in.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub status: RunStatus,
    pub t_final: f64,
    pub records: Vec<ObservableRecord>,
    pub t_detect: Option<f64>,
    pub final_field: ComplexField,
    pub final_field_frame: Frame,
    pub model: ModelConfig,
    pub params: SimParams,
}

impl RunResult {
    /// Uniform record spacing in time (sample interval).
    pub fn sample_dt(&self) -> f64 {
        if self.records.len() < 2 {
            return self.params.dt * self.params.sample_every as f64;
        }
        self.records[1].t - self.records[0].t
    }
}

enum Stepper {
    Strang(StrangPlan),
    Adi(AdiPlan),
}

/// Advance `psi0` to `t_end`, sampling records every `sample_every` steps.
///
/// The rotating-frame backend evolves the state in rotated coordinates under
/// the time-dependent potential; its records are computed against the
/// instantaneous potential, which makes them equal to the lab-frame
/// functionals exactly, with no resampling. Early termination: unresolved
/// when the spectral tail exceeds `blowup_tail` (checked first, so
/// under-resolution is never reported as blow-up), blow-up when
/// `grad_norm_sq` exceeds `blowup_grad_factor` times its initial value.
pub fn run(
    psi0: &ComplexField,
    model: &ModelConfig,
    params: &SimParams,
) -> Result<RunResult, PropagationError> {
    params.validate()?;
    let grid = psi0.grid();
    let steps = (params.t_end / params.dt).round().max(1.0) as usize;

    let stepper = match params.backend {
        Backend::RotatingFrame => Stepper::Strang(StrangPlan::new(grid, model, params.dt)),
        Backend::LabFrame => Stepper::Adi(AdiPlan::new(grid, model, params.dt)?),
    };

    let mut state = psi0.clone();
    let mut records: Vec<ObservableRecord> = Vec::new();
    let mut status = RunStatus::Completed;
    let mut t_detect = None;
    let mut initial_grad = 0.0;

    for step in 0..=steps {
        let t = step as f64 * params.dt;
        if step % params.sample_every == 0 || step == steps {
            let rec = match params.backend {
                Backend::RotatingFrame => compute_record_rotating(&state, t, model),
                Backend::LabFrame => compute_record(&state, t, model),
            };
            if records.is_empty() {
                initial_grad = rec.grad_norm_sq;
            }
            records.push(rec);
            if rec.tail > params.blowup_tail {
                status = RunStatus::Unresolved;
                break;
            }
            if initial_grad > 0.0 && rec.grad_norm_sq > params.blowup_grad_factor * initial_grad {
                status = RunStatus::BlowupDetected;
                t_detect = Some(t);
                break;
            }
        }
        if step == steps {
            break;
        }
        match &stepper {
            Stepper::Strang(p) => p.step(&mut state, t),
            Stepper::Adi(p) => p.step(&mut state),
        }
    }

    let t_final = records.last().expect("at least one record").t;
    let backend_frame = match params.backend {
        Backend::RotatingFrame => Frame::Rotating,
        Backend::LabFrame => Frame::Lab,
    };
    let (final_field, final_field_frame) = if params.frame_of_record == backend_frame {
        (state, backend_frame)
    } else {
        let dir = match params.frame_of_record {
            Frame::Lab => MapDirection::RotatingToLab,
            Frame::Rotating => MapDirection::LabToRotating,
        };
        match map_frame(&state, t_final, &model.rotation, dir) {
            Ok(mapped) => (mapped, params.frame_of_record),
            // an unresolved or unmappable state is returned in the frame it
            // was computed in; the flag discloses which
            Err(_) => (state, backend_frame),
        }
    };

    Ok(RunResult {
        status,
        t_final,
        records,
        t_detect,
        final_field,
        final_field_frame,
        model: model.clone(),
        params: *params,
    })
}
