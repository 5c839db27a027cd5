//! Density/current fields and the discrete balance-law residuals.

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{cross, RotationConfig};
use crate::spectral::{
    divergence_real, gradient, gradient_real, tail_fraction, ComplexField, RealField,
    RealVectorField,
};

use super::record::{ObservableRecord, RESOLVED_TAIL_MAX};

#[derive(Debug, Error, PartialEq)]
pub enum ObservablesError {
    #[error("field insufficiently resolved: spectral tail {tail:.3e} >= {max:.1e}")]
    UnresolvedField { tail: f64, max: f64 },
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
}

/// Share of the discrete mass in the outermost cell shell of the box.
///
/// The moment integrands (`|x|^2`, `x . J`) are not periodic; their values
/// are meaningful only when this fraction is negligible alongside a small
/// spectral tail.
pub fn boundary_mass_fraction(psi: &ComplexField) -> f64 {
    let grid = psi.grid();
    let d = grid.dim();
    let mut idx = [0usize; 3];
    let mut total = 0.0;
    let mut boundary = 0.0;
    for v in psi.values() {
        let rho = v.norm_sqr();
        total += rho;
        if (0..d).any(|j| idx[j] == 0 || idx[j] == grid.size(j) - 1) {
            boundary += rho;
        }
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < grid.size(j) {
                break;
            }
            idx[j] = 0;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        boundary / total
    }
}

/// Pointwise density `rho = |psi|^2`.
pub fn density(psi: &ComplexField) -> RealField {
    RealField::from_values(
        psi.grid(),
        psi.values().iter().map(|v| v.norm_sqr()).collect(),
    )
}

/// Current density `J = Im(conj(psi) grad psi)` with a spectral gradient.
pub fn current_density(psi: &ComplexField) -> RealVectorField {
    let grid = psi.grid();
    let grad = gradient(psi);
    let comps = (0..grid.dim())
        .map(|j| {
            psi.values()
                .iter()
                .zip(grad.component(j))
                .map(|(v, g)| (v.conj() * g).im)
                .collect()
        })
        .collect();
    RealVectorField::from_components(grid, comps)
}

fn require_resolved(psi: &ComplexField) -> Result<(), ObservablesError> {
    let tail = tail_fraction(psi).map_err(|_| ObservablesError::UnresolvedField {
        tail: 1.0,
        max: RESOLVED_TAIL_MAX,
    })?;
    if tail >= RESOLVED_TAIL_MAX {
        return Err(ObservablesError::UnresolvedField {
            tail,
            max: RESOLVED_TAIL_MAX,
        });
    }
    Ok(())
}

/// Discrete residual of the continuity equation
/// `d rho/dt + div J = (omega ^ x) . grad rho`
/// for two consecutive solver states `dt` apart: the grid l2 norm of the
/// difference quotient minus the right-hand side at the mass-normalized
/// midpoint state.
pub fn continuity_residual(
    psi_prev: &ComplexField,
    psi_next: &ComplexField,
    dt: f64,
    rot: &RotationConfig,
) -> Result<f64, ObservablesError> {
    assert_eq!(psi_prev.grid().as_ref(), psi_next.grid().as_ref());
    require_resolved(psi_prev)?;
    require_resolved(psi_next)?;

    let grid = psi_prev.grid();
    let rho_prev = density(psi_prev);
    let rho_next = density(psi_next);

    let target_mass = 0.5 * (psi_prev.mass() + psi_next.mass());
    let mid_vals: Vec<Complex64> = psi_prev
        .values()
        .iter()
        .zip(psi_next.values())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let mid = ComplexField::from_values(grid, mid_vals).normalized_to_mass(target_mass);

    let j = current_density(&mid);
    let div_j = divergence_real(&j);
    let rho_mid = density(&mid);
    let grad_rho = gradient_real(&rho_mid);
    let omega = rot.vector_components();

    let mut sum_sq = 0.0;
    grid.for_each_point(|flat, x| {
        let quotient = (rho_next.values()[flat] - rho_prev.values()[flat]) / dt;
        let a = cross(omega, x);
        let mut advect = 0.0;
        for (jx, &aj) in a.iter().enumerate().take(grid.dim()) {
            advect += aj * grad_rho.component(jx)[flat];
        }
        let r = quotient + div_j.values()[flat] - advect;
        sum_sq += r * r;
    });
    Ok((sum_sq * grid.cell_volume()).sqrt())
}

/// Maximum deviation from the angular-momentum balance law over a uniformly
/// sampled record series:
/// `max_t | ang_mom(t) + int_0^t lmom_source ds - ang_mom(0) |`
/// with a trapezoidal time integral.
pub fn angular_momentum_balance(records: &[ObservableRecord]) -> Result<f64, ObservablesError> {
    if records.len() < 3 {
        return Err(ObservablesError::TooFewSamples {
            min: 3,
            got: records.len(),
        });
    }
    let l0 = records[0].ang_mom;
    let mut integral = 0.0;
    let mut worst = 0.0f64;
    for w in records.windows(2) {
        let dt = w[1].t - w[0].t;
        integral += 0.5 * dt * (w[0].lmom_source + w[1].lmom_source);
        worst = worst.max((w[1].ang_mom + integral - l0).abs());
    }
    Ok(worst)
}
