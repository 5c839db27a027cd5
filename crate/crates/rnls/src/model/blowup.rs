//! The blow-up exponent threshold and the finite-time blow-up classifier
//! for focusing runs.

use serde::Serialize;

use super::config::{ModelConfig, ModelError};
use super::potential::axially_symmetric;

/// Exponent threshold `alpha = sqrt(4 g^2 / (g^2 - w^2))` with `g` the
/// smallest trap frequency and `w` the rotation magnitude. Strictly
/// increasing in `w`, equal to 2 at `w = 0`, and divergent as `w -> g`.
pub fn alpha_omega(gamma_min: f64, omega_mag: f64) -> Result<f64, ModelError> {
    if gamma_min <= 0.0 || gamma_min.is_nan() || omega_mag >= gamma_min {
        return Err(ModelError::RotationExceedsTrap {
            omega: omega_mag,
            gamma_min,
        });
    }
    let g2 = gamma_min * gamma_min;
    Ok((4.0 * g2 / (g2 - omega_mag * omega_mag)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupCase {
    AxisymmetricCaseI,
    NonsymmetricCaseII,
    NotApplicable,
}

/// Outcome of the blow-up criterion check: which case (if any) applies, the
/// exponent data behind it, and the resulting upper bound on the blow-up
/// time from the variance parabola.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    pub case: BlowupCase,
    pub alpha_omega: Option<f64>,
    pub e0_initial: f64,
    pub eomega_initial: f64,
    pub sigma_threshold: Option<f64>,
    pub t_star_bound: Option<f64>,
    pub reason: Option<String>,
}

impl BlowupReport {
    fn not_applicable(e0: f64, eomega: f64, alpha: Option<f64>, reason: &str) -> Self {
        BlowupReport {
            case: BlowupCase::NotApplicable,
            alpha_omega: alpha,
            e0_initial: e0,
            eomega_initial: eomega,
            sigma_threshold: None,
            t_star_bound: None,
            reason: Some(reason.to_string()),
        }
    }
}

/// Positive root of `a t^2 + b t + c` with `a < 0`, `c >= 0`.
fn positive_root(a: f64, b: f64, c: f64) -> f64 {
    debug_assert!(a < 0.0 && c >= 0.0);
    let disc = (b * b - 4.0 * a * c).sqrt();
    (b + disc) / (-2.0 * a)
}

/// Decide whether the focusing blow-up criterion applies to the given
/// configuration and initial data, and bound the blow-up time when it does.
///
/// Case I (axially symmetric trap): requires `sigma >= 2/d` and `e0 < 0`;
/// the variance then obeys `I'' <= 2 e0`, so `I(t) <= i0 + di0 t + e0 t^2`
/// and the bound is that parabola's positive root. Case II (non-symmetric,
/// `|omega| < gamma_min`): requires `sigma >= alpha/d` and `eomega < 0` with
/// `I'' <= alpha * eomega`. A non-verdict is a value, never an error.
pub fn classify_blowup(
    model: &ModelConfig,
    e0: f64,
    eomega: f64,
    i0: f64,
    di0: f64,
) -> BlowupReport {
    let d = model.dim as f64;
    let nl = &model.nonlinearity;
    let trap = &model.trap;
    let rot = &model.rotation;
    let gamma_min = trap.gamma_min();
    let alpha = alpha_omega(gamma_min, rot.magnitude()).ok();

    if !nl.is_focusing() {
        return BlowupReport::not_applicable(e0, eomega, alpha, "nonlinearity is not focusing");
    }
    if !trap.all_attractive() {
        return BlowupReport::not_applicable(
            e0,
            eomega,
            alpha,
            "criterion requires an attractive quadratic trap (V >= 0)",
        );
    }
    if !trap.is_purely_quadratic() {
        return BlowupReport::not_applicable(
            e0,
            eomega,
            alpha,
            "criterion requires a purely quadratic trap",
        );
    }

    if axially_symmetric(trap, rot) {
        let threshold = 2.0 / d;
        if nl.sigma < threshold {
            return BlowupReport::not_applicable(
                e0,
                eomega,
                alpha,
                "sigma below the mass-critical power 2/d",
            );
        }
        if e0 >= 0.0 {
            return BlowupReport::not_applicable(e0, eomega, alpha, "E0(0) is not negative");
        }
        BlowupReport {
            case: BlowupCase::AxisymmetricCaseI,
            alpha_omega: alpha,
            e0_initial: e0,
            eomega_initial: eomega,
            sigma_threshold: Some(threshold),
            t_star_bound: Some(positive_root(e0, di0, i0)),
            reason: None,
        }
    } else {
        let Some(alpha) = alpha else {
            return BlowupReport::not_applicable(
                e0,
                eomega,
                None,
                "rotation at or above the smallest trap frequency: regime open, no criterion applies",
            );
        };
        let threshold = alpha / d;
        if nl.sigma < threshold {
            return BlowupReport::not_applicable(
                e0,
                eomega,
                Some(alpha),
                "sigma below alpha_omega/d",
            );
        }
        if eomega >= 0.0 {
            return BlowupReport::not_applicable(
                e0,
                eomega,
                Some(alpha),
                "E_Omega(0) is not negative",
            );
        }
        BlowupReport {
            case: BlowupCase::NonsymmetricCaseII,
            alpha_omega: Some(alpha),
            e0_initial: e0,
            eomega_initial: eomega,
            sigma_threshold: Some(threshold),
            t_star_bound: Some(positive_root(0.5 * alpha * eomega, di0, i0)),
            reason: None,
        }
    }
}
