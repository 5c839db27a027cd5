//! Evaluation of the tracked functionals: mass, the two energies, the
//! magnetic-form energy, angular momentum and its source, variance and its
//! rate, current density, continuity residual, and the virial right-hand
//! side. All integrals use the periodic trapezoidal rule (a plain sum times
//! the cell volume), which is spectrally accurate for decaying fields.
//!
//! Moment integrands (`|x|^2`, `x . J`) use box coordinates centered at the
//! origin; their validity requires the field to be negligible near the
//! boundary, which the spectral tail monitor guards.

mod balance;
mod record;

pub use balance::{
    angular_momentum_balance, boundary_mass_fraction, continuity_residual, current_density,
    density, ObservablesError,
};
pub use record::{
    compute_record, compute_record_rotating, energy_magnetic_form, ObservableRecord,
    RESOLVED_TAIL_MAX,
};

pub(crate) use record::{pow_sigma, pow_sigma_plus_one};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig};
    use crate::spectral::{ComplexField, Grid};
    use num_complex::Complex64;
    use std::sync::Arc;

    fn gaussian_2d(grid: &Arc<Grid>) -> ComplexField {
        let norm = 1.0 / std::f64::consts::PI.sqrt();
        ComplexField::from_fn(grid, |x| {
            Complex64::new(norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp(), 0.0)
        })
    }

    fn vortex_2d(grid: &Arc<Grid>) -> ComplexField {
        let norm = 1.0 / std::f64::consts::PI.sqrt();
        ComplexField::from_fn(grid, |x| {
            Complex64::new(x[0], x[1]) * norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp()
        })
    }

    fn model(gamma: &[f64], omega: f64, lambda: f64, sigma: f64) -> ModelConfig {
        ModelConfig::new(
            gamma.len(),
            TrapConfig::anisotropic(gamma),
            RotationConfig::planar(omega),
            NonlinearityConfig::new(lambda, sigma),
        )
        .unwrap()
    }

    /// Independent quadrature oracle on a finer, larger grid: midpoint rule
    /// of a closed-form integrand, no spectral machinery involved.
    fn quad2d(f: impl Fn(f64, f64) -> f64, half: f64, n: usize) -> f64 {
        let h = 2.0 * half / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            let x = -half + (i as f64 + 0.5) * h;
            for j in 0..n {
                let y = -half + (j as f64 + 0.5) * h;
                s += f(x, y);
            }
        }
        s * h * h
    }

    #[test]
    fn ground_gaussian_record_matches_the_quadrature_oracle() {
        // The frozen expectations (mass 1, E = 1, L = 0, I = 1/2, virial 0)
        // are validated first by direct quadrature of the closed forms.
        let pi = std::f64::consts::PI;
        let mass_oracle = quad2d(|x, y| (-(x * x + y * y)).exp() / pi, 12.0, 600);
        assert!((mass_oracle - 1.0).abs() < 1e-10);
        let kinetic_oracle =
            quad2d(|x, y| 0.5 * (x * x + y * y) * (-(x * x + y * y)).exp() / pi, 12.0, 600);
        assert!((kinetic_oracle - 0.5).abs() < 1e-10);
        let moment_oracle =
            quad2d(|x, y| 0.5 * (x * x + y * y) * (-(x * x + y * y)).exp() / pi, 12.0, 600);
        assert!((moment_oracle - 0.5).abs() < 1e-10);

        let g = Grid::new(&[128, 128], &[8.0, 8.0]).unwrap();
        let psi = gaussian_2d(&g);
        let m = model(&[1.0, 1.0], 0.0, 0.0, 1.0);
        let r = compute_record(&psi, 0.0, &m);
        assert!((r.mass - 1.0).abs() < 1e-8);
        assert!((r.energy_omega - 1.0).abs() < 1e-8);
        assert!((r.energy_zero - 1.0).abs() < 1e-8);
        assert!(r.ang_mom.abs() < 1e-8);
        assert!((r.variance - 0.5).abs() < 1e-8);
        assert!(r.virial_rhs.abs() < 1e-8);
        assert!(r.variance_rate.abs() < 1e-10);
        assert!(r.tail < 1e-10);
    }

    #[test]
    fn vortex_record_matches_oscillator_algebra() {
        let pi = std::f64::consts::PI;
        // oracle: mass and angular momentum of the unit vortex
        let mass_oracle = quad2d(|x, y| (x * x + y * y) * (-(x * x + y * y)).exp() / pi, 12.0, 600);
        assert!((mass_oracle - 1.0).abs() < 1e-10);

        let g = Grid::new(&[128, 128], &[8.0, 8.0]).unwrap();
        let psi = vortex_2d(&g);
        let m = model(&[1.0, 1.0], 0.5, 0.0, 1.0);
        let r = compute_record(&psi, 0.0, &m);
        assert!((r.mass - 1.0).abs() < 1e-8);
        assert!((r.ang_mom - 1.0).abs() < 1e-8);
        assert!((r.energy_zero - 2.0).abs() < 1e-8);
        assert!((r.energy_omega - 1.5).abs() < 1e-8);
        assert!((r.energy_magnetic - 1.5).abs() < 1e-8);
    }

    #[test]
    fn real_states_have_no_rotation_observables() {
        let g = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();
        let psi = ComplexField::from_fn(&g, |x| {
            Complex64::new(
                (-0.4 * ((x[0] - 0.5) * (x[0] - 0.5) + x[1] * x[1])).exp(),
                0.0,
            )
        });
        let m = model(&[1.0, 2.0], 0.7, 1.0, 1.0);
        let r = compute_record(&psi, 0.0, &m);
        assert!(r.ang_mom.abs() < 1e-12);
        assert!(r.variance_rate.abs() < 1e-12);
    }

    #[test]
    fn magnetic_form_is_the_identity_route() {
        let g = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();

        // omega = 0: both routes coincide exactly
        let psi = vortex_2d(&g);
        let m0 = model(&[1.0, 1.0], 0.0, 0.5, 1.0);
        let r = compute_record(&psi, 0.0, &m0);
        assert_eq!(r.energy_magnetic, r.energy_omega);

        // a deliberately lopsided smooth field, omega = 0.7
        let psi = ComplexField::from_fn(&g, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            Complex64::new(
                (-0.5 * r2).exp() * (1.0 + 0.3 * x[0]),
                0.2 * x[1] * (-0.4 * r2).exp(),
            )
        });
        let m = model(&[1.0, 1.0], 0.7, 1.0, 1.0);
        let r = compute_record(&psi, 0.0, &m);
        assert!(
            (r.energy_magnetic - r.energy_omega).abs() <= 1e-8 * (1.0 + r.energy_omega.abs())
        );
        assert!((energy_magnetic_form(&psi, &m) - r.energy_magnetic).abs() < 1e-14);
    }

    #[test]
    fn variance_rate_agrees_with_an_independent_evaluation() {
        let g = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();
        let psi = ComplexField::from_fn(&g, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            Complex64::new(0.0, 0.8 * x[0]).exp() * (-0.5 * r2).exp()
        });
        let m = model(&[1.0, 1.0], 0.3, 0.0, 1.0);
        let r = compute_record(&psi, 0.0, &m);
        // second route: int x . J dx via the current-density field
        let j = current_density(&psi);
        let mut s = 0.0;
        g.for_each_point(|flat, x| {
            for (c, &xc) in x.iter().enumerate().take(2) {
                s += xc * j.component(c)[flat];
            }
        });
        s *= g.cell_volume();
        assert!((r.variance_rate - s).abs() < 1e-10 * (1.0 + s.abs()));
    }

    #[test]
    fn angular_momentum_is_essentially_real() {
        let g = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();
        let psi = vortex_2d(&g);
        let m = model(&[1.0, 1.0], 0.5, 0.0, 1.0);
        // independent evaluation of the imaginary part of the integral
        let grad = crate::spectral::gradient(&psi);
        let mut integral = Complex64::new(0.0, 0.0);
        g.for_each_point(|flat, x| {
            let bracket = Complex64::new(0.0, -1.0)
                * (Complex64::new(-x[1], 0.0) * grad.component(0)[flat]
                    + Complex64::new(x[0], 0.0) * grad.component(1)[flat]);
            integral += psi.values()[flat].conj() * bracket;
        });
        integral *= g.cell_volume();
        let r = compute_record(&psi, 0.0, &m);
        assert!(integral.im.abs() <= 1e-10 * r.mass);
        assert!((integral.re - r.ang_mom).abs() < 1e-12);
    }

    #[test]
    fn eigenstate_virial_rhs_vanishes() {
        let g = Grid::new(&[128, 128], &[8.0, 8.0]).unwrap();
        let m = model(&[1.0, 1.0], 0.0, 0.0, 1.0);
        for psi in [gaussian_2d(&g), vortex_2d(&g)] {
            let r = compute_record(&psi, 0.0, &m);
            assert!(r.virial_rhs.abs() < 1e-8, "virial {}", r.virial_rhs);
        }
    }
}
