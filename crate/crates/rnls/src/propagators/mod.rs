//! Time propagation: the rotating-frame split-step backend, the lab-frame
//! alternating-direction backend, frame mapping, the imaginary-time ground
//! state generator, and the run orchestrator.
//!
//! A run is sequential in time; two runs never share mutable state and every
//! result is immutable once returned.

mod frame;
mod imaginary;
mod runner;
mod steps;

pub use frame::{map_frame, MapDirection};
pub use imaginary::imaginary_time_ground_state;
pub use runner::{run, Backend, Frame, RunResult, RunStatus, SimParams};
pub use steps::{
    adi_step_lab, kinetic_step, phase_step_rotating, strang_step_rotating, PropagationError,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig};
    use crate::spectral::{ComplexField, Grid};
    use num_complex::Complex64;
    use std::sync::Arc;

    fn model_2d(gamma: &[f64], omega: f64, lambda: f64, sigma: f64) -> ModelConfig {
        ModelConfig::new(
            2,
            TrapConfig::anisotropic(gamma),
            RotationConfig::planar(omega),
            NonlinearityConfig::new(lambda, sigma),
        )
        .unwrap()
    }

    fn ground_gaussian(grid: &Arc<Grid>) -> ComplexField {
        let norm = 1.0 / std::f64::consts::PI.sqrt();
        ComplexField::from_fn(grid, |x| {
            Complex64::new(norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp(), 0.0)
        })
    }

    fn vortex(grid: &Arc<Grid>) -> ComplexField {
        let norm = 1.0 / std::f64::consts::PI.sqrt();
        ComplexField::from_fn(grid, |x| {
            Complex64::new(x[0], x[1]) * norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp()
        })
    }

    fn phase_evolved(psi: &ComplexField, energy: f64, t: f64) -> ComplexField {
        let phase = Complex64::from_polar(1.0, -energy * t);
        ComplexField::from_values(psi.grid(), psi.values().iter().map(|v| v * phase).collect())
    }

    #[test]
    fn kinetic_step_is_an_exact_eigenmode_flow() {
        let g = Grid::new(&[16, 16], &[4.0, 4.0]).unwrap();
        let k1 = g.wavenumbers(0)[2];
        let k2 = g.wavenumbers(1)[3];
        let psi = ComplexField::from_fn(&g, |x| Complex64::new(0.0, k1 * x[0] + k2 * x[1]).exp());
        let dt = 0.3;
        let out = kinetic_step(&psi, dt);
        let expect = Complex64::from_polar(1.0, -0.5 * (k1 * k1 + k2 * k2) * dt);
        for (o, p) in out.values().iter().zip(psi.values()) {
            assert!((o - p * expect).norm() < 1e-12);
        }
        // constant field is untouched
        let c = ComplexField::from_fn(&g, |_| Complex64::new(1.0, -2.0));
        let out = kinetic_step(&c, dt);
        assert!(c.l2_distance(&out) < 1e-12);
        // mass preserved
        assert!((kinetic_step(&psi, dt).mass() - psi.mass()).abs() < 1e-13 * psi.mass());
    }

    #[test]
    fn free_gaussian_spreads_by_the_closed_form() {
        // i dt psi = -1/2 Lap psi from pi^{-1/2} e^{-r^2/2}:
        // psi(t) = pi^{-1/2} (1 + i t)^{-1} exp(-r^2 / (2 (1 + i t)))
        let g = Grid::new(&[128, 128], &[12.0, 12.0]).unwrap();
        let psi0 = ground_gaussian(&g);
        let t = 1.0;
        let out = kinetic_step(&psi0, t);
        let norm = 1.0 / std::f64::consts::PI.sqrt();
        let denom = Complex64::new(1.0, t);
        let exact = ComplexField::from_fn(&g, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            norm / denom * (Complex64::new(-0.5 * r2, 0.0) / denom).exp()
        });
        assert!(out.l2_distance(&exact) < 1e-8, "{}", out.l2_distance(&exact));
        // variance of the spread state: I(t) = (1 + t^2) * I(0) = 1 at t = 1
        let m = model_2d(&[0.0, 0.0], 0.0, 0.0, 1.0);
        let r = crate::observables::compute_record(&out, t, &m);
        assert!((r.variance - 1.0).abs() < 1e-8);
    }

    #[test]
    fn phase_step_only_rotates_the_phase() {
        let g = Grid::new(&[32, 32], &[6.0, 6.0]).unwrap();
        let psi = ComplexField::from_fn(&g, |x| {
            Complex64::new((-0.3 * (x[0] * x[0] + x[1] * x[1])).exp(), 0.4)
        });
        let m = model_2d(&[1.0, 2.0], 0.5, -1.0, 1.5);
        let out = phase_step_rotating(&psi, 0.2, 1e-2, &m);
        for (a, b) in out.values().iter().zip(psi.values()) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_symmetric_phase_step_is_the_exact_multiplier() {
        // lambda = 0 and an axisymmetric trap: the substep is exactly
        // psi * exp(-i dt V(x)), with no time dependence entering
        let g = Grid::new(&[32, 32], &[6.0, 6.0]).unwrap();
        let m = model_2d(&[1.3, 1.3], 0.8, 0.0, 1.0);
        let psi = ground_gaussian(&g);
        let dt = 0.07;
        let out = phase_step_rotating(&psi, 1.9, dt, &m);
        let mut worst: f64 = 0.0;
        g.for_each_point(|flat, x| {
            let v = 0.5 * 1.69 * (x[0] * x[0] + x[1] * x[1]);
            let expect = psi.values()[flat] * Complex64::from_polar(1.0, -dt * v);
            worst = worst.max((out.values()[flat] - expect).norm());
        });
        assert!(worst < 1e-15, "max deviation {worst}");
    }

    #[test]
    fn frame_map_refuses_unresolved_fields() {
        let g = Grid::new(&[16, 16], &[4.0, 4.0]).unwrap();
        // all mass on a Nyquist-adjacent mode: tail fraction 1
        let k = g.wavenumbers(0)[7];
        let psi = ComplexField::from_fn(&g, |x| Complex64::new(0.0, k * x[0]).exp());
        let rot = RotationConfig::planar(0.4);
        assert!(matches!(
            map_frame(&psi, 1.0, &rot, MapDirection::LabToRotating).unwrap_err(),
            PropagationError::UnresolvedField { .. }
        ));
    }

    #[test]
    fn phase_step_arithmetic_on_a_single_node() {
        // lambda = -1, sigma = 1, psi = 2 at a node where W = 0:
        // phase increment is -dt * (-1) * 4 = +4 dt
        let g = Grid::new(&[8, 8], &[1.0, 1.0]).unwrap();
        let m = ModelConfig::new(
            2,
            TrapConfig::isotropic(2, 0.0),
            RotationConfig::none(),
            NonlinearityConfig::new(-1.0, 1.0),
        )
        .unwrap();
        let psi = ComplexField::from_fn(&g, |_| Complex64::new(2.0, 0.0));
        let dt = 0.05;
        let out = phase_step_rotating(&psi, 0.0, dt, &m);
        let expect = Complex64::new(2.0, 0.0) * Complex64::from_polar(1.0, 4.0 * dt);
        assert!((out.values()[0] - expect).norm() < 1e-14);
    }

    #[test]
    fn strang_tracks_the_ground_state_phase() {
        let g = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();
        let m = model_2d(&[1.0, 1.0], 0.0, 0.0, 1.0);
        let psi0 = ground_gaussian(&g);
        let dt = 1e-3;
        let mut psi = psi0.clone();
        let steps = 1000;
        for s in 0..steps {
            psi = strang_step_rotating(&psi, s as f64 * dt, dt, &m);
        }
        let exact = phase_evolved(&psi0, 1.0, 1.0);
        let err = psi.l2_distance(&exact);
        assert!(err <= 1e-5, "l2 error {err}");
        assert!((psi.mass() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn strang_error_halves_like_second_order() {
        let g = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();
        let m = model_2d(&[1.0, 1.0], 0.0, 0.0, 1.0);
        let psi0 = ground_gaussian(&g);
        let t_end = 0.2f64;
        let mut errs = Vec::new();
        for &dt in &[2e-3f64, 1e-3] {
            let steps = (t_end / dt).round() as usize;
            let mut psi = psi0.clone();
            for s in 0..steps {
                psi = strang_step_rotating(&psi, s as f64 * dt, dt, &m);
            }
            errs.push(psi.l2_distance(&phase_evolved(&psi0, 1.0, t_end)));
        }
        let ratio = errs[0] / errs[1];
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn adi_reduces_to_strang_without_rotation() {
        let g = Grid::new(&[32, 32], &[6.0, 6.0]).unwrap();
        let m = model_2d(&[1.0, 2.0], 0.0, 1.0, 1.0);
        let psi = ComplexField::from_fn(&g, |x| {
            Complex64::new(x[0] * 0.3, 1.0) * (-0.4 * (x[0] * x[0] + x[1] * x[1])).exp()
        })
        .normalized_to_mass(1.0);
        let dt = 1e-3;
        let a = adi_step_lab(&psi, dt, &m).unwrap();
        let b = strang_step_rotating(&psi, 0.0, dt, &m);
        assert!(a.l2_distance(&b) < 1e-10, "{}", a.l2_distance(&b));
    }

    #[test]
    fn adi_substeps_preserve_mass() {
        let g = Grid::new(&[32, 32], &[6.0, 6.0]).unwrap();
        let m = model_2d(&[1.0, 2.0], 0.7, -1.0, 1.0);
        let psi = ComplexField::from_fn(&g, |x| {
            Complex64::new(1.0, 0.5 * x[1]) * (-0.4 * (x[0] * x[0] + x[1] * x[1])).exp()
        })
        .normalized_to_mass(1.0);
        let out = adi_step_lab(&psi, 1e-2, &m).unwrap();
        assert!((out.mass() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn adi_rejects_misaligned_rotation() {
        let g = Grid::new(&[16, 16, 16], &[4.0, 4.0, 4.0]).unwrap();
        let m = ModelConfig::new(
            3,
            TrapConfig::isotropic(3, 1.0),
            RotationConfig::vector([0.5, 0.0, 0.5]),
            NonlinearityConfig::new(0.0, 1.0),
        )
        .unwrap();
        let psi = ground_gaussian_3d(&g);
        assert_eq!(
            adi_step_lab(&psi, 1e-3, &m).unwrap_err(),
            PropagationError::UnsupportedRotationAxis
        );
    }

    fn ground_gaussian_3d(grid: &Arc<Grid>) -> ComplexField {
        ComplexField::from_fn(grid, |x| {
            Complex64::new(
                (-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp(),
                0.0,
            )
        })
    }

    #[test]
    fn lab_backend_tracks_the_vortex_eigenstate() {
        // gamma = 1, lambda = 0, omega = 0.5: the unit vortex evolves as
        // exp(-i (2 - 0.5) t)
        let g = Grid::new(&[128, 128], &[8.0, 8.0]).unwrap();
        let m = model_2d(&[1.0, 1.0], 0.5, 0.0, 1.0);
        let psi0 = vortex(&g);
        let mut params = SimParams::new(1e-3, 1.0, Backend::LabFrame);
        params.sample_every = 100;
        let result = run(&psi0, &m, &params).unwrap();
        assert_eq!(result.status, RunStatus::Completed);
        let exact = phase_evolved(&psi0, 1.5, 1.0);
        let err = result.final_field.l2_distance(&exact);
        assert!(err <= 1e-5, "l2 error {err}");
    }

    #[test]
    fn rotating_backend_is_trivial_on_radial_states() {
        // radial ground state, isotropic trap: rotation acts trivially
        let g = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();
        let m = model_2d(&[1.0, 1.0], 0.5, 0.0, 1.0);
        let psi0 = ground_gaussian(&g);
        let mut params = SimParams::new(1e-3, 1.0, Backend::RotatingFrame);
        params.sample_every = 200;
        let result = run(&psi0, &m, &params).unwrap();
        assert_eq!(result.status, RunStatus::Completed);
        let exact = phase_evolved(&psi0, 1.0, 1.0);
        let err = result.final_field.l2_distance(&exact);
        assert!(err <= 1e-5, "l2 error {err}");
        assert_eq!(result.final_field_frame, Frame::Lab);
    }

    #[test]
    fn absurd_time_step_trips_the_tail_guard() {
        let g = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();
        let m = model_2d(&[1.0, 1.0], 0.0, -1.0, 1.0);
        let psi0 = ground_gaussian(&g).normalized_to_mass(13.5);
        let params = SimParams::new(1.0, 20.0, Backend::RotatingFrame);
        let result = run(&psi0, &m, &params).unwrap();
        assert_eq!(result.status, RunStatus::Unresolved);
        assert!(result.t_detect.is_none());
    }

    #[test]
    fn three_d_vortex_eigenstate_under_both_backends() {
        // (x1 + i x2) exp(-|x|^2/2) * pi^{-3/4}: oscillator eigenvalue 5/2,
        // lab-frame evolution exp(-i (2.5 - 0.5) t) under omega = 0.5
        let g = Grid::new(&[32, 32, 32], &[6.0, 6.0, 6.0]).unwrap();
        let m = ModelConfig::new(
            3,
            TrapConfig::isotropic(3, 1.0),
            RotationConfig::vector([0.0, 0.0, 0.5]),
            NonlinearityConfig::new(0.0, 1.0),
        )
        .unwrap();
        let norm = std::f64::consts::PI.powf(-0.75);
        let psi0 = ComplexField::from_fn(&g, |x| {
            Complex64::new(x[0], x[1])
                * norm
                * (-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp()
        });
        assert!((psi0.mass() - 1.0).abs() < 1e-8);
        let t_end = 0.1;
        let exact = phase_evolved(&psi0, 2.0, t_end);
        for backend in [Backend::LabFrame, Backend::RotatingFrame] {
            let mut params = SimParams::new(1e-3, t_end, backend);
            params.sample_every = 50;
            params.frame_of_record = Frame::Lab;
            let result = run(&psi0, &m, &params).unwrap();
            assert_eq!(result.status, RunStatus::Completed);
            assert!((result.records[0].energy_zero - 2.5).abs() < 1e-8);
            assert!((result.records[0].energy_omega - 2.0).abs() < 1e-8);
            let err = result.final_field.l2_distance(&exact);
            assert!(err < 1e-5, "{backend:?} error {err}");
        }
    }

    #[test]
    fn skew_axis_rotation_conserves_the_energy_in_the_rotating_frame() {
        // a rotation axis off every coordinate axis is only reachable via
        // the rotating-frame backend, where the coordinate change sits
        // inside the time-dependent potential
        let g = Grid::new(&[32, 32, 32], &[6.0, 6.0, 6.0]).unwrap();
        let m = ModelConfig::new(
            3,
            TrapConfig::anisotropic(&[1.0, 1.3, 0.8]),
            RotationConfig::vector([0.3, 0.2, 0.4]),
            NonlinearityConfig::new(0.5, 1.0),
        )
        .unwrap();
        let psi0 = ground_gaussian_3d(&g).normalized_to_mass(1.0);
        let mut params = SimParams::new(1e-3, 0.1, Backend::RotatingFrame);
        params.sample_every = 10;
        params.frame_of_record = Frame::Rotating;
        let result = run(&psi0, &m, &params).unwrap();
        assert_eq!(result.status, RunStatus::Completed);
        let e0 = result.records[0].energy_omega;
        let mut drift: f64 = 0.0;
        for r in &result.records {
            drift = drift.max((r.energy_omega - e0).abs());
            assert!((r.mass - 1.0).abs() < 1e-12);
            assert!((r.energy_magnetic - r.energy_omega).abs() < 1e-10);
        }
        assert!(drift < 1e-6, "E_Omega drift {drift:.3e}");
    }

    #[test]
    fn three_d_frame_map_inverts() {
        // the polynomial-times-Gaussian probe needs this much resolution for
        // its spectral tail to sit below the 1e-9 inversion contract
        let g = Grid::new(&[64, 64, 64], &[8.0, 8.0, 8.0]).unwrap();
        let psi = ComplexField::from_fn(&g, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            Complex64::new(1.0 + 0.4 * x[0], 0.3 * x[1] * x[2]) * (-0.5 * r2).exp()
        })
        .normalized_to_mass(1.0);
        let rot = RotationConfig::vector([0.0, 0.0, 0.8]);
        // omega * t = 2.0: one quarter-turn permutation plus a shear residual
        let t = 2.5;
        let there = map_frame(&psi, t, &rot, MapDirection::LabToRotating).unwrap();
        assert!((there.mass() - 1.0).abs() < 1e-10);
        let back = map_frame(&there, t, &rot, MapDirection::RotatingToLab).unwrap();
        assert!(psi.l2_distance(&back) < 1e-9, "{}", psi.l2_distance(&back));
    }

    #[test]
    fn energy_drift_identity_in_the_rotating_frame() {
        // anisotropic rotating run: d/dt E_W = int dW/dt |psi|^2
        //                                    = -|omega| * lmom_source
        let g = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();
        let m = model_2d(&[1.0, 1.5], 0.5, 0.0, 1.0);
        let psi0 = ComplexField::from_fn(&g, |x| {
            Complex64::new(
                (-0.5 * ((x[0] - 0.4) * (x[0] - 0.4) + x[1] * x[1])).exp(),
                0.0,
            )
        })
        .normalized_to_mass(1.0);
        let mut params = SimParams::new(5e-4, 0.5, Backend::RotatingFrame);
        params.sample_every = 20;
        let result = run(&psi0, &m, &params).unwrap();
        let rec = &result.records;
        let h = result.sample_dt();
        let omega = 0.5;
        let mut worst: f64 = 0.0;
        for i in 1..rec.len() - 1 {
            let dedt = (rec[i + 1].energy_zero - rec[i - 1].energy_zero) / (2.0 * h);
            let expect = -omega * rec[i].lmom_source;
            worst = worst.max((dedt - expect).abs());
        }
        assert!(worst < 5e-4, "drift identity residual {worst}");
    }
}
