//! Focusing blow-up: pick a Gaussian amplitude with negative energy, bound
//! the blow-up time via the variance parabola, run the dynamics until the
//! gradient detector fires, and compare against the matched defocusing run.

use num_complex::Complex64;
use rnls::diagnostics::blowup_experiment;
use rnls::model::{ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig};
use rnls::observables::compute_record;
use rnls::propagators::{run, Backend, SimParams};
use rnls::spectral::{ComplexField, Grid};

fn gaussian_with_mass(grid: &std::sync::Arc<Grid>, mass: f64) -> ComplexField {
    let norm = 1.0 / std::f64::consts::PI.sqrt();
    ComplexField::from_fn(grid, |x| {
        Complex64::new(norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp(), 0.0)
    })
    .normalized_to_mass(mass)
}

fn main() {
    let grid = Grid::new(&[256, 256], &[8.0, 8.0]).unwrap();
    let model = ModelConfig::new(
        2,
        TrapConfig::isotropic(2, 1.0),
        RotationConfig::planar(0.3),
        NonlinearityConfig::new(-1.0, 1.0),
    )
    .unwrap();

    // E0(A) = A^2 - A^4 / (4 pi) for the unit Gaussian; E0 = -1 on the
    // focusing branch at A^2 = 2 pi (1 + sqrt(1 + 1/pi))
    let mass = 2.0 * std::f64::consts::PI * (1.0 + (1.0 + 1.0 / std::f64::consts::PI).sqrt());
    let psi0 = gaussian_with_mass(&grid, mass);
    let initial = compute_record(&psi0, 0.0, &model);
    println!("initial E0 = {:.6}, variance = {:.4}", initial.energy_zero, initial.variance);

    // at n = 256 the collapse core under-resolves once the gradient ratio
    // passes ~70, so the detector must fire below that or the guard pair
    // will (correctly) report the run as unresolved instead
    let mut params = SimParams::new(1e-4, 3.5, Backend::RotatingFrame);
    params.sample_every = 10;
    params.blowup_grad_factor = 25.0;
    let outcome = blowup_experiment(&model, &psi0, &params).unwrap();
    println!(
        "criterion case {:?}, t_star_bound = {:.4}",
        outcome.blowup.case,
        outcome.blowup.t_star_bound.unwrap_or(f64::NAN)
    );
    println!(
        "run status {:?}, t_detect = {:?}",
        outcome.run.status, outcome.run.t_detect
    );

    // matched defocusing control
    let control_model = ModelConfig::new(
        2,
        TrapConfig::isotropic(2, 1.0),
        RotationConfig::planar(0.3),
        NonlinearityConfig::new(1.0, 1.0),
    )
    .unwrap();
    let mut control_params = SimParams::new(2e-4, 2.0, Backend::RotatingFrame);
    control_params.sample_every = 100;
    let control = run(&psi0, &control_model, &control_params).unwrap();
    let g0 = control.records[0].grad_norm_sq;
    let g_max = control.records.iter().map(|r| r.grad_norm_sq).fold(0.0, f64::max);
    println!(
        "defocusing control: status {:?}, gradient growth {:.3}x",
        control.status,
        g_max / g0
    );
}
