//! Conservation-law drifts over a unit of time: mass and E_Omega always,
//! E_0 and angular momentum additionally when the trap is axially symmetric
//! about the rotation axis, and the integrated angular-momentum balance in
//! the anisotropic case.

use num_complex::Complex64;
use rnls::diagnostics::verify_balance_laws;
use rnls::model::{ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig};
use rnls::propagators::{run, Backend, SimParams};
use rnls::spectral::{ComplexField, Grid};

fn main() {
    let grid = Grid::new(&[128, 128], &[8.0, 8.0]).unwrap();
    let norm = 1.0 / std::f64::consts::PI.sqrt();
    let vortex = ComplexField::from_fn(&grid, |x| {
        Complex64::new(x[0], x[1]) * norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp()
    });
    let gaussian = ComplexField::from_fn(&grid, |x| {
        Complex64::new(norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp(), 0.0)
    });

    let cases = [
        ("symmetric trap, vortex", [1.0, 1.0], 0.5, &vortex),
        ("anisotropic trap, gaussian", [1.0, 2.0], 0.5, &gaussian),
    ];
    for (label, gamma, omega, psi0) in cases {
        let model = ModelConfig::new(
            2,
            TrapConfig::anisotropic(&gamma),
            RotationConfig::planar(omega),
            NonlinearityConfig::new(1.0, 1.0),
        )
        .unwrap();
        let mut params = SimParams::new(1e-3, 1.0, Backend::RotatingFrame);
        params.sample_every = 10;
        let result = run(psi0, &model, &params).unwrap();
        let report = verify_balance_laws(&result);
        println!("{label}:");
        for check in &report.checks {
            println!(
                "  {:24} {:10.3e}  (tol {:.1e}) {}",
                check.name,
                check.residual,
                check.tolerance,
                if check.pass { "pass" } else { "FAIL" }
            );
        }
    }
}
