//! The variance obeys d^2I/dt^2 = int |grad psi|^2 + lambda d sigma/(sigma+1)
//! |psi|^(2 sigma + 2) - 2 V |psi|^2 dx, with all rotation contributions
//! cancelling. Checked here on a breathing displaced Gaussian.

use num_complex::Complex64;
use rnls::diagnostics::verify_virial;
use rnls::model::{ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig};
use rnls::propagators::{run, Backend, SimParams};
use rnls::spectral::{ComplexField, Grid};

fn main() {
    let grid = Grid::new(&[128, 128], &[8.0, 8.0]).unwrap();

    for (label, gamma, omega, lambda) in [
        ("still trap, linear", [1.0, 1.0], 0.0, 0.0),
        ("rotating anisotropic", [1.0, 2.0], 0.5, 1.0),
    ] {
        let model = ModelConfig::new(
            2,
            TrapConfig::anisotropic(&gamma),
            RotationConfig::planar(omega),
            NonlinearityConfig::new(lambda, 1.0),
        )
        .unwrap();
        let norm = 1.0 / std::f64::consts::PI.sqrt();
        let psi0 = ComplexField::from_fn(&grid, |x| {
            let dx = x[0] - 1.0;
            Complex64::new(norm * (-0.5 * (dx * dx + x[1] * x[1])).exp(), 0.0)
        });
        let mut params = SimParams::new(5e-4, 1.0, Backend::RotatingFrame);
        params.sample_every = 40;
        let result = run(&psi0, &model, &params).unwrap();
        let report = verify_virial(&result).unwrap();
        println!("{label}:");
        for check in &report.checks {
            println!(
                "  {:24} {:10.3e}  (tol {:.3e}) {}",
                check.name,
                check.residual,
                check.tolerance,
                if check.pass { "pass" } else { "FAIL" }
            );
        }
    }
}
