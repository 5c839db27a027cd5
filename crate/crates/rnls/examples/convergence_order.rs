//! Richardson measurement of the splitting order for both backends on the
//! standard smooth rotating configuration.

use num_complex::Complex64;
use rnls::diagnostics::convergence_order;
use rnls::model::{ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig};
use rnls::propagators::{Backend, SimParams};
use rnls::spectral::{ComplexField, Grid};

fn main() {
    let grid = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();
    let model = ModelConfig::new(
        2,
        TrapConfig::anisotropic(&[1.0, 2.0]),
        RotationConfig::planar(0.5),
        NonlinearityConfig::new(1.0, 1.0),
    )
    .unwrap();
    let norm = 1.0 / std::f64::consts::PI.sqrt();
    let psi0 = ComplexField::from_fn(&grid, |x| {
        Complex64::new(norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp(), 0.0)
    });

    for backend in [Backend::RotatingFrame, Backend::LabFrame] {
        let params = SimParams::new(1e-3, 0.5, backend);
        let report = convergence_order(&model, &psi0, &params, &[4e-3, 2e-3, 1e-3]).unwrap();
        println!("{backend:?}:");
        for note in &report.notes {
            println!("  {note}");
        }
        for check in &report.checks {
            println!(
                "  {:16} {:8.4} (tol {:.2}) {}",
                check.name,
                check.residual,
                check.tolerance,
                if check.pass { "pass" } else { "FAIL" }
            );
        }
    }
}
