//! Imaginary-time ground states: isotropic, anisotropic, and interacting
//! traps, with the separable-oscillator energies as reference where they
//! exist.

use rnls::model::{ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig};
use rnls::observables::compute_record;
use rnls::propagators::imaginary_time_ground_state;
use rnls::spectral::Grid;

fn main() {
    let grid = Grid::new(&[64, 64], &[8.0, 8.0]).unwrap();

    for (label, gamma, lambda, exact) in [
        ("isotropic linear", [1.0, 1.0], 0.0, Some(1.0)),
        ("anisotropic linear", [1.0, 4.0], 0.0, Some(2.5)),
        ("isotropic defocusing", [1.0, 1.0], 4.0, None),
    ] {
        let model = ModelConfig::new(
            2,
            TrapConfig::anisotropic(&gamma),
            RotationConfig::none(),
            NonlinearityConfig::new(lambda, 1.0),
        )
        .unwrap();
        let psi = imaginary_time_ground_state(&model, &grid, 1e-8).unwrap();
        let record = compute_record(&psi, 0.0, &model);
        match exact {
            Some(e) => println!(
                "{label:22} E0 = {:.9}  (separable oscillator: {e}, error {:.2e})",
                record.energy_zero,
                (record.energy_zero - e).abs()
            ),
            None => println!(
                "{label:22} E0 = {:.9}  (virial residual {:.2e})",
                record.energy_zero,
                record.virial_rhs.abs()
            ),
        }
    }
}
