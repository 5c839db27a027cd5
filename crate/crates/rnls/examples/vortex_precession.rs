//! A singly quantized vortex in a rotating isotropic trap is an eigenstate:
//! both backends must reproduce the analytic phase evolution
//! exp(-i (2 - omega) t).

use num_complex::Complex64;
use rnls::model::{ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig};
use rnls::propagators::{run, Backend, Frame, SimParams};
use rnls::spectral::{ComplexField, Grid};

fn main() {
    let grid = Grid::new(&[128, 128], &[8.0, 8.0]).unwrap();
    let omega = 0.5;
    let model = ModelConfig::new(
        2,
        TrapConfig::isotropic(2, 1.0),
        RotationConfig::planar(omega),
        NonlinearityConfig::new(0.0, 1.0),
    )
    .unwrap();

    let norm = 1.0 / std::f64::consts::PI.sqrt();
    let psi0 = ComplexField::from_fn(&grid, |x| {
        Complex64::new(x[0], x[1]) * norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp()
    });
    let energy = 2.0 - omega;
    let t_end = 1.0;
    let phase = Complex64::from_polar(1.0, -energy * t_end);
    let exact = ComplexField::from_values(
        &grid,
        psi0.values().iter().map(|v| v * phase).collect(),
    );

    for backend in [Backend::LabFrame, Backend::RotatingFrame] {
        let mut params = SimParams::new(1e-3, t_end, backend);
        params.sample_every = 200;
        params.frame_of_record = Frame::Lab;
        let result = run(&psi0, &model, &params).unwrap();
        println!(
            "{backend:?}: status {:?}, l2 error vs exp(-i {energy} t) psi0 = {:.3e}",
            result.status,
            result.final_field.l2_distance(&exact)
        );
    }
}
