//! Physical configuration — traps, rotation, nonlinearity — plus the
//! coordinate-change machinery of the rotating frame and the blow-up
//! criterion. Everything here is a pure function on immutable configs.

mod blowup;
mod config;
mod potential;
mod rotation;

pub use blowup::{alpha_omega, classify_blowup, BlowupCase, BlowupReport};
pub use config::{
    Criticality, LatticeConfig, ModelConfig, ModelError, NonlinearityConfig, RotationConfig,
    TrapConfig,
};
pub use potential::{
    axially_symmetric, potential_value, rotated_potential, rotated_potential_time_derivative,
    PotentialEval,
};
pub use rotation::{rotate_coords, rotation_matrix, theta_matrix};

pub(crate) use rotation::{cross, dot};
