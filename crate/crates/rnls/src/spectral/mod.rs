//! Periodic grids, discrete Fourier transforms, spectral derivatives and the
//! resolution monitor — the numeric substrate for everything else.
//!
//! Grids and fields are immutable values once constructed; every operation
//! here is a pure function and safe to call concurrently on shared inputs.

pub mod fft;
mod field;
mod grid;
mod ops;

pub use field::{ComplexField, RealField, RealVectorField, VectorField};
pub use grid::{Grid, SpectralError};
pub use ops::{divergence_real, gradient, gradient_real, tail_fraction};

pub(crate) use ops::{derivative_coeffs, tail_fraction_of_spectrum};
