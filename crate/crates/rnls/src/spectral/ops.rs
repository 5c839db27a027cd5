//! Spectral derivatives, the resolution monitor, and related helpers.

use num_complex::Complex64;

use super::fft;
use super::field::{ComplexField, RealField, RealVectorField, VectorField};
use super::grid::{Grid, SpectralError};

/// Fraction of the Nyquist wavenumber beyond which modes count as tail.
const TAIL_BAND: f64 = 0.75;

/// Multiply spectral coefficients by `i * k_axis`, zeroing the Nyquist mode
/// so the derivative of a real field stays real.
pub(crate) fn derivative_coeffs(spec: &[Complex64], grid: &Grid, axis: usize) -> Vec<Complex64> {
    let n = grid.size(axis);
    let inner = grid.stride(axis);
    let outer = grid.len() / (n * inner);
    let k = grid.wavenumbers(axis);
    let mut out = spec.to_vec();
    for o in 0..outer {
        let block = o * n * inner;
        for (m, &km) in k.iter().enumerate() {
            let factor = if m == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, km)
            };
            let row = block + m * inner;
            for v in &mut out[row..row + inner] {
                *v *= factor;
            }
        }
    }
    out
}

/// Spectral gradient of a complex field.
pub fn gradient(f: &ComplexField) -> VectorField {
    let grid = f.grid();
    let spec = fft::forward(f);
    let comps = (0..grid.dim())
        .map(|axis| {
            let mut c = derivative_coeffs(&spec, grid, axis);
            fft::backward_in_place(&mut c, grid);
            c
        })
        .collect();
    VectorField::from_components(grid, comps)
}

/// Spectral gradient of a real field; imaginary round-off is discarded.
pub fn gradient_real(f: &RealField) -> RealVectorField {
    let grid = f.grid();
    let lifted = ComplexField::from_values(
        grid,
        f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect(),
    );
    let g = gradient(&lifted);
    let comps = (0..grid.dim())
        .map(|j| g.component(j).iter().map(|v| v.re).collect())
        .collect();
    RealVectorField::from_components(grid, comps)
}

/// Spectral divergence of a real vector field.
pub fn divergence_real(v: &RealVectorField) -> RealField {
    let grid = v.grid().clone();
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for axis in 0..grid.dim() {
        let lifted: Vec<Complex64> = v
            .component(axis)
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        let mut spec = lifted;
        fft::forward_in_place(&mut spec, &grid);
        let mut d = derivative_coeffs(&spec, &grid, axis);
        fft::backward_in_place(&mut d, &grid);
        for (a, b) in acc.iter_mut().zip(&d) {
            *a += b;
        }
    }
    RealField::from_values(&grid, acc.iter().map(|v| v.re).collect())
}

/// Share of spectral l2 mass in modes with `|k_j| >= 0.75 * k_max` on any
/// axis. The under-resolution alarm used by the blow-up guards.
pub fn tail_fraction(f: &ComplexField) -> Result<f64, SpectralError> {
    let spec = fft::forward(f);
    tail_fraction_of_spectrum(f.grid(), &spec)
}

pub(crate) fn tail_fraction_of_spectrum(
    grid: &Grid,
    spec: &[Complex64],
) -> Result<f64, SpectralError> {
    let d = grid.dim();
    let mut cut = [f64::INFINITY; 3];
    for (j, c) in cut.iter_mut().enumerate().take(d) {
        *c = TAIL_BAND * grid.k_max(j);
    }
    let mut total = 0.0;
    let mut tail = 0.0;
    grid.for_each_mode(|flat, k| {
        let p = spec[flat].norm_sqr();
        total += p;
        if (0..d).any(|j| k[j].abs() >= cut[j]) {
            tail += p;
        }
    });
    if total == 0.0 {
        return Err(SpectralError::ZeroField);
    }
    Ok(tail / total)
}
