//! Multidimensional DFT built from per-axis 1-d transforms.
//!
//! Normalization convention, used everywhere in this crate: the forward
//! transform is unnormalized, the backward transform divides by the total
//! sample count. Hence `backward(forward(f)) == f` and the discrete Parseval
//! identity reads `sum |f|^2 = (1/N) * sum |F|^2` with `N` the sample count.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::ComplexField;
use super::grid::Grid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    })
}

/// Unnormalized 1-d transform of a single contiguous line.
pub(crate) fn transform_axis_line(line: &mut [Complex64], forward: bool) {
    plan(line.len(), forward).process(line);
}

/// 1-d transform along one axis of a row-major array, in place.
/// `normalize` divides by the axis length (used by backward transforms).
pub(crate) fn transform_axis(
    values: &mut [Complex64],
    grid: &Grid,
    axis: usize,
    forward: bool,
    normalize: bool,
) {
    let n = grid.size(axis);
    let fft = plan(n, forward);
    let inner = grid.stride(axis);
    if inner == 1 {
        // contiguous lines: rustfft processes every length-n chunk at once
        fft.process(values);
    } else {
        let outer = grid.len() / (n * inner);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer {
            let block = o * n * inner;
            for i in 0..inner {
                let base = block + i;
                for (m, v) in line.iter_mut().enumerate() {
                    *v = values[base + m * inner];
                }
                fft.process(&mut line);
                for (m, v) in line.iter().enumerate() {
                    values[base + m * inner] = *v;
                }
            }
        }
    }
    if normalize {
        let s = 1.0 / n as f64;
        for v in values.iter_mut() {
            *v *= s;
        }
    }
}

/// Forward DFT of a field; returns the unnormalized spectral coefficients in
/// the same row-major layout.
pub fn forward(field: &ComplexField) -> Vec<Complex64> {
    let mut values = field.values().to_vec();
    forward_in_place(&mut values, field.grid());
    values
}

pub(crate) fn forward_in_place(values: &mut [Complex64], grid: &Grid) {
    for axis in 0..grid.dim() {
        transform_axis(values, grid, axis, true, false);
    }
}

/// Backward DFT; inverse of [`forward`] (divides by the total sample count).
pub fn backward(grid: &Arc<Grid>, coeffs: &[Complex64]) -> ComplexField {
    let mut values = coeffs.to_vec();
    backward_in_place(&mut values, grid);
    ComplexField::from_values(grid, values)
}

pub(crate) fn backward_in_place(values: &mut [Complex64], grid: &Grid) {
    for axis in 0..grid.dim() {
        transform_axis(values, grid, axis, false, true);
    }
}
