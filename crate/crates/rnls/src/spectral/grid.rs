use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("dimension must be 2 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("samples per axis must be a power of two >= 8, got {n} on axis {axis}")]
    NonPowerOfTwo { axis: usize, n: usize },
    #[error("box half-width must be positive, got {value} on axis {axis}")]
    NonPositiveBox { axis: usize, value: f64 },
    #[error("operation requires a nonzero field")]
    ZeroField,
}

/// Uniform periodic grid on the box `[-L_j, L_j)^d` with `n_j` samples per
/// axis, together with the matching DFT wavenumbers.
///
/// Samples sit at `x_i = -L + i * h` with `h = 2L/n` (the right endpoint is
/// excluded by periodicity). The wavenumbers on axis `j` are
/// `k_m = m * pi / L_j` for `m = 0, ..., n/2 - 1, -n/2, ..., -1`, i.e. the
/// standard DFT layout scaled to the box.
#[derive(Debug, Clone)]
pub struct Grid {
    n: Vec<usize>,
    half_width: Vec<f64>,
    spacing: Vec<f64>,
    wavenumbers: Vec<Vec<f64>>,
    coords: Vec<Vec<f64>>,
    strides: Vec<usize>,
    len: usize,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.half_width == other.half_width
    }
}

impl Grid {
    /// Build a grid for `d = n.len()` axes. Each axis needs a power-of-two
    /// sample count of at least 8 and a positive half-width.
    pub fn new(n: &[usize], half_width: &[f64]) -> Result<Arc<Grid>, SpectralError> {
        let d = n.len();
        if d != 2 && d != 3 {
            return Err(SpectralError::InvalidDimension(d));
        }
        if half_width.len() != d {
            return Err(SpectralError::InvalidDimension(half_width.len()));
        }
        for (axis, &nj) in n.iter().enumerate() {
            if nj < 8 || !nj.is_power_of_two() {
                return Err(SpectralError::NonPowerOfTwo { axis, n: nj });
            }
        }
        for (axis, &lj) in half_width.iter().enumerate() {
            if lj <= 0.0 || !lj.is_finite() || lj.is_nan() {
                return Err(SpectralError::NonPositiveBox { axis, value: lj });
            }
        }

        let spacing: Vec<f64> = n
            .iter()
            .zip(half_width)
            .map(|(&nj, &lj)| 2.0 * lj / nj as f64)
            .collect();
        let wavenumbers: Vec<Vec<f64>> = n
            .iter()
            .zip(half_width)
            .map(|(&nj, &lj)| {
                let base = std::f64::consts::PI / lj;
                (0..nj)
                    .map(|m| {
                        let m = if m < nj / 2 {
                            m as isize
                        } else {
                            m as isize - nj as isize
                        };
                        m as f64 * base
                    })
                    .collect()
            })
            .collect();
        let coords: Vec<Vec<f64>> = n
            .iter()
            .zip(half_width)
            .zip(&spacing)
            .map(|((&nj, &lj), &h)| (0..nj).map(|i| -lj + i as f64 * h).collect())
            .collect();

        let mut strides = vec![1usize; d];
        for j in (0..d - 1).rev() {
            strides[j] = strides[j + 1] * n[j + 1];
        }
        let len = n.iter().product();

        Ok(Arc::new(Grid {
            n: n.to_vec(),
            half_width: half_width.to_vec(),
            spacing,
            wavenumbers,
            coords,
            strides,
            len,
        }))
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.n
    }

    pub fn size(&self, axis: usize) -> usize {
        self.n[axis]
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.half_width
    }

    pub fn spacings(&self) -> &[f64] {
        &self.spacing
    }

    /// Total number of samples.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Volume of one grid cell, the weight of the periodic trapezoidal rule.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.wavenumbers[axis]
    }

    pub fn coords(&self, axis: usize) -> &[f64] {
        &self.coords[axis]
    }

    /// Largest representable wavenumber magnitude on `axis` (the Nyquist mode).
    pub fn k_max(&self, axis: usize) -> f64 {
        (self.n[axis] / 2) as f64 * std::f64::consts::PI / self.half_width[axis]
    }

    /// Flat-index stride of `axis` in the row-major (last axis fastest) layout.
    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Visit every sample in flat order, passing its coordinates. The third
    /// coordinate is zero for 2-d grids.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, [f64; 3])) {
        let d = self.dim();
        let mut idx = [0usize; 3];
        for flat in 0..self.len {
            let mut x = [0.0; 3];
            for j in 0..d {
                x[j] = self.coords[j][idx[j]];
            }
            f(flat, x);
            for j in (0..d).rev() {
                idx[j] += 1;
                if idx[j] < self.n[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    /// Visit every spectral mode in flat order, passing its wavenumber vector.
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, [f64; 3])) {
        let d = self.dim();
        let mut idx = [0usize; 3];
        for flat in 0..self.len {
            let mut k = [0.0; 3];
            for j in 0..d {
                k[j] = self.wavenumbers[j][idx[j]];
            }
            f(flat, k);
            for j in (0..d).rev() {
                idx[j] += 1;
                if idx[j] < self.n[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
}
