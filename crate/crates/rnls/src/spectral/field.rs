use std::sync::Arc;

use num_complex::Complex64;

use super::grid::Grid;

/// Sampled complex wave function on a [`Grid`], row-major with the last axis
/// fastest. The central state object of the crate.
#[derive(Debug, Clone)]
pub struct ComplexField {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        ComplexField {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: &Arc<Grid>, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count must match the grid");
        ComplexField {
            grid: grid.clone(),
            values,
        }
    }

    /// Sample a closure over the grid points. 2-d grids pass `x[2] = 0`.
    pub fn from_fn(grid: &Arc<Grid>, mut f: impl FnMut([f64; 3]) -> Complex64) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        grid.for_each_point(|flat, x| values[flat] = f(x));
        ComplexField {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Discrete mass `sum |psi|^2 * cell_volume`.
    pub fn mass(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        s * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        self.mass().sqrt()
    }

    /// Rescale so that the discrete mass equals `target`.
    pub fn normalized_to_mass(mut self, target: f64) -> Self {
        let m = self.mass();
        assert!(m > 0.0, "cannot normalize a zero field");
        let s = (target / m).sqrt();
        for v in &mut self.values {
            *v *= s;
        }
        self
    }

    /// l2 distance `|| self - other ||` in the grid measure.
    pub fn l2_distance(&self, other: &ComplexField) -> f64 {
        assert_eq!(self.grid.as_ref(), other.grid.as_ref());
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Real scalar samples on a grid (densities, potentials).
#[derive(Debug, Clone)]
pub struct RealField {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl RealField {
    pub fn from_values(grid: &Arc<Grid>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len());
        RealField {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `d` complex component fields sharing one grid, e.g. a spectral gradient.
#[derive(Debug, Clone)]
pub struct VectorField {
    grid: Arc<Grid>,
    components: Vec<Vec<Complex64>>,
}

impl VectorField {
    pub fn from_components(grid: &Arc<Grid>, components: Vec<Vec<Complex64>>) -> Self {
        assert_eq!(components.len(), grid.dim());
        for c in &components {
            assert_eq!(c.len(), grid.len());
        }
        VectorField {
            grid: grid.clone(),
            components,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, j: usize) -> &[Complex64] {
        &self.components[j]
    }
}

/// `d` real component fields sharing one grid, e.g. the current density.
#[derive(Debug, Clone)]
pub struct RealVectorField {
    grid: Arc<Grid>,
    components: Vec<Vec<f64>>,
}

impl RealVectorField {
    pub fn from_components(grid: &Arc<Grid>, components: Vec<Vec<f64>>) -> Self {
        assert_eq!(components.len(), grid.dim());
        for c in &components {
            assert_eq!(c.len(), grid.len());
        }
        RealVectorField {
            grid: grid.clone(),
            components,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, j: usize) -> &[f64] {
        &self.components[j]
    }
}
