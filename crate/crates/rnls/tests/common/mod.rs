//! Shared fixtures and independent oracles for the integration suites.
//! Everything here computes expected values without touching the library's
//! observable or propagation code paths it is used to check.

#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rnls::model::{ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig};
use rnls::spectral::{ComplexField, Grid};

pub fn grid2(n: usize, l: f64) -> Arc<Grid> {
    Grid::new(&[n, n], &[l, l]).unwrap()
}

pub fn model2d(gamma: [f64; 2], omega: f64, lambda: f64, sigma: f64) -> ModelConfig {
    ModelConfig::new(
        2,
        TrapConfig::anisotropic(&gamma),
        RotationConfig::planar(omega),
        NonlinearityConfig::new(lambda, sigma),
    )
    .unwrap()
}

/// Unit-mass Gaussian `pi^{-1/2} exp(-|x - c|^2 / 2)`.
pub fn displaced_gaussian(grid: &Arc<Grid>, center: [f64; 2]) -> ComplexField {
    let norm = 1.0 / std::f64::consts::PI.sqrt();
    ComplexField::from_fn(grid, move |x| {
        let dx = x[0] - center[0];
        let dy = x[1] - center[1];
        Complex64::new(norm * (-0.5 * (dx * dx + dy * dy)).exp(), 0.0)
    })
}

pub fn unit_gaussian(grid: &Arc<Grid>) -> ComplexField {
    displaced_gaussian(grid, [0.0, 0.0])
}

/// Unit-mass singly quantized vortex `pi^{-1/2} (x1 + i x2) exp(-r^2/2)`.
pub fn vortex(grid: &Arc<Grid>) -> ComplexField {
    let norm = 1.0 / std::f64::consts::PI.sqrt();
    ComplexField::from_fn(grid, |x| {
        Complex64::new(x[0], x[1]) * norm * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp()
    })
}

/// Exact evolution of an eigenstate: a global phase.
pub fn phase_evolved(psi: &ComplexField, energy: f64, t: f64) -> ComplexField {
    let phase = Complex64::from_polar(1.0, -energy * t);
    ComplexField::from_values(psi.grid(), psi.values().iter().map(|v| v * phase).collect())
}

/// Midpoint-rule quadrature oracle on its own fine grid, independent of the
/// library's spectral integrals.
pub fn quad2d(f: impl Fn(f64, f64) -> f64, half: f64, n: usize) -> f64 {
    let h = 2.0 * half / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        let x = -half + (i as f64 + 0.5) * h;
        for j in 0..n {
            let y = -half + (j as f64 + 0.5) * h;
            s += f(x, y);
        }
    }
    s * h * h
}

fn rk4_step(s: [f64; 3], h: f64, f: impl Fn([f64; 3]) -> [f64; 3]) -> [f64; 3] {
    let k1 = f(s);
    let k2 = f([
        s[0] + 0.5 * h * k1[0],
        s[1] + 0.5 * h * k1[1],
        s[2] + 0.5 * h * k1[2],
    ]);
    let k3 = f([
        s[0] + 0.5 * h * k2[0],
        s[1] + 0.5 * h * k2[1],
        s[2] + 0.5 * h * k2[2],
    ]);
    let k4 = f([s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]]);
    [
        s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        s[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

/// Independent 3-variable moment oracle for lambda = 0 isotropic traps:
/// I' = P, P' = K - 2 g^2 I, K' = -2 g^2 P, integrated by RK4 at a step far
/// below the solver's. Returns I at the requested (sorted) times.
pub fn moment_ode_variance(
    i0: f64,
    p0: f64,
    k0: f64,
    gamma: f64,
    times: &[f64],
) -> Vec<f64> {
    let g2 = gamma * gamma;
    let f = move |s: [f64; 3]| [s[1], s[2] - 2.0 * g2 * s[0], -2.0 * g2 * s[1]];
    let mut out = Vec::with_capacity(times.len());
    let mut state = [i0, p0, k0];
    let mut t = 0.0;
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / 1e-5).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                state = rk4_step(state, h, f);
            }
            t = target;
        }
        out.push(state[0]);
    }
    out
}

/// Reproducible smooth random field: a handful of low-wavenumber plane waves
/// under a Gaussian envelope, normalized to unit mass.
pub fn random_smooth_field(grid: &Arc<Grid>, seed: u64) -> ComplexField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = grid.dim();
    let mut waves = Vec::new();
    for _ in 0..6 {
        let mut k = [0.0; 3];
        for (j, kj) in k.iter_mut().enumerate().take(d) {
            let m: i32 = rng.random_range(-4..=4);
            *kj = grid.wavenumbers(j)[1] * m as f64;
        }
        let amp = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        waves.push((k, amp));
    }
    ComplexField::from_fn(grid, |x| {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let envelope = (-0.35 * r2).exp();
        let mut v = Complex64::new(0.0, 0.0);
        for (k, a) in &waves {
            v += a * Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
        }
        v * envelope
    })
    .normalized_to_mass(1.0)
}
