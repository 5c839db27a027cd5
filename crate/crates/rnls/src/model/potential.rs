//! Trap potentials in the lab frame and in the rotating frame.
//!
//! The rotating-frame potential is `W(t, x) = V(X(t, x))`. For traps that
//! are axially symmetric about the rotation axis this collapses to `V`
//! itself; that case is decided structurally and short-circuited so the
//! time-independence is exact in floating point.

use super::config::{RotationConfig, TrapConfig};
use super::rotation::{cross, dot, mat_vec, rotate_coords, rotation_matrix};

/// Lab-frame potential `1/2 sum_j s_j gamma_j^2 x_j^2 + A cos(k . x)`.
pub fn potential_value(trap: &TrapConfig, x: &[f64]) -> f64 {
    let mut v = 0.0;
    for (j, &xj) in x.iter().enumerate().take(trap.dim()) {
        v += 0.5 * trap.signed_coeff(j) * xj * xj;
    }
    if let Some(lat) = &trap.lattice {
        let phase: f64 = lat
            .wavevector
            .iter()
            .zip(x)
            .map(|(k, xi)| k * xi)
            .sum();
        v += lat.amplitude * phase.cos();
    }
    v
}

/// Structural axial-symmetry test: `(omega . L) V = 0` holds exactly when
/// the trap is invariant under rotations about the rotation axis. Decided
/// from the configuration, not numerically.
pub fn axially_symmetric(trap: &TrapConfig, rot: &RotationConfig) -> bool {
    if rot.is_zero() {
        return true;
    }
    if trap.lattice.is_some() {
        return false;
    }
    let d = trap.dim();
    let coeffs: Vec<f64> = (0..d).map(|j| trap.signed_coeff(j)).collect();
    let isotropic = coeffs.windows(2).all(|w| w[0] == w[1]);
    if isotropic {
        return true;
    }
    match rot.aligned_axis() {
        // a 2-d model only ever rotates about the implicit third axis
        Some(2) if d == 2 => coeffs[0] == coeffs[1],
        Some(axis) if d == 3 && axis < 3 => {
            let transverse: Vec<f64> =
                (0..3).filter(|&j| j != axis).map(|j| coeffs[j]).collect();
            transverse[0] == transverse[1]
        }
        _ => false,
    }
}

/// Evaluator for the (possibly rotated) trap potential: a quadratic form
/// plus an optional cosine with a rotated wavevector. Precomputing it once
/// per time level keeps the per-point cost to a few flops.
#[derive(Debug, Clone)]
pub struct PotentialEval {
    quad: [[f64; 3]; 3],
    lattice: Option<(f64, [f64; 3])>,
}

impl PotentialEval {
    /// Lab-frame evaluator for `V`.
    pub fn lab(trap: &TrapConfig) -> Self {
        let mut quad = [[0.0; 3]; 3];
        for (j, row) in quad.iter_mut().enumerate().take(trap.dim()) {
            row[j] = trap.signed_coeff(j);
        }
        let lattice = trap.lattice.as_ref().map(|lat| {
            let mut k = [0.0; 3];
            for (j, &kj) in lat.wavevector.iter().enumerate() {
                k[j] = kj;
            }
            (lat.amplitude, k)
        });
        PotentialEval { quad, lattice }
    }

    /// Rotating-frame evaluator for `W(t, .) = V(X(t, .))`. Axially
    /// symmetric traps return the lab evaluator unchanged.
    pub fn rotated(trap: &TrapConfig, rot: &RotationConfig, t: f64) -> Self {
        let lab = Self::lab(trap);
        if axially_symmetric(trap, rot) {
            return lab;
        }
        let r = rotation_matrix(t, rot);
        // quad' = R^T G R; lattice wavevector k' = R^T k
        let mut quad = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        s += r[a][i] * lab.quad[a][b] * r[b][j];
                    }
                }
                quad[i][j] = s;
            }
        }
        let lattice = lab.lattice.map(|(amp, k)| {
            let mut kr = [0.0; 3];
            for i in 0..3 {
                kr[i] = r[0][i] * k[0] + r[1][i] * k[1] + r[2][i] * k[2];
            }
            (amp, kr)
        });
        PotentialEval { quad, lattice }
    }

    #[inline]
    pub fn value(&self, x: [f64; 3]) -> f64 {
        let q = &self.quad;
        let mut v = 0.5
            * (q[0][0] * x[0] * x[0] + q[1][1] * x[1] * x[1] + q[2][2] * x[2] * x[2])
            + q[0][1] * x[0] * x[1]
            + q[0][2] * x[0] * x[2]
            + q[1][2] * x[1] * x[2];
        if let Some((amp, k)) = &self.lattice {
            v += amp * dot(*k, x).cos();
        }
        v
    }

    #[inline]
    pub fn gradient(&self, x: [f64; 3]) -> [f64; 3] {
        let mut g = mat_vec(&self.quad, x);
        if let Some((amp, k)) = &self.lattice {
            let s = amp * dot(*k, x).sin();
            for j in 0..3 {
                g[j] -= s * k[j];
            }
        }
        g
    }
}

/// Rotating-frame potential `W(t, x) = V(X(t, x))` at a single point.
pub fn rotated_potential(trap: &TrapConfig, rot: &RotationConfig, t: f64, x: &[f64]) -> f64 {
    let mut p = [0.0; 3];
    for (j, &xi) in x.iter().enumerate() {
        p[j] = xi;
    }
    PotentialEval::rotated(trap, rot, t).value(p)
}

/// Closed-form time derivative `dW/dt = -(omega ^ X) . grad V(X)`; exactly
/// zero for axially symmetric traps.
pub fn rotated_potential_time_derivative(
    trap: &TrapConfig,
    rot: &RotationConfig,
    t: f64,
    x: &[f64],
) -> f64 {
    if axially_symmetric(trap, rot) {
        return 0.0;
    }
    let mut p = [0.0; 3];
    for (j, &xi) in x.iter().enumerate() {
        p[j] = xi;
    }
    let big_x = rotate_coords(t, p, rot);
    let grad = PotentialEval::lab(trap).gradient(big_x);
    -dot(cross(rot.vector_components(), big_x), grad)
}
