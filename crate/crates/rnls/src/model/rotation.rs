//! The skew generator of the rotating frame and the coordinate change it
//! exponentiates to.

use super::config::RotationConfig;

/// Skew-symmetric generator with `theta . x = -(omega ^ x)`, so that
/// `exp(theta * t)` rotates about the axis `omega` by the angle `-|omega| t`.
pub fn theta_matrix(rot: &RotationConfig) -> [[f64; 3]; 3] {
    let [o1, o2, o3] = rot.vector_components();
    [[0.0, o3, -o2], [-o3, 0.0, o1], [o2, -o1, 0.0]]
}

/// Rotated coordinates `X(t, x) = exp(theta * t) . x`, evaluated in the
/// Rodrigues closed form about the unit axis. Satisfies `|X| = |x|`,
/// `X(0, x) = x` and `dX/dt = theta . X`.
pub fn rotate_coords(t: f64, x: [f64; 3], rot: &RotationConfig) -> [f64; 3] {
    let mag = rot.magnitude();
    if mag == 0.0 {
        return x;
    }
    let u = rot.unit_axis();
    let phi = mag * t;
    let (s, c) = phi.sin_cos();
    let ux = cross(u, x);
    let udotx = dot(u, x);
    let mut out = [0.0; 3];
    for j in 0..3 {
        out[j] = x[j] * c - ux[j] * s + u[j] * udotx * (1.0 - c);
    }
    out
}

/// The rotation matrix `exp(theta * t)` assembled column by column.
pub fn rotation_matrix(t: f64, rot: &RotationConfig) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for (col, e) in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        .into_iter()
        .enumerate()
    {
        let r = rotate_coords(t, e, rot);
        for row in 0..3 {
            m[row][col] = r[row];
        }
    }
    m
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn mat_vec(m: &[[f64; 3]; 3], x: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2];
    }
    out
}
