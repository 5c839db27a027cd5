use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error(
        "rotation frequency {omega} must lie strictly below the smallest trap frequency {gamma_min}"
    )]
    RotationExceedsTrap { omega: f64, gamma_min: f64 },
    #[error("model dimension must be 2 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("{0}")]
    InvalidConfig(String),
}

/// Optional cosine lattice `A * cos(k . x)` added on top of the quadratic
/// trap. Bounded second derivatives keep the total potential sub-quadratic.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConfig {
    pub amplitude: f64,
    pub wavevector: Vec<f64>,
}

/// Quadratic trap `1/2 * sum_j s_j gamma_j^2 x_j^2` with per-axis sign flags
/// (`s_j = -1` turns an axis repulsive), plus an optional cosine lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct TrapConfig {
    pub gamma: Vec<f64>,
    pub repulsive: Vec<bool>,
    pub lattice: Option<LatticeConfig>,
}

impl TrapConfig {
    pub fn isotropic(dim: usize, gamma: f64) -> Self {
        TrapConfig {
            gamma: vec![gamma; dim],
            repulsive: vec![false; dim],
            lattice: None,
        }
    }

    pub fn anisotropic(gamma: &[f64]) -> Self {
        TrapConfig {
            gamma: gamma.to_vec(),
            repulsive: vec![false; gamma.len()],
            lattice: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// Signed quadratic coefficient `s_j * gamma_j^2` of axis `j`.
    pub fn signed_coeff(&self, j: usize) -> f64 {
        let s = if self.repulsive[j] { -1.0 } else { 1.0 };
        s * self.gamma[j] * self.gamma[j]
    }

    /// Smallest trap frequency magnitude over the axes.
    pub fn gamma_min(&self) -> f64 {
        self.gamma.iter().map(|g| g.abs()).fold(f64::INFINITY, f64::min)
    }

    pub fn all_attractive(&self) -> bool {
        self.repulsive.iter().all(|r| !r)
    }

    /// True when the quadratic part confines every axis.
    pub fn confining(&self) -> bool {
        self.all_attractive() && self.gamma.iter().all(|&g| g.abs() > 0.0)
    }

    pub fn is_purely_quadratic(&self) -> bool {
        self.lattice.is_none()
    }
}

/// Angular velocity. In 2-d the rotation acts about the implicit third axis,
/// so the configuration is stored as `(0, 0, omega)` either way and the
/// rotation machinery is shared between dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationConfig {
    omega: [f64; 3],
}

impl RotationConfig {
    pub fn none() -> Self {
        RotationConfig { omega: [0.0; 3] }
    }

    /// Planar rotation of magnitude (and sign) `omega` about the third axis.
    pub fn planar(omega: f64) -> Self {
        RotationConfig {
            omega: [0.0, 0.0, omega],
        }
    }

    pub fn vector(omega: [f64; 3]) -> Self {
        RotationConfig { omega }
    }

    pub fn vector_components(&self) -> [f64; 3] {
        self.omega
    }

    pub fn magnitude(&self) -> f64 {
        let [a, b, c] = self.omega;
        (a * a + b * b + c * c).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.omega == [0.0; 3]
    }

    /// Unit rotation axis; defaults to the third axis for zero rotation so
    /// that angular-momentum observables stay well defined.
    pub fn unit_axis(&self) -> [f64; 3] {
        let m = self.magnitude();
        if m == 0.0 {
            [0.0, 0.0, 1.0]
        } else {
            [self.omega[0] / m, self.omega[1] / m, self.omega[2] / m]
        }
    }

    /// `Some(axis)` when the rotation vector lies along a coordinate axis
    /// (zero rotation counts as aligned with the third axis).
    pub fn aligned_axis(&self) -> Option<usize> {
        if self.is_zero() {
            return Some(2);
        }
        let nonzero: Vec<usize> = (0..3).filter(|&j| self.omega[j] != 0.0).collect();
        match nonzero.as_slice() {
            [j] => Some(*j),
            _ => None,
        }
    }
}

/// Power-law nonlinearity `lambda * |psi|^(2 sigma) * psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearityConfig {
    pub lambda: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

impl NonlinearityConfig {
    pub fn new(lambda: f64, sigma: f64) -> Self {
        NonlinearityConfig { lambda, sigma }
    }

    /// Position of `sigma` relative to the mass-critical power `2/d`.
    pub fn criticality(&self, dim: usize) -> Criticality {
        let crit = 2.0 / dim as f64;
        if self.sigma < crit {
            Criticality::Subcritical
        } else if self.sigma == crit {
            Criticality::Critical
        } else {
            Criticality::Supercritical
        }
    }

    /// Energy-subcriticality: `sigma < 2/(d-2)` in 3-d, any positive power
    /// in 2-d.
    pub fn is_energy_subcritical(&self, dim: usize) -> bool {
        self.sigma > 0.0 && (dim == 2 || self.sigma < 2.0)
    }

    pub fn is_focusing(&self) -> bool {
        self.lambda < 0.0
    }
}

/// Full physical configuration of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub dim: usize,
    pub trap: TrapConfig,
    pub rotation: RotationConfig,
    pub nonlinearity: NonlinearityConfig,
}

impl ModelConfig {
    pub fn new(
        dim: usize,
        trap: TrapConfig,
        rotation: RotationConfig,
        nonlinearity: NonlinearityConfig,
    ) -> Result<Self, ModelError> {
        if dim != 2 && dim != 3 {
            return Err(ModelError::InvalidDimension(dim));
        }
        if trap.dim() != dim {
            return Err(ModelError::InvalidConfig(format!(
                "trap has {} axes but the model dimension is {dim}",
                trap.dim()
            )));
        }
        if trap.repulsive.len() != dim {
            return Err(ModelError::InvalidConfig(
                "repulsive flags must match the trap axes".into(),
            ));
        }
        if let Some(lat) = &trap.lattice {
            if lat.wavevector.len() != dim {
                return Err(ModelError::InvalidConfig(
                    "lattice wavevector must match the model dimension".into(),
                ));
            }
        }
        if dim == 2 && (rotation.vector_components()[0] != 0.0 || rotation.vector_components()[1] != 0.0)
        {
            return Err(ModelError::InvalidConfig(
                "2-d rotation must act about the third axis".into(),
            ));
        }
        if !nonlinearity.is_energy_subcritical(dim) && nonlinearity.lambda != 0.0 {
            return Err(ModelError::InvalidConfig(format!(
                "sigma = {} is not energy-subcritical in dimension {dim}",
                nonlinearity.sigma
            )));
        }
        Ok(ModelConfig {
            dim,
            trap,
            rotation,
            nonlinearity,
        })
    }
}
