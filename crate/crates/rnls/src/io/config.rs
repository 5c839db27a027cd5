//! Flat key=value run configuration.
//!
//! One `key = value` pair per line; `#` starts a comment line; blank lines
//! are ignored; list values are comma separated. Unknown keys are rejected.
//! The full key set, with defaults, is documented in the README.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{
    LatticeConfig, ModelConfig, NonlinearityConfig, RotationConfig, TrapConfig,
};
use crate::propagators::{
    imaginary_time_ground_state, Backend, Frame, PropagationError, SimParams,
};
use crate::spectral::{ComplexField, Grid, SpectralError};
use num_complex::Complex64;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{field}: {reason}")]
    Validation { field: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Grid(#[from] SpectralError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Gaussian {
        center: Vec<f64>,
        width: f64,
        amplitude: f64,
    },
    Vortex,
    GroundState,
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Simulate,
    Equivalence,
    Blowup,
    Virial,
    Convergence,
    Alpha,
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dimension: usize,
    pub n: Vec<usize>,
    pub box_half_widths: Vec<f64>,
    pub gamma: Vec<f64>,
    pub repulsive: Vec<bool>,
    pub lattice: Option<LatticeConfig>,
    pub omega: [f64; 3],
    pub lambda: f64,
    pub sigma: f64,
    pub dt: f64,
    pub t_end: f64,
    pub backend: Backend,
    pub sample_every: usize,
    pub frame: Frame,
    pub blowup_grad_factor: f64,
    pub blowup_tail: f64,
    pub initial: InitialSpec,
    pub output_dir: PathBuf,
    pub experiment: Option<ExperimentKind>,
    /// The parsed key/value pairs, with defaults filled in, for echoing.
    pub echo: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "dimension",
    "n",
    "box",
    "gamma",
    "repulsive",
    "lattice.amplitude",
    "lattice.wavevector",
    "omega",
    "lambda",
    "sigma",
    "dt",
    "t_end",
    "backend",
    "sample_every",
    "frame",
    "blowup_grad_factor",
    "blowup_tail",
    "initial",
    "initial.center",
    "initial.width",
    "initial.amplitude",
    "initial.path",
    "output_dir",
    "experiment",
];

struct Raw {
    map: BTreeMap<String, (usize, String)>,
}

impl Raw {
    fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|(_, v)| v.as_str())
    }

    fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.get(key).ok_or_else(|| invalid(key, "required"))
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| invalid(key, format!("not a number: {v:?}")))
            })
            .transpose()
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    fn usize_req(&self, key: &str) -> Result<usize, ConfigError> {
        self.require(key)?
            .parse::<usize>()
            .map_err(|_| invalid(key, "not a non-negative integer"))
    }

    fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<f64>()
                            .map_err(|_| invalid(key, format!("not a number: {:?}", p.trim())))
                    })
                    .collect()
            })
            .transpose()
    }
}

fn parse_lines(text: &str) -> Result<Raw, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Parse {
                line: line_no,
                msg: format!("expected key = value, got {line:?}"),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(ConfigError::Parse {
                line: line_no,
                msg: "empty key".into(),
            });
        }
        if map.insert(key.clone(), (line_no, value)).is_some() {
            return Err(ConfigError::Parse {
                line: line_no,
                msg: format!("duplicate key {key:?}"),
            });
        }
    }
    Ok(Raw { map })
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw = parse_lines(text)?;
    for (key, (line, _)) in &raw.map {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::Parse {
                line: *line,
                msg: format!("unknown key {key:?}"),
            });
        }
    }

    let dimension = raw.usize_req("dimension")?;
    if dimension != 2 && dimension != 3 {
        return Err(invalid("dimension", "must be 2 or 3"));
    }
    let n: Vec<usize> = raw
        .require("n")?
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| invalid("n", format!("not an integer: {:?}", p.trim())))
        })
        .collect::<Result<_, _>>()?;
    if n.len() != dimension {
        return Err(invalid("n", "must list one sample count per axis"));
    }
    for &nj in &n {
        if nj < 8 || !nj.is_power_of_two() {
            return Err(invalid("n", "each count must be a power of two >= 8"));
        }
    }
    let box_half_widths = raw
        .f64_list("box")?
        .ok_or_else(|| invalid("box", "required"))?;
    if box_half_widths.len() != dimension || box_half_widths.iter().any(|&l| l <= 0.0 || l.is_nan()) {
        return Err(invalid("box", "one positive half-width per axis"));
    }
    let gamma = raw
        .f64_list("gamma")?
        .ok_or_else(|| invalid("gamma", "required"))?;
    if gamma.len() != dimension {
        return Err(invalid("gamma", "one trap frequency per axis"));
    }
    let repulsive = match raw.get("repulsive") {
        None => vec![false; dimension],
        Some(v) => {
            let flags: Vec<bool> = v
                .split(',')
                .map(|p| match p.trim() {
                    "true" | "1" => Ok(true),
                    "false" | "0" => Ok(false),
                    other => Err(invalid("repulsive", format!("not a flag: {other:?}"))),
                })
                .collect::<Result<_, _>>()?;
            if flags.len() != dimension {
                return Err(invalid("repulsive", "one flag per axis"));
            }
            flags
        }
    };
    let lattice = match (raw.f64("lattice.amplitude")?, raw.f64_list("lattice.wavevector")?) {
        (None, None) => None,
        (Some(amplitude), Some(wavevector)) => {
            if wavevector.len() != dimension {
                return Err(invalid("lattice.wavevector", "one component per axis"));
            }
            Some(LatticeConfig {
                amplitude,
                wavevector,
            })
        }
        _ => {
            return Err(invalid(
                "lattice.amplitude",
                "lattice needs both an amplitude and a wavevector",
            ))
        }
    };

    let omega = match raw.get("omega") {
        None => [0.0; 3],
        Some(v) => {
            let parts = raw.f64_list("omega")?.unwrap();
            match (dimension, parts.len()) {
                (2, 1) => [0.0, 0.0, parts[0]],
                (3, 3) => [parts[0], parts[1], parts[2]],
                (3, 1) => [0.0, 0.0, parts[0]],
                _ => {
                    return Err(invalid(
                        "omega",
                        format!("expected a scalar (2-d) or 3 components, got {v:?}"),
                    ))
                }
            }
        }
    };

    let lambda = raw.f64_or("lambda", 0.0)?;
    let sigma = raw.f64_or("sigma", 1.0)?;
    if sigma <= 0.0 || sigma.is_nan() {
        return Err(invalid("sigma", "must be positive"));
    }
    if dimension == 3 && lambda != 0.0 && sigma >= 2.0 {
        return Err(invalid(
            "sigma",
            "energy-supercritical in dimension 3 (sigma must be below 2)",
        ));
    }

    let dt = raw.f64("dt")?.ok_or_else(|| invalid("dt", "required"))?;
    let t_end = raw
        .f64("t_end")?
        .ok_or_else(|| invalid("t_end", "required"))?;
    if dt <= 0.0 || dt.is_nan() || t_end <= 0.0 || t_end.is_nan() {
        return Err(invalid("dt", "dt and t_end must be positive"));
    }

    let backend = match raw.get("backend").unwrap_or("rotating") {
        "rotating" => Backend::RotatingFrame,
        "lab" => Backend::LabFrame,
        other => return Err(invalid("backend", format!("must be lab or rotating, got {other:?}"))),
    };
    if backend == Backend::LabFrame {
        let aligned = omega == [0.0; 3] || (omega[0] == 0.0 && omega[1] == 0.0);
        if !aligned {
            return Err(invalid(
                "backend",
                "the lab backend requires the rotation axis to be the third axis",
            ));
        }
    }
    let sample_every = match raw.get("sample_every") {
        None => 10,
        Some(v) => {
            let s: usize = v
                .parse()
                .map_err(|_| invalid("sample_every", "not an integer"))?;
            if s == 0 {
                return Err(invalid("sample_every", "must be at least 1"));
            }
            s
        }
    };
    let frame = match raw.get("frame").unwrap_or("lab") {
        "lab" => Frame::Lab,
        "rotating" => Frame::Rotating,
        other => return Err(invalid("frame", format!("must be lab or rotating, got {other:?}"))),
    };
    let blowup_grad_factor = raw.f64_or("blowup_grad_factor", 100.0)?;
    let blowup_tail = raw.f64_or("blowup_tail", 1e-3)?;
    if blowup_grad_factor <= 0.0
        || blowup_grad_factor.is_nan()
        || blowup_tail <= 0.0
        || blowup_tail.is_nan()
    {
        return Err(invalid("blowup_grad_factor", "thresholds must be positive"));
    }

    let initial = match raw.get("initial").unwrap_or("gaussian") {
        "gaussian" => {
            let center = raw
                .f64_list("initial.center")?
                .unwrap_or_else(|| vec![0.0; dimension]);
            if center.len() != dimension {
                return Err(invalid("initial.center", "one coordinate per axis"));
            }
            let width = raw.f64_or("initial.width", 1.0)?;
            if width <= 0.0 || width.is_nan() {
                return Err(invalid("initial.width", "must be positive"));
            }
            InitialSpec::Gaussian {
                center,
                width,
                amplitude: raw.f64_or("initial.amplitude", 1.0)?,
            }
        }
        "vortex" => InitialSpec::Vortex,
        "ground_state" => InitialSpec::GroundState,
        "file" => {
            let path = raw
                .get("initial.path")
                .ok_or_else(|| invalid("initial.path", "required for initial = file"))?;
            InitialSpec::File(PathBuf::from(path))
        }
        other => {
            return Err(invalid(
                "initial",
                format!("must be gaussian, vortex, ground_state or file, got {other:?}"),
            ))
        }
    };

    let output_dir = PathBuf::from(raw.get("output_dir").unwrap_or("out"));
    let experiment = match raw.get("experiment") {
        None => None,
        Some("simulate") => Some(ExperimentKind::Simulate),
        Some("equivalence") => Some(ExperimentKind::Equivalence),
        Some("blowup") => Some(ExperimentKind::Blowup),
        Some("virial") => Some(ExperimentKind::Virial),
        Some("convergence") => Some(ExperimentKind::Convergence),
        Some("alpha") => Some(ExperimentKind::Alpha),
        Some(other) => {
            return Err(invalid("experiment", format!("unknown experiment {other:?}")))
        }
    };

    let mut echo: BTreeMap<String, String> = raw
        .map
        .iter()
        .map(|(k, (_, v))| (k.clone(), v.clone()))
        .collect();
    echo.entry("backend".into()).or_insert_with(|| {
        match backend {
            Backend::RotatingFrame => "rotating",
            Backend::LabFrame => "lab",
        }
        .to_string()
    });
    echo.entry("sample_every".into())
        .or_insert_with(|| sample_every.to_string());
    echo.entry("lambda".into()).or_insert_with(|| lambda.to_string());
    echo.entry("sigma".into()).or_insert_with(|| sigma.to_string());
    echo.entry("output_dir".into())
        .or_insert_with(|| output_dir.display().to_string());

    let config = RunConfig {
        dimension,
        n,
        box_half_widths,
        gamma,
        repulsive,
        lattice,
        omega,
        lambda,
        sigma,
        dt,
        t_end,
        backend,
        sample_every,
        frame,
        blowup_grad_factor,
        blowup_tail,
        initial,
        output_dir,
        experiment,
        echo,
    };
    // the model constructor re-checks the physics-level invariants
    config.to_model().map_err(|e| invalid("model", e.to_string()))?;
    Ok(config)
}

/// Read and parse a configuration file.
pub fn load_config(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

impl RunConfig {
    pub fn to_grid(&self) -> Result<Arc<Grid>, ConfigError> {
        Ok(Grid::new(&self.n, &self.box_half_widths)?)
    }

    pub fn to_model(&self) -> Result<ModelConfig, crate::model::ModelError> {
        let trap = TrapConfig {
            gamma: self.gamma.clone(),
            repulsive: self.repulsive.clone(),
            lattice: self.lattice.clone(),
        };
        let rotation = if self.dimension == 2 {
            RotationConfig::planar(self.omega[2])
        } else {
            RotationConfig::vector(self.omega)
        };
        ModelConfig::new(
            self.dimension,
            trap,
            rotation,
            NonlinearityConfig::new(self.lambda, self.sigma),
        )
    }

    pub fn to_params(&self) -> SimParams {
        let mut p = SimParams::new(self.dt, self.t_end, self.backend);
        p.sample_every = self.sample_every;
        p.frame_of_record = self.frame;
        p.blowup_grad_factor = self.blowup_grad_factor;
        p.blowup_tail = self.blowup_tail;
        p
    }

    /// Materialize the configured initial state on the grid.
    pub fn initial_field(
        &self,
        grid: &Arc<Grid>,
        model: &ModelConfig,
    ) -> Result<ComplexField, ConfigError> {
        match &self.initial {
            InitialSpec::Gaussian {
                center,
                width,
                amplitude,
            } => {
                let d = self.dimension;
                let w2 = width * width;
                // unit-mass normalization (pi w^2)^(-d/4) per axis pair
                let norm = (std::f64::consts::PI * w2).powf(-(d as f64) / 4.0);
                let c = center.clone();
                let a = *amplitude;
                Ok(ComplexField::from_fn(grid, move |x| {
                    let mut q = 0.0;
                    for j in 0..d {
                        let dx = x[j] - c[j];
                        q += dx * dx;
                    }
                    Complex64::new(a * norm * (-0.5 * q / w2).exp(), 0.0)
                }))
            }
            InitialSpec::Vortex => {
                let d = self.dimension;
                let norm = if d == 2 {
                    1.0 / std::f64::consts::PI.sqrt()
                } else {
                    std::f64::consts::PI.powf(-0.75)
                };
                Ok(ComplexField::from_fn(grid, move |x| {
                    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                    Complex64::new(x[0], x[1]) * norm * (-0.5 * r2).exp()
                }))
            }
            InitialSpec::GroundState => {
                Ok(imaginary_time_ground_state(model, grid, 1e-8)?)
            }
            InitialSpec::File(path) => {
                let (field, _t) = super::snapshot::read_snapshot(path).map_err(|e| {
                    invalid("initial.path", format!("cannot read snapshot: {e}"))
                })?;
                if field.grid().as_ref() != grid.as_ref() {
                    return Err(invalid(
                        "initial.path",
                        "snapshot grid does not match the configured grid",
                    ));
                }
                Ok(field)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
dimension = 2
n = 64, 64
box = 8, 8
gamma = 1, 1
omega = 0.5
lambda = 1
sigma = 1
dt = 1e-3
t_end = 1
backend = lab
";

    #[test]
    fn minimal_config_parses() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.dimension, 2);
        assert_eq!(c.n, vec![64, 64]);
        assert_eq!(c.omega, [0.0, 0.0, 0.5]);
        assert_eq!(c.backend, Backend::LabFrame);
        assert_eq!(c.sample_every, 10);
        assert!(matches!(c.initial, InitialSpec::Gaussian { .. }));
        c.to_grid().unwrap();
        c.to_model().unwrap();
    }

    #[test]
    fn supercritical_three_d_is_rejected() {
        let text = "\
dimension = 3
n = 16, 16, 16
box = 8, 8, 8
gamma = 1, 1, 1
lambda = 1
sigma = 2.5
dt = 1e-3
t_end = 1
";
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, ConfigError::Validation { ref field, .. } if field == "sigma"));
        // sigma = 2 exactly is also not subcritical
        let text = text.replace("sigma = 2.5", "sigma = 2");
        assert!(parse_config(&text).is_err());
    }

    #[test]
    fn missing_dt_is_reported_as_required() {
        let text = MINIMAL.replace("dt = 1e-3\n", "");
        let err = parse_config(&text).unwrap_err();
        match err {
            ConfigError::Validation { field, reason } => {
                assert_eq!(field, "dt");
                assert_eq!(reason, "required");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{MINIMAL}mystery = 1\n");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::Parse { .. }
        ));
    }

    #[test]
    fn fast_rotation_is_fine_for_plain_simulation() {
        // omega above gamma_min is rejected only by the blow-up criterion,
        // not by configuration validation
        let text = MINIMAL.replace("omega = 0.5", "omega = 2.5");
        assert!(parse_config(&text).is_ok());
    }

    #[test]
    fn gaussian_initial_state_is_unit_mass() {
        let c = parse_config(MINIMAL).unwrap();
        let grid = c.to_grid().unwrap();
        let model = c.to_model().unwrap();
        let psi = c.initial_field(&grid, &model).unwrap();
        assert!((psi.mass() - 1.0).abs() < 1e-10);
    }
}
