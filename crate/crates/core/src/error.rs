use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quaternion norm {norm} is not unit (tolerance {tolerance})")]
    NonUnitQuaternion { norm: f64, tolerance: f64 },

    #[error("cannot normalize a zero-length quaternion")]
    ZeroQuaternion,

    #[error("acceleration norm {norm} is below the free-fall threshold")]
    NearZeroAcceleration { norm: f64 },

    #[error("roll is undefined when the second and third accelerometer components are both zero")]
    DegenerateRoll,

    #[error("timestamps must be strictly increasing (sample {index}: {previous} -> {current})")]
    NonMonotonicTime {
        index: usize,
        previous: f64,
        current: f64,
    },

    #[error("transfer function has a pole on the imaginary axis at omega = {omega}")]
    PoleOnAxis { omega: f64 },

    #[error("sinusoid fit did not converge: residual {residual:.3e} vs amplitude {amplitude:.3e}")]
    NoConvergence { residual: f64, amplitude: f64 },

    #[error("plant diverged at t = {t} s (|phi| = {phi})")]
    Diverged { t: f64, phi: f64 },

    #[error("estimate and ground-truth time ranges do not overlap")]
    NoOverlap,

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: PathBuf, column: String },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
