//! Quaternion attitude estimators (atan2, Mahony, Madgwick), the lever-arm IMU
//! measurement model, and the linear analysis that locates the zeros lever-arm
//! accelerations add to each estimator's roll transfer function.
//!
//! Module map:
//!
//! - [`quat`]: quaternion algebra and Euler conversions
//! - [`imu`]: pendulum measurement model and trajectories
//! - [`filters`]: the three estimators
//! - [`analysis`]: transfer functions, zeros, loci, frequency responses
//! - [`closed_loop`]: reaction-wheel pendulum driven by a filtered roll estimate
//! - [`replay`]: CSV datasets and open-loop error evaluation
//! - [`cli`]: the `leverarm` command-line front end

pub mod analysis;
pub mod cli;
pub mod closed_loop;
pub mod error;
pub mod filters;
pub mod imu;
pub mod ode;
pub mod quat;
pub mod replay;

pub use error::{Error, Result};
pub use filters::{FilterKind, MahonyGains};
pub use imu::{ImuSample, PendulumConfig};
pub use quat::{EulerAngles, Quaternion, Vec3};
