//! Linearized roll transfer functions of the estimators, their zeros, zero
//! loci over operating point and gain, and analytic/empirical frequency
//! responses.
//!
//! All transfer functions map `Δφ(s)` (true roll about the operating point)
//! to `Δφ̂(s)` (estimated roll). The lever ratio `l/g` appears as `lc`
//! together with `cos φ_op`.

pub mod empirical;
pub mod linearize;
pub mod poly;
pub mod tf;
pub mod zeros;

pub use empirical::{empirical_freq_response, EmpiricalConfig, FreqPoint};
pub use linearize::{mahony_response_state_space, mahony_tf_state_space, sliding_surface_tf};
pub use tf::{freq_response, RationalTf};
pub use zeros::{
    atan_tf, atan_zeros, madgwick_sliding_tf, mahony_complex_transition, mahony_tf, mahony_zeros,
    zero_locus_atan, zero_locus_mahony, ZeroSet,
};

use crate::error::{Error, Result};

/// `|cos φ_op|` at or below this is treated as exactly zero, so that
/// `φ_op = π/2` yields the ideal transfer function without rounding residue.
pub const COS_SNAP: f64 = 1e-12;

/// Constant roll with zero rate and acceleration, plus the lever geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    /// Roll, rad, in `[0, π]`.
    pub phi_op: f64,
    /// Lever arm, m.
    pub lever_arm: f64,
    /// Gravity, m/s² (1 in normalized units).
    pub gravity: f64,
}

impl OperatingPoint {
    pub fn new(phi_op: f64, lever_arm: f64, gravity: f64) -> Result<Self> {
        if !(-1e-12..=std::f64::consts::PI + 1e-12).contains(&phi_op) {
            return Err(Error::InvalidParameter(format!(
                "operating point must lie in [0, pi], got {phi_op}"
            )));
        }
        if !(lever_arm >= 0.0 && lever_arm.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lever arm must be >= 0, got {lever_arm}"
            )));
        }
        if !(gravity > 0.0 && gravity.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gravity must be > 0, got {gravity}"
            )));
        }
        Ok(OperatingPoint {
            phi_op,
            lever_arm,
            gravity,
        })
    }

    /// Normalized gravity (`g = 1`).
    pub fn normalized(phi_op: f64, lever_arm: f64) -> Result<Self> {
        OperatingPoint::new(phi_op, lever_arm, 1.0)
    }

    /// `cos φ_op`, snapped to zero within [`COS_SNAP`].
    pub fn cos(&self) -> f64 {
        let c = self.phi_op.cos();
        if c.abs() <= COS_SNAP {
            0.0
        } else {
            c
        }
    }

    /// `sin φ_op`, snapped to zero within [`COS_SNAP`].
    pub fn sin(&self) -> f64 {
        let s = self.phi_op.sin();
        if s.abs() <= COS_SNAP {
            0.0
        } else {
            s
        }
    }

    /// `(l/g)·cos φ_op`, s².
    pub fn lc(&self) -> f64 {
        self.lever_arm / self.gravity * self.cos()
    }
}

/// `n` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `n` logarithmically spaced values from `start` to `stop` inclusive (both > 0).
pub fn logspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    let (a, b) = (start.log10(), stop.log10());
    linspace(a, b, n).into_iter().map(|e| 10f64.powf(e)).collect()
}

/// Operating-point grid used for the atan2 zero locus: 181 points on `[0, π]`.
pub fn default_phi_grid() -> Vec<f64> {
    linspace(0.0, std::f64::consts::PI, 181)
}

/// Gain grid used for the Mahony zero locus: 121 log-spaced points on `[1e-2, 1e3]`.
pub fn default_kp_grid() -> Vec<f64> {
    logspace(1e-2, 1e3, 121)
}
