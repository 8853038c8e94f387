//! Frequency response of the nonlinear estimators measured by simulation.

use std::f64::consts::TAU;

use super::OperatingPoint;
use crate::error::{Error, Result};
use crate::filters::{Estimator, FilterKind};
use crate::imu::{measure_sample, PendulumConfig, RollTrajectory, Sinusoid};
use crate::quat::{wrap_angle, Quaternion};

/// Simulation settings for [`empirical_freq_response`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalConfig {
    /// Sample period, s.
    pub dt: f64,
    /// Simulated duration is at least this many input periods...
    pub min_periods: f64,
    /// ...and at least this many seconds.
    pub min_duration: f64,
    /// Trailing fraction of the run used for the sinusoid fit.
    pub fit_fraction: f64,
}

impl Default for EmpiricalConfig {
    fn default() -> Self {
        EmpiricalConfig {
            dt: 1e-3,
            min_periods: 40.0,
            min_duration: 20.0,
            fit_fraction: 0.5,
        }
    }
}

/// One measured point of a frequency response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqPoint {
    /// rad/s
    pub omega: f64,
    /// Output amplitude over input amplitude.
    pub gain: f64,
    /// Output phase relative to the input, rad, in `(−π, π]`.
    pub phase: f64,
    /// RMS of the fit residual, rad.
    pub residual: f64,
}

/// Accumulates least-squares normal equations for `a·sin + b·cos + c`.
#[derive(Default)]
struct SineFit {
    ata: [[f64; 3]; 3],
    aty: [f64; 3],
    yty: f64,
    n: usize,
}

impl SineFit {
    fn push(&mut self, sin: f64, cos: f64, y: f64) {
        let r = [sin, cos, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                self.ata[i][j] += r[i] * r[j];
            }
            self.aty[i] += r[i] * y;
        }
        self.yty += y * y;
        self.n += 1;
    }

    /// Coefficients `(a, b, c)` and the residual RMS.
    fn solve(&self) -> Option<([f64; 3], f64)> {
        let m = nalgebra::Matrix3::from_fn(|i, j| self.ata[i][j]);
        let rhs = nalgebra::Vector3::from_column_slice(&self.aty);
        let x = m.lu().solve(&rhs)?;
        // ‖y − Ax‖² = yᵀy − 2xᵀAᵀy + xᵀAᵀAx = yᵀy − xᵀAᵀy at the optimum
        let sse = (self.yty - x.dot(&rhs)).max(0.0);
        Some(([x[0], x[1], x[2]], (sse / self.n as f64).sqrt()))
    }
}

/// Drives the estimator with the measurements of `φ(t) = φ_op + A sin(ωt)`,
/// fits `Δφ̂(t) = a sin(ωt) + b cos(ωt) + c` over the trailing part of the
/// run, and reports `√(a² + b²)/A` and `atan2(b, a)`.
///
/// The estimator starts at the operating point. Fails with `NoConvergence`
/// when the fit residual exceeds 10% of the fitted amplitude; the amplitude
/// is floored at `0.05·A` so that a notched (near-zero) response is not
/// rejected for its second-order residue.
pub fn empirical_freq_response(
    kind: FilterKind,
    op: &OperatingPoint,
    omega: f64,
    amplitude: f64,
    cfg: &EmpiricalConfig,
) -> Result<FreqPoint> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!("omega must be > 0, got {omega}")));
    }
    if !(amplitude > 0.0 && amplitude <= 0.01) {
        return Err(Error::InvalidParameter(format!(
            "amplitude must be in (0, 0.01] rad, got {amplitude}"
        )));
    }
    if !(cfg.dt > 0.0 && cfg.fit_fraction > 0.0 && cfg.fit_fraction <= 1.0) {
        return Err(Error::InvalidParameter("invalid simulation settings".into()));
    }
    let pendulum = PendulumConfig::new(op.lever_arm, op.gravity)?;
    let traj = Sinusoid::new(op.phi_op, amplitude, omega);
    let duration = (cfg.min_periods * TAU / omega).max(cfg.min_duration);
    let steps = (duration / cfg.dt).ceil() as usize;
    let fit_start = steps - (steps as f64 * cfg.fit_fraction) as usize;

    let mut est = Estimator::new(kind, Quaternion::from_roll(op.phi_op))?;
    let mut fit = SineFit::default();
    for k in 0..=steps {
        let t = k as f64 * cfg.dt;
        let sample = measure_sample(&pendulum, t, traj.at(t));
        if k > 0 || kind == FilterKind::Atan2 {
            est.update(&sample, cfg.dt);
        }
        if k >= fit_start {
            let (s, c) = (omega * t).sin_cos();
            fit.push(s, c, wrap_angle(est.euler().roll - op.phi_op));
        }
    }
    let ([a, b, _], residual) = fit.solve().ok_or(Error::NoConvergence {
        residual: f64::NAN,
        amplitude: 0.0,
    })?;
    let fitted = a.hypot(b);
    if !residual.is_finite() || residual > 0.1 * fitted.max(0.05 * amplitude) {
        return Err(Error::NoConvergence {
            residual,
            amplitude: fitted,
        });
    }
    Ok(FreqPoint {
        omega,
        gain: fitted / amplitude,
        phase: b.atan2(a),
        residual,
    })
}
