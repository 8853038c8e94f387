//! Pendulum measurement model: an IMU mounted at distance `l` from the roll axis.
//!
//! The IMU rotates with roll `φ` only. Its accelerometer sees gravity plus the
//! tangential and centripetal accelerations of the lever arm:
//!
//! ```text
//! a = (0, sin φ − (l/g) φ̈, cos φ − (l/g) φ̇²)   [units of g]
//! ω = (φ̇, 0, 0)                                   [rad/s]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::quat::{norm, EulerAngles, Vec3};

/// Accelerations at or below this norm (in g) are treated as free fall.
pub const NEAR_ZERO_ACCEL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumConfig {
    /// Distance from the roll axis to the IMU, m.
    pub lever_arm: f64,
    /// Gravitational acceleration, m/s². Defaults to 1 (normalized units).
    pub gravity: f64,
}

impl PendulumConfig {
    pub fn new(lever_arm: f64, gravity: f64) -> Result<Self> {
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
        Ok(PendulumConfig { lever_arm, gravity })
    }

    /// Normalized-gravity configuration (`g = 1`).
    pub fn normalized(lever_arm: f64) -> Result<Self> {
        PendulumConfig::new(lever_arm, 1.0)
    }

    /// `l / g`, in s².
    pub fn lever_ratio(&self) -> f64 {
        self.lever_arm / self.gravity
    }
}

impl Default for PendulumConfig {
    fn default() -> Self {
        PendulumConfig {
            lever_arm: 0.0,
            gravity: 1.0,
        }
    }
}

/// One accelerometer + gyroscope reading.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImuSample {
    pub t: f64,
    /// Specific force in units of g.
    pub accel: Vec3,
    /// Angular rate, rad/s.
    pub gyro: Vec3,
}

impl ImuSample {
    pub fn new(t: f64, accel: Vec3, gyro: Vec3) -> Self {
        ImuSample { t, accel, gyro }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.accel.iter().all(|v| v.is_finite())
            && self.gyro.iter().all(|v| v.is_finite())
    }
}

/// Roll angle with its first two derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RollState {
    pub angle: f64,
    pub rate: f64,
    pub accel: f64,
}

/// A twice-differentiable roll trajectory.
pub trait RollTrajectory {
    fn at(&self, t: f64) -> RollState;
}

impl<F: Fn(f64) -> RollState> RollTrajectory for F {
    fn at(&self, t: f64) -> RollState {
        self(t)
    }
}

/// Constant roll, at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl RollTrajectory for Constant {
    fn at(&self, _t: f64) -> RollState {
        RollState {
            angle: self.0,
            rate: 0.0,
            accel: 0.0,
        }
    }
}

/// `offset + amplitude·sin(omega·t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinusoid {
    pub offset: f64,
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
}

impl Sinusoid {
    pub fn new(offset: f64, amplitude: f64, omega: f64) -> Self {
        Sinusoid {
            offset,
            amplitude,
            omega,
            phase: 0.0,
        }
    }
}

impl RollTrajectory for Sinusoid {
    fn at(&self, t: f64) -> RollState {
        let (s, c) = (self.omega * t + self.phase).sin_cos();
        RollState {
            angle: self.offset + self.amplitude * s,
            rate: self.amplitude * self.omega * c,
            accel: -self.amplitude * self.omega * self.omega * s,
        }
    }
}

/// Step from `from` to `to` starting at `start`, blended with the cubic
/// `3u² − 2u³` over `duration` seconds so that the acceleration stays bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothStep {
    pub from: f64,
    pub to: f64,
    pub start: f64,
    pub duration: f64,
}

impl RollTrajectory for SmoothStep {
    fn at(&self, t: f64) -> RollState {
        let delta = self.to - self.from;
        let u = (t - self.start) / self.duration;
        if u <= 0.0 {
            return Constant(self.from).at(t);
        }
        if u >= 1.0 {
            return Constant(self.to).at(t);
        }
        let d = self.duration;
        RollState {
            angle: self.from + delta * u * u * (3.0 - 2.0 * u),
            rate: delta * 6.0 * u * (1.0 - u) / d,
            accel: delta * (6.0 - 12.0 * u) / (d * d),
        }
    }
}

/// Linear-frequency chirp `offset + amplitude·sin(ω₀t + ½kt²)` with
/// `k = (ω₁ − ω₀)/sweep_time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chirp {
    pub offset: f64,
    pub amplitude: f64,
    pub omega_start: f64,
    pub omega_end: f64,
    pub sweep_time: f64,
}

impl RollTrajectory for Chirp {
    fn at(&self, t: f64) -> RollState {
        let k = (self.omega_end - self.omega_start) / self.sweep_time;
        let theta = self.omega_start * t + 0.5 * k * t * t;
        let theta_dot = self.omega_start + k * t;
        let (s, c) = theta.sin_cos();
        RollState {
            angle: self.offset + self.amplitude * s,
            rate: self.amplitude * c * theta_dot,
            accel: self.amplitude * (c * k - s * theta_dot * theta_dot),
        }
    }
}

/// Accelerometer and gyroscope reading for the given roll state.
pub fn measure(cfg: &PendulumConfig, state: RollState) -> (Vec3, Vec3) {
    let r = cfg.lever_ratio();
    let accel = [
        0.0,
        state.angle.sin() - r * state.accel,
        state.angle.cos() - r * state.rate * state.rate,
    ];
    (accel, [state.rate, 0.0, 0.0])
}

/// Measurement at time `t`.
pub fn measure_sample(cfg: &PendulumConfig, t: f64, state: RollState) -> ImuSample {
    let (accel, gyro) = measure(cfg, state);
    ImuSample { t, accel, gyro }
}

pub fn normalize_accel(a: Vec3) -> Result<Vec3> {
    let n = norm(a);
    if !(n > NEAR_ZERO_ACCEL) {
        return Err(Error::NearZeroAcceleration { norm: n });
    }
    Ok([a[0] / n, a[1] / n, a[2] / n])
}

/// A measurement paired with the orientation that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthSample {
    pub sample: ImuSample,
    pub truth: EulerAngles,
}

/// Uniform samples on `[t0, t1]`, `floor((t1 − t0)/dt) + 1` of them.
pub fn sample_trajectory<T: RollTrajectory + ?Sized>(
    cfg: &PendulumConfig,
    traj: &T,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<Vec<TruthSample>> {
    if !(dt > 0.0) || !(t1 > t0) {
        return Err(Error::InvalidParameter(format!(
            "need t1 > t0 and dt > 0 (t0={t0}, t1={t1}, dt={dt})"
        )));
    }
    // relative slack keeps e.g. (1.0 - 0.0)/0.1 from flooring to 9
    let n = ((t1 - t0) / dt * (1.0 + 1e-12)).floor() as usize + 1;
    Ok((0..n)
        .map(|k| {
            let t = t0 + k as f64 * dt;
            let state = traj.at(t);
            TruthSample {
                sample: measure_sample(cfg, t, state),
                truth: EulerAngles::new(state.angle, 0.0, 0.0),
            }
        })
        .collect())
}

/// Additive sensor imperfections. All zero by default.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseModel {
    /// Standard deviation of white accelerometer noise per axis, g.
    pub accel_std: f64,
    /// Standard deviation of white gyroscope noise per axis, rad/s.
    pub gyro_std: f64,
    /// Constant gyroscope bias, rad/s.
    pub gyro_bias: Vec3,
    pub seed: u64,
}

impl NoiseModel {
    pub fn is_zero(&self) -> bool {
        self.accel_std == 0.0 && self.gyro_std == 0.0 && self.gyro_bias == [0.0; 3]
    }

    /// Stateful corrupter seeded from `self.seed`.
    pub fn injector(&self) -> Result<NoiseInjector> {
        let normal = |std: f64| {
            Normal::new(0.0, std).map_err(|e| Error::InvalidParameter(format!("noise std: {e}")))
        };
        Ok(NoiseInjector {
            model: *self,
            accel: normal(self.accel_std)?,
            gyro: normal(self.gyro_std)?,
            rng: ChaCha8Rng::seed_from_u64(self.seed),
        })
    }

    pub fn apply(&self, samples: &mut [ImuSample]) -> Result<()> {
        let mut inj = self.injector()?;
        samples.iter_mut().for_each(|s| inj.corrupt(s));
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct NoiseInjector {
    model: NoiseModel,
    accel: Normal<f64>,
    gyro: Normal<f64>,
    rng: ChaCha8Rng,
}

impl NoiseInjector {
    pub fn corrupt(&mut self, s: &mut ImuSample) {
        for k in 0..3 {
            if self.model.accel_std > 0.0 {
                s.accel[k] += self.accel.sample(&mut self.rng);
            }
            if self.model.gyro_std > 0.0 {
                s.gyro[k] += self.gyro.sample(&mut self.rng);
            }
            s.gyro[k] += self.model.gyro_bias[k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn at_rest_upright_reads_gravity_only() {
        for l in [0.0, 0.4, 3.0] {
            let cfg = PendulumConfig::normalized(l).unwrap();
            let (a, w) = measure(&cfg, RollState::default());
            assert_eq!(a, [0.0, 0.0, 1.0]);
            assert_eq!(w, [0.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn quarter_turn_at_rest() {
        let cfg = PendulumConfig::normalized(1.0).unwrap();
        let (a, _) = measure(&cfg, Constant(std::f64::consts::FRAC_PI_2).at(0.0));
        assert!((a[1] - 1.0).abs() < 1e-15 && a[2].abs() < 1e-15);
    }

    #[test]
    fn lever_arm_substitution() {
        let cfg = PendulumConfig::normalized(0.4).unwrap();
        let (a, w) = measure(
            &cfg,
            RollState {
                angle: 0.0,
                rate: 1.0,
                accel: 1.0,
            },
        );
        assert_eq!(a[0], 0.0);
        assert!((a[1] + 0.4).abs() < 1e-15);
        assert!((a[2] - 0.6).abs() < 1e-15);
        assert_eq!(w, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_accel([0.0, 0.0, 2.0]).unwrap(), [0.0, 0.0, 1.0]);
        let n = normalize_accel([0.0, 3.0, 4.0]).unwrap();
        assert!((n[1] - 0.6).abs() < 1e-15 && (n[2] - 0.8).abs() < 1e-15);
        assert!(matches!(
            normalize_accel([0.0, 0.0, 0.0]),
            Err(Error::NearZeroAcceleration { .. })
        ));
        assert!(normalize_accel([0.0, 0.0, 5e-7]).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(PendulumConfig::new(-0.1, 1.0).is_err());
        assert!(PendulumConfig::new(0.1, 0.0).is_err());
        assert!(PendulumConfig::new(0.1, f64::NAN).is_err());
    }

    #[test]
    fn constant_trajectory_samples() {
        let cfg = PendulumConfig::normalized(0.7).unwrap();
        let out = sample_trajectory(&cfg, &Constant(0.2), 0.0, 0.2, 0.1).unwrap();
        assert_eq!(out.len(), 3);
        for s in &out {
            assert_eq!(s.sample.accel, [0.0, 0.2f64.sin(), 0.2f64.cos()]);
            assert_eq!(s.truth, EulerAngles::new(0.2, 0.0, 0.0));
        }
        assert!(sample_trajectory(&cfg, &Constant(0.0), 1.0, 1.0, 0.1).is_err());
        assert!(sample_trajectory(&cfg, &Constant(0.0), 0.0, 1.0, 0.0).is_err());
        assert_eq!(
            sample_trajectory(&cfg, &Constant(0.0), 0.0, 1.0, 0.1).unwrap().len(),
            11
        );
    }

    #[test]
    fn sinusoid_acceleration_is_analytic() {
        let s = Sinusoid::new(0.0, 0.3, 2.0);
        for k in 0..50 {
            let t = 0.1 * k as f64;
            let st = s.at(t);
            assert!((st.accel + 0.3 * 4.0 * (2.0 * t).sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn small_sinusoid_matches_symbolic_evaluation() {
        // sin φ − φ̈ with φ = A sin t, φ̈ = −A sin t, evaluated independently
        let cfg = PendulumConfig::normalized(1.0).unwrap();
        let a = 0.001;
        let out = sample_trajectory(&cfg, &Sinusoid::new(0.0, a, 1.0), 0.0, 20.0, 0.01).unwrap();
        let worst = out
            .iter()
            .map(|s| {
                let t = s.sample.t;
                let phi = a * t.sin();
                let oracle = phi.sin() + a * t.sin();
                (s.sample.accel[1] - oracle).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-12, "{worst}");
    }

    fn check_derivatives<T: RollTrajectory>(traj: &T, ts: &[f64], tol: f64) {
        let h = 1e-5;
        for &t in ts {
            let (m, c, p) = (traj.at(t - h), traj.at(t), traj.at(t + h));
            let rate = (p.angle - m.angle) / (2.0 * h);
            let accel = (p.rate - m.rate) / (2.0 * h);
            assert!((rate - c.rate).abs() < tol, "rate at {t}: {rate} vs {}", c.rate);
            assert!((accel - c.accel).abs() < tol, "accel at {t}: {accel} vs {}", c.accel);
        }
    }

    #[test]
    fn trajectory_derivatives_are_consistent() {
        let ts: Vec<f64> = (1..40).map(|k| 0.137 * k as f64).collect();
        check_derivatives(&Sinusoid::new(0.2, 0.5, 1.7), &ts, 1e-6);
        check_derivatives(&Constant(0.4), &ts, 1e-6);
        check_derivatives(
            &Chirp {
                offset: 0.1,
                amplitude: 0.3,
                omega_start: 0.5,
                omega_end: 6.0,
                sweep_time: 5.0,
            },
            &ts,
            1e-5,
        );
        check_derivatives(
            &SmoothStep {
                from: 0.0,
                to: 0.5,
                start: 1.0,
                duration: 2.0,
            },
            &ts,
            1e-5,
        );
    }

    #[test]
    fn noise_is_seeded_and_bias_is_constant() {
        let base = vec![ImuSample::new(0.0, [0.0, 0.0, 1.0], [0.0; 3]); 100];
        let model = NoiseModel {
            accel_std: 0.01,
            gyro_std: 0.02,
            gyro_bias: [0.1, 0.0, 0.0],
            seed: 3,
        };
        let (mut a, mut b) = (base.clone(), base.clone());
        model.apply(&mut a).unwrap();
        model.apply(&mut b).unwrap();
        assert_eq!(a, b);
        let mean_gx: f64 = a.iter().map(|s| s.gyro[0]).sum::<f64>() / 100.0;
        assert!((mean_gx - 0.1).abs() < 0.01);

        let mut c = base.clone();
        NoiseModel::default().apply(&mut c).unwrap();
        assert_eq!(c, base);
    }

    proptest! {
        #[test]
        fn at_rest_norm_is_one(phi in -10.0..10.0f64, l in 0.0..5.0f64) {
            let cfg = PendulumConfig::normalized(l).unwrap();
            let (a, _) = measure(&cfg, Constant(phi).at(0.0));
            prop_assert!((norm(a) - 1.0).abs() < 1e-14);
        }

        #[test]
        fn pure_roll_geometry(phi in -4.0..4.0f64, rate in -10.0..10.0f64, acc in -50.0..50.0f64, l in 0.0..2.0f64, g in 0.5..10.0f64) {
            let cfg = PendulumConfig::new(l, g).unwrap();
            let st = RollState { angle: phi, rate, accel: acc };
            let (a, w) = measure(&cfg, st);
            prop_assert_eq!(a[0], 0.0);
            prop_assert_eq!(w[1], 0.0);
            prop_assert_eq!(w[2], 0.0);
            // linear in φ̈ and φ̇² with slope −l/g
            let (a2, _) = measure(&cfg, RollState { accel: acc + 1.0, ..st });
            prop_assert!(((a2[1] - a[1]) + l / g).abs() < 1e-9);
            let (a0, _) = measure(&cfg, RollState { rate: 0.0, ..st });
            prop_assert!(((a[2] - a0[2]) + l / g * rate * rate).abs() < 1e-9);
        }
    }
}
