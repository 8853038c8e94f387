//! Reaction-wheel inverted pendulum stabilized on an estimated roll angle.
//!
//! Plant, with `φ` the body roll from upright and `ω_w` the wheel speed
//! relative to the body:
//!
//! ```text
//! J_b φ̈  = m g h sin φ − b_b φ̇ − k_t i + b_w ω_w
//! ω̇_w   = (k_t i − b_w ω_w) / J_w − φ̈
//! ```
//!
//! The motor current `i` torques the wheel and reacts on the body. The
//! controller is PD on roll plus PI on wheel speed,
//! `i = K_φ φ̂ + K_φ̇ φ̇_gyro + K_w ω_w + K_I ∫ω_w`, clamped to `±i_max`; the
//! integral is frozen while the output saturates.
//!
//! Two IMUs at different heights feed two independent filters. A schedule
//! picks which one closes the loop; the other runs open loop.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analysis::poly;
use crate::analysis::{atan_tf, madgwick_sliding_tf, mahony_tf, OperatingPoint, RationalTf};
use crate::error::{Error, Result};
use crate::filters::{Estimator, FilterKind};
use crate::imu::{measure, ImuSample, NoiseInjector, NoiseModel, RollState};
use crate::ode::rk4;
use crate::quat::Quaternion;
use crate::replay::RecordedDataset;

/// Accelerometer noise of the committed configuration. Besides realism it
/// matters for the Madgwick filter: without it the sign-like correction has no
/// amplitude scale other than `β`, and the loop behaves the same for every `β`.
pub const DEFAULT_NOISE: NoiseModel = NoiseModel {
    accel_std: 0.003,
    gyro_std: 0.0,
    gyro_bias: [0.0; 3],
    seed: 0,
};

/// Roll beyond which the pendulum is considered fallen, rad.
pub const FALL_ANGLE: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionWheelPlant {
    /// Body inertia about the pivot, kg·m².
    pub body_inertia: f64,
    /// Wheel inertia about its axle, kg·m².
    pub wheel_inertia: f64,
    /// kg
    pub body_mass: f64,
    /// Height of the center of mass above the pivot, m.
    pub com_height: f64,
    /// N·m/A
    pub torque_constant: f64,
    /// Viscous friction at the pivot, N·m·s/rad.
    pub body_friction: f64,
    /// Viscous friction in the wheel bearing, N·m·s/rad.
    pub wheel_friction: f64,
    /// m/s²
    pub gravity: f64,
}

impl ReactionWheelPlant {
    /// Surrogate parameters committed for the closed-loop experiments. They
    /// are not measured values of any vehicle.
    pub const SURROGATE: ReactionWheelPlant = ReactionWheelPlant {
        body_inertia: 1.0,
        wheel_inertia: 0.01,
        body_mass: 25.0,
        com_height: 0.17,
        torque_constant: 0.1,
        body_friction: 0.0,
        wheel_friction: 1e-3,
        gravity: 9.81,
    };

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("body inertia", self.body_inertia),
            ("wheel inertia", self.wheel_inertia),
            ("body mass", self.body_mass),
            ("center-of-mass height", self.com_height),
            ("torque constant", self.torque_constant),
            ("gravity", self.gravity),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        for (name, v) in [("body friction", self.body_friction), ("wheel friction", self.wheel_friction)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    fn gravity_stiffness(&self) -> f64 {
        self.body_mass * self.gravity * self.com_height
    }

    /// Linearization about upright at zero current: `ẋ = A x` with
    /// `x = (φ, φ̇, ω_w)`.
    pub fn upright_jacobian(&self) -> [[f64; 3]; 3] {
        let jb = self.body_inertia;
        let row1 = [self.gravity_stiffness() / jb, -self.body_friction / jb, self.wheel_friction / jb];
        [
            [0.0, 1.0, 0.0],
            row1,
            [-row1[0], -row1[1], -self.wheel_friction / self.wheel_inertia - row1[2]],
        ]
    }
}

impl Default for ReactionWheelPlant {
    fn default() -> Self {
        ReactionWheelPlant::SURROGATE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlantState {
    /// rad
    pub phi: f64,
    /// rad/s
    pub phi_dot: f64,
    /// Wheel speed relative to the body, rad/s.
    pub wheel_speed: f64,
}

impl PlantState {
    fn to_array(self) -> [f64; 3] {
        [self.phi, self.phi_dot, self.wheel_speed]
    }

    fn from_array(x: [f64; 3]) -> Self {
        PlantState {
            phi: x[0],
            phi_dot: x[1],
            wheel_speed: x[2],
        }
    }
}

/// `(φ̇, φ̈, ω̇_w)`.
pub fn plant_derivative(plant: &ReactionWheelPlant, state: &PlantState, current: f64) -> [f64; 3] {
    let torque = plant.torque_constant * current;
    let phi_ddot = (plant.gravity_stiffness() * state.phi.sin() - plant.body_friction * state.phi_dot
        - torque
        + plant.wheel_friction * state.wheel_speed)
        / plant.body_inertia;
    let wheel_accel = (torque - plant.wheel_friction * state.wheel_speed) / plant.wheel_inertia - phi_ddot;
    [state.phi_dot, phi_ddot, wheel_accel]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadedController {
    /// A/rad
    pub roll_p: f64,
    /// A·s/rad
    pub roll_d: f64,
    /// A·s/rad
    pub wheel_p: f64,
    /// A/rad
    pub wheel_i: f64,
    /// A
    pub current_limit: f64,
}

impl CascadedController {
    /// Gains committed with [`ReactionWheelPlant::SURROGATE`]: the true-state
    /// loop is stable, and the estimated-state loop with Mahony `k_p = 10` on
    /// the upper IMU is linearly unstable while `k_p = 2.2` is not.
    pub const SURROGATE: CascadedController = CascadedController {
        roll_p: 1376.97,
        roll_d: 468.9,
        wheel_p: 0.04683,
        wheel_i: 0.005045,
        current_limit: 40.0,
    };

    pub fn validate(&self) -> Result<()> {
        let g = [self.roll_p, self.roll_d, self.wheel_p, self.wheel_i];
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("controller gains must be finite".into()));
        }
        if !(self.current_limit > 0.0 && self.current_limit.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "current limit must be > 0, got {}",
                self.current_limit
            )));
        }
        Ok(())
    }

    /// Unsaturated command.
    pub fn command(&self, roll: f64, roll_rate: f64, wheel_speed: f64, wheel_integral: f64) -> f64 {
        self.roll_p * roll + self.roll_d * roll_rate + self.wheel_p * wheel_speed + self.wheel_i * wheel_integral
    }
}

impl Default for CascadedController {
    fn default() -> Self {
        CascadedController::SURROGATE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    Lower,
    Upper,
}

impl Placement {
    pub fn label(self) -> &'static str {
        match self {
            Placement::Lower => "lower",
            Placement::Upper => "upper",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Placement::Lower),
            "upper" => Ok(Placement::Upper),
            _ => Err(Error::InvalidParameter(format!(
                "unknown IMU placement {s:?} (expected lower or upper)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImuPlacement {
    pub placement: Placement,
    /// Height above the pivot, m.
    pub lever_arm: f64,
    /// Calibration mismatch: the accelerometer frame is rolled by this angle, rad.
    pub accel_offset: f64,
}

impl ImuPlacement {
    pub const LOWER: ImuPlacement = ImuPlacement {
        placement: Placement::Lower,
        lever_arm: 0.12,
        accel_offset: -0.005,
    };

    pub const UPPER: ImuPlacement = ImuPlacement {
        placement: Placement::Upper,
        lever_arm: 0.4,
        accel_offset: 0.005,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.lever_arm >= 0.0 && self.lever_arm.is_finite() && self.accel_offset.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "invalid {} IMU placement",
                self.placement.label()
            )));
        }
        Ok(())
    }

    /// Reading of this IMU for the given body motion; `g` scales the lever term.
    pub fn measure(&self, gravity: f64, t: f64, state: RollState) -> ImuSample {
        let cfg = crate::imu::PendulumConfig {
            lever_arm: self.lever_arm,
            gravity,
        };
        let (a, gyro) = measure(&cfg, state);
        let (s, c) = self.accel_offset.sin_cos();
        let accel = [a[0], c * a[1] + s * a[2], -s * a[1] + c * a[2]];
        ImuSample { t, accel, gyro }
    }
}

/// Which IMU closes the loop from each start time on.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchSchedule(Vec<(f64, Placement)>);

impl SwitchSchedule {
    pub fn new(entries: Vec<(f64, Placement)>) -> Result<Self> {
        match entries.first() {
            Some((t, _)) if *t == 0.0 => {}
            _ => {
                return Err(Error::InvalidParameter(
                    "schedule must start at t = 0".into(),
                ))
            }
        }
        if entries.windows(2).any(|w| !(w[1].0 > w[0].0)) || entries.iter().any(|e| !e.0.is_finite()) {
            return Err(Error::InvalidParameter(
                "schedule times must be strictly increasing".into(),
            ));
        }
        Ok(SwitchSchedule(entries))
    }

    /// Parses `"0:lower,10:upper,20:lower"`.
    pub fn parse(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|item| {
                let (t, p) = item.split_once(':').ok_or_else(|| {
                    Error::InvalidParameter(format!("schedule entry {item:?} is not time:placement"))
                })?;
                let t: f64 = t.trim().parse().map_err(|_| {
                    Error::InvalidParameter(format!("bad schedule time {t:?}"))
                })?;
                Ok((t, Placement::parse(p.trim())?))
            })
            .collect::<Result<Vec<_>>>()?;
        SwitchSchedule::new(entries)
    }

    pub fn entries(&self) -> &[(f64, Placement)] {
        &self.0
    }

    pub fn active(&self, t: f64) -> Placement {
        self.0
            .iter()
            .rev()
            .find(|(start, _)| *start <= t)
            .map_or(self.0[0].1, |e| e.1)
    }
}

impl Default for SwitchSchedule {
    fn default() -> Self {
        SwitchSchedule(vec![
            (0.0, Placement::Lower),
            (10.0, Placement::Upper),
            (20.0, Placement::Lower),
        ])
    }
}

/// Roll signal fed to the controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Feedback {
    /// True roll, filters bypassed (they still run).
    TrueState,
    /// Estimate from the filter on the scheduled IMU.
    Estimate(FilterKind),
}

impl Feedback {
    fn filter(self) -> FilterKind {
        match self {
            // the idle filters still need a kind; atan2 has no memory
            Feedback::TrueState => FilterKind::Atan2,
            Feedback::Estimate(k) => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopConfig {
    pub plant: ReactionWheelPlant,
    pub controller: CascadedController,
    pub lower: ImuPlacement,
    pub upper: ImuPlacement,
    pub schedule: SwitchSchedule,
    pub feedback: Feedback,
    /// Step for plant, filters and controller, s.
    pub dt: f64,
    pub t_end: f64,
    pub initial: PlantState,
    /// Applied independently to both IMUs (the upper one uses `seed + 1`).
    pub noise: NoiseModel,
}

impl ClosedLoopConfig {
    pub fn new(feedback: Feedback) -> Self {
        ClosedLoopConfig {
            plant: ReactionWheelPlant::SURROGATE,
            controller: CascadedController::SURROGATE,
            lower: ImuPlacement::LOWER,
            upper: ImuPlacement::UPPER,
            schedule: SwitchSchedule::default(),
            feedback,
            dt: 1e-3,
            t_end: 30.0,
            initial: PlantState::default(),
            noise: DEFAULT_NOISE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.plant.validate()?;
        self.controller.validate()?;
        self.lower.validate()?;
        self.upper.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) || !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need dt > 0 and t_end > 0 (dt={}, t_end={})",
                self.dt, self.t_end
            )));
        }
        Ok(())
    }
}

/// One logged step, taken before the state is advanced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedLoopRow {
    pub t: f64,
    pub state: PlantState,
    /// Saturated current, A.
    pub current: f64,
    pub active: Placement,
    pub roll_hat_lower: f64,
    pub roll_hat_upper: f64,
    /// Samples handed to each filter at this step.
    pub imu_lower: ImuSample,
    pub imu_upper: ImuSample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopRun {
    pub rows: Vec<ClosedLoopRow>,
    /// Time at which `|φ|` exceeded [`FALL_ANGLE`]; the run stops there.
    pub diverged_at: Option<f64>,
}

impl ClosedLoopRun {
    /// The stream one IMU produced, with the true roll as ground truth.
    pub fn imu_dataset(&self, placement: Placement) -> RecordedDataset {
        let samples = self
            .rows
            .iter()
            .map(|r| match placement {
                Placement::Lower => r.imu_lower,
                Placement::Upper => r.imu_upper,
            })
            .collect();
        let truth = self.rows.iter().map(|r| Quaternion::from_roll(r.state.phi)).collect();
        RecordedDataset {
            samples,
            truth: Some(truth),
        }
    }

    /// `Err(Diverged)` if the pendulum fell.
    pub fn check(&self) -> Result<()> {
        match (self.diverged_at, self.rows.last()) {
            (Some(t), Some(r)) => Err(Error::Diverged { t, phi: r.state.phi }),
            _ => Ok(()),
        }
    }
}

struct ImuChannel {
    placement: ImuPlacement,
    estimator: Estimator,
    noise: Option<NoiseInjector>,
}

impl ImuChannel {
    fn new(placement: ImuPlacement, cfg: &ClosedLoopConfig, seed_offset: u64) -> Result<Self> {
        let noise = if cfg.noise.is_zero() {
            None
        } else {
            let model = NoiseModel {
                seed: cfg.noise.seed.wrapping_add(seed_offset),
                ..cfg.noise
            };
            Some(model.injector()?)
        };
        Ok(ImuChannel {
            placement,
            estimator: Estimator::new(cfg.feedback.filter(), Quaternion::from_roll(cfg.initial.phi))?,
            noise,
        })
    }

    fn sample(&mut self, gravity: f64, t: f64, state: RollState) -> ImuSample {
        let mut s = self.placement.measure(gravity, t, state);
        if let Some(n) = &mut self.noise {
            n.corrupt(&mut s);
        }
        s
    }
}

/// Integrates the loop with one RK4 step per `dt`. Current and measurements
/// are held over each step; each IMU's filter consumes its own sample.
pub fn run_closed_loop(cfg: &ClosedLoopConfig) -> Result<ClosedLoopRun> {
    cfg.validate()?;
    let mut lower = ImuChannel::new(cfg.lower, cfg, 0)?;
    let mut upper = ImuChannel::new(cfg.upper, cfg, 1)?;
    let ctl = &cfg.controller;
    let steps = (cfg.t_end / cfg.dt * (1.0 + 1e-12)).floor() as usize;
    let mut state = cfg.initial;
    let mut integral = 0.0;
    let mut rows = Vec::with_capacity(steps + 1);
    let mut diverged_at = None;

    for k in 0..=steps {
        let t = k as f64 * cfg.dt;
        let active = cfg.schedule.active(t);
        let roll_hat_lower = lower.estimator.euler().roll;
        let roll_hat_upper = upper.estimator.euler().roll;

        // the controller needs the gyro before the filters see the new sample,
        // so draw both samples with the provisional acceleration and redo the
        // accelerometer once the current is known
        let provisional = RollState {
            angle: state.phi,
            rate: state.phi_dot,
            accel: 0.0,
        };
        let gyro_lower = lower.sample(cfg.plant.gravity, t, provisional);
        let gyro_upper = upper.sample(cfg.plant.gravity, t, provisional);
        let (roll, rate) = match (cfg.feedback, active) {
            (Feedback::TrueState, _) => (state.phi, state.phi_dot),
            (_, Placement::Lower) => (roll_hat_lower, gyro_lower.gyro[0]),
            (_, Placement::Upper) => (roll_hat_upper, gyro_upper.gyro[0]),
        };
        let raw = ctl.command(roll, rate, state.wheel_speed, integral);
        let current = raw.clamp(-ctl.current_limit, ctl.current_limit);

        let phi_ddot = plant_derivative(&cfg.plant, &state, current)[1];
        let lever = |p: &ImuPlacement| p.lever_arm / cfg.plant.gravity * phi_ddot;
        let mut s_lower = gyro_lower;
        s_lower.accel = with_lever(s_lower.accel, lever(&cfg.lower), cfg.lower.accel_offset);
        let mut s_upper = gyro_upper;
        s_upper.accel = with_lever(s_upper.accel, lever(&cfg.upper), cfg.upper.accel_offset);

        rows.push(ClosedLoopRow {
            t,
            state,
            current,
            active,
            roll_hat_lower,
            roll_hat_upper,
            imu_lower: s_lower,
            imu_upper: s_upper,
        });
        if state.phi.abs() > FALL_ANGLE {
            diverged_at = Some(t);
            break;
        }
        if k == steps {
            break;
        }

        lower.estimator.update(&s_lower, cfg.dt);
        upper.estimator.update(&s_upper, cfg.dt);
        if raw.abs() < ctl.current_limit {
            integral += state.wheel_speed * cfg.dt;
        }
        let x = rk4(&state.to_array(), cfg.dt, |x| {
            plant_derivative(&cfg.plant, &PlantState::from_array(*x), current)
        });
        state = PlantState::from_array(x);
    }
    Ok(ClosedLoopRun { rows, diverged_at })
}

/// Adds the tangential lever term `−(l/g)φ̈` along the body y axis, expressed
/// in the (offset-rolled) accelerometer frame.
fn with_lever(a: [f64; 3], lever: f64, offset: f64) -> [f64; 3] {
    let (s, c) = offset.sin_cos();
    [a[0], a[1] - c * lever, a[2] + s * lever]
}

/// Standard deviation of `φ̇` over `[t0, t1)`. Infinite if the run fell
/// before `t1`.
pub fn oscillation_metric(run: &ClosedLoopRun, t0: f64, t1: f64) -> f64 {
    if run.diverged_at.is_some_and(|t| t < t1) {
        return f64::INFINITY;
    }
    let v: Vec<f64> = run
        .rows
        .iter()
        .filter(|r| r.t >= t0 && r.t < t1)
        .map(|r| r.state.phi_dot)
        .collect();
    if v.is_empty() {
        return f64::NAN;
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Oscillation on the upper IMU (`[12, 20)` s) relative to the lower-IMU
/// baseline (`[2, 10)` s) under the default schedule.
pub fn switch_ratio(run: &ClosedLoopRun) -> f64 {
    oscillation_metric(run, 12.0, 20.0) / oscillation_metric(run, 2.0, 10.0).max(1e-12)
}

/// Eigenvalues of the loop linearized about upright.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginReport {
    pub eigenvalues: Vec<Complex64>,
    /// Largest real part; negative means asymptotically stable.
    pub spectral_abscissa: f64,
    /// Pole-zero pairs removed from the filter transfer function first.
    pub cancelled: Vec<Complex64>,
}

/// Linearized filter model used by [`closed_loop_margin`].
fn filter_tf(feedback: Feedback, op: &OperatingPoint) -> RationalTf {
    match feedback {
        Feedback::TrueState => RationalTf::unity(),
        Feedback::Estimate(FilterKind::Atan2) => atan_tf(op),
        Feedback::Estimate(FilterKind::Mahony(g)) => mahony_tf(op, &g),
        // the sliding-surface model does not depend on β
        Feedback::Estimate(FilterKind::Madgwick { .. }) => madgwick_sliding_tf(op),
    }
}

/// Linearizes plant, unsaturated controller and filter about upright.
///
/// The filter transfer function `G = N/D` (common factors cancelled) is split
/// into `Q(s) + R(s)/D(s)` with `deg Q ≤ 2`; `Q` acts on `φ, φ̇, φ̈` directly
/// and `R/D` gets a controllable canonical realization. A `φ̈` term in `Q`
/// creates an algebraic loop through the current, which is solved exactly.
/// State: `(φ, φ̇, ω_w, ∫ω_w, filter states…)`.
pub fn closed_loop_margin(
    plant: &ReactionWheelPlant,
    controller: &CascadedController,
    placement: &ImuPlacement,
    feedback: Feedback,
) -> Result<MarginReport> {
    plant.validate()?;
    controller.validate()?;
    placement.validate()?;
    let op = OperatingPoint::new(0.0, placement.lever_arm, plant.gravity)?;
    let (tf, cancelled) = filter_tf(feedback, &op).cancel_common_factors();
    let lead = *tf.den().last().expect("nonzero denominator");
    let den = poly::scale(tf.den(), 1.0 / lead);
    let num = poly::scale(tf.num(), 1.0 / lead);
    let (q, r) = poly::div_rem(&num, &den);
    if q.len() > 3 {
        return Err(Error::InvalidParameter(
            "filter transfer function has more than two excess zeros".into(),
        ));
    }
    let qc = |k: usize| q.get(k).copied().unwrap_or(0.0);
    let nf = den.len() - 1;
    let n = 4 + nf;

    let unit = |k: usize| {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        v
    };
    // φ̂ = h·x + q₂ φ̈
    let mut h = vec![0.0; n];
    h[0] = qc(0);
    h[1] = qc(1);
    for (k, rk) in r.iter().enumerate() {
        h[4 + k] = *rk;
    }
    let c = controller;
    // i = u·x + K_φ q₂ φ̈
    let u: Vec<f64> = (0..n)
        .map(|k| {
            c.roll_p * h[k]
                + match k {
                    1 => c.roll_d,
                    2 => c.wheel_p,
                    3 => c.wheel_i,
                    _ => 0.0,
                }
        })
        .collect();
    let jb = plant.body_inertia;
    let beta = plant.torque_constant / jb;
    let mut p = vec![0.0; n];
    p[0] = plant.gravity_stiffness() / jb;
    p[1] = -plant.body_friction / jb;
    p[2] = plant.wheel_friction / jb;
    let loop_gain = 1.0 + beta * c.roll_p * qc(2);
    if loop_gain.abs() < 1e-12 {
        return Err(Error::InvalidParameter(
            "ill-posed loop: the estimate feeds back on its own acceleration with unit gain".into(),
        ));
    }
    let a_row: Vec<f64> = (0..n).map(|k| (p[k] - beta * u[k]) / loop_gain).collect();
    let i_row: Vec<f64> = (0..n).map(|k| u[k] + c.roll_p * qc(2) * a_row[k]).collect();

    let mut a = DMatrix::<f64>::zeros(n, n);
    a.row_mut(0).copy_from_slice(&unit(1));
    a.row_mut(1).copy_from_slice(&a_row);
    let wheel: Vec<f64> = (0..n)
        .map(|k| {
            (plant.torque_constant * i_row[k] - if k == 2 { plant.wheel_friction } else { 0.0 })
                / plant.wheel_inertia
                - a_row[k]
        })
        .collect();
    a.row_mut(2).copy_from_slice(&wheel);
    a.row_mut(3).copy_from_slice(&unit(2));
    for k in 0..nf {
        let row = 4 + k;
        if k + 1 < nf {
            a[(row, row + 1)] = 1.0;
        } else {
            for j in 0..nf {
                a[(row, 4 + j)] = -den[j];
            }
            a[(row, 0)] = 1.0;
        }
    }
    let eigenvalues: Vec<Complex64> = a.complex_eigenvalues().iter().copied().collect();
    let spectral_abscissa = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(MarginReport {
        eigenvalues,
        spectral_abscissa,
        cancelled,
    })
}
