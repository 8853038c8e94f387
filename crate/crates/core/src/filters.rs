//! Attitude estimators: raw atan2 roll, the Mahony PI complementary filter and
//! the Madgwick normalized-gradient filter.
//!
//! Both quaternion filters are continuous-time ODEs advanced with one RK4 step
//! per sample (measurement held over the step), then renormalized.

use crate::error::{Error, Result};
use crate::imu::{normalize_accel, ImuSample};
use crate::ode::rk4;
use crate::quat::{cross, dot, euler_to_quat, quat_to_euler, EulerAngles, Quaternion, Vec3};

/// Gradient norms below this are treated as the optimum: no correction.
pub const GRADIENT_DEAD_ZONE: f64 = 1e-12;

/// Roll recovered from a normalized accelerometer reading, `atan2(ā₂, ā₃)`.
pub fn atan2_roll(a: Vec3) -> Result<f64> {
    if a[1] == 0.0 && a[2] == 0.0 {
        return Err(Error::DegenerateRoll);
    }
    Ok(a[1].atan2(a[2]))
}

/// Tilt-only orientation implied by a normalized accelerometer reading.
pub fn accel_orientation(a: Vec3) -> Result<EulerAngles> {
    let roll = atan2_roll(a)?;
    let pitch = (-a[0]).atan2(a[1].hypot(a[2]));
    Ok(EulerAngles::new(roll, pitch, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MahonyGains {
    /// Proportional gain, 1/s.
    pub kp: f64,
    /// Integral gain, 1/s².
    pub ki: f64,
}

impl MahonyGains {
    /// `kp` must be positive; `ki` non-negative.
    pub fn new(kp: f64, ki: f64) -> Result<Self> {
        if !(kp > 0.0 && kp.is_finite()) || !(ki >= 0.0 && ki.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Mahony gains need kp > 0 and ki >= 0 (got kp={kp}, ki={ki}); use gyro_only() for pure integration"
            )));
        }
        Ok(MahonyGains { kp, ki })
    }

    /// `kp = ki = 0`: integrate the gyroscope only.
    pub const fn gyro_only() -> Self {
        MahonyGains { kp: 0.0, ki: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MahonyState {
    pub q: Quaternion,
    /// Integral (bias-correction) state, rad/s.
    pub zeta: Vec3,
}

impl MahonyState {
    pub fn new(q: Quaternion) -> Result<Self> {
        q.ensure_unit()?;
        Ok(MahonyState { q, zeta: [0.0; 3] })
    }

    fn pack(&self) -> [f64; 7] {
        let q = self.q;
        [q.w, q.x, q.y, q.z, self.zeta[0], self.zeta[1], self.zeta[2]]
    }

    fn unpack(x: &[f64; 7]) -> (Quaternion, Vec3) {
        (Quaternion::new(x[0], x[1], x[2], x[3]), [x[4], x[5], x[6]])
    }
}

/// Mahony correction term `ā × (q̂* ⊗ e_z ⊗ q̂)_{2:4}`.
pub fn mahony_error(q: Quaternion, a_bar: Vec3) -> Vec3 {
    cross(a_bar, q.gravity_direction())
}

fn mahony_rates(
    q: Quaternion,
    zeta: Vec3,
    gyro: Vec3,
    a_bar: Option<Vec3>,
    gains: &MahonyGains,
) -> (Quaternion, Vec3) {
    let e = a_bar.map_or([0.0; 3], |a| mahony_error(q, a));
    let omega = [
        gyro[0] + zeta[0] + gains.kp * e[0],
        gyro[1] + zeta[1] + gains.kp * e[1],
        gyro[2] + zeta[2] + gains.kp * e[2],
    ];
    let q_dot = (q * Quaternion::pure(omega)).scale(0.5);
    (q_dot, [gains.ki * e[0], gains.ki * e[1], gains.ki * e[2]])
}

/// Time derivative of `(q̂, ζ)`. Samples whose acceleration is near zero skip
/// the correction (`e = 0`).
pub fn mahony_derivative(
    state: &MahonyState,
    sample: &ImuSample,
    gains: &MahonyGains,
) -> (Quaternion, Vec3) {
    let a_bar = normalize_accel(sample.accel).ok();
    mahony_rates(state.q, state.zeta, sample.gyro, a_bar, gains)
}

pub fn mahony_step(
    state: &MahonyState,
    sample: &ImuSample,
    gains: &MahonyGains,
    dt: f64,
) -> MahonyState {
    let a_bar = normalize_accel(sample.accel).ok();
    let x = rk4(&state.pack(), dt, |x| {
        let (q, zeta) = MahonyState::unpack(x);
        let (qd, zd) = mahony_rates(q, zeta, sample.gyro, a_bar, gains);
        [qd.w, qd.x, qd.y, qd.z, zd[0], zd[1], zd[2]]
    });
    let (q, zeta) = MahonyState::unpack(&x);
    MahonyState {
        q: q.renormalize().unwrap_or(state.q),
        zeta,
    }
}

/// `‖q̂* ⊗ (0,0,0,1) ⊗ q̂ − (0, ā)‖²`.
pub fn madgwick_cost(q: Quaternion, a_bar: Vec3) -> f64 {
    let v = q.gravity_direction();
    let d = [v[0] - a_bar[0], v[1] - a_bar[1], v[2] - a_bar[2]];
    dot(d, d)
}

/// Jacobian of [`Quaternion::gravity_direction`] with respect to `(w, x, y, z)`.
pub(crate) fn gravity_direction_jacobian(q: Quaternion) -> [[f64; 4]; 3] {
    let Quaternion { w, x, y, z } = q;
    [
        [-2.0 * y, 2.0 * z, -2.0 * w, 2.0 * x],
        [2.0 * x, 2.0 * w, 2.0 * z, 2.0 * y],
        [2.0 * w, -2.0 * x, -2.0 * y, 2.0 * z],
    ]
}

/// Analytic gradient of [`madgwick_cost`], `2 Jᵀ (v(q̂) − ā)`.
pub fn madgwick_gradient(q: Quaternion, a_bar: Vec3) -> [f64; 4] {
    let v = q.gravity_direction();
    let d = [v[0] - a_bar[0], v[1] - a_bar[1], v[2] - a_bar[2]];
    let j = gravity_direction_jacobian(q);
    let mut g = [0.0; 4];
    for (c, gc) in g.iter_mut().enumerate() {
        *gc = 2.0 * (j[0][c] * d[0] + j[1][c] * d[1] + j[2][c] * d[2]);
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MadgwickState {
    pub q: Quaternion,
    /// Step size, 1/s.
    pub beta: f64,
}

impl MadgwickState {
    pub fn new(q: Quaternion, beta: f64) -> Result<Self> {
        q.ensure_unit()?;
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Madgwick step size must be >= 0, got {beta}"
            )));
        }
        Ok(MadgwickState { q, beta })
    }
}

fn madgwick_rate(q: Quaternion, gyro: Vec3, a_bar: Option<Vec3>, beta: f64, layer: f64) -> Quaternion {
    let q_dot = (q * Quaternion::pure(gyro)).scale(0.5);
    let Some(a) = a_bar else { return q_dot };
    if beta == 0.0 {
        return q_dot;
    }
    let g = madgwick_gradient(q, a);
    let n = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]).sqrt();
    if n < GRADIENT_DEAD_ZONE {
        return q_dot;
    }
    let k = beta / n.max(layer);
    q_dot - Quaternion::from_array(g).scale(k)
}

/// One step of `q̂' = ½ q̂ ⊗ (0, ω) − β ∇f/‖∇f‖`.
///
/// The normalized gradient is discontinuous at the optimum, and RK4 applied to
/// it stalls anywhere within roughly `β·dt` of the surface `∇f = 0` (the four
/// stage slopes cancel). Inside a boundary layer `‖∇f‖ < 8·β·dt` the
/// correction is therefore `−∇f/(8·dt)`: near the optimum `‖∇f‖ ≈ 8‖Δq̂‖`, so
/// this is a linear pull toward the surface with time constant `dt`, and the
/// continuous-time dynamics are recovered as `dt → 0`.
pub fn madgwick_step(state: &MadgwickState, sample: &ImuSample, dt: f64) -> MadgwickState {
    let a_bar = normalize_accel(sample.accel).ok();
    let layer = 8.0 * state.beta * dt;
    let x = rk4(&state.q.to_array(), dt, |x| {
        madgwick_rate(Quaternion::from_array(*x), sample.gyro, a_bar, state.beta, layer).to_array()
    });
    MadgwickState {
        q: Quaternion::from_array(x).renormalize().unwrap_or(state.q),
        beta: state.beta,
    }
}

/// Which estimator to run, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterKind {
    /// Roll from `atan2(ā₂, ā₃)` per sample; no gyroscope.
    Atan2,
    Mahony(MahonyGains),
    Madgwick { beta: f64 },
}

impl FilterKind {
    pub fn name(&self) -> &'static str {
        match self {
            FilterKind::Atan2 => "atan2",
            FilterKind::Mahony(_) => "mahony",
            FilterKind::Madgwick { .. } => "madgwick",
        }
    }
}

/// A running estimator of any [`FilterKind`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    Atan2 { q: Quaternion },
    Mahony { state: MahonyState, gains: MahonyGains },
    Madgwick { state: MadgwickState },
}

impl Estimator {
    pub fn new(kind: FilterKind, q0: Quaternion) -> Result<Self> {
        q0.ensure_unit()?;
        Ok(match kind {
            FilterKind::Atan2 => Estimator::Atan2 { q: q0 },
            FilterKind::Mahony(gains) => Estimator::Mahony {
                state: MahonyState::new(q0)?,
                gains,
            },
            FilterKind::Madgwick { beta } => Estimator::Madgwick {
                state: MadgwickState::new(q0, beta)?,
            },
        })
    }

    /// Consumes one sample covering an interval of `dt` seconds.
    pub fn update(&mut self, sample: &ImuSample, dt: f64) {
        match self {
            Estimator::Atan2 { q } => {
                // keep the previous estimate on free-fall or degenerate samples
                if let Some(e) = normalize_accel(sample.accel)
                    .ok()
                    .and_then(|a| accel_orientation(a).ok())
                {
                    *q = euler_to_quat(e);
                }
            }
            Estimator::Mahony { state, gains } => *state = mahony_step(state, sample, gains, dt),
            Estimator::Madgwick { state } => *state = madgwick_step(state, sample, dt),
        }
    }

    pub fn quaternion(&self) -> Quaternion {
        match self {
            Estimator::Atan2 { q } => *q,
            Estimator::Mahony { state, .. } => state.q,
            Estimator::Madgwick { state } => state.q,
        }
    }

    pub fn euler(&self) -> EulerAngles {
        // every variant keeps a renormalized quaternion
        quat_to_euler(self.quaternion()).expect("estimator quaternion is unit")
    }
}

/// Runs a filter over time-ordered samples and returns one estimate per sample.
///
/// The first sample only initializes the clock (its estimate is `q̂₀`, except
/// for atan2 which has no memory); each later sample advances the filter over
/// the interval since its predecessor.
pub fn estimate_series(
    kind: FilterKind,
    samples: &[ImuSample],
    q0: Quaternion,
) -> Result<Vec<EulerAngles>> {
    for (i, w) in samples.windows(2).enumerate() {
        if !(w[1].t > w[0].t) {
            return Err(Error::NonMonotonicTime {
                index: i + 1,
                previous: w[0].t,
                current: w[1].t,
            });
        }
    }
    let mut est = Estimator::new(kind, q0)?;
    let mut out = Vec::with_capacity(samples.len());
    let mut prev_t = None;
    for s in samples {
        match prev_t {
            Some(t) => est.update(s, s.t - t),
            None if kind == FilterKind::Atan2 => est.update(s, 0.0),
            None => {}
        }
        prev_t = Some(s.t);
        out.push(est.euler());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imu::{measure_sample, sample_trajectory, Constant, PendulumConfig, RollState, RollTrajectory, Sinusoid};
    use crate::quat::{norm, wrap_angle};
    use proptest::prelude::*;

    fn at_rest(phi: f64) -> ImuSample {
        let cfg = PendulumConfig::normalized(1.0).unwrap();
        measure_sample(&cfg, 0.0, Constant(phi).at(0.0))
    }

    fn roll_of(q: Quaternion) -> f64 {
        quat_to_euler(q).unwrap().roll
    }

    #[test]
    fn atan2_examples() {
        assert_eq!(atan2_roll([0.0, 0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(atan2_roll([0.0, 1.0, 0.0]).unwrap(), std::f64::consts::FRAC_PI_2);
        assert_eq!(atan2_roll([1.0, 0.0, 0.0]), Err(Error::DegenerateRoll));
        // lever-arm error: φ = 0, φ̈ = 0.1, l = 1
        let cfg = PendulumConfig::normalized(1.0).unwrap();
        let s = measure_sample(&cfg, 0.0, RollState { angle: 0.0, rate: 0.0, accel: 0.1 });
        let r = atan2_roll(normalize_accel(s.accel).unwrap()).unwrap();
        assert!((r - (-0.1f64).atan2(1.0)).abs() < 1e-15);
        assert!((r + 0.09967).abs() < 1e-5);
    }

    #[test]
    fn atan2_range_includes_pi() {
        assert_eq!(atan2_roll([0.0, 0.0, -1.0]).unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn gains_validation() {
        assert!(MahonyGains::new(0.0, 0.0).is_err());
        assert!(MahonyGains::new(1.0, -1.0).is_err());
        assert!(MahonyGains::new(1.0, 0.0).is_ok());
        assert!(MadgwickState::new(Quaternion::IDENTITY, -1.0).is_err());
        assert!(MahonyState::new(Quaternion::new(2.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn mahony_equilibrium() {
        let gains = MahonyGains::new(3.0, 1.0).unwrap();
        for phi in [0.0, 0.4, 2.0] {
            let st = MahonyState::new(Quaternion::from_roll(phi)).unwrap();
            let (qd, zd) = mahony_derivative(&st, &at_rest(phi), &gains);
            assert!(qd.norm() < 1e-15, "{qd:?}");
            assert!(norm(zd) < 1e-15);
        }
    }

    #[test]
    fn mahony_gyro_only_rate() {
        let q = Quaternion::normalized(0.9, 0.1, -0.2, 0.3).unwrap();
        let st = MahonyState::new(q).unwrap();
        let s = ImuSample::new(0.0, [0.3, 0.1, 0.9], [0.5, -0.2, 0.1]);
        let (qd, zd) = mahony_derivative(&st, &s, &MahonyGains::gyro_only());
        let expected = (q * Quaternion::pure(s.gyro)).scale(0.5);
        assert!((qd - expected).norm() < 1e-15);
        assert_eq!(zd, [0.0; 3]);
    }

    #[test]
    fn mahony_correction_direction() {
        // estimate at roll 0.1, truth at 0, kp = 1: roll rate −sin(0.1)
        let gains = MahonyGains::new(1.0, 0.0).unwrap();
        let st = MahonyState::new(Quaternion::from_roll(0.1)).unwrap();
        let (qd, _) = mahony_derivative(&st, &at_rest(0.0), &gains);
        // body rate from q̇ = ½ q ⊗ (0, ω):  ω = 2 (q* ⊗ q̇)
        let omega = (st.q.conj() * qd).scale(2.0).vector();
        assert!((omega[0] + 0.1f64.sin()).abs() < 1e-15);
        assert!((omega[0] + 0.0998).abs() < 1e-4);
        assert!(omega[1].abs() < 1e-15 && omega[2].abs() < 1e-15);
    }

    #[test]
    fn mahony_skips_correction_in_free_fall() {
        let gains = MahonyGains::new(5.0, 1.0).unwrap();
        let st = MahonyState::new(Quaternion::from_roll(0.3)).unwrap();
        let s = ImuSample::new(0.0, [0.0; 3], [0.2, 0.0, 0.0]);
        let (qd, zd) = mahony_derivative(&st, &s, &gains);
        let expected = (st.q * Quaternion::pure(s.gyro)).scale(0.5);
        assert!((qd - expected).norm() < 1e-15);
        assert_eq!(zd, [0.0; 3]);
    }

    #[test]
    fn mahony_step_at_equilibrium_is_fixed() {
        let gains = MahonyGains::new(2.0, 1.0).unwrap();
        let st = MahonyState::new(Quaternion::IDENTITY).unwrap();
        let next = mahony_step(&st, &at_rest(0.0), &gains, 1e-3);
        assert!((next.q - st.q).norm() < 1e-12);
        assert!(norm(next.zeta) < 1e-12);
    }

    #[test]
    fn mahony_offset_decays_exponentially() {
        let gains = MahonyGains::new(1.0, 0.0).unwrap();
        let mut st = MahonyState::new(Quaternion::from_roll(0.01)).unwrap();
        let s = at_rest(0.0);
        let dt = 1e-3;
        for k in 1..=5000 {
            st = mahony_step(&st, &s, &gains, dt);
            let t = k as f64 * dt;
            assert!(roll_of(st.q).abs() <= 0.01 * (-0.9 * t).exp(), "t={t}");
        }
    }

    #[test]
    fn gyro_only_matches_quaternion_exponential() {
        let mut st = MahonyState::new(Quaternion::IDENTITY).unwrap();
        let s = ImuSample::new(0.0, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
        for _ in 0..1000 {
            st = mahony_step(&st, &s, &MahonyGains::gyro_only(), 1e-3);
        }
        // exp(½·t·(0, ω)) for ω = e_x, t = 1
        let exact = Quaternion::new(0.5f64.cos(), 0.5f64.sin(), 0.0, 0.0);
        assert!((st.q - exact).norm() < 1e-6);
        assert!((roll_of(st.q) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn madgwick_cost_examples() {
        assert_eq!(madgwick_cost(Quaternion::IDENTITY, [0.0, 0.0, 1.0]), 0.0);
        // sandwich oracle: q* ⊗ (0,0,0,1) ⊗ q for q = 1 is (0,0,0,1); minus (0,0,1,0)
        let s = Quaternion::IDENTITY.conj() * Quaternion::pure([0.0, 0.0, 1.0]) * Quaternion::IDENTITY;
        let d = s - Quaternion::pure([0.0, 1.0, 0.0]);
        assert_eq!(madgwick_cost(Quaternion::IDENTITY, [0.0, 1.0, 0.0]), d.norm_squared());
        assert_eq!(madgwick_cost(Quaternion::IDENTITY, [0.0, 1.0, 0.0]), 2.0);
    }

    #[test]
    fn madgwick_gradient_zero_at_optimum() {
        assert_eq!(madgwick_gradient(Quaternion::IDENTITY, [0.0, 0.0, 1.0]), [0.0; 4]);
        for phi in [0.0, 0.3, 1.2, 2.5, std::f64::consts::PI] {
            let a = normalize_accel(at_rest(phi).accel).unwrap();
            let g = madgwick_gradient(Quaternion::from_roll(phi), a);
            assert!(g.iter().all(|v| v.abs() < 1e-15), "{phi}: {g:?}");
        }
    }

    fn finite_difference_gradient(q: Quaternion, a: Vec3) -> [f64; 4] {
        let h = 1e-6;
        let mut g = [0.0; 4];
        for (i, gi) in g.iter_mut().enumerate() {
            let mut p = q.to_array();
            let mut m = q.to_array();
            p[i] += h;
            m[i] -= h;
            *gi = (madgwick_cost(Quaternion::from_array(p), a)
                - madgwick_cost(Quaternion::from_array(m), a))
                / (2.0 * h);
        }
        g
    }

    proptest! {
        #[test]
        fn gradient_matches_finite_differences(
            q in prop::array::uniform4(-1.0..1.0f64),
            a in prop::array::uniform3(-1.0..1.0f64),
        ) {
            let q = Quaternion::from_array(q);
            prop_assume!(q.norm() > 0.1 && norm(a) > 0.1);
            let q = q.renormalize().unwrap();
            let a = normalize_accel(a).unwrap();
            let g = madgwick_gradient(q, a);
            let fd = finite_difference_gradient(q, a);
            let scale = g.iter().map(|v| v.abs()).fold(1.0, f64::max);
            for i in 0..4 {
                prop_assert!((g[i] - fd[i]).abs() < 1e-6 * scale);
            }
        }

        #[test]
        fn cost_is_nonnegative(q in prop::array::uniform4(-1.0..1.0f64), a in prop::array::uniform3(-1.0..1.0f64)) {
            prop_assert!(madgwick_cost(Quaternion::from_array(q), a) >= 0.0);
        }
    }

    #[test]
    fn madgwick_zero_beta_is_gyro_integration() {
        let cfg = PendulumConfig::normalized(0.5).unwrap();
        let samples = sample_trajectory(&cfg, &Sinusoid::new(0.1, 0.4, 2.0), 0.0, 2.0, 1e-3).unwrap();
        let q0 = Quaternion::from_roll(0.1);
        let mut mg = MadgwickState::new(q0, 0.0).unwrap();
        let mut mh = MahonyState::new(q0).unwrap();
        for s in &samples {
            mg = madgwick_step(&mg, &s.sample, 1e-3);
            mh = mahony_step(&mh, &s.sample, &MahonyGains::gyro_only(), 1e-3);
            assert!((mg.q - mh.q).norm() < 1e-12);
        }
    }

    #[test]
    fn madgwick_holds_still_at_optimum() {
        let st = MadgwickState::new(Quaternion::from_roll(0.4), 2.0).unwrap();
        let next = madgwick_step(&st, &at_rest(0.4), 1e-3);
        assert!((next.q - st.q).norm() < 1e-15);
    }

    #[test]
    fn madgwick_converges_to_static_roll() {
        let cfg = PendulumConfig::normalized(1.0).unwrap();
        let s = measure_sample(&cfg, 0.0, Constant(0.3).at(0.0));
        let a_roll = atan2_roll(normalize_accel(s.accel).unwrap()).unwrap();
        let mut st = MadgwickState::new(Quaternion::IDENTITY, 1.0).unwrap();
        let dt = 1e-3;
        let mut reached = None;
        for k in 1..=3000 {
            st = madgwick_step(&st, &s, dt);
            let r = roll_of(st.q);
            if reached.is_none() && (r - 0.3).abs() < 1e-3 {
                reached = Some(k as f64 * dt);
            }
            if reached.is_some() {
                assert!((r - a_roll).abs() < 2e-3);
            }
        }
        assert!(reached.unwrap() <= 1.0);
    }

    #[test]
    fn series_examples() {
        let kind = FilterKind::Mahony(MahonyGains::new(1.0, 0.1).unwrap());
        assert!(estimate_series(kind, &[], Quaternion::IDENTITY).unwrap().is_empty());

        let cfg = PendulumConfig::normalized(0.3).unwrap();
        let data = sample_trajectory(&cfg, &Constant(0.5), 0.0, 1.0, 0.01).unwrap();
        let samples: Vec<_> = data.iter().map(|d| d.sample).collect();
        for kind in [kind, FilterKind::Atan2, FilterKind::Madgwick { beta: 0.5 }] {
            let out = estimate_series(kind, &samples, Quaternion::from_roll(0.5)).unwrap();
            assert_eq!(out.len(), samples.len());
            for e in out {
                assert!((e.roll - 0.5).abs() < 1e-12, "{kind:?} {e:?}");
                assert!(e.pitch.abs() < 1e-12 && e.yaw.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn series_rejects_non_monotonic_time() {
        let s = |t| ImuSample::new(t, [0.0, 0.0, 1.0], [0.0; 3]);
        let err = estimate_series(FilterKind::Atan2, &[s(0.0), s(0.1), s(0.1)], Quaternion::IDENTITY);
        assert!(matches!(err, Err(Error::NonMonotonicTime { index: 2, .. })));
    }

    #[test]
    fn series_equals_manual_loop() {
        let cfg = PendulumConfig::normalized(0.8).unwrap();
        let data = sample_trajectory(&cfg, &Sinusoid::new(0.2, 0.3, 3.0), 0.0, 3.0, 2e-3).unwrap();
        let samples: Vec<_> = data.iter().map(|d| d.sample).collect();
        let gains = MahonyGains::new(4.0, 0.5).unwrap();
        let q0 = Quaternion::from_roll(0.1);
        let out = estimate_series(FilterKind::Mahony(gains), &samples, q0).unwrap();
        let mut st = MahonyState::new(q0).unwrap();
        for k in 0..samples.len() {
            if k > 0 {
                st = mahony_step(&st, &samples[k], &gains, samples[k].t - samples[k - 1].t);
            }
            assert_eq!(out[k], quat_to_euler(st.q).unwrap());
        }
    }

    #[test]
    fn atan2_series_wraps_through_pi() {
        let cfg = PendulumConfig::normalized(0.0).unwrap();
        let data = sample_trajectory(&cfg, &Sinusoid::new(std::f64::consts::PI, 0.2, 1.0), 0.0, 6.0, 0.01).unwrap();
        let samples: Vec<_> = data.iter().map(|d| d.sample).collect();
        let out = estimate_series(FilterKind::Atan2, &samples, Quaternion::IDENTITY).unwrap();
        for (e, d) in out.iter().zip(&data) {
            assert!(wrap_angle(e.roll - d.truth.roll).abs() < 1e-12);
        }
    }
}
