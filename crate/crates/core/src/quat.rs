//! Unit-quaternion algebra and quaternion/Euler conversions.
//!
//! Components are scalar-first, `(w, x, y, z)`. A quaternion `q` maps body
//! vectors to the inertial frame by the sandwich `v_I = q ⊗ (0, v_K) ⊗ q*`;
//! [`rotate_vector`] applies the conjugate sandwich `q* ⊗ (0, v) ⊗ q`, which
//! expresses an inertial vector in the body frame. With this convention
//! `rotate_vector(a ⊗ b, v) == rotate_vector(b, rotate_vector(a, v))`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Plain 3-vector.
pub type Vec3 = [f64; 3];

/// Tolerance on `|‖q‖ - 1|` accepted by operations that require a unit quaternion.
pub const UNIT_TOLERANCE: f64 = 1e-6;

/// Slack on the arcsin argument before it is treated as a non-unit input.
const ASIN_SLACK: f64 = 1e-9;

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// A quaternion `w + xi + yj + zk`.
///
/// [`Quaternion::new`] builds an arbitrary quaternion for algebra (rates,
/// products of non-unit values). Orientation-valued paths go through
/// [`Quaternion::unit`] or [`Quaternion::normalized`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// Checked constructor: rejects inputs whose norm is not 1 within [`UNIT_TOLERANCE`].
    pub fn unit(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let q = Quaternion::new(w, x, y, z);
        q.ensure_unit()?;
        Ok(q)
    }

    /// Scales the components to unit norm.
    pub fn normalized(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        Quaternion::new(w, x, y, z).renormalize()
    }

    /// Pure quaternion `(0, v)`.
    pub const fn pure(v: Vec3) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    /// Rotation by `angle` radians about the body x axis.
    pub fn from_roll(angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Quaternion::new(c, s, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn vector(self) -> Vec3 {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn scale(self, k: f64) -> Self {
        Quaternion::new(k * self.w, k * self.x, k * self.y, k * self.z)
    }

    pub fn dot(self, other: Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn renormalize(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn is_unit(self, tolerance: f64) -> bool {
        (self.norm() - 1.0).abs() <= tolerance
    }

    pub fn ensure_unit(self) -> Result<()> {
        if self.is_unit(UNIT_TOLERANCE) {
            Ok(())
        } else {
            Err(Error::NonUnitQuaternion {
                norm: self.norm(),
                tolerance: UNIT_TOLERANCE,
            })
        }
    }

    /// Body-frame direction of the inertial z axis, `(q* ⊗ (0,0,0,1) ⊗ q)_{2:4}`.
    ///
    /// Exact expansion of the sandwich for any `q` (it scales with `‖q‖²`).
    pub fn gravity_direction(self) -> Vec3 {
        let Quaternion { w, x, y, z } = self;
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            w * w - x * x - y * y + z * z,
        ]
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product.
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    fn sub(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

/// Roll, pitch and yaw in radians (ZYX order).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerAngles {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl EulerAngles {
    pub const fn new(roll: f64, pitch: f64, yaw: f64) -> Self {
        EulerAngles { roll, pitch, yaw }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.roll, self.pitch, self.yaw]
    }
}

pub fn quat_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

pub fn quat_conj(q: Quaternion) -> Quaternion {
    q.conj()
}

/// Vector part of `q* ⊗ (0, v) ⊗ q`.
pub fn rotate_vector(q: Quaternion, v: Vec3) -> Result<Vec3> {
    q.ensure_unit()?;
    Ok((q.conj() * Quaternion::pure(v) * q).vector())
}

pub fn quat_to_euler(q: Quaternion) -> Result<EulerAngles> {
    q.ensure_unit()?;
    let Quaternion {
        w: q1,
        x: q2,
        y: q3,
        z: q4,
    } = q;
    let roll = f64::atan2(q1 * q2 + q3 * q4, 0.5 - q2 * q2 - q3 * q3);
    let s = 2.0 * (q1 * q3 - q2 * q4);
    if s.abs() > 1.0 + ASIN_SLACK {
        return Err(Error::NonUnitQuaternion {
            norm: q.norm(),
            tolerance: UNIT_TOLERANCE,
        });
    }
    let pitch = s.clamp(-1.0, 1.0).asin();
    let yaw = f64::atan2(q1 * q4 + q2 * q3, 0.5 - q3 * q3 - q4 * q4);
    Ok(EulerAngles::new(roll, pitch, yaw))
}

pub fn euler_to_quat(e: EulerAngles) -> Quaternion {
    let (sr, cr) = (0.5 * e.roll).sin_cos();
    let (sp, cp) = (0.5 * e.pitch).sin_cos();
    let (sy, cy) = (0.5 * e.yaw).sin_cos();
    Quaternion::new(
        cr * cp * cy + sr * sp * sy,
        sr * cp * cy - cr * sp * sy,
        cr * sp * cy + sr * cp * sy,
        cr * cp * sy - sr * sp * cy,
    )
}

/// Wraps an angle onto `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}
