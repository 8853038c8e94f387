//! C ABI for the `leverarm` estimators and analysis routines.
//!
//! Filters live behind an opaque [`LeverarmFilter`] handle created by one of
//! the `leverarm_filter_new_*` functions and released with
//! [`leverarm_filter_free`]. Every fallible function returns a
//! [`LeverarmStatus`]; outputs are written through caller-owned pointers only
//! on success. Quaternions are scalar-first `[w, x, y, z]`, angles in rad,
//! acceleration in units of g.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use leverarm::analysis::{atan_zeros, freq_response, mahony_tf, mahony_zeros, OperatingPoint, RationalTf, ZeroSet};
use leverarm::filters::{Estimator, FilterKind, MahonyGains};
use leverarm::imu::{measure, PendulumConfig, RollState};
use leverarm::{Error, ImuSample, Quaternion};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeverarmStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    NonUnitQuaternion = 3,
    BufferTooSmall = 4,
    PoleOnAxis = 5,
    Internal = 99,
}

impl From<&Error> for LeverarmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonUnitQuaternion { .. } | Error::ZeroQuaternion => LeverarmStatus::NonUnitQuaternion,
            Error::PoleOnAxis { .. } => LeverarmStatus::PoleOnAxis,
            _ => LeverarmStatus::InvalidArgument,
        }
    }
}

/// Opaque running estimator.
pub struct LeverarmFilter {
    inner: Estimator,
}

fn guard(f: impl FnOnce() -> Result<(), LeverarmStatus>) -> LeverarmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LeverarmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => LeverarmStatus::Internal,
    }
}

unsafe fn read<const N: usize>(p: *const f64) -> Result<[f64; N], LeverarmStatus> {
    if p.is_null() {
        return Err(LeverarmStatus::NullPointer);
    }
    let mut out = [0.0; N];
    out.copy_from_slice(std::slice::from_raw_parts(p, N));
    Ok(out)
}

unsafe fn write<const N: usize>(p: *mut f64, v: [f64; N]) -> Result<(), LeverarmStatus> {
    if p.is_null() {
        return Err(LeverarmStatus::NullPointer);
    }
    std::slice::from_raw_parts_mut(p, N).copy_from_slice(&v);
    Ok(())
}

fn op(phi_op: f64, lever_arm: f64, gravity: f64) -> Result<OperatingPoint, LeverarmStatus> {
    OperatingPoint::new(phi_op, lever_arm, gravity).map_err(|e| (&e).into())
}

unsafe fn new_filter(kind: FilterKind, q0: *const f64, out: *mut *mut LeverarmFilter) -> Result<(), LeverarmStatus> {
    if out.is_null() {
        return Err(LeverarmStatus::NullPointer);
    }
    let q0 = if q0.is_null() {
        Quaternion::IDENTITY
    } else {
        Quaternion::from_array(read::<4>(q0)?)
    };
    let inner = Estimator::new(kind, q0).map_err(|e| LeverarmStatus::from(&e))?;
    *out = Box::into_raw(Box::new(LeverarmFilter { inner }));
    Ok(())
}

/// Creates a Mahony filter. `q0` may be null for the identity.
///
/// # Safety
/// `q0` is null or points to 4 doubles; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn leverarm_filter_new_mahony(
    kp: f64,
    ki: f64,
    q0: *const f64,
    out: *mut *mut LeverarmFilter,
) -> LeverarmStatus {
    guard(|| {
        let gains = MahonyGains::new(kp, ki).map_err(|e| LeverarmStatus::from(&e))?;
        new_filter(FilterKind::Mahony(gains), q0, out)
    })
}

/// Creates a Madgwick filter. `q0` may be null for the identity.
///
/// # Safety
/// `q0` is null or points to 4 doubles; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn leverarm_filter_new_madgwick(
    beta: f64,
    q0: *const f64,
    out: *mut *mut LeverarmFilter,
) -> LeverarmStatus {
    guard(|| new_filter(FilterKind::Madgwick { beta }, q0, out))
}

/// Creates the memoryless atan2 roll estimator.
///
/// # Safety
/// `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn leverarm_filter_new_atan2(out: *mut *mut LeverarmFilter) -> LeverarmStatus {
    guard(|| new_filter(FilterKind::Atan2, std::ptr::null(), out))
}

/// Releases a filter. Null is ignored.
///
/// # Safety
/// `filter` is null or was returned by a `leverarm_filter_new_*` function and
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn leverarm_filter_free(filter: *mut LeverarmFilter) {
    if !filter.is_null() {
        drop(Box::from_raw(filter));
    }
}

/// Advances the filter by `dt` seconds with one sample.
///
/// # Safety
/// `filter` is a live handle; `accel` and `gyro` point to 3 doubles each.
#[no_mangle]
pub unsafe extern "C" fn leverarm_filter_update(
    filter: *mut LeverarmFilter,
    accel: *const f64,
    gyro: *const f64,
    dt: f64,
) -> LeverarmStatus {
    guard(|| {
        let f = filter.as_mut().ok_or(LeverarmStatus::NullPointer)?;
        let sample = ImuSample::new(0.0, read::<3>(accel)?, read::<3>(gyro)?);
        if !(dt >= 0.0 && dt.is_finite()) || !sample.is_finite() {
            return Err(LeverarmStatus::InvalidArgument);
        }
        f.inner.update(&sample, dt);
        Ok(())
    })
}

/// Current estimate as `[w, x, y, z]`.
///
/// # Safety
/// `filter` is a live handle; `q_out` points to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn leverarm_filter_quaternion(filter: *const LeverarmFilter, q_out: *mut f64) -> LeverarmStatus {
    guard(|| {
        let f = filter.as_ref().ok_or(LeverarmStatus::NullPointer)?;
        write(q_out, f.inner.quaternion().to_array())
    })
}

/// Current estimate as `[roll, pitch, yaw]`, rad.
///
/// # Safety
/// `filter` is a live handle; `euler_out` points to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn leverarm_filter_euler(filter: *const LeverarmFilter, euler_out: *mut f64) -> LeverarmStatus {
    guard(|| {
        let f = filter.as_ref().ok_or(LeverarmStatus::NullPointer)?;
        write(euler_out, f.inner.euler().to_array())
    })
}

/// Accelerometer (g) and gyroscope (rad/s) reading of an IMU at height `l`
/// on a body rolling with the given angle, rate and acceleration.
///
/// # Safety
/// `accel_out` and `gyro_out` point to 3 writable doubles each.
#[no_mangle]
pub unsafe extern "C" fn leverarm_measure(
    lever_arm: f64,
    gravity: f64,
    phi: f64,
    phi_dot: f64,
    phi_ddot: f64,
    accel_out: *mut f64,
    gyro_out: *mut f64,
) -> LeverarmStatus {
    guard(|| {
        let cfg = PendulumConfig::new(lever_arm, gravity).map_err(|e| LeverarmStatus::from(&e))?;
        let (a, g) = measure(
            &cfg,
            RollState {
                angle: phi,
                rate: phi_dot,
                accel: phi_ddot,
            },
        );
        write(accel_out, a)?;
        write(gyro_out, g)
    })
}

unsafe fn write_zeros(z: &ZeroSet, re: *mut f64, im: *mut f64, capacity: usize, count: *mut usize) -> Result<(), LeverarmStatus> {
    if count.is_null() {
        return Err(LeverarmStatus::NullPointer);
    }
    *count = z.len();
    if z.len() > capacity {
        return Err(LeverarmStatus::BufferTooSmall);
    }
    if z.is_empty() {
        return Ok(());
    }
    if re.is_null() || im.is_null() {
        return Err(LeverarmStatus::NullPointer);
    }
    for (k, r) in z.roots().iter().enumerate() {
        *re.add(k) = r.re;
        *im.add(k) = r.im;
    }
    Ok(())
}

/// Zeros of the linearized atan2 roll estimator. `*count` receives the number
/// of zeros (0 or 2) even when the buffers are too small.
///
/// # Safety
/// `re_out`/`im_out` point to `capacity` writable doubles; `count` is writable.
#[no_mangle]
pub unsafe extern "C" fn leverarm_atan_zeros(
    phi_op: f64,
    lever_arm: f64,
    gravity: f64,
    re_out: *mut f64,
    im_out: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> LeverarmStatus {
    guard(|| write_zeros(&atan_zeros(&op(phi_op, lever_arm, gravity)?), re_out, im_out, capacity, count))
}

/// Zeros of the linearized integrator-free Mahony roll estimator.
///
/// # Safety
/// As for [`leverarm_atan_zeros`].
#[no_mangle]
pub unsafe extern "C" fn leverarm_mahony_zeros(
    phi_op: f64,
    lever_arm: f64,
    gravity: f64,
    kp: f64,
    re_out: *mut f64,
    im_out: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> LeverarmStatus {
    guard(|| {
        let z = mahony_zeros(&op(phi_op, lever_arm, gravity)?, kp).map_err(|e| LeverarmStatus::from(&e))?;
        write_zeros(&z, re_out, im_out, capacity, count)
    })
}

/// Mahony roll transfer function coefficients, ascending powers of `s`.
/// `num_out` needs room for 4 doubles and `den_out` for 3; the used lengths
/// are written to `num_len` and `den_len`.
///
/// # Safety
/// Pointers are writable with the sizes above.
#[no_mangle]
pub unsafe extern "C" fn leverarm_mahony_tf(
    phi_op: f64,
    lever_arm: f64,
    gravity: f64,
    kp: f64,
    ki: f64,
    num_out: *mut f64,
    num_len: *mut usize,
    den_out: *mut f64,
    den_len: *mut usize,
) -> LeverarmStatus {
    guard(|| {
        let gains = MahonyGains::new(kp, ki).map_err(|e| LeverarmStatus::from(&e))?;
        let tf = mahony_tf(&op(phi_op, lever_arm, gravity)?, &gains);
        if num_out.is_null() || num_len.is_null() || den_out.is_null() || den_len.is_null() {
            return Err(LeverarmStatus::NullPointer);
        }
        let mut num = [0.0; 4];
        num[..tf.num().len()].copy_from_slice(tf.num());
        let mut den = [0.0; 3];
        den[..tf.den().len()].copy_from_slice(tf.den());
        write(num_out, num)?;
        write(den_out, den)?;
        *num_len = tf.num().len();
        *den_len = tf.den().len();
        Ok(())
    })
}

/// `num(iω)/den(iω)` for ascending coefficient arrays.
///
/// # Safety
/// `num`/`den` point to `num_len`/`den_len` doubles; `re_out`, `im_out` are writable.
#[no_mangle]
pub unsafe extern "C" fn leverarm_freq_response(
    num: *const f64,
    num_len: usize,
    den: *const f64,
    den_len: usize,
    omega: f64,
    re_out: *mut f64,
    im_out: *mut f64,
) -> LeverarmStatus {
    guard(|| {
        if num.is_null() || den.is_null() || re_out.is_null() || im_out.is_null() {
            return Err(LeverarmStatus::NullPointer);
        }
        let n = std::slice::from_raw_parts(num, num_len).to_vec();
        let d = std::slice::from_raw_parts(den, den_len).to_vec();
        let tf = RationalTf::new(n, d).map_err(|e| LeverarmStatus::from(&e))?;
        let g = freq_response(&tf, omega).map_err(|e| LeverarmStatus::from(&e))?;
        *re_out = g.re;
        *im_out = g.im;
        Ok(())
    })
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn leverarm_status_message(status: LeverarmStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        LeverarmStatus::Ok => b"ok\0",
        LeverarmStatus::InvalidArgument => b"invalid argument\0",
        LeverarmStatus::NullPointer => b"null pointer\0",
        LeverarmStatus::NonUnitQuaternion => b"quaternion is not unit norm\0",
        LeverarmStatus::BufferTooSmall => b"output buffer too small\0",
        LeverarmStatus::PoleOnAxis => b"pole on the imaginary axis\0",
        LeverarmStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}
