//! Transfer functions derived from the linearized filter dynamics rather than
//! from closed forms. These serve as independent checks of the closed forms
//! in [`super::zeros`].
//!
//! Mahony: states `x = (q̂, ζ)` (7), inputs `u = (ω, ā)` (6). About the
//! operating point `q̂ = q_op`, `ζ = 0`, `ā = v(q_op)`:
//!
//! ```text
//! Δq̇ = ½ Ξ(q_op) (Δω + Δζ + k_p Δe)
//! Δζ̇ = k_i Δe
//! Δe  = [ā]× J_v Δq − [v]× Δā
//! ```
//!
//! with `Ξ(q)` the last three columns of the left-multiplication matrix of `q`
//! and `J_v` the Jacobian of the gravity direction. The roll perturbation
//! enters as `Δω₁ = sΔφ` and `Δā = (∂ā/∂φ + ∂ā/∂φ̈ s²) Δφ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::poly;
use super::tf::{RationalTf, POLE_ON_AXIS_TOLERANCE};
use super::OperatingPoint;
use crate::error::{Error, Result};
use crate::filters::{gravity_direction_jacobian, MahonyGains};
use crate::quat::{Quaternion, Vec3};

/// Relative residual below which a Krylov vector is treated as dependent.
const RANK_TOLERANCE: f64 = 1e-9;

fn skew(v: Vec3) -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0])
}

/// Columns 1..3 of the left-multiplication matrix: `q ⊗ (0, u) = Ξ(q) u`.
fn xi(q: Quaternion) -> DMatrix<f64> {
    let Quaternion { w, x, y, z } = q;
    DMatrix::from_row_slice(4, 3, &[-x, -y, -z, w, -z, y, z, w, -x, -y, x, w])
}

fn jv(q: Quaternion) -> DMatrix<f64> {
    let j = gravity_direction_jacobian(q);
    DMatrix::from_fn(3, 4, |r, c| j[r][c])
}

/// Gradient of the scale-invariant roll `atan2(2(wx + yz), w² − x² − y² + z²)`.
fn roll_gradient(q: Quaternion) -> [f64; 4] {
    let Quaternion { w, x, y, z } = q;
    let n = 2.0 * (w * x + y * z);
    let d = w * w - x * x - y * y + z * z;
    let dn = [2.0 * x, 2.0 * w, 2.0 * z, 2.0 * y];
    let dd = [2.0 * w, -2.0 * x, -2.0 * y, 2.0 * z];
    let r2 = n * n + d * d;
    std::array::from_fn(|k| (d * dn[k] - n * dd[k]) / r2)
}

/// Sensitivities of the normalized accelerometer reading to roll and to roll
/// acceleration at the operating point (rate enters only quadratically).
fn accel_sensitivities(op: &OperatingPoint) -> (Vec3, Vec3) {
    let (s, c) = (op.sin(), op.cos());
    let r = op.lever_arm / op.gravity;
    // a = (0, sin φ − rφ̈, cos φ − rφ̇²), projected onto the tangent of the unit sphere
    let a0 = [0.0, s, c];
    let project = |d: Vec3| -> Vec3 {
        let k = d[1] * a0[1] + d[2] * a0[2];
        [d[0], d[1] - k * a0[1], d[2] - k * a0[2]]
    };
    (project([0.0, c, -s]), project([0.0, -r, 0.0]))
}

/// Linearized Mahony system: `A` (7×7), the input vectors multiplying
/// `s⁰, s¹, s²` of the roll perturbation, and the roll output row `C`.
struct MahonyLinearization {
    a: DMatrix<f64>,
    b: [DVector<f64>; 3],
    c: DVector<f64>,
}

fn mahony_linearization(op: &OperatingPoint, gains: &MahonyGains) -> MahonyLinearization {
    let q = Quaternion::from_roll(op.phi_op);
    let v = [0.0, op.sin(), op.cos()];
    let half_xi = xi(q) * 0.5;
    let sa_jv = skew(v) * jv(q);
    let neg_sv = -skew(v);

    let mut a = DMatrix::zeros(7, 7);
    a.view_mut((0, 0), (4, 4)).copy_from(&(&half_xi * gains.kp * &sa_jv));
    a.view_mut((0, 4), (4, 3)).copy_from(&half_xi);
    a.view_mut((4, 0), (3, 4)).copy_from(&(&sa_jv * gains.ki));

    let mut b_omega = DMatrix::zeros(7, 3);
    b_omega.view_mut((0, 0), (4, 3)).copy_from(&half_xi);
    let mut b_accel = DMatrix::zeros(7, 3);
    b_accel.view_mut((0, 0), (4, 3)).copy_from(&(&half_xi * gains.kp * &neg_sv));
    b_accel.view_mut((4, 0), (3, 3)).copy_from(&(&neg_sv * gains.ki));

    let (da_dphi, da_dacc) = accel_sensitivities(op);
    let vec3 = |v: Vec3| DVector::from_column_slice(&v);
    let b = [
        &b_accel * vec3(da_dphi),
        &b_omega * vec3([1.0, 0.0, 0.0]),
        &b_accel * vec3(da_dacc),
    ];

    let g = roll_gradient(q);
    let mut c = DVector::zeros(7);
    c.rows_mut(0, 4).copy_from_slice(&g);
    MahonyLinearization { a, b, c }
}

/// Orthonormal basis of the controllable subspace of `(A, [b₀ b₁ b₂])`.
fn controllable_basis(a: &DMatrix<f64>, b: &[DVector<f64>]) -> DMatrix<f64> {
    let n = a.nrows();
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut frontier: Vec<DVector<f64>> = b.to_vec();
    for _ in 0..n {
        let mut added = Vec::new();
        for v in frontier {
            let mut r = v.clone();
            // two passes of Gram-Schmidt for numerical orthogonality
            for _ in 0..2 {
                for u in &basis {
                    r -= u * u.dot(&r);
                }
            }
            if r.norm() > RANK_TOLERANCE * scale.max(v.norm()) {
                let u = r.normalize();
                basis.push(u.clone());
                added.push(u);
            }
        }
        if added.is_empty() || basis.len() == n {
            break;
        }
        frontier = added.iter().map(|u| a * u).collect();
    }
    DMatrix::from_columns(&basis)
}

/// Characteristic polynomial (monic, ascending) and adjugate coefficients of
/// `sI − A` by Faddeev–LeVerrier: `adj(sI − A) = Σ_{k=1..n} M_k s^{n−k}`.
fn faddeev_leverrier(a: &DMatrix<f64>) -> (Vec<f64>, Vec<DMatrix<f64>>) {
    let n = a.nrows();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut ms = Vec::with_capacity(n);
    let mut m = DMatrix::identity(n, n);
    for k in 1..=n {
        if k > 1 {
            m = a * &m + DMatrix::identity(n, n) * coeffs[n - k + 1];
        }
        coeffs[n - k] = -(a * &m).trace() / k as f64;
        ms.push(m.clone());
    }
    (coeffs, ms)
}

/// Mahony roll transfer function obtained by reducing the linearized
/// seven-state system to its controllable part and expanding
/// `C (sI − A)⁻¹ B u(s)` symbolically.
///
/// With `k_i = 0` the integrator states are unreachable and the result is the
/// reduced (common-factor-free) function.
pub fn mahony_tf_state_space(op: &OperatingPoint, gains: &MahonyGains) -> RationalTf {
    let lin = mahony_linearization(op, gains);
    let v = controllable_basis(&lin.a, &lin.b);
    let n = v.ncols();
    if n == 0 {
        return RationalTf::new(vec![0.0], vec![1.0]).expect("constant");
    }
    let ar = v.transpose() * &lin.a * &v;
    let cr = v.transpose() * &lin.c;
    let (den, ms) = faddeev_leverrier(&ar);
    let mut num = vec![0.0; n + 2];
    for (k, bk) in lin.b.iter().enumerate() {
        let br = v.transpose() * bk;
        for (m, mk) in ms.iter().enumerate() {
            // M_{m+1} multiplies s^{n-1-m}
            num[k + n - 1 - m] += cr.dot(&(mk * &br));
        }
    }
    RationalTf::new(num, den).expect("finite coefficients")
}

/// `C (iωI − A)⁻¹ B u(iω)` for the full linearized Mahony system, by a dense
/// complex solve.
pub fn mahony_response_state_space(op: &OperatingPoint, gains: &MahonyGains, omega: f64) -> Result<Complex64> {
    let lin = mahony_linearization(op, gains);
    let s = Complex64::new(0.0, omega);
    let to_c = |m: &DVector<f64>| m.map(|x| Complex64::new(x, 0.0));
    let rhs = to_c(&lin.b[0]) + to_c(&lin.b[1]) * s + to_c(&lin.b[2]) * (s * s);
    let m = DMatrix::<Complex64>::identity(7, 7) * s - lin.a.map(|x| Complex64::new(x, 0.0));
    let lu = m.lu();
    let x = lu.solve(&rhs).ok_or(Error::PoleOnAxis { omega })?;
    if lu.determinant().norm() < POLE_ON_AXIS_TOLERANCE {
        return Err(Error::PoleOnAxis { omega });
    }
    Ok(to_c(&lin.c).dot(&x))
}

/// Madgwick sliding-surface transfer function from the linearized optimality
/// condition `∇f = 2Jᵀ(v(q̂) − ā) = 0`.
///
/// Restricted to the two quaternion components moved by roll, the condition
/// reads `H Δq + M Δā = 0` with `H = 2JᵀJ` and `M = −2Jᵀ`; the estimate is
/// the roll of the solution.
pub fn sliding_surface_tf(op: &OperatingPoint) -> Result<RationalTf> {
    let q = Quaternion::from_roll(op.phi_op);
    let j = jv(q);
    let jr = j.columns(0, 2).into_owned();
    let h = jr.transpose() * &jr * 2.0;
    let m = jr.transpose() * -2.0;
    let h_inv = h
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("singular sliding-surface Hessian".into()))?;
    let g = roll_gradient(q);
    let c = DVector::from_column_slice(&g[0..2]);
    let (da_dphi, da_dacc) = accel_sensitivities(op);
    let gain = |da: Vec3| -> f64 {
        let dq = -(&h_inv * &m * DVector::from_column_slice(&da));
        c.dot(&dq)
    };
    let (k0, k2) = (gain(da_dphi), gain(da_dacc));
    RationalTf::new(poly::trim(&[k0, 0.0, k2], 0.0), vec![1.0])
}
