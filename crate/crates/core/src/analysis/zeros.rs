use num_complex::Complex64;

use super::poly::quadratic_roots;
use super::tf::RationalTf;
use super::OperatingPoint;
use crate::error::{Error, Result};
use crate::filters::MahonyGains;

/// Maximum mismatch between a root and the nearest conjugate of another root.
pub const CONJUGATE_TOLERANCE: f64 = 1e-9;

/// Roots of a real polynomial, sorted by descending real part then
/// descending imaginary part.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroSet {
    roots: Vec<Complex64>,
}

impl ZeroSet {
    pub fn new(mut roots: Vec<Complex64>) -> Result<Self> {
        for r in &roots {
            if !(r.re.is_finite() && r.im.is_finite()) {
                return Err(Error::InvalidParameter(format!("non-finite root {r}")));
            }
            let tol = CONJUGATE_TOLERANCE * (1.0 + r.norm());
            if !roots.iter().any(|o| (o.conj() - r).norm() <= tol) {
                return Err(Error::InvalidParameter(format!(
                    "root {r} has no conjugate partner"
                )));
            }
        }
        roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        Ok(ZeroSet { roots })
    }

    pub fn empty() -> Self {
        ZeroSet::default()
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Number of roots with strictly positive real part.
    pub fn right_half_plane_count(&self) -> usize {
        self.roots.iter().filter(|z| z.re > 0.0).count()
    }
}

/// `G(s) = 1 − (l/g)·cos φ_op·s²`.
pub fn atan_tf(op: &OperatingPoint) -> RationalTf {
    RationalTf::new(vec![1.0, 0.0, -op.lc()], vec![1.0]).expect("finite coefficients")
}

/// `±1/√(lc)` for `lc > 0`, `±i/√|lc|` for `lc < 0`, none when `lc = 0`.
pub fn atan_zeros(op: &OperatingPoint) -> ZeroSet {
    let lc = op.lc();
    let z = 1.0 / lc.abs().sqrt();
    let roots = if lc > 0.0 {
        vec![Complex64::new(z, 0.0), Complex64::new(-z, 0.0)]
    } else if lc < 0.0 {
        vec![Complex64::new(0.0, z), Complex64::new(0.0, -z)]
    } else {
        Vec::new()
    };
    ZeroSet { roots }
}

/// `G(s) = (k_i + k_p s + (1 − k_i·lc) s² − k_p·lc·s³) / (k_i + k_p s + s²)`.
///
/// Common factors (the `s` shared when `k_i = 0`) are kept; use
/// [`RationalTf::cancel_common_factors`] to remove them visibly.
pub fn mahony_tf(op: &OperatingPoint, gains: &MahonyGains) -> RationalTf {
    let lc = op.lc();
    let (kp, ki) = (gains.kp, gains.ki);
    RationalTf::new(
        vec![ki, kp, 1.0 - ki * lc, -kp * lc],
        vec![ki, kp, 1.0],
    )
    .expect("finite coefficients")
}

/// Zeros of the integrator-free Mahony estimator: roots of `k_p + s − k_p·lc·s²`.
///
/// For `lc > 0` these are `(1 ∓ √(1 + 4k_p²lc)) / (2k_p·lc)`, one on each side
/// of the imaginary axis. For `lc = 0` the only zero is `−k_p`.
pub fn mahony_zeros(op: &OperatingPoint, kp: f64) -> Result<ZeroSet> {
    if !(kp > 0.0 && kp.is_finite()) {
        return Err(Error::InvalidParameter(format!("k_p must be > 0, got {kp}")));
    }
    ZeroSet::new(quadratic_roots(kp, 1.0, -kp * op.lc()))
}

/// Gain at which the Mahony zeros change from two real roots to a complex
/// pair, `k_p = 1/(2√|lc|)`, where the discriminant `1 + 4k_p²lc` vanishes.
/// Exists only for `lc < 0`.
pub fn mahony_complex_transition(op: &OperatingPoint) -> Option<f64> {
    let lc = op.lc();
    (lc < 0.0).then(|| 0.5 / (-lc).sqrt())
}

/// Roll transfer function of the Madgwick filter while it tracks its sliding
/// surface `∇f = 0`. The surface pins the estimate to the accelerometer tilt,
/// so this coincides with [`atan_tf`]; [`super::linearize::sliding_surface_tf`]
/// derives it from the linearized gradient instead.
pub fn madgwick_sliding_tf(op: &OperatingPoint) -> RationalTf {
    atan_tf(op)
}

/// [`atan_zeros`] over a grid of operating points.
pub fn zero_locus_atan(lever_arm: f64, gravity: f64, phi_grid: &[f64]) -> Result<Vec<(f64, ZeroSet)>> {
    if phi_grid.is_empty() {
        return Err(Error::InvalidParameter("operating-point grid is empty".into()));
    }
    phi_grid
        .iter()
        .map(|&phi| Ok((phi, atan_zeros(&OperatingPoint::new(phi, lever_arm, gravity)?))))
        .collect()
}

/// [`mahony_zeros`] over a grid of gains at one operating point.
pub fn zero_locus_mahony(op: &OperatingPoint, kp_grid: &[f64]) -> Result<Vec<(f64, ZeroSet)>> {
    if kp_grid.is_empty() {
        return Err(Error::InvalidParameter("gain grid is empty".into()));
    }
    kp_grid.iter().map(|&kp| Ok((kp, mahony_zeros(op, kp)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::poly;
    use crate::analysis::tf::freq_response;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn op(phi: f64, l: f64) -> OperatingPoint {
        OperatingPoint::normalized(phi, l).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * (1.0 + y.norm()))
    }

    #[test]
    fn atan_tf_examples() {
        let g = atan_tf(&op(0.0, 1.0));
        assert_eq!(g.num(), &[1.0, 0.0, -1.0]);
        assert_eq!(g.den(), &[1.0]);
        assert!(atan_tf(&op(FRAC_PI_2, 5.0)).is_unity());
        assert!(atan_tf(&op(0.7, 0.0)).is_unity());
    }

    #[test]
    fn atan_zero_examples() {
        assert_eq!(atan_zeros(&op(0.0, 1.0)).roots(), &[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(atan_zeros(&op(PI, 1.0)).roots(), &[c(0.0, 1.0), c(0.0, -1.0)]);
        assert_eq!(atan_zeros(&op(0.0, 0.25)).roots(), &[c(2.0, 0.0), c(-2.0, 0.0)]);
        assert!(atan_zeros(&op(FRAC_PI_2, 1.0)).is_empty());
        assert!(atan_zeros(&op(1.0, 0.0)).is_empty());
    }

    #[test]
    fn atan_zeros_match_companion_roots() {
        for k in 0..=20 {
            let o = op(PI * k as f64 / 20.0, 0.7);
            let z = atan_zeros(&o);
            let oracle = ZeroSet::new(atan_tf(&o).zeros()).unwrap();
            assert!(close(z.roots(), oracle.roots(), 1e-12), "{z:?} vs {oracle:?}");
        }
    }

    #[test]
    fn mahony_tf_examples() {
        let g = mahony_tf(&op(FRAC_PI_2, 1.3), &MahonyGains::new(2.0, 0.5).unwrap());
        assert_eq!(g.num(), g.den());
        let g = mahony_tf(&op(0.0, 1.0), &MahonyGains::new(1.0, 0.0).unwrap());
        assert_eq!(g.num(), &[0.0, 1.0, 1.0, -1.0]);
        assert_eq!(g.den(), &[0.0, 1.0, 1.0]);
        let (reduced, cancelled) = g.cancel_common_factors();
        assert_eq!(cancelled, vec![c(0.0, 0.0)]);
        assert_eq!(reduced.den(), &[1.0, 1.0]);
        let g = mahony_tf(&op(0.3, 2.0), &MahonyGains::new(4.0, 1.0).unwrap());
        assert_eq!(freq_response(&g, 0.0).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn mahony_zero_examples() {
        let sq5 = 5f64.sqrt();
        let z = mahony_zeros(&op(0.0, 1.0), 1.0).unwrap();
        assert!(close(z.roots(), &[c((1.0 + sq5) / 2.0, 0.0), c((1.0 - sq5) / 2.0, 0.0)], 1e-15));

        let z = mahony_zeros(&op(PI, 1.0), 1.0).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!(close(z.roots(), &[c(-0.5, h), c(-0.5, -h)], 1e-15));

        let z = mahony_zeros(&op(0.0, 1.0), 1e6).unwrap();
        assert!(close(z.roots(), &[c(1.0, 0.0), c(-1.0, 0.0)], 1e-6));

        // small gain: one zero near -k_p, the other near +1/k_p
        let z = mahony_zeros(&op(0.0, 1.0), 1e-4).unwrap();
        assert!((z.roots()[0].re - 1e4).abs() < 1e-3);
        assert!((z.roots()[1].re + 1e-4).abs() < 1e-11);

        // no lever effect: the quadratic degenerates
        let z = mahony_zeros(&op(FRAC_PI_2, 1.0), 3.0).unwrap();
        assert_eq!(z.roots(), &[c(-3.0, 0.0)]);

        assert!(mahony_zeros(&op(0.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn mahony_large_gain_beyond_quarter_turn_approaches_imaginary_axis() {
        let z = mahony_zeros(&op(PI, 1.0), 100.0).unwrap();
        assert!(close(z.roots(), &[c(0.0, 1.0), c(0.0, -1.0)], 1e-2));
        assert!(z.roots().iter().all(|r| r.re < 0.0));
    }

    #[test]
    fn complex_transition_from_discriminant() {
        let o = op(PI, 1.0);
        let kt = mahony_complex_transition(&o).unwrap();
        assert!((kt - 0.5).abs() < 1e-15);
        for kp in [0.1, 0.3, 0.49] {
            let z = mahony_zeros(&o, kp).unwrap();
            assert!(z.roots().iter().all(|r| r.im == 0.0 && r.re < 0.0), "{kp}: {z:?}");
        }
        for kp in [0.51, 1.0, 10.0] {
            let z = mahony_zeros(&o, kp).unwrap();
            assert!(z.roots().iter().all(|r| r.im != 0.0 && r.re < 0.0), "{kp}: {z:?}");
        }
        assert!(mahony_complex_transition(&op(0.2, 1.0)).is_none());
        assert!(mahony_complex_transition(&op(FRAC_PI_2, 1.0)).is_none());
    }

    #[test]
    fn sliding_tf_is_atan_tf() {
        for k in 0..10 {
            let o = op(0.3 * k as f64, 0.2 + 0.1 * k as f64);
            assert_eq!(madgwick_sliding_tf(&o), atan_tf(&o));
        }
        let g = freq_response(&madgwick_sliding_tf(&op(0.0, 1.0)), 1.0).unwrap();
        assert_eq!(g, c(2.0, 0.0));
    }

    #[test]
    fn atan_locus_structure() {
        let grid = crate::analysis::default_phi_grid();
        let locus = zero_locus_atan(1.0, 1.0, &grid).unwrap();
        let mut prev = 0.0;
        for (phi, z) in &locus {
            if (phi - FRAC_PI_2).abs() < 1e-9 {
                assert!(z.is_empty());
            } else if *phi < FRAC_PI_2 {
                assert!(z.roots().iter().all(|r| r.im == 0.0));
                assert_eq!(z.roots()[0].re, -z.roots()[1].re);
                assert!(z.roots()[0].re > prev);
                prev = z.roots()[0].re;
            } else {
                assert!(z.roots().iter().all(|r| r.re == 0.0));
                assert_eq!(z.roots()[0].im, -z.roots()[1].im);
            }
        }
        assert!(zero_locus_atan(1.0, 1.0, &[]).is_err());
    }

    #[test]
    fn conjugate_closure_is_enforced() {
        assert!(ZeroSet::new(vec![c(1.0, 1.0)]).is_err());
        assert!(ZeroSet::new(vec![c(1.0, 1.0), c(1.0, -1.0)]).is_ok());
    }

    proptest! {
        #[test]
        fn mahony_zeros_are_roots_and_match_companion(
            phi in 0.0..PI, l in 0.0..3.0f64, lkp in -2.0..3.0f64
        ) {
            let o = op(phi, l);
            let kp = 10f64.powf(lkp);
            let z = mahony_zeros(&o, kp).unwrap();
            let p = [kp, 1.0, -kp * o.lc()];
            let scale = kp + 1.0 + (kp * o.lc()).abs();
            for r in z.roots() {
                let v = poly::eval(&p, *r).norm();
                prop_assert!(v < 1e-8 * scale * (1.0 + r.norm_sqr()), "{r} -> {v}");
            }
            let oracle = ZeroSet::new(poly::companion_roots(&p)).unwrap();
            prop_assert!(close(z.roots(), oracle.roots(), 1e-7), "{z:?} vs {oracle:?}");
        }

        #[test]
        fn exactly_one_unstable_zero_below_quarter_turn(
            phi in 0.0..(FRAC_PI_2 - 1e-3), l in 1e-3..3.0f64, lkp in -3.0..6.0f64
        ) {
            let z = mahony_zeros(&op(phi, l), 10f64.powf(lkp)).unwrap();
            prop_assert_eq!(z.len(), 2);
            prop_assert_eq!(z.right_half_plane_count(), 1);
        }

        #[test]
        fn atan_zero_magnitude_scales_with_inverse_root_l(phi in 0.0..1.5f64, l in 0.01..4.0f64) {
            let a = atan_zeros(&op(phi, l));
            let b = atan_zeros(&op(phi, 4.0 * l));
            prop_assert!((a.roots()[0].re - 2.0 * b.roots()[0].re).abs() < 1e-9 * a.roots()[0].re);
        }
    }
}
