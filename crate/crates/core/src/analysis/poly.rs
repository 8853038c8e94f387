//! Real polynomials stored as ascending coefficient slices (`c[k]` multiplies `s^k`).

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Coefficients with magnitude below this are dropped from the top of a polynomial.
pub const TRIM_TOLERANCE: f64 = 1e-14;

pub fn eval(c: &[f64], s: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * s + ck)
}

pub fn eval_real(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * s + ck)
}

/// Removes highest-order coefficients with `|c| < tol`.
pub fn trim(c: &[f64], tol: f64) -> Vec<f64> {
    let mut v = c.to_vec();
    while v.last().is_some_and(|x| x.abs() < tol) {
        v.pop();
    }
    v
}

pub fn degree(c: &[f64]) -> Option<usize> {
    c.iter().rposition(|&x| x != 0.0)
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(0.0) + b.get(k).copied().unwrap_or(0.0))
        .collect()
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| x * k).collect()
}

/// Quotient and remainder of `num / den`.
pub fn div_rem(num: &[f64], den: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let den = trim(den, 0.0);
    let dn = den.len();
    assert!(dn > 0, "division by the zero polynomial");
    let mut rem = trim(num, 0.0);
    if rem.len() < dn {
        return (vec![0.0], rem);
    }
    let mut quot = vec![0.0; rem.len() - dn + 1];
    let lead = den[dn - 1];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn - 1] / lead;
        quot[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    rem.truncate(dn - 1);
    (quot, rem)
}

/// Divides out `(s - r)` by synthetic division, discarding the remainder.
pub fn deflate_real(c: &[f64], r: f64) -> Vec<f64> {
    let n = c.len();
    if n < 2 {
        return Vec::new();
    }
    let mut out = vec![0.0; n - 1];
    let mut carry = 0.0;
    for k in (1..n).rev() {
        carry = c[k] + carry * r;
        out[k - 1] = carry;
    }
    out
}

/// Divides out `(s - r)(s - r̄)`, discarding the remainder.
pub fn deflate_conjugate_pair(c: &[f64], r: Complex64) -> Vec<f64> {
    let quad = [r.norm_sqr(), -2.0 * r.re, 1.0];
    div_rem(c, &quad).0
}

/// Roots of `c0 + c1 s + c2 s²`, using the cancellation-free form of the
/// quadratic formula. Degenerates to the linear root when `c2 == 0`.
pub fn quadratic_roots(c0: f64, c1: f64, c2: f64) -> Vec<Complex64> {
    if c2 == 0.0 {
        return if c1 == 0.0 {
            Vec::new()
        } else {
            vec![Complex64::new(-c0 / c1, 0.0)]
        };
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc >= 0.0 {
        let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
        if q == 0.0 {
            // c1 == 0 and c0 == 0: double root at the origin
            return vec![Complex64::new(0.0, 0.0); 2];
        }
        vec![Complex64::new(q / c2, 0.0), Complex64::new(c0 / q, 0.0)]
    } else {
        let re = -c1 / (2.0 * c2);
        let im = (-disc).sqrt() / (2.0 * c2.abs());
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// All roots as eigenvalues of the companion matrix.
pub fn companion_roots(c: &[f64]) -> Vec<Complex64> {
    let c = trim(c, 0.0);
    if c.len() < 2 {
        return Vec::new();
    }
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// Monic polynomial with the given roots (conjugates must be included).
pub fn from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (k, &pk) in p.iter().enumerate() {
            next[k + 1] += pk;
            next[k] -= pk * r;
        }
        p = next;
    }
    p.iter().map(|z| z.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        v
    }

    #[test]
    fn evaluation() {
        // 1 - s² at s = i is 2
        assert_eq!(eval(&[1.0, 0.0, -1.0], Complex64::new(0.0, 1.0)), Complex64::new(2.0, 0.0));
        assert_eq!(eval_real(&[1.0, 2.0, 3.0], 2.0), 17.0);
    }

    #[test]
    fn trimming_and_degree() {
        assert_eq!(trim(&[1.0, 2.0, 1e-16], TRIM_TOLERANCE), vec![1.0, 2.0]);
        assert_eq!(degree(&[1.0, 0.0, 3.0, 0.0]), Some(2));
        assert_eq!(degree(&[0.0]), None);
    }

    #[test]
    fn division_round_trip() {
        let a = [1.0, -2.0, 0.5, 3.0];
        let b = [2.0, 1.0];
        let (q, r) = div_rem(&a, &b);
        let back = add(&mul(&q, &b), &r);
        for k in 0..a.len() {
            assert!((back[k] - a[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn quadratic_matches_companion() {
        for &(c0, c1, c2) in &[(1.0, 1.0, -1.0), (1.0, 1.0, 1.0), (1e-4, 1.0, -1e-4), (-3.0, 0.0, 1.0)] {
            let a = sorted(quadratic_roots(c0, c1, c2));
            let b = sorted(companion_roots(&[c0, c1, c2]));
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-9 * (1.0 + x.norm()), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn quadratic_degenerate_cases() {
        assert_eq!(quadratic_roots(2.0, 1.0, 0.0), vec![Complex64::new(-2.0, 0.0)]);
        assert!(quadratic_roots(2.0, 0.0, 0.0).is_empty());
        assert_eq!(quadratic_roots(0.0, 0.0, 1.0).len(), 2);
    }

    #[test]
    fn quadratic_is_accurate_when_roots_separate() {
        // roots near -1e-8 and -1e8; the naive formula loses the small one
        let r = quadratic_roots(1.0, 1e8 + 1e-8, 1.0);
        let small = r.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        assert!((small + 1e-8).abs() < 1e-20);
    }

    #[test]
    fn deflation() {
        let p = from_roots(&[Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.5), Complex64::new(-1.0, -0.5)]);
        let q = deflate_real(&p, 2.0);
        let expect = from_roots(&[Complex64::new(-1.0, 0.5), Complex64::new(-1.0, -0.5)]);
        for k in 0..3 {
            assert!((q[k] - expect[k]).abs() < 1e-12);
        }
        let q = deflate_conjugate_pair(&p, Complex64::new(-1.0, 0.5));
        assert!((q[0] + 2.0).abs() < 1e-12 && (q[1] - 1.0).abs() < 1e-12);
    }
}
