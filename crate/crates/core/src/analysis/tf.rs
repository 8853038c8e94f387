use num_complex::Complex64;

use super::poly;
use crate::error::{Error, Result};

/// Distance below which a zero and a pole are considered to cancel.
pub const CANCELLATION_TOLERANCE: f64 = 1e-9;

/// `|den(iω)|` below this is reported as a pole on the imaginary axis.
pub const POLE_ON_AXIS_TOLERANCE: f64 = 1e-12;

/// Real-coefficient rational transfer function `num(s) / den(s)`, coefficients ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTf {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl RationalTf {
    /// Trims highest-order coefficients below [`poly::TRIM_TOLERANCE`].
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        let num = poly::trim(&num, poly::TRIM_TOLERANCE);
        let den = poly::trim(&den, poly::TRIM_TOLERANCE);
        if den.is_empty() {
            return Err(Error::InvalidParameter(
                "transfer function denominator is identically zero".into(),
            ));
        }
        if num.iter().chain(&den).any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "transfer function coefficients must be finite".into(),
            ));
        }
        Ok(RationalTf { num, den })
    }

    pub fn unity() -> Self {
        RationalTf {
            num: vec![1.0],
            den: vec![1.0],
        }
    }

    pub fn num(&self) -> &[f64] {
        &self.num
    }

    pub fn den(&self) -> &[f64] {
        &self.den
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        poly::eval(&self.num, s) / poly::eval(&self.den, s)
    }

    /// Roots of the numerator.
    pub fn zeros(&self) -> Vec<Complex64> {
        poly::companion_roots(&self.num)
    }

    pub fn poles(&self) -> Vec<Complex64> {
        poly::companion_roots(&self.den)
    }

    /// `G ≡ 1`: numerator and denominator coincide coefficient-wise.
    pub fn is_unity(&self) -> bool {
        self.num == self.den
    }

    /// Removes pole-zero pairs closer than [`CANCELLATION_TOLERANCE`] and
    /// returns the reduced function together with the cancelled roots.
    /// Common powers of `s` are factored out exactly first.
    pub fn cancel_common_factors(&self) -> (RationalTf, Vec<Complex64>) {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        let mut cancelled = Vec::new();
        while num.len() > 1 && den.len() > 1 && num[0] == 0.0 && den[0] == 0.0 {
            num.remove(0);
            den.remove(0);
            cancelled.push(Complex64::new(0.0, 0.0));
        }
        loop {
            let zeros = poly::companion_roots(&num);
            let poles = poly::companion_roots(&den);
            let pair = zeros.iter().find_map(|z| {
                poles
                    .iter()
                    .find(|p| (*z - **p).norm() < CANCELLATION_TOLERANCE)
                    .map(|p| (*z + *p) * 0.5)
            });
            let Some(r) = pair else { break };
            if r.im.abs() < CANCELLATION_TOLERANCE {
                num = poly::deflate_real(&num, r.re);
                den = poly::deflate_real(&den, r.re);
                cancelled.push(Complex64::new(r.re, 0.0));
            } else {
                num = poly::deflate_conjugate_pair(&num, r);
                den = poly::deflate_conjugate_pair(&den, r);
                cancelled.push(r);
                cancelled.push(r.conj());
            }
        }
        (RationalTf { num, den }, cancelled)
    }
}

/// `G(iω)`.
pub fn freq_response(tf: &RationalTf, omega: f64) -> Result<Complex64> {
    let s = Complex64::new(0.0, omega);
    let d = poly::eval(tf.den(), s);
    if d.norm() < POLE_ON_AXIS_TOLERANCE {
        return Err(Error::PoleOnAxis { omega });
    }
    Ok(poly::eval(tf.num(), s) / d)
}
