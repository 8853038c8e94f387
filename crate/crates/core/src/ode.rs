//! Fixed-step classical Runge-Kutta integration on fixed-size state arrays.

/// One RK4 step of `x' = f(x)` with step `dt`.
pub fn rk4<const N: usize, F>(x: &[f64; N], dt: f64, mut f: F) -> [f64; N]
where
    F: FnMut(&[f64; N]) -> [f64; N],
{
    let k1 = f(x);
    let k2 = f(&axpy(x, 0.5 * dt, &k1));
    let k3 = f(&axpy(x, 0.5 * dt, &k2));
    let k4 = f(&axpy(x, dt, &k3));
    let mut out = *x;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn axpy<const N: usize>(x: &[f64; N], a: f64, y: &[f64; N]) -> [f64; N] {
    let mut out = *x;
    for i in 0..N {
        out[i] += a * y[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_is_fourth_order() {
        let err = |dt: f64| {
            let n = (1.0 / dt).round() as usize;
            let mut x = [1.0];
            for _ in 0..n {
                x = rk4(&x, dt, |x| [-x[0]]);
            }
            (x[0] - (-1.0f64).exp()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.5, "ratio {ratio}");
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let mut x = [1.0, 0.0];
        for _ in 0..10_000 {
            x = rk4(&x, 1e-3, |x| [x[1], -x[0]]);
        }
        assert!((x[0] - 10.0f64.cos()).abs() < 1e-10);
        assert!((x[0] * x[0] + x[1] * x[1] - 1.0).abs() < 1e-10);
    }
}
