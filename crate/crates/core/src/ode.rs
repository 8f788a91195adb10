//! Adaptive Dormand-Prince 5(4) integration of complex linear systems and
//! Richardson extrapolation.

use crate::error::{Error, Result};
use crate::linalg::{real, C64, ZERO};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 {
            rtol: 1e-11,
            atol: 1e-13,
            initial_step: 1e-4,
            max_steps: 2_000_000,
        }
    }
}

fn axpy<const N: usize>(y: &[C64; N], terms: &[(f64, &[C64; N])], h: f64) -> [C64; N] {
    let mut out = *y;
    for (coef, k) in terms {
        let s = real(coef * h);
        for i in 0..N {
            out[i] += s * k[i];
        }
    }
    out
}

impl Dopri5 {
    /// Integrate `y' = f(t, y)` from `t0` to `t1 > t0`.
    pub fn integrate<const N: usize, F>(&self, f: F, t0: f64, y0: [C64; N], t1: f64) -> Result<[C64; N]>
    where
        F: Fn(f64, &[C64; N]) -> [C64; N],
    {
        if !(t1 > t0) {
            return Err(Error::Integrator(format!("empty interval [{t0}, {t1}]")));
        }
        let mut t = t0;
        let mut y = y0;
        let mut h = self.initial_step.min(t1 - t0);
        let mut k1 = f(t, &y);
        for _ in 0..self.max_steps {
            if t >= t1 {
                return Ok(y);
            }
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }
            let k2 = f(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
            let k3 = f(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
            let k4 = f(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
            let k5 = f(
                t + C5 * h,
                &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
            );
            let k6 = f(
                t + h,
                &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
            );
            let y_new = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
            let k7 = f(t + h, &y_new);
            let mut err = [ZERO; N];
            for i in 0..N {
                err[i] = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            }
            let mut norm = 0.0;
            for i in 0..N {
                let sc = self.atol + self.rtol * y[i].norm().max(y_new[i].norm());
                norm += (err[i].norm() / sc).powi(2);
            }
            let norm = (norm / N as f64).sqrt();
            if !norm.is_finite() {
                return Err(Error::Integrator(format!("non-finite error estimate at t = {t}")));
            }
            if norm <= 1.0 {
                t = if last { t1 } else { t + h };
                y = y_new;
                k1 = k7;
            }
            let factor = if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
            if h < 1e-14 * (1.0 + t.abs()) {
                return Err(Error::Integrator(format!("step size underflow at t = {t}")));
            }
        }
        Err(Error::Integrator(format!("exceeded {} steps", self.max_steps)))
    }
}

/// Richardson extrapolation of samples taken at `h, h/2, h/4, ...`,
/// assuming an error expansion in even powers of `h`.
///
/// Returns the extrapolated value and the change made by the last
/// elimination, which serves as a convergence residual.
pub fn richardson(samples: &[C64]) -> (C64, f64) {
    assert!(!samples.is_empty(), "richardson needs at least one sample");
    let mut table: Vec<C64> = samples.to_vec();
    let mut residual = f64::INFINITY;
    let mut factor = 4.0;
    while table.len() > 1 {
        let next: Vec<C64> = table
            .windows(2)
            .map(|w| (w[1] * factor - w[0]) / (factor - 1.0))
            .collect();
        residual = (next[next.len() - 1] - table[table.len() - 1]).norm();
        table = next;
        factor *= 4.0;
    }
    (table[0], residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;
    use approx::assert_abs_diff_eq;

    #[test]
    fn harmonic_phase() {
        // y' = -i w y
        let w = 7.3;
        let y = Dopri5::default()
            .integrate(|_, y: &[C64; 1]| [-I * w * y[0]], 0.0, [real(1.0)], 3.0)
            .unwrap();
        let expect = C64::from_polar(1.0, -w * 3.0);
        assert_abs_diff_eq!((y[0] - expect).norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn time_dependent_rate() {
        // y' = t y  =>  y = exp(t^2/2)
        let y = Dopri5::default()
            .integrate(|t, y: &[C64; 1]| [y[0] * t], 0.0, [real(1.0)], 2.0)
            .unwrap();
        assert_abs_diff_eq!(y[0].re, 2f64.exp(), epsilon = 1e-9);
    }

    #[test]
    fn rejects_empty_interval() {
        let r = Dopri5::default().integrate(|_, y: &[C64; 1]| *y, 1.0, [real(1.0)], 1.0);
        assert!(matches!(r, Err(Error::Integrator(_))));
    }

    #[test]
    fn richardson_removes_even_terms() {
        let f = |h: f64| real(2.0 + 3.0 * h * h - 5.0 * h.powi(4));
        let samples: Vec<C64> = [0.1, 0.05, 0.025].iter().map(|&h| f(h)).collect();
        let (v, res) = richardson(&samples);
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-13);
        assert!(res < 1e-4);
    }
}
